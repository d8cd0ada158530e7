import pytest
from fractions import Fraction

from closedforms import r21_closed
from errors import SizeMismatch
from exact_kernel import SquareMatrix
from tensoralg import (
    Tensor2, Tensor3, can, can_inv, cartan_h, casimir_display, check_h, embed, intertwiner_basis,
    nondegenerate, one_tensor, pr, pr2, scalar_multiple_of, t2_mul, t3_mul, tensor_omega, tensor_p,
)


def test_p_squares_to_identity():
    p = tensor_p(3)
    assert p @ p == Tensor2.identity(3)
    assert p.swap() == p


def test_decomposable_and_swap():
    x, y = SquareMatrix.unit(2, 1, 2), SquareMatrix.diag([1, 3])
    t = Tensor2.decomposable(x, y)
    assert t.coefficient(1, 2, 2, 2) == 3
    assert t.swap() == Tensor2.decomposable(y, x)


def test_t2_mul_matrix_units():
    e11, e12, e21 = SquareMatrix.unit(2, 1, 1), SquareMatrix.unit(2, 1, 2), SquareMatrix.unit(2, 2, 1)
    t = r21_closed(1, 0, 1)
    assert t2_mul(Tensor2.identity(2), t) == t
    assert t2_mul(Tensor2.decomposable(e12, e11), Tensor2.decomposable(e21, e11)) == Tensor2.decomposable(e11, e11)
    assert t2_mul(Tensor2.decomposable(e12, e11), Tensor2.decomposable(e12, e11)).is_zero()


@pytest.mark.parametrize("slot", ["12", "13", "23"])
def test_embed_is_multiplicative(slot):
    a = r21_closed(1, 0, 1)
    b = r21_closed(Fraction(-1, 2), 2, Fraction(1, 3))
    assert embed(t2_mul(a, b), slot) == t3_mul(embed(a, slot), embed(b, slot))
    assert t3_mul(Tensor3.identity(2), embed(a, slot)) == embed(a, slot)


def test_embed_identity():
    assert embed(Tensor2.identity(2), "13") == Tensor3.identity(2)
    with pytest.raises(ValueError):
        embed(Tensor2.identity(2), "21")


def test_embedded_products_commute_on_disjoint_slots():
    a = embed(Tensor2.unit(2, 1, 2, 2, 1), "12")
    b = embed(Tensor2.decomposable(SquareMatrix.unit(2, 1, 1), SquareMatrix.unit(2, 1, 2)), "13")
    c = Tensor3.decomposable(SquareMatrix.identity(2), SquareMatrix.identity(2), SquareMatrix.unit(2, 2, 1))
    assert (a @ c) == (c @ a)
    assert (a @ b) != (b @ a)


def test_can_of_p_is_identity():
    assert can(tensor_p(2)) == SquareMatrix.identity(4)
    assert nondegenerate(tensor_p(3))
    assert not nondegenerate(Tensor2.identity(3))


def test_can_inverse():
    t = r21_closed(1, 0, 1)
    assert can_inv(can(t), 2) == t
    assert can_inv(can(t)) == t
    with pytest.raises(SizeMismatch):
        can_inv(SquareMatrix.identity(5))


def test_pr_projections():
    m = SquareMatrix.diag([3, 1])
    assert pr(m) == SquareMatrix.diag([1, -1])
    assert pr2(Tensor2.identity(2)).is_zero()
    assert pr2(tensor_omega(3)) == tensor_omega(3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_casimir_display_matches_projection(n):
    assert casimir_display(n) == tensor_omega(n)


def test_check_h_is_dual_basis():
    n = 3
    for l in range(1, n):
        for m in range(1, n):
            expected = Fraction(int(l == m))
            assert (cartan_h(n, l) @ check_h(n, m)).trace() == expected
    assert check_h(2, 1) == SquareMatrix.diag([Fraction(1, 2), Fraction(-1, 2)])


@pytest.mark.parametrize("n", [2, 3])
def test_intertwiners_are_multiples_of_p(n):
    basis = intertwiner_basis(n)
    assert len(basis) == 1
    assert scalar_multiple_of(tensor_p(n), basis[0]) is not None


def test_p_intertwines_both_ways():
    p, ident = tensor_p(3), SquareMatrix.identity(3)
    x = SquareMatrix([[1, 2, 0], [0, Fraction(1, 2), -1], [3, 0, 1]])
    assert t2_mul(p, Tensor2.decomposable(x, ident)) == t2_mul(Tensor2.decomposable(ident, x), p)
    assert t2_mul(p, Tensor2.decomposable(ident, x)) == t2_mul(Tensor2.decomposable(x, ident), p)


def test_scalar_multiple_of():
    p = tensor_p(2)
    assert scalar_multiple_of(p * Fraction(-2, 3), p) == Fraction(-2, 3)
    assert scalar_multiple_of(p + Tensor2.identity(2), p) is None
    assert scalar_multiple_of(Tensor2.zero(2), Tensor2.zero(2)) == 0


def test_one_tensor_commutes_with_omega():
    a = SquareMatrix.unit(3, 1, 3)
    assert tensor_omega(3).commutator(one_tensor(a)).is_zero()


def test_serialization():
    t = Tensor2.unit(2, 2, 1, 2, 1) * -1 + Tensor2.unit(2, 1, 1, 1, 1) / 2
    assert t.to_json() == {"n": 2, "coeffs": [[1, 1, 1, 1, "1/2"], [2, 1, 2, 1, "-1"]]}
    assert Tensor2.zero(2).to_text() == "(zero)"
    assert t.to_text().splitlines()[1].split() == ["2", "1", "2", "1", "-1"]


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        Tensor2.identity(2) + Tensor2.identity(3)
