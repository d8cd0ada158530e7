import math
import pytest
from fractions import Fraction

from closedforms import r21_closed
from errors import CoincidingPoints, SingularResidue
from exact_kernel import SquareMatrix
from jmatrix import build_j
from solspace import (
    WPoly, compute_r, constraint_matrix, constraint_value, res_preimage, rtilde_endomorphism, sol_basis,
    w_dimension,
)
from tensoralg import nondegenerate


@pytest.mark.parametrize("n,d", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_w_has_dimension_two_n_squared(n, d):
    assert w_dimension(n, build_j(n, d).split) == 2 * n * n


COPRIME_PAIRS = [(n, d) for n in range(2, 7) for d in range(1, n) if math.gcd(n, d) == 1]


@pytest.mark.parametrize("v,y1", [(Fraction(1, 2), Fraction(-2, 3)), (-3, 1)])
@pytest.mark.parametrize("n,d", COPRIME_PAIRS)
def test_sol_dimension_for_every_pair(n, d, v, y1):
    assert len(sol_basis(build_j(n, d), v, y1)) == n * n


def test_constraint_matrix_shape():
    j = build_j(3, 1)
    rows = constraint_matrix(j, 1, 0)
    assert len(rows) == 9
    assert all(len(row) == 18 for row in rows)


@pytest.mark.parametrize("n,d", [(2, 1), (3, 1), (3, 2)])
def test_sol_has_dimension_n_squared(n, d):
    j = build_j(n, d)
    basis = sol_basis(j, Fraction(1, 2), Fraction(-2, 3))
    assert len(basis) == n * n
    for f in basis:
        assert constraint_value(f, j, Fraction(1, 2), Fraction(-2, 3)).is_zero()


def test_wpoly_block_constraints():
    n, split = 2, 1
    z = SquareMatrix.zero(n)
    with pytest.raises(ValueError):
        WPoly(n, split, z, SquareMatrix.unit(n, 1, 2), z)
    with pytest.raises(ValueError):
        WPoly(n, split, z, z, SquareMatrix.unit(n, 1, 1))
    f = WPoly(n, split, SquareMatrix.identity(n), z, SquareMatrix.unit(n, 2, 1))
    assert f(2) == SquareMatrix([[1, 0], [4, 1]])


def test_res_preimage_hits_target():
    target = SquareMatrix.unit(2, 1, 2)
    f = res_preimage(2, 1, 1, Fraction(1, 3), target)
    assert f(Fraction(1, 3)) == target


def test_rtilde_preconditions():
    with pytest.raises(SingularResidue, match="v≠0"):
        rtilde_endomorphism(2, 1, 0, 0, 1)
    with pytest.raises(CoincidingPoints, match="y₁≠y₂"):
        rtilde_endomorphism(2, 1, 1, 2, 2)


def test_rtilde_size():
    m = rtilde_endomorphism(3, 1, 1, 0, 1)
    assert m.n == 9


def test_r21_example_coefficient():
    r = compute_r(2, 1, 1, 0, 1)
    assert r.coefficient(2, 1, 2, 1) == -1


@pytest.mark.parametrize("point", [(1, 0, 1), (Fraction(2, 3), Fraction(-1, 2), Fraction(5, 3)), (-3, 2, -1)])
def test_r21_matches_closed_form(point):
    assert compute_r(2, 1, *point) == r21_closed(*point)


def test_r52_is_nondegenerate():
    assert nondegenerate(compute_r(5, 2, 1, 0, 1))


def test_compute_r_is_cached():
    assert compute_r(2, 1, Fraction(1), 0, 1) is compute_r(2, 1, 1, Fraction(0), Fraction(1))
