import pytest
from fractions import Fraction

from errors import DuplicateNode, ExhaustedSampling, NoSolution, PoleHit, Singular
from exact_kernel import (
    DENOMINATORS, Polynomial, SquareMatrix, forbid_all, forbid_equal, forbid_zero, format_rational,
    interpolate_poly, invert, kernel_basis, parse_rational, rank, sample_rationals, solve_linear,
)

# ============== RATIONAL LITERALS ==============

def test_parse_rational_forms():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == Fraction(-4)
    assert parse_rational(" 2 / -4 ") == Fraction(-1, 2)
    assert parse_rational(7) == Fraction(7)


@pytest.mark.parametrize("text", ["1.5", "1e3", "a/b", "", "1/0"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(4) == "4"
    assert parse_rational(format_rational(Fraction(22, 7))) == Fraction(22, 7)

# ============== MATRICES ==============

def test_matrix_units_multiply():
    e12, e21 = SquareMatrix.unit(2, 1, 2), SquareMatrix.unit(2, 2, 1)
    assert e12 @ e21 == SquareMatrix.unit(2, 1, 1)
    assert (e21 @ e21).is_zero()
    assert e12.commutator(e21) == SquareMatrix.diag([1, -1])
    assert e12[1, 2] == 1


def test_invert_exact():
    m = SquareMatrix([[2, 1], [1, 1]])
    assert invert(m) == SquareMatrix([[1, -1], [-1, 2]])
    third = SquareMatrix([[Fraction(1, 3), 0], [0, 3]])
    assert invert(third) == SquareMatrix([[3, 0], [0, Fraction(1, 3)]])


def test_invert_singular():
    with pytest.raises(Singular):
        invert(SquareMatrix([[1, 2], [2, 4]]))


def test_rank_and_kernel():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank(SquareMatrix.identity(3)) == 3
    basis = kernel_basis([[1, 2, 3]])
    assert len(basis) == 2
    for vec in basis:
        assert vec[0] + 2 * vec[1] + 3 * vec[2] == 0


def test_kernel_of_full_rank_is_empty():
    assert kernel_basis([[1, 0], [Fraction(1, 2), 1]]) == []


def test_solve_linear():
    assert solve_linear([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    x = solve_linear([[1, 1, 0], [0, 0, 1]], [Fraction(1, 2), 4])
    assert x[0] + x[1] == Fraction(1, 2) and x[2] == 4


def test_solve_linear_inconsistent():
    with pytest.raises(NoSolution):
        solve_linear([[1, 1], [1, 1]], [1, 2])

# ============== POLYNOMIALS ==============

def test_interpolate_recovers_polynomial():
    points = [(x, x * x + 1) for x in (0, 1, 2)]
    poly = interpolate_poly(points)
    assert poly.coefficients == (1, 0, 1)
    assert poly.derivative() == Polynomial([0, 2])
    assert poly(Fraction(1, 2)) == Fraction(5, 4)


def test_interpolate_exact_degree_drop():
    poly = interpolate_poly([(Fraction(1, 7), 3), (Fraction(8, 7), 3), (Fraction(15, 7), 3)])
    assert poly.degree == 0


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_interpolate_random_polynomials(seed):
    degree = 1 + seed % 5
    coefficients = [c for (c,) in sample_rationals(seed, degree + 1)]
    expected = Polynomial(coefficients)
    nodes = [Fraction(k, 3) + Fraction(1, 7) for k in range(degree + 1)]
    assert interpolate_poly([(x, expected(x)) for x in nodes]) == expected


def test_interpolate_duplicate_node():
    with pytest.raises(DuplicateNode):
        interpolate_poly([(1, 2), (1, 3)])


def test_polynomial_arithmetic():
    p = Polynomial([1, 1])
    assert p * p == Polynomial([1, 2, 1])
    assert (p - p).is_zero()
    assert Polynomial().degree == -1

# ============== SAMPLING ==============

def test_sampler_is_deterministic():
    first = sample_rationals(7, 20, arity=3)
    assert first == sample_rationals(7, 20, arity=3)
    assert first != sample_rationals(8, 20, arity=3)


def test_sampler_range():
    for (x,) in sample_rationals(3, 200):
        assert x.denominator in DENOMINATORS
        assert abs(x * x.denominator) <= 9


def test_sampler_forbidden_predicates():
    points = sample_rationals(1, 50, arity=2, forbidden=forbid_zero(0))
    assert all(p[0] != 0 for p in points)
    points = sample_rationals(1, 50, arity=2, forbidden=forbid_equal((0, 1)))
    assert all(p[0] != p[1] for p in points)
    points = sample_rationals(1, 50, arity=2, forbidden=forbid_all(forbid_zero(0), forbid_equal((0, 1))))
    assert all(p[0] != 0 and p[0] != p[1] for p in points)


def test_sampler_skips_degenerate_points():
    def reject_zero(p):
        if p[0] == 0:
            raise PoleHit("pole")
        return False

    points = sample_rationals(5, 100, forbidden=reject_zero)
    assert len(points) == 100
    assert all(p[0] != 0 for p in points)


def test_sampler_exhausts():
    with pytest.raises(ExhaustedSampling):
        sample_rationals(0, 1, forbidden=lambda p: True)
