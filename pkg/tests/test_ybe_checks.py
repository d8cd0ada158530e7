import pytest
from fractions import Fraction
from unittest.mock import patch

from closedforms import ORACLES, c31_closed
from errors import HypothesisFailed, PoleHit
from exact_kernel import SquareMatrix
from tensoralg import Tensor2, Tensor3, check_h, tensor_p
from ybe_checks import (
    LaurentTensor, SolutionHandle, aybe_check, condition_battery, diagonal_residue, dual_aybe_check,
    infinitesimal_symmetries, laurent_in_v, pole_constant, r0_r1_identity_check, s_decomposition,
    s_qybe_identity_check, verify_law,
)


def _all_zero(records):
    return all(rec.residual_zero for rec in records)

# ============== SEEDED LAWS ON THE CONSTRUCTION ==============

@pytest.mark.parametrize("law", ["aybe", "dual", "aybe4", "dual4", "unitarity", "nondeg"])
def test_r21_laws(r21, law):
    records = verify_law(r21, law, seed=7, samples=4)
    assert len(records) == 4
    assert _all_zero(records)


def test_r32_solves_aybe(r32):
    assert _all_zero(verify_law(r32, "aybe", seed=7, samples=3))
    assert _all_zero(verify_law(r32, "unitarity", seed=7, samples=3))


def test_r52_is_unitary_and_nondegenerate():
    r = SolutionHandle.for_pair(5, 2)
    assert _all_zero(verify_law(r, "unitarity", seed=11, samples=2))
    assert _all_zero(verify_law(r, "nondeg", seed=11, samples=2))


LARGER_PAIRS = [(3, 1), (4, 1), (4, 3), (5, 2), (5, 3), (5, 4)]


@pytest.mark.parametrize("law", ["aybe", "dual", "unitarity", "nondeg"])
@pytest.mark.parametrize("n,d", LARGER_PAIRS)
def test_laws_hold_for_larger_pairs(n, d, law):
    assert _all_zero(verify_law(SolutionHandle.for_pair(n, d), law, seed=13, samples=1))


def test_dual_aybe_at_fixed_point(r32):
    assert dual_aybe_check(r32, 1, 1, 0, 2, 5).is_zero()


@pytest.mark.parametrize("n,d", [(3, 1), (3, 2), (4, 1), (4, 3), (5, 2)])
def test_classical_limit_solves_cybe(n, d):
    r = SolutionHandle.for_pair(n, d)
    assert _all_zero(verify_law(r, "cybe", seed=5, samples=1))


@pytest.mark.parametrize("y1,y2", [(0, 1), (Fraction(2, 3), -2)])
def test_classical_limit_of_r31(y1, y2):
    r31 = SolutionHandle.for_pair(3, 1)
    assert r31.r0_bar(y1, y2) == c31_closed(y1, y2)


def test_qybe_descent_of_r31():
    r31 = SolutionHandle.for_pair(3, 1)
    assert _all_zero(verify_law(r31, "qybe", seed=7, samples=2, v0=Fraction(3, 2)))


@pytest.mark.parametrize("n,d", [(3, 1), (3, 2), (4, 1), (4, 3), (5, 2)])
def test_diagonal_residue_in_span_of_p(n, d):
    r = SolutionHandle.for_pair(n, d)
    residue = diagonal_residue(r, Fraction(1, 2), 1)
    assert pole_constant(residue) is not None
    assert _all_zero(verify_law(r, "residue", seed=2, samples=1))


def test_qybe_descent(r21):
    assert _all_zero(verify_law(r21, "qybe", seed=7, samples=4, v0=1))
    with pytest.raises(PoleHit):
        verify_law(r21, "qybe", seed=7, samples=1, v0=0)


def test_classical_limits(r21):
    assert _all_zero(verify_law(r21, "cybe", seed=5, samples=2))
    assert _all_zero(verify_law(r21, "r0r1", seed=5, samples=2))


def test_records_are_canonical(r21):
    records = verify_law(r21, "unitarity", seed=3, samples=6)
    assert [rec.point for rec in records] == sorted(rec.point for rec in records)
    assert [rec.to_json() for rec in records] == [rec.to_json() for rec in verify_law(r21, "unitarity", 3, 6)]
    assert set(records[0].to_json()["point"]) == {"v", "y1", "y2"}


def test_failing_point_carries_residual(r21):
    bad = Tensor2.unit(2, 1, 1, 1, 1)
    with patch("ybe_checks.unitarity_check", return_value=bad):
        records = verify_law(r21, "unitarity", seed=1, samples=2)
    assert not records[0].residual_zero
    assert records[0].to_json()["residual"] == {"n": 2, "coeffs": [[1, 1, 1, 1, "1"]]}

# ============== LAURENT DATA ==============

def test_laurent_pole_terms():
    r21 = SolutionHandle.for_pair(2, 1)
    r31 = SolutionHandle.for_pair(3, 1)
    assert laurent_in_v(r21, 0, 1).ansatz_scalar() == Fraction(1, 2)
    assert laurent_in_v(r31, 0, 1).ansatz_scalar() == Fraction(1, 3)


def test_laurent_orders_of_r21(r21):
    laurent = laurent_in_v(r21, 0, 1)
    assert laurent.max_order == 3
    assert laurent.coefficient(0) == ORACLES["r21"](1, 0, 1) - laurent.coefficient(-1) \
        - laurent.coefficient(1) - laurent.coefficient(2) - laurent.coefficient(3)
    json = laurent.to_json(orders=4)
    assert [entry["order"] for entry in json["coefficients"]] == [-1, 0, 1, 2, 3, 4]
    assert json["coefficients"][-1]["coeffs"] == []


def test_first_order_coefficient_of_r21(r21):
    hc = check_h(2, 1)
    e21 = SquareMatrix.unit(2, 2, 1)
    expected = Tensor2.decomposable(e21, hc) + Tensor2.decomposable(hc, e21) + Tensor2.decomposable(e21, e21)
    assert r21.r1(1, 2) == expected


def test_r0_r1_identity_detects_perturbation(r21):
    scale = r21.laurent(0, 1).ansatz_scalar()
    assert scale == Fraction(1, 2)
    assert r0_r1_identity_check(r21.r0, r21.r1, 0, 1, 3, scale=scale).is_zero()
    assert not r0_r1_identity_check(r21.r0, r21.r1, 0, 1, 3).is_zero()
    ident = Tensor2.identity(2)
    residual = r0_r1_identity_check(r21.r0, lambda a, b: r21.r1(a, b) + ident, 0, 1, 3, scale=scale)
    assert residual == Tensor3.identity(2) * Fraction(3, 2)


@pytest.mark.parametrize("n,d", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)])
def test_r0_r1_identity_for_small_pairs(n, d):
    r = SolutionHandle.for_pair(n, d)
    assert r.laurent(0, 1).ansatz_scalar() == Fraction(1, n)
    assert r0_r1_identity_check(r.r0, r.r1, 0, 1, 3, scale=Fraction(1, n)).is_zero()
    assert _all_zero(verify_law(r, "r0r1", seed=9, samples=1))


@pytest.mark.parametrize("name,pair", [("r21", (2, 1)), ("r31", (3, 1))])
@pytest.mark.parametrize("y1,y2", [(0, 1), (Fraction(1, 2), -1)])
def test_laurent_data_matches_closed_form(name, pair, y1, y2):
    constructed = SolutionHandle.for_pair(*pair)
    closed = SolutionHandle.from_formula(ORACLES[name])
    assert constructed.r0(y1, y2) == closed.r0(y1, y2)
    assert constructed.r1(y1, y2) == closed.r1(y1, y2)


def test_constant_p_is_not_a_solution():
    p = SolutionHandle(lambda v, y1, y2: tensor_p(2), 2, name="P")
    assert not aybe_check(p, 1, 2, 0, Fraction(1, 2), 3).is_zero()


def test_laurent_needs_distinct_points(r21):
    with pytest.raises(PoleHit):
        laurent_in_v(r21, 1, 1)


def test_twisted_laurent(yang2):
    laurent = laurent_in_v(yang2, 0, 2)
    assert laurent.twisted(0) == laurent
    twisted = laurent.twisted(Fraction(3))
    assert twisted.coefficient(0) == laurent.coefficient(0) + Tensor2.identity(2) * Fraction(3, 2)
    assert isinstance(twisted, LaurentTensor)


def test_diagonal_residue_is_multiple_of_p(r21):
    residue = diagonal_residue(r21, Fraction(1, 2), 1)
    assert pole_constant(residue) == -1
    assert residue == tensor_p(2) * -1
    assert _all_zero(verify_law(r21, "residue", seed=2, samples=2))

# ============== SYMMETRIES AND s ==============

def test_symmetry_dimensions():
    points = [(0, 1), (Fraction(1, 2), -1), (2, Fraction(-1, 3)), (-2, 3)]
    for name, expected in (("c21", 0), ("c31", 0), ("yang2_cybe", 3)):
        samples = [ORACLES[name](*p) for p in points]
        assert len(infinitesimal_symmetries(samples, ORACLES[name].n)) == expected


def test_symmetries_of_a_diagonal_tensor():
    h = SquareMatrix.diag([1, -1])
    t = Tensor2.decomposable(h, h)
    basis = infinitesimal_symmetries([t], 2)
    assert basis == [SquareMatrix.diag([1, -1])]


def test_s_is_scalar_for_unitary_solutions(r21, yang2):
    assert _all_zero(verify_law(r21, "s", seed=4, samples=2))
    a, lam = s_decomposition(yang2, 2, 0, 1)
    assert a.is_zero()
    expected = Fraction(-1, 16) + 1
    assert lam == expected


@pytest.mark.parametrize("point", [(1, 3, -2, 0, Fraction(1, 2), 2), (Fraction(1, 2), -1, 2, -1, 1, Fraction(2, 3))])
def test_s_qybe_identity(r21, yang2, point):
    assert s_qybe_identity_check(yang2, *point).is_zero()
    assert s_qybe_identity_check(r21, *point).is_zero()

# ============== CONDITION BATTERY ==============

def test_yang_battery(yang2):
    report = condition_battery(yang2, 1, seed=3, samples=2)
    assert report.conditions["a"]
    assert report.conditions["b"]
    assert report.symmetry_dim == 3
    json = report.to_json()
    assert json["symmetry_dim"] == 3
    assert json["solution"] == "yang2"


def test_battery_needs_unitarity():
    printed = SolutionHandle.from_formula(ORACLES["r31_printed"])
    with pytest.raises(HypothesisFailed):
        condition_battery(printed, 1, seed=3, samples=3)


@pytest.mark.parametrize("n,d", [(2, 1), (3, 1)])
def test_battery_on_constructed_solutions(n, d):
    report = condition_battery(SolutionHandle.for_pair(n, d), 1, seed=3, samples=2)
    assert report.conditions == {"a": True, "b": True, "c": True, "d": True}
    assert report.passed
    assert report.symmetry_dim == 0
    assert (report.n, report.d) == (n, d)
