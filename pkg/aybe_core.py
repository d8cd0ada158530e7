import logging
from pathlib import Path

from closedforms import ORACLE_PAIRS, CheckedFormula, get_oracle
from errors import CoincidingPoints, SingularResidue
from exact_kernel import (
    forbid_all, forbid_equal, forbid_zero, format_rational, parse_rational, sample_rationals,
)
from jmatrix import build_j, check_pair
from solspace import compute_r
from tensoralg import nondegenerate, scalar_multiple_of
from ybe_checks import (
    LAWS, SolutionHandle, condition_battery, infinitesimal_symmetries, laurent_in_v, verify_law,
)

# Configure logger
logging.basicConfig(
    filename=str(Path(__file__).parent / 'aybe.log'),
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)

BUILTINS = ("yang2", "r21", "r31")
CLASSICAL_BUILTINS = ("c21", "c31", "yang2_cybe")


class AybeCore:
    """Entry point shared by the CLI and scripts: construction, verification, expansion, oracles."""

    def __init__(self, status_callback=None):
        self.status_callback = status_callback

    def _update_status(self, message):
        logging.info(message)
        if self.status_callback:
            self.status_callback(message)

    # ============== HANDLES ==============

    def handle(self, n=None, d=None, builtin=None, classical=False):
        """A solution handle for (n, d) or a builtin closed form.

        With classical=True the CYBE closed forms c21, c31 and yang2_cybe are
        also accepted and returned as plain formulas.
        """
        if builtin:
            allowed = BUILTINS + CLASSICAL_BUILTINS if classical else BUILTINS
            if builtin not in allowed:
                raise ValueError(f"Unknown builtin {builtin!r}; choose from {', '.join(allowed)}")
            formula = get_oracle(builtin)
            if builtin in CLASSICAL_BUILTINS:
                return formula
            return SolutionHandle.from_formula(formula)
        if n is None or d is None:
            raise ValueError("Either --builtin or both --n and --d are required")
        check_pair(n, d)
        return SolutionHandle.for_pair(n, d)

    # ============== COMMANDS ==============

    def construct(self, n, d, v, y1, y2):
        check_pair(n, d)
        v, y1, y2 = parse_rational(v), parse_rational(y1), parse_rational(y2)
        if v == 0:
            raise SingularResidue("For v≠0 only: the construction needs a nonzero v")
        if y1 == y2:
            raise CoincidingPoints("The construction needs y₁≠y₂")
        self._update_status(f"Constructing r({n},{d}) at v={v}, y1={y1}, y2={y2}")
        r = compute_r(n, d, v, y1, y2)
        self._update_status(f"Tensor has {len(r.coeffs)} nonzero terms, non-degenerate: {nondegenerate(r)}")
        return r

    def verify(self, handle, law, seed, samples, v0=1):
        """Returns (report dict, passed, first failing record or None)."""
        if law not in LAWS:
            raise ValueError(f"Unknown law {law!r}; choose from {', '.join(LAWS)}")
        v0 = parse_rational(v0)
        n, d = handle.pair if handle.pair else (handle.n, None)
        self._update_status(f"Verifying {law} for {handle.name} at {samples} points (seed {seed})")
        if law == "conds":
            battery = condition_battery(handle, v0, seed, samples)
            report = battery.to_json()
            failing = next((rec for rec in battery.checks if not rec.residual_zero), None)
            passed = battery.passed
        else:
            records = verify_law(handle, law, seed, samples, v0)
            report = {
                "solution": handle.name,
                "n": n,
                "d": d,
                "seed": seed,
                "checks": [rec.to_json() for rec in records],
            }
            failing = next((rec for rec in records if not rec.residual_zero), None)
            passed = failing is None
        self._update_status(f"{law}: {'passed' if passed else 'FAILED'}")
        return report, passed, failing

    def expand(self, handle, y1, y2):
        y1, y2 = parse_rational(y1), parse_rational(y2)
        if y1 == y2:
            raise CoincidingPoints("The Laurent expansion needs y₁≠y₂")
        self._update_status(f"Expanding {handle.name} in v at y1={y1}, y2={y2}")
        laurent = laurent_in_v(handle, y1, y2)
        scalar = laurent.ansatz_scalar()
        if scalar is None:
            logging.warning(f"{handle.name}: pole term is not a multiple of 1⊗1")
        else:
            self._update_status(f"Pole term is {format_rational(scalar)}·1⊗1")
        return laurent

    def oracle(self, which, seed, samples):
        """Compare the construction with a closed form at seeded points."""
        formula = get_oracle(which)
        if which not in ORACLE_PAIRS:
            raise ValueError(f"Oracle {which!r} has no matching (n,d); choose from {sorted(ORACLE_PAIRS)}")
        n, d = ORACLE_PAIRS[which]
        handle = SolutionHandle.for_pair(n, d)
        classical = formula.arguments == ("y1", "y2")
        self._update_status(f"Comparing r({n},{d}) with {which} at {samples} points (seed {seed})")
        constructed = {}
        arity = len(formula.arguments)
        degenerate = forbid_equal((arity - 2, arity - 1))
        if not classical:
            degenerate = forbid_all(degenerate, forbid_zero(0))

        def forbidden(p):
            if degenerate(p):
                return True
            if p not in constructed:
                constructed[p] = handle.r0_bar(*p) if classical else handle(*p)
            return False

        points = sample_rationals(seed, samples, arity=arity, forbidden=forbidden)
        results = []
        for p in sorted(set(points)):
            ours = constructed[p]
            theirs = formula(*p)
            entry = {
                "point": {name: format_rational(x) for name, x in zip(formula.arguments, p)},
                "equal": ours == theirs,
            }
            if ours != theirs:
                difference = ours - theirs
                entry["difference"] = difference.to_json()
                factor = scalar_multiple_of(ours, theirs)
                if factor is not None:
                    entry["constant_factor"] = format_rational(factor)
            results.append(entry)
        report = {
            "oracle": which,
            "n": n,
            "d": d,
            "seed": seed,
            "errata": [dict(e) for e in formula.errata],
            "points": results,
            "equal": all(entry["equal"] for entry in results),
        }
        self._update_status(f"{which}: equal at every point" if report["equal"] else f"{which}: mismatch found")
        return report

    def symmetries(self, handle, seed, samples):
        """Infinitesimal symmetries of pr2(r0), or of a classical closed form sampled directly."""
        points = sample_rationals(seed, max(samples, 4), arity=2, forbidden=forbid_equal((0, 1)))
        self._update_status(f"Solving for symmetries of {handle.name} over {len(points)} samples")
        if isinstance(handle, CheckedFormula):
            tensors = [handle(*p) for p in points]
        else:
            tensors = [handle.r0_bar(*p) for p in points]
        basis = infinitesimal_symmetries(tensors, handle.n)
        self._update_status(f"Symmetry space has dimension {len(basis)}")
        return {
            "solution": handle.name,
            "seed": seed,
            "symmetry_dim": len(basis),
            "basis": [[[format_rational(x) for x in row] for row in a.rows()] for a in basis],
        }

    def jmatrix(self, n, d):
        self._update_status(f"Folding J for ({n},{d})")
        return build_j(n, d)
