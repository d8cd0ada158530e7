"""Identity checkers and exact analytic extractors for AYBE solutions.

Every check returns a residual tensor; the identity holds at a point exactly
when the residual is the zero tensor.
"""
import logging
from fractions import Fraction

from errors import DegeneratePoint, DegreeCapExceeded, HypothesisFailed, NoSolution, PoleHit
from exact_kernel import (
    SquareMatrix, forbid_equal, format_rational, interpolate_poly, kernel_basis, sample_rationals,
    solve_linear,
)
from solspace import compute_r
from tensoralg import (
    Tensor2, Tensor3, cartan_h, embed, nondegenerate, one_tensor, pr2, pr3, scalar_multiple_of, t2_mul, t3_mul,
    tensor_p,
)

# Interpolation nodes sit at k + NODE_OFFSET so that they avoid the small sample rationals.
NODE_OFFSET = Fraction(1, 7)
MIN_FIT_NODES = 2


# ============== SOLUTION HANDLES ==============

class SolutionHandle:
    """A tensor-valued function r(v; y1, y2) or r(v1, v2; y1, y2)."""

    def __init__(self, evaluator, n, flavor="three", name="r", pair=None):
        if flavor not in ("three", "four"):
            raise ValueError(f"flavor must be 'three' or 'four', got {flavor!r}")
        self.evaluator = evaluator
        self.n = n
        self.flavor = flavor
        self.name = name
        self.pair = pair
        self._laurent = {}

    @classmethod
    def for_pair(cls, n, d):
        return cls(lambda v, y1, y2: compute_r(n, d, v, y1, y2), n, name=f"r({n},{d})", pair=(n, d))

    @classmethod
    def from_formula(cls, formula):
        return cls(formula.evaluator, formula.n, name=formula.name)

    def __call__(self, *args):
        return self.evaluator(*(Fraction(a) for a in args))

    def as_four_variable(self):
        """r(v1, v2; y1, y2) = r(v1 - v2; y1, y2)."""
        if self.flavor == "four":
            return self
        return SolutionHandle(lambda v1, v2, y1, y2: self(v1 - v2, y1, y2), self.n, "four",
                              name=self.name, pair=self.pair)

    def at_v(self, v0):
        """The two-parameter function (y1, y2) -> r(v0; y1, y2)."""
        v0 = Fraction(v0)
        return lambda y1, y2: self(v0, y1, y2)

    def laurent(self, y1, y2):
        key = (Fraction(y1), Fraction(y2))
        if key not in self._laurent:
            self._laurent[key] = laurent_in_v(self, *key)
        return self._laurent[key]

    def r0(self, y1, y2):
        return self.laurent(y1, y2).coefficient(0)

    def r0_bar(self, y1, y2):
        return pr2(self.r0(y1, y2))

    def r1(self, y1, y2):
        return self.laurent(y1, y2).coefficient(1)

    def __repr__(self):
        return f"SolutionHandle({self.name}, n={self.n}, {self.flavor})"


# ============== EQUATION TABLES ==============
# Each table maps a point to [(sign, [(slot, args), ...]), ...]: the signed
# products whose sum is the residual. Points may hold Fractions or sympy symbols.

def aybe_terms(point):
    u, v, y1, y2, y3 = point
    return [
        (1, [("12", (u, y1, y2)), ("23", (u + v, y2, y3))]),
        (-1, [("13", (u + v, y1, y3)), ("12", (-v, y1, y2))]),
        (-1, [("23", (v, y2, y3)), ("13", (u, y1, y3))]),
    ]


def dual_aybe_terms(point):
    u, v, y1, y2, y3 = point
    return [
        (1, [("23", (u + v, y2, y3)), ("12", (u, y1, y2))]),
        (-1, [("12", (-v, y1, y2)), ("13", (u + v, y1, y3))]),
        (-1, [("13", (u, y1, y3)), ("23", (v, y2, y3))]),
    ]


def aybe4_terms(point):
    v1, v2, v3, y1, y2, y3 = point
    return [
        (1, [("12", (v1, v2, y1, y2)), ("23", (v1, v3, y2, y3))]),
        (-1, [("13", (v1, v3, y1, y3)), ("12", (v3, v2, y1, y2))]),
        (-1, [("23", (v2, v3, y2, y3)), ("13", (v1, v2, y1, y3))]),
    ]


def dual_aybe4_terms(point):
    v1, v2, v3, y1, y2, y3 = point
    return [
        (1, [("23", (v2, v3, y2, y3)), ("12", (v1, v3, y1, y2))]),
        (-1, [("12", (v1, v2, y1, y2)), ("13", (v2, v3, y1, y3))]),
        (-1, [("13", (v1, v3, y1, y3)), ("23", (v2, v1, y2, y3))]),
    ]


def _fractions(point):
    return tuple(Fraction(x) for x in point)


def equation_residual(fn, n, table):
    out = Tensor3.zero(n)
    for sign, factors in table:
        product = Tensor3.identity(n)
        for slot, args in factors:
            product = t3_mul(product, embed(fn(*args), slot))
        out = out + product * sign
    return out


def aybe_check(r, u, v, y1, y2, y3):
    return equation_residual(r, r.n, aybe_terms(_fractions((u, v, y1, y2, y3))))


def dual_aybe_check(r, u, v, y1, y2, y3):
    return equation_residual(r, r.n, dual_aybe_terms(_fractions((u, v, y1, y2, y3))))


def aybe4_check(r, v1, v2, v3, y1, y2, y3):
    return equation_residual(r.as_four_variable(), r.n, aybe4_terms(_fractions((v1, v2, v3, y1, y2, y3))))


def dual_aybe4_check(r, v1, v2, v3, y1, y2, y3):
    return equation_residual(r.as_four_variable(), r.n, dual_aybe4_terms(_fractions((v1, v2, v3, y1, y2, y3))))


def unitarity_check(r, v, y1, y2):
    v, y1, y2 = _fractions((v, y1, y2))
    return r(v, y1, y2) + r(-v, y2, y1).swap()


def classical_unitarity_check(c, y1, y2):
    y1, y2 = _fractions((y1, y2))
    return c(y1, y2) + c(y2, y1).swap()


def qybe_check(rt, y1, y2, y3):
    """rt12 rt13 rt23 - rt23 rt13 rt12 for a two-parameter function rt."""
    y1, y2, y3 = _fractions((y1, y2, y3))
    a12 = embed(rt(y1, y2), "12")
    a13 = embed(rt(y1, y3), "13")
    a23 = embed(rt(y2, y3), "23")
    return a12 @ a13 @ a23 - a23 @ a13 @ a12


def cybe_check(c, y1, y2, y3):
    y1, y2, y3 = _fractions((y1, y2, y3))
    c12 = embed(c(y1, y2), "12")
    c13 = embed(c(y1, y3), "13")
    c23 = embed(c(y2, y3), "23")
    return c12.commutator(c23) + c12.commutator(c13) + c13.commutator(c23)


def r0_r1_identity_check(r0, r1, y1, y2, y3, scale=1):
    """c (r1^12 + r1^13 + r1^23) - (r0^12 r0^13 - r0^23 r0^12 + r0^13 r0^23).

    c is the pole scalar, r_{-1} = c 1 (x) 1.
    """
    y1, y2, y3 = _fractions((y1, y2, y3))
    a12, a13, a23 = embed(r0(y1, y2), "12"), embed(r0(y1, y3), "13"), embed(r0(y2, y3), "23")
    lhs = embed(r1(y1, y2), "12") + embed(r1(y1, y3), "13") + embed(r1(y2, y3), "23")
    return lhs * Fraction(scale) - (a12 @ a13 - a23 @ a12 + a13 @ a23)


# ============== LAURENT DATA ==============

class LaurentTensor:
    """Finite Laurent expansion sum_k r_k v^k with Tensor2 coefficients."""

    def __init__(self, n, coefficients, y1=None, y2=None):
        self.n = n
        self.coefficients = {k: t for k, t in sorted(coefficients.items()) if not t.is_zero()}
        self.y1 = y1
        self.y2 = y2

    def coefficient(self, k):
        return self.coefficients.get(k, Tensor2.zero(self.n))

    @property
    def max_order(self):
        return max(self.coefficients, default=-1)

    def ansatz_scalar(self):
        """c with r_{-1} = c * 1 (x) 1, or None."""
        return scalar_multiple_of(self.coefficient(-1), Tensor2.identity(self.n))

    def twisted(self, delta):
        """Formal product exp(v * delta) * r, truncated at the current top order."""
        delta = Fraction(delta)
        top = self.max_order
        out = {}
        for k in range(-1, top + 1):
            acc = Tensor2.zero(self.n)
            weight = Fraction(1)
            for m in range(0, k + 2):
                if m:
                    weight = weight * delta / m
                acc = acc + self.coefficient(k - m) * weight
            out[k] = acc
        return LaurentTensor(self.n, out, self.y1, self.y2)

    def to_json(self, orders=None):
        top = self.max_order if orders is None else orders
        out = {"n": self.n, "coefficients": [
            {"order": k, "coeffs": self.coefficient(k).to_json()["coeffs"]} for k in range(-1, top + 1)
        ]}
        if self.y1 is not None:
            out["y1"] = format_rational(self.y1)
            out["y2"] = format_rational(self.y2)
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentTensor):
            return NotImplemented
        return self.n == other.n and self.coefficients == other.coefficients

    def __repr__(self):
        return f"LaurentTensor(n={self.n}, orders={sorted(self.coefficients)})"


def _fit_tensors(points):
    keys = set()
    for _, t in points:
        keys.update(t.coeffs)
    return {key: interpolate_poly([(x, t.coefficient(*key)) for x, t in points]) for key in keys}


def _matches(fits, x, t):
    if any(poly(x) != t.coefficient(*key) for key, poly in fits.items()):
        return False
    return all(key in fits for key in t.coeffs)


def _adaptive_fit(sample, cap, what, start=Fraction(1), step=Fraction(1)):
    """Fit sample(x) entrywise by polynomials, growing the node count until one extra node agrees."""
    points = []
    k = 0
    attempts = 0
    while True:
        attempts += 1
        if attempts > 4 * cap + 8:
            raise DegreeCapExceeded(f"{what}: too many degenerate nodes")
        x = start + step * k + NODE_OFFSET
        k += 1
        try:
            points.append((x, sample(x)))
        except DegeneratePoint as e:
            logging.debug(f"{what}: skipping node {x}: {e}")
            continue
        if len(points) <= MIN_FIT_NODES:
            continue
        fits = _fit_tensors(points[:-1])
        if _matches(fits, *points[-1]):
            logging.debug(f"{what}: fitted with {len(points) - 1} nodes")
            return fits
        if len(points) > cap:
            raise DegreeCapExceeded(f"{what}: no polynomial fit within {cap} nodes")


def laurent_in_v(r, y1, y2, orders=None):
    """Exact Laurent coefficients of r in v from entrywise interpolation of v * r."""
    y1, y2 = _fractions((y1, y2))
    if y1 == y2:
        raise PoleHit("Laurent expansion needs y₁≠y₂")
    fits = _adaptive_fit(lambda v: r(v, y1, y2) * v, 4 * r.n + 4, f"laurent of {r.name}")
    coefficients = {}
    for key, poly in fits.items():
        for m, c in enumerate(poly.coefficients):
            if c:
                coefficients.setdefault(m - 1, {})[key] = c
    tensors = {k: Tensor2(r.n, coeffs) for k, coeffs in coefficients.items()}
    if orders is not None:
        tensors = {k: t for k, t in tensors.items() if k <= orders}
    return LaurentTensor(r.n, tensors, y1, y2)


def diagonal_residue(r, v, y1):
    """lim_{y2 -> y1} (y1 - y2) r(v; y1, y2)."""
    v, y1 = _fractions((v, y1))
    if v == 0:
        raise PoleHit("diagonal residue needs v≠0")
    fits = _adaptive_fit(lambda y2: r(v, y1, y2) * (y2 - y1), 2 * r.n + 2,
                         f"diagonal residue of {r.name}", start=y1 + 1)
    return -Tensor2(r.n, {key: poly(y1) for key, poly in fits.items()})


def pole_constant(residue):
    """c with residue = c * P, or None."""
    return scalar_multiple_of(residue, tensor_p(residue.n))


# ============== SYMMETRIES AND s = r(u) r(-u) ==============

def sl_basis(n):
    """e_ij for i != j, then h_1 .. h_{n-1}."""
    basis = [SquareMatrix.unit(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return basis + [cartan_h(n, l) for l in range(1, n)]


def infinitesimal_symmetries(samples, n):
    """Basis of {a in sl_n : [T, a (x) 1 + 1 (x) a] = 0 for every sample T}."""
    if not samples:
        raise ValueError("infinitesimal_symmetries needs at least one sample")
    basis = sl_basis(n)
    lifted = [one_tensor(b) for b in basis]
    equations = {}
    for s_idx, t in enumerate(samples):
        for col, lift in enumerate(lifted):
            for key, c in t.commutator(lift).coeffs.items():
                equations.setdefault((s_idx,) + key, {})[col] = c
    rows = [[eq.get(col, Fraction(0)) for col in range(len(basis))] for _, eq in sorted(equations.items())]
    vectors = kernel_basis(rows, columns=len(basis))
    out = []
    for vec in vectors:
        a = SquareMatrix.zero(n)
        for c, b in zip(vec, basis):
            a = a + b * c
        out.append(a)
    return out


def s_product(r, u, y1, y2):
    u, y1, y2 = _fractions((u, y1, y2))
    return t2_mul(r(u, y1, y2), r(-u, y1, y2))


def s_decomposition(r, u, y1, y2):
    """(a, lam) with s = a (x) 1 + 1 (x) a + lam 1 (x) 1 and a traceless, or None."""
    s = s_product(r, u, y1, y2)
    n = r.n
    basis = sl_basis(n)
    columns = [one_tensor(b) for b in basis] + [Tensor2.identity(n)]
    keys = set(s.coeffs)
    for col in columns:
        keys.update(col.coeffs)
    keys = sorted(keys)
    rows = [[col.coefficient(*key) for col in columns] for key in keys]
    try:
        x = solve_linear(rows, [s.coefficient(*key) for key in keys])
    except NoSolution:
        return None
    a = SquareMatrix.zero(n)
    for c, b in zip(x, basis):
        a = a + b * c
    return a, x[-1]


def s_qybe_identity_check(r, u1, u2, u3, y1, y2, y3):
    """QYBE-type defect of r written through s = r(u) r(-u); zero for unitary AYBE solutions."""
    u1, u2, u3, y1, y2, y3 = _fractions((u1, u2, u3, y1, y2, y3))
    u12, u13, u21, u23 = u1 - u2, u1 - u3, u2 - u1, u2 - u3
    lhs = (embed(r(u12, y1, y2), "12") @ embed(r(u23, y1, y3), "13") @ embed(r(u12, y2, y3), "23")
           - embed(r(u23, y2, y3), "23") @ embed(r(u12, y1, y3), "13") @ embed(r(u23, y1, y2), "12"))
    r13 = embed(r(u13, y1, y3), "13")
    rhs = embed(s_product(r, u23, y2, y3), "23") @ r13 - r13 @ embed(s_product(r, u21, y2, y3), "23")
    return lhs - rhs


# ============== SEEDED LAWS ==============

LAW_POINTS = {
    "aybe": ("u", "v", "y1", "y2", "y3"),
    "dual": ("u", "v", "y1", "y2", "y3"),
    "aybe4": ("v1", "v2", "v3", "y1", "y2", "y3"),
    "dual4": ("v1", "v2", "v3", "y1", "y2", "y3"),
    "unitarity": ("v", "y1", "y2"),
    "nondeg": ("v", "y1", "y2"),
    "cybe": ("y1", "y2", "y3"),
    "qybe": ("y1", "y2", "y3"),
    "r0r1": ("y1", "y2", "y3"),
    "residue": ("v", "y1"),
    "s": ("u", "y1", "y2"),
    "sqybe": ("u1", "u2", "u3", "y1", "y2", "y3"),
}

LAWS = ("aybe", "dual", "unitarity", "nondeg", "cybe", "qybe", "r0r1", "residue", "conds")


class CheckRecord:
    def __init__(self, law, names, point, residual_zero, residual=None, witness=None):
        self.law = law
        self.names = names
        self.point = tuple(point)
        self.residual_zero = residual_zero
        self.residual = residual
        self.witness = witness

    def to_json(self):
        out = {
            "law": self.law,
            "point": {name: format_rational(x) for name, x in zip(self.names, self.point)},
            "residual_zero": self.residual_zero,
        }
        if self.residual is not None and not self.residual_zero:
            out["residual"] = self.residual.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __repr__(self):
        return f"CheckRecord({self.law}, {[format_rational(x) for x in self.point]}, zero={self.residual_zero})"


def _distinct(values):
    return len(set(values)) == len(values)


def _obviously_degenerate(law, p):
    if law in ("aybe", "dual"):
        u, v, y1, y2, y3 = p
        return u == 0 or v == 0 or u + v == 0 or not _distinct((y1, y2, y3))
    if law in ("aybe4", "dual4", "sqybe"):
        return not _distinct(p[:3]) or not _distinct(p[3:])
    if law in ("unitarity", "nondeg", "s"):
        return p[0] == 0 or p[1] == p[2]
    if law == "residue":
        return p[0] == 0
    return not _distinct(p)


def _evaluate_law(r, law, p, v0):
    """(residual_zero, residual, witness) for one point."""
    if law == "aybe":
        res = aybe_check(r, *p)
    elif law == "dual":
        res = dual_aybe_check(r, *p)
    elif law == "aybe4":
        res = aybe4_check(r, *p)
    elif law == "dual4":
        res = dual_aybe4_check(r, *p)
    elif law == "unitarity":
        res = unitarity_check(r, *p)
    elif law == "nondeg":
        ok = nondegenerate(r(*p))
        return ok, None, None
    elif law == "cybe":
        res = cybe_check(r.r0_bar, *p)
    elif law == "qybe":
        res = qybe_check(r.at_v(v0), *p)
    elif law == "r0r1":
        scale = r.laurent(p[0], p[1]).ansatz_scalar()
        if scale is None:
            return False, None, {"pole": "r_{-1} is not a multiple of 1⊗1"}
        res = r0_r1_identity_check(r.r0, r.r1, *p, scale=scale)
    elif law == "residue":
        residue = diagonal_residue(r, *p)
        c = pole_constant(residue)
        witness = {"c": format_rational(c)} if c is not None else None
        return c is not None, residue, witness
    elif law == "s":
        s = s_product(r, *p)
        phi = scalar_multiple_of(s, Tensor2.identity(r.n))
        witness = {"phi": format_rational(phi)} if phi is not None else None
        return phi is not None, s, witness
    elif law == "sqybe":
        res = s_qybe_identity_check(r, *p)
    else:
        raise ValueError(f"Unknown law {law!r}")
    return res.is_zero(), res, None


def verify_law(r, law, seed, samples, v0=Fraction(1)):
    """Check one law at `samples` seeded points; records come back in canonical point order."""
    if law == "conds":
        return condition_battery(r, v0, seed, samples).checks
    names = LAW_POINTS[law]
    v0 = Fraction(v0)
    if law == "qybe" and v0 == 0:
        raise PoleHit("QYBE descent needs v₀≠0")
    results = {}

    def forbidden(p):
        if _obviously_degenerate(law, p):
            return True
        if p not in results:
            results[p] = _evaluate_law(r, law, p, v0)
        return False

    points = sample_rationals(seed, samples, arity=len(names), forbidden=forbidden)
    records = [CheckRecord(law, names, p, *results[p]) for p in points]
    logging.info(f"{r.name}: {law} checked at {len(records)} points, "
                 f"{sum(not rec.residual_zero for rec in records)} failures")
    return sorted(records, key=lambda rec: rec.point)


# ============== CONDITION BATTERY ==============

class BatteryReport:
    def __init__(self, solution, n, d, seed, checks, symmetry_dim, conditions):
        self.solution = solution
        self.n = n
        self.d = d
        self.seed = seed
        self.checks = checks
        self.symmetry_dim = symmetry_dim
        self.conditions = conditions

    @property
    def passed(self):
        return all(self.conditions.values())

    def to_json(self):
        return {
            "solution": self.solution,
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "checks": [rec.to_json() for rec in self.checks],
            "symmetry_dim": self.symmetry_dim,
            "conditions": dict(self.conditions),
        }


def _derivative_scalars(r, y1, y2):
    """d/dy_i (r0 - pr2(r0)) at (y1, y2) for i = 1, 2, through Q = (y2 - y1)(r0 - pr2(r0))."""

    def q(a, b):
        r0 = r.r0(a, b)
        return (r0 - pr2(r0)) * (b - a)

    cap = 2 * r.n + 2
    q_here = q(y1, y2)
    dist = y2 - y1
    fit1 = _adaptive_fit(lambda t: q(t, y2), cap, f"{r.name} Q in y1", start=y1 + 1)
    fit2 = _adaptive_fit(lambda t: q(y1, t), cap, f"{r.name} Q in y2", start=y2 + 1)
    dq1 = Tensor2(r.n, {key: poly.derivative()(y1) for key, poly in fit1.items()})
    dq2 = Tensor2(r.n, {key: poly.derivative()(y2) for key, poly in fit2.items()})
    d1 = (dq1 * dist + q_here) / (dist * dist)
    d2 = (dq2 * dist - q_here) / (dist * dist)
    ident = Tensor2.identity(r.n)
    return scalar_multiple_of(d1, ident), scalar_multiple_of(d2, ident)


def condition_d_check(r, y1, y2, y3):
    """pr3 of r0bar^12 r0bar^13 - r0bar^23 r0bar^12 + r0bar^13 r0bar^23."""
    a12 = embed(r.r0_bar(y1, y2), "12")
    a13 = embed(r.r0_bar(y1, y3), "13")
    a23 = embed(r.r0_bar(y2, y3), "23")
    return pr3(a12 @ a13 - a23 @ a12 + a13 @ a23)


def symmetry_dimension(r, seed, samples=4):
    points = sample_rationals(seed, max(samples, 4), arity=2, forbidden=forbid_equal((0, 1)))
    return len(infinitesimal_symmetries([r.r0_bar(*p) for p in points], r.n))


def condition_battery(r, v0, seed, samples):
    """Verdicts on the QYBE lift conditions for a unitary AYBE solution r."""
    v0 = Fraction(v0)
    checks = []
    for law in ("unitarity", "aybe"):
        records = verify_law(r, law, seed, samples)
        checks.extend(records)
        failed = [rec for rec in records if not rec.residual_zero]
        if failed:
            raise HypothesisFailed(f"{r.name} fails {law} at {failed[0]!r}")

    qybe = verify_law(r, "qybe", seed, samples, v0)
    s_records = verify_law(r, "s", seed, samples)

    c_records = []
    pairs = sample_rationals(seed, samples, arity=2, forbidden=forbid_equal((0, 1)))
    for p in sorted(set(pairs)):
        psi1, psi2 = _derivative_scalars(r, *p)
        ok = psi1 is not None and psi2 is not None
        witness = {"psi1": format_rational(psi1), "psi2": format_rational(psi2)} if ok else None
        c_records.append(CheckRecord("c", ("y1", "y2"), p, ok, witness=witness))

    d_records = []
    triples = sample_rationals(seed, samples, arity=3, forbidden=lambda p: not _distinct(p))
    for p in sorted(set(triples)):
        res = condition_d_check(r, *p)
        d_records.append(CheckRecord("d", ("y1", "y2", "y3"), p, res.is_zero(), res))

    checks.extend(qybe + s_records + c_records + d_records)
    conditions = {
        "a": all(rec.residual_zero for rec in qybe),
        "b": all(rec.residual_zero for rec in s_records),
        "c": all(rec.residual_zero for rec in c_records),
        "d": all(rec.residual_zero for rec in d_records),
    }
    dim = symmetry_dimension(r, seed)
    n, d = r.pair if r.pair else (r.n, None)
    logging.info(f"{r.name}: conditions {conditions}, symmetry dimension {dim}")
    return BatteryReport(r.name, n, d, seed, checks, dim, conditions)
