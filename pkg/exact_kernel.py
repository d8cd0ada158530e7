import os
import re
import math
import logging
from fractions import Fraction

import numpy as np

from errors import (
    AybeError, DegeneratePoint, NoSolution, Singular, DuplicateNode, ExhaustedSampling,
)

# Sampler ranges
NUMERATOR_RANGE = (-9, 9)
DENOMINATORS = (1, 2, 3)
MAX_CONSECUTIVE_REJECTS = 1000

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")

_verify = os.environ.get("AYBE_VERIFY", "") not in ("", "0")


def set_verification(enabled):
    """Toggle back-substitution checks on every solve and inverse."""
    global _verify
    _verify = bool(enabled)


def verification_enabled():
    return _verify


def parse_rational(text):
    """Parse "p/q" or "p" into a Fraction. Decimals and exponents are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    match = _RATIONAL_PATTERN.match(str(text))
    if not match:
        raise ValueError(f"Not a rational literal: {text!r} (use p/q or an integer)")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"Zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ============== MATRICES ==============

class SquareMatrix:
    """An immutable n x n matrix of Fractions, indexed 1-based like e_ij."""

    def __init__(self, entries):
        array = np.array([[Fraction(x) for x in row] for row in entries], dtype=object)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise ValueError(f"SquareMatrix needs a non-empty square grid, got shape {array.shape}")
        array.flags.writeable = False
        self._a = array

    @classmethod
    def _wrap(cls, array):
        obj = cls.__new__(cls)
        array = np.array(array, dtype=object)
        array.flags.writeable = False
        obj._a = array
        return obj

    @classmethod
    def zero(cls, n):
        return cls._wrap(np.full((n, n), Fraction(0), dtype=object))

    @classmethod
    def identity(cls, n):
        return cls.diag([1] * n)

    @classmethod
    def unit(cls, n, i, j):
        """Matrix unit e_ij."""
        a = np.full((n, n), Fraction(0), dtype=object)
        a[i - 1, j - 1] = Fraction(1)
        return cls._wrap(a)

    @classmethod
    def diag(cls, values):
        n = len(values)
        a = np.full((n, n), Fraction(0), dtype=object)
        for k, x in enumerate(values):
            a[k, k] = Fraction(x)
        return cls._wrap(a)

    @classmethod
    def from_flat(cls, n, values):
        """Inverse of flatten(): values in row-major order e_11, e_12, ..., e_nn."""
        values = list(values)
        if len(values) != n * n:
            raise ValueError(f"Expected {n * n} values, got {len(values)}")
        return cls([values[r * n:(r + 1) * n] for r in range(n)])

    @property
    def n(self):
        return self._a.shape[0]

    @property
    def array(self):
        """Writable copy of the underlying object array."""
        return self._a.copy()

    def __getitem__(self, index):
        i, j = index
        return self._a[i - 1, j - 1]

    def rows(self):
        return [list(row) for row in self._a]

    def flatten(self):
        return tuple(self._a.flat)

    def nonzero_entries(self):
        """Yield (i, j, value) for the nonzero entries, 1-based."""
        for (r, c), x in np.ndenumerate(self._a):
            if x != 0:
                yield r + 1, c + 1, x

    def __add__(self, other):
        return SquareMatrix._wrap(self._a + other._a)

    def __sub__(self, other):
        return SquareMatrix._wrap(self._a - other._a)

    def __neg__(self):
        return SquareMatrix._wrap(-self._a)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return SquareMatrix._wrap(self._a * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __matmul__(self, other):
        if self.n != other.n:
            raise ValueError(f"Size mismatch: {self.n} vs {other.n}")
        return SquareMatrix._wrap(self._a.dot(other._a))

    def transpose(self):
        return SquareMatrix._wrap(self._a.T)

    def trace(self):
        return sum(self._a.diagonal(), Fraction(0))

    def commutator(self, other):
        return self @ other - other @ self

    def is_zero(self):
        return not any(x != 0 for x in self._a.flat)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.n == other.n and bool((self._a == other._a).all())

    def __hash__(self):
        return hash((self.n, self.flatten()))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self._a)
        return f"SquareMatrix([{body}])"


# ============== POLYNOMIALS ==============

class Polynomial:
    """Univariate polynomial over the rationals, coefficients lowest degree first."""

    def __init__(self, coefficients=()):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @property
    def degree(self):
        """-1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self):
        return not self.coefficients

    def coefficient(self, k):
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Polynomial(k * c for k, c in enumerate(self.coefficients) if k > 0)

    def __add__(self, other):
        other = _as_polynomial(other)
        size = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-_as_polynomial(other))

    def __mul__(self, other):
        other = _as_polynomial(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"Polynomial({[format_rational(c) for c in self.coefficients]})"


def _as_polynomial(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial([value])


def interpolate_poly(points):
    """Unique polynomial of degree < len(points) through the given (x, y) pairs.

    Newton divided differences, then expansion into the monomial basis.
    """
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateNode(f"Repeated interpolation node among {[format_rational(x) for x in xs]}")
    table = list(ys)
    count = len(xs)
    for level in range(1, count):
        for i in range(count - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    result = Polynomial()
    for i in range(count - 1, -1, -1):
        result = result * Polynomial([-xs[i], 1]) + table[i]
    return result


# ============== LINEAR ALGEBRA ==============

def _as_rows(m):
    if isinstance(m, SquareMatrix):
        return m.rows()
    return [[Fraction(x) for x in row] for row in m]


def _integer_rows(rows):
    """Scale each row by the lcm of its denominators. Row space is unchanged."""
    out = []
    for row in rows:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def _rref_den(rows, limit):
    """Fraction-free Gauss-Jordan elimination in place on integer rows.

    Only the first `limit` columns are used as pivot columns. On return every
    pivot entry equals the returned denominator and every other entry in a
    pivot column is zero.
    """
    m = len(rows)
    den = 1
    pivots = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        pv = pivot_row[c]
        for i in range(m):
            if i == r:
                continue
            f = rows[i][c]
            rows[i] = [(pv * x - f * y) // den for x, y in zip(rows[i], pivot_row)]
        den = pv
        pivots.append(c)
        r += 1
    return den, pivots


def rank(m):
    rows = _integer_rows(_as_rows(m))
    if not rows:
        return 0
    _, pivots = _rref_den(rows, len(rows[0]))
    return len(pivots)


def kernel_basis(m, columns=None):
    """Basis of the right null space of a rectangular exact matrix."""
    rows = _integer_rows(_as_rows(m))
    width = len(rows[0]) if rows else columns
    if width is None:
        raise ValueError("Column count is unknown for a matrix without rows")
    if not rows:
        return [[Fraction(int(i == f)) for i in range(width)] for f in range(width)]
    den, pivots = _rref_den(rows, width)
    pivot_set = set(pivots)
    basis = []
    for f in range(width):
        if f in pivot_set:
            continue
        vec = [Fraction(0)] * width
        vec[f] = Fraction(1)
        for idx, c in enumerate(pivots):
            vec[c] = Fraction(-rows[idx][f], den)
        basis.append(vec)
    if _verify:
        original = _as_rows(m)
        for vec in basis:
            if any(sum((a * x for a, x in zip(row, vec)), Fraction(0)) for row in original):
                raise AybeError("Kernel vector is not annihilated")
    return basis


def solve_linear(m, rhs):
    """One exact solution of m x = rhs (free variables set to zero)."""
    original = _as_rows(m)
    rhs = [Fraction(b) for b in rhs]
    if len(original) != len(rhs):
        raise ValueError(f"{len(original)} equations but {len(rhs)} right-hand values")
    if not original:
        return []
    width = len(original[0])
    rows = _integer_rows([row + [b] for row, b in zip(original, rhs)])
    den, pivots = _rref_den(rows, width)
    for row in rows[len(pivots):]:
        if row[-1]:
            raise NoSolution("Inconsistent linear system")
    x = [Fraction(0)] * width
    for idx, c in enumerate(pivots):
        x[c] = Fraction(rows[idx][-1], den)
    if _verify:
        for row, b in zip(original, rhs):
            if sum((a * xi for a, xi in zip(row, x)), Fraction(0)) != b:
                raise AybeError("Back-substitution mismatch in solve_linear")
    return x


def invert(m):
    """Exact inverse. Returns a SquareMatrix."""
    original = _as_rows(m)
    n = len(original)
    if any(len(row) != n for row in original):
        raise ValueError("invert needs a square matrix")
    augmented = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(original)]
    rows = _integer_rows(augmented)
    den, pivots = _rref_den(rows, n)
    if len(pivots) < n:
        raise Singular(f"Matrix of size {n} has rank {len(pivots)}")
    result = SquareMatrix([[Fraction(x, den) for x in row[n:]] for row in rows])
    if _verify:
        source = m if isinstance(m, SquareMatrix) else SquareMatrix(original)
        if source @ result != SquareMatrix.identity(n):
            raise AybeError("Inverse check failed")
    return result


# ============== SAMPLING ==============

def _draw(rng):
    num = int(rng.integers(NUMERATOR_RANGE[0], NUMERATOR_RANGE[1] + 1))
    den = DENOMINATORS[int(rng.integers(0, len(DENOMINATORS)))]
    return Fraction(num, den)


def sample_rationals(seed, count, arity=1, forbidden=None):
    """Deterministic tuples of small rationals.

    `forbidden` is a predicate on a tuple; a True result or a DegeneratePoint
    raised while evaluating it rejects the draw.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(int(seed) & ((1 << 64) - 1))
    out = []
    rejects = 0
    while len(out) < count:
        point = tuple(_draw(rng) for _ in range(arity))
        rejected = False
        if forbidden is not None:
            try:
                rejected = bool(forbidden(point))
            except DegeneratePoint as e:
                logging.info(f"Skipping degenerate sample {[format_rational(x) for x in point]}: {e}")
                rejected = True
        if rejected:
            rejects += 1
            if rejects >= MAX_CONSECUTIVE_REJECTS:
                raise ExhaustedSampling(
                    f"{MAX_CONSECUTIVE_REJECTS} consecutive draws were forbidden (seed {seed})")
            continue
        rejects = 0
        out.append(point)
    return out


def forbid_zero(*positions):
    """Predicate rejecting tuples with a zero at any given position."""
    return lambda point: any(point[p] == 0 for p in positions)


def forbid_equal(*pairs):
    """Predicate rejecting tuples where any listed pair of positions coincide."""
    return lambda point: any(point[a] == point[b] for a, b in pairs)


def forbid_all(*predicates):
    return lambda point: any(p(point) for p in predicates)
