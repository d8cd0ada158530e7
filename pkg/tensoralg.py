import math
import itertools
from fractions import Fraction
from types import MappingProxyType

from errors import SizeMismatch
from exact_kernel import SquareMatrix, format_rational, kernel_basis, rank


def basis_index(n, i, j):
    """Row-major position of e_ij in the basis e_11, e_12, ..., e_nn (0-based)."""
    return (i - 1) * n + (j - 1)


def basis_unit(n, index):
    """Inverse of basis_index: (i, j) for a 0-based position."""
    i, j = divmod(index, n)
    return i + 1, j + 1


class _MatrixUnitTensor:
    """Sparse element of A^{(x)k} in the matrix-unit basis.

    Keys are (i1, j1, i2, j2, ...) for e_{i1 j1} (x) e_{i2 j2} (x) ...; zero
    coefficients are never stored.
    """
    arity = None

    def __init__(self, n, coeffs=None):
        self.n = n
        pruned = {}
        for key, c in (coeffs or {}).items():
            key = tuple(int(k) for k in key)
            if len(key) != 2 * self.arity:
                raise ValueError(f"Expected {2 * self.arity} indices, got {key}")
            if any(k < 1 or k > n for k in key):
                raise ValueError(f"Index out of range 1..{n} in {key}")
            c = Fraction(c)
            if c != 0:
                pruned[key] = c
        self._coeffs = MappingProxyType(pruned)

    @classmethod
    def _from_dict(cls, n, coeffs):
        obj = cls.__new__(cls)
        obj.n = n
        obj._coeffs = MappingProxyType({k: c for k, c in coeffs.items() if c != 0})
        return obj

    @property
    def coeffs(self):
        return self._coeffs

    def coefficient(self, *key):
        return self._coeffs.get(tuple(key), Fraction(0))

    def is_zero(self):
        return not self._coeffs

    def _check(self, other):
        if type(other) is not type(self):
            raise SizeMismatch(f"Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise SizeMismatch(f"Tensor sizes differ: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return type(self)._from_dict(self.n, out)

    def __neg__(self):
        return type(self)._from_dict(self.n, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return type(self)._from_dict(self.n, {k: c * scalar for k, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __matmul__(self, other):
        """Factorwise matrix product extended bilinearly."""
        self._check(other)
        by_rows = {}
        for kb, cb in other._coeffs.items():
            by_rows.setdefault(kb[0::2], []).append((kb[1::2], cb))
        out = {}
        for ka, ca in self._coeffs.items():
            rows_a = ka[0::2]
            for cols_b, cb in by_rows.get(ka[1::2], ()):
                key = tuple(x for pair in zip(rows_a, cols_b) for x in pair)
                out[key] = out.get(key, 0) + ca * cb
        return type(self)._from_dict(self.n, out)

    def commutator(self, other):
        return self @ other - other @ self

    def __eq__(self, other):
        if not isinstance(other, _MatrixUnitTensor):
            return NotImplemented
        return type(self) is type(other) and self.n == other.n and dict(self._coeffs) == dict(other._coeffs)

    def __hash__(self):
        return hash((type(self).__name__, self.n, frozenset(self._coeffs.items())))

    def sorted_items(self):
        return sorted(self._coeffs.items())

    def to_json(self):
        return {
            "n": self.n,
            "coeffs": [list(k) + [format_rational(c)] for k, c in self.sorted_items()],
        }

    def to_text(self):
        """Aligned columns of indices and value."""
        rows = [[str(k) for k in key] + [format_rational(c)] for key, c in self.sorted_items()]
        if not rows:
            return "(zero)"
        widths = [max(len(r[col]) for r in rows) for col in range(len(rows[0]))]
        return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, terms={len(self._coeffs)})"


class Tensor2(_MatrixUnitTensor):
    arity = 2

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def identity(cls, n):
        """1 (x) 1."""
        return cls._from_dict(n, {(a, a, b, b): Fraction(1) for a in range(1, n + 1) for b in range(1, n + 1)})

    @classmethod
    def unit(cls, n, i, j, k, l):
        return cls._from_dict(n, {(i, j, k, l): Fraction(1)})

    @classmethod
    def decomposable(cls, x, y):
        """x (x) y for SquareMatrix factors."""
        if x.n != y.n:
            raise SizeMismatch(f"Factor sizes differ: {x.n} vs {y.n}")
        out = {}
        for i, j, a in x.nonzero_entries():
            for k, l, b in y.nonzero_entries():
                out[(i, j, k, l)] = a * b
        return cls._from_dict(x.n, out)

    def swap(self):
        return Tensor2._from_dict(self.n, {(k, l, i, j): c for (i, j, k, l), c in self._coeffs.items()})


class Tensor3(_MatrixUnitTensor):
    arity = 3

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def identity(cls, n):
        rng = range(1, n + 1)
        return cls._from_dict(n, {(a, a, b, b, c, c): Fraction(1) for a in rng for b in rng for c in rng})

    @classmethod
    def decomposable(cls, x, y, z):
        out = {}
        for i, j, a in x.nonzero_entries():
            for k, l, b in y.nonzero_entries():
                for p, q, c in z.nonzero_entries():
                    out[(i, j, k, l, p, q)] = a * b * c
        return cls._from_dict(x.n, out)


SLOT_PAIRS = ("12", "13", "23")


def embed(t, slot_pair):
    """rho_ij: place the two factors of t in slots i and j, identity elsewhere."""
    if slot_pair not in SLOT_PAIRS:
        raise ValueError(f"slot_pair must be one of {SLOT_PAIRS}, got {slot_pair!r}")
    out = {}
    for (i, j, k, l), c in t.coeffs.items():
        for m in range(1, t.n + 1):
            if slot_pair == "12":
                key = (i, j, k, l, m, m)
            elif slot_pair == "13":
                key = (i, j, m, m, k, l)
            else:
                key = (m, m, i, j, k, l)
            out[key] = c
    return Tensor3._from_dict(t.n, out)


def t2_mul(a, b):
    return a @ b


def t3_mul(a, b):
    return a @ b


def swap(t):
    return t.swap()


# ============== CANONICAL ISOMORPHISM ==============

def can(t):
    """The endomorphism Z -> tr(XZ) Y of A for t = X (x) Y, as an n^2 x n^2 matrix."""
    n = t.n
    size = n * n
    grid = [[Fraction(0)] * size for _ in range(size)]
    for (i, j, k, l), c in t.coeffs.items():
        grid[basis_index(n, k, l)][basis_index(n, j, i)] += c
    return SquareMatrix(grid)


def can_inv(m, n=None):
    """Inverse of can: the tensor whose image is the given endomorphism matrix."""
    size = m.n
    n = n or math.isqrt(size)
    if n * n != size:
        raise SizeMismatch(f"Endomorphism matrix of size {size} is not n^2 x n^2")
    out = {}
    for row, col, c in m.nonzero_entries():
        k, l = basis_unit(n, row - 1)
        j, i = basis_unit(n, col - 1)
        out[(i, j, k, l)] = c
    return Tensor2._from_dict(n, out)


def nondegenerate(t):
    return rank(can(t)) == t.n * t.n


# ============== PROJECTIONS AND DISTINGUISHED TENSORS ==============

def pr(m):
    """X -> X - tr(X)/n * 1."""
    return m - SquareMatrix.identity(m.n) * (m.trace() / m.n)


def _pr_factor(n, i, j):
    if i != j:
        return [((i, j), Fraction(1))]
    shift = Fraction(-1, n)
    return [((m, m), Fraction(1) + shift if m == i else shift) for m in range(1, n + 1)]


def _pr_tensor(t):
    cls = type(t)
    out = {}
    for key, c in t.coeffs.items():
        factors = [_pr_factor(t.n, key[2 * f], key[2 * f + 1]) for f in range(cls.arity)]
        for combo in itertools.product(*factors):
            new_key = tuple(x for pair, _ in combo for x in pair)
            weight = c
            for _, w in combo:
                weight *= w
            out[new_key] = out.get(new_key, 0) + weight
    return cls._from_dict(t.n, out)


def pr2(t):
    return _pr_tensor(t)


def pr3(t):
    return _pr_tensor(t)


def tensor_p(n):
    """P = sum e_ij (x) e_ji."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return Tensor2._from_dict(n, {(i, j, j, i): Fraction(1) for i in range(1, n + 1) for j in range(1, n + 1)})


def tensor_omega(n):
    return pr2(tensor_p(n))


def cartan_h(n, l):
    """h_l = e_ll - e_{l+1,l+1}."""
    return SquareMatrix.unit(n, l, l) - SquareMatrix.unit(n, l + 1, l + 1)


def check_h(n, l):
    """Trace-form dual of h_l: (n-l)/n on the first l diagonal entries, -l/n after."""
    return SquareMatrix.diag([Fraction(n - l, n)] * l + [Fraction(-l, n)] * (n - l))


def casimir_display(n):
    """Omega assembled from root vectors and the Cartan part."""
    out = Tensor2.zero(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out = out + Tensor2.unit(n, i, j, j, i)
    for l in range(1, n):
        out = out + Tensor2.decomposable(cartan_h(n, l), check_h(n, l))
    return out


def one_tensor(a):
    """a (x) 1 + 1 (x) a."""
    ident = SquareMatrix.identity(a.n)
    return Tensor2.decomposable(a, ident) + Tensor2.decomposable(ident, a)


def scalar_multiple_of(t, base):
    """Return c with t == c * base, or None."""
    if base.is_zero():
        return Fraction(0) if t.is_zero() else None
    key, value = base.sorted_items()[0]
    ratio = t.coefficient(*key) / value
    return ratio if t == base * ratio else None


def intertwiner_basis(n):
    """Basis of {T : T(x (x) 1) = (1 (x) x)T and T(1 (x) x) = (x (x) 1)T for every x in A}.

    The first condition alone leaves T = P(1 (x) b) free; the second forces b central.
    """
    unknowns = [(i, j, k, l) for i in range(1, n + 1) for j in range(1, n + 1)
                for k in range(1, n + 1) for l in range(1, n + 1)]
    ident = SquareMatrix.identity(n)
    equations = {}
    for col, key in enumerate(unknowns):
        t = Tensor2.unit(n, *key)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                x = SquareMatrix.unit(n, a, b)
                left, right = Tensor2.decomposable(x, ident), Tensor2.decomposable(ident, x)
                images = (t2_mul(t, left) - t2_mul(right, t), t2_mul(t, right) - t2_mul(left, t))
                for side, image in enumerate(images):
                    for out_key, c in image.coeffs.items():
                        equations.setdefault((side, a, b) + out_key, {})[col] = c
    rows = [[eq.get(col, Fraction(0)) for col in range(len(unknowns))] for _, eq in sorted(equations.items())]
    basis = kernel_basis(rows, columns=len(unknowns))
    return [Tensor2(n, {key: c for key, c in zip(unknowns, vec)}) for vec in basis]
