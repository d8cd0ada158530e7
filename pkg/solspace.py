"""The constraint space of block-shaped matrix polynomials and the tensor r_(n,d).

An element F(z) = coeff0 + coeff1 z + coeff2 z^2 of W is parametrised by 2n^2
rationals: all of coeff0, coeff1 outside its top-right block, and the
bottom-left block of coeff2.
"""
import logging
from functools import lru_cache
from fractions import Fraction

import numpy as np

from errors import CoincidingPoints, DimensionDrop, NoSolution, Singular, SingularResidue
from exact_kernel import SquareMatrix, invert, kernel_basis, solve_linear
from jmatrix import build_j
from tensoralg import can_inv


def _block_slices(n, split):
    top, bottom = slice(0, split), slice(split, n)
    return {"tl": (top, top), "tr": (top, bottom), "bl": (bottom, top), "br": (bottom, bottom)}


def _in_block(n, split, block, r, c):
    rows, cols = _block_slices(n, split)[block]
    return rows.start <= r < rows.stop and cols.start <= c < cols.stop


class WPoly:
    """F(z) = coeff0 + coeff1 z + coeff2 z^2 with the W block constraints."""

    def __init__(self, n, split, coeff0, coeff1, coeff2):
        self.n = n
        self.split = split
        self.coeff0 = coeff0
        self.coeff1 = coeff1
        self.coeff2 = coeff2
        for i, j, _ in coeff1.nonzero_entries():
            if _in_block(n, split, "tr", i - 1, j - 1):
                raise ValueError("coeff1 must vanish on its top-right block")
        for i, j, _ in coeff2.nonzero_entries():
            if not _in_block(n, split, "bl", i - 1, j - 1):
                raise ValueError("coeff2 must vanish outside its bottom-left block")

    @classmethod
    def zero(cls, n, split):
        z = SquareMatrix.zero(n)
        return cls(n, split, z, z, z)

    def __call__(self, z):
        z = Fraction(z)
        return self.coeff0 + self.coeff1 * z + self.coeff2 * (z * z)

    def __add__(self, other):
        return WPoly(self.n, self.split, self.coeff0 + other.coeff0,
                     self.coeff1 + other.coeff1, self.coeff2 + other.coeff2)

    def __mul__(self, scalar):
        return WPoly(self.n, self.split, self.coeff0 * scalar, self.coeff1 * scalar, self.coeff2 * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, WPoly):
            return NotImplemented
        return (self.n, self.split, self.coeff0, self.coeff1, self.coeff2) == \
            (other.n, other.split, other.coeff0, other.coeff1, other.coeff2)

    def __hash__(self):
        return hash((self.n, self.split, self.coeff0, self.coeff1, self.coeff2))

    def __repr__(self):
        return f"WPoly(n={self.n}, split={self.split}, {self.coeff0!r}, {self.coeff1!r}, {self.coeff2!r})"


def w_parameters(n, split):
    """Free coordinates of W as (coefficient degree, row, col), 0-based."""
    params = [(0, r, c) for r in range(n) for c in range(n)]
    params += [(1, r, c) for r in range(n) for c in range(n) if not _in_block(n, split, "tr", r, c)]
    params += [(2, r, c) for r in range(n) for c in range(n) if _in_block(n, split, "bl", r, c)]
    return params


def w_dimension(n, split):
    return len(w_parameters(n, split))


def wpoly_from_vector(n, split, vector):
    grids = [np.full((n, n), Fraction(0), dtype=object) for _ in range(3)]
    for (deg, r, c), x in zip(w_parameters(n, split), vector):
        grids[deg][r, c] = Fraction(x)
    return WPoly(n, split, *(SquareMatrix(g.tolist()) for g in grids))


def _assemble(n, split, parts):
    """Block matrix from {block name: (source matrix)} taking each block from its source."""
    out = np.full((n, n), Fraction(0), dtype=object)
    slices = _block_slices(n, split)
    for block, source in parts.items():
        rows, cols = slices[block]
        out[rows, cols] = source.array[rows, cols]
    return SquareMatrix(out.tolist())


def f_zero_part(f):
    """F_0 = [W' X; Y'' Z']."""
    return _assemble(f.n, f.split, {"tl": f.coeff1, "tr": f.coeff0, "bl": f.coeff2, "br": f.coeff1})


def f_eps_part(f):
    """F_eps = [W 0; Y' Z]."""
    return _assemble(f.n, f.split, {"tl": f.coeff0, "bl": f.coeff1, "br": f.coeff0})


def constraint_value(f, j, v, y1):
    """[F_0, J] + (y1 - v) F_0 + F_eps."""
    f0 = f_zero_part(f)
    return f0.commutator(j.matrix) + f0 * (Fraction(y1) - Fraction(v)) + f_eps_part(f)


def constraint_matrix(j, v, y1):
    """n^2 x 2n^2 matrix of the constraint map on the coordinates of W."""
    n = j.size
    columns = []
    for k in range(w_dimension(n, j.split)):
        unit = [0] * w_dimension(n, j.split)
        unit[k] = 1
        columns.append(constraint_value(wpoly_from_vector(n, j.split, unit), j, v, y1).flatten())
    return [list(row) for row in zip(*columns)]


def sol_basis(j, v, y1):
    vectors = kernel_basis(constraint_matrix(j, v, y1))
    return [wpoly_from_vector(j.size, j.split, vec) for vec in vectors]


def res_map(f, y1):
    return f(y1)


def ev_map(f, y1, y2):
    if y1 == y2:
        raise CoincidingPoints("ev needs y₁≠y₂")
    return f(y2) / (Fraction(y2) - Fraction(y1))


def _columns_to_matrix(columns):
    return SquareMatrix([list(row) for row in zip(*(c.flatten() for c in columns))])


def rtilde_endomorphism(n, d, v, y1, y2):
    """ev_{y2} o res_{y1}^{-1} on A, as an n^2 x n^2 matrix in the basis e_11, ..., e_nn."""
    v, y1, y2 = Fraction(v), Fraction(y1), Fraction(y2)
    j = build_j(n, d)
    if v == 0:
        raise SingularResidue("res is an isomorphism only for v≠0")
    if y1 == y2:
        raise CoincidingPoints("ev needs y₁≠y₂")
    basis = sol_basis(j, v, y1)
    if len(basis) != n * n:
        logging.warning(f"Sol has dimension {len(basis)} at v={v}, y1={y1} for ({n},{d})")
        raise DimensionDrop(f"Sol has dimension {len(basis)}, expected {n * n}")
    res = _columns_to_matrix([res_map(f, y1) for f in basis])
    try:
        res_inv = invert(res)
    except Singular as e:
        raise SingularResidue(f"res is not invertible at v={v}, y1={y1}") from e
    ev = _columns_to_matrix([ev_map(f, y1, y2) for f in basis])
    return ev @ res_inv


def res_preimage(n, d, v, y1, target):
    """The element F of Sol with res_{y1}(F) = target."""
    j = build_j(n, d)
    basis = sol_basis(j, v, y1)
    res = _columns_to_matrix([res_map(f, y1) for f in basis])
    try:
        coords = solve_linear(res.rows(), target.flatten())
    except NoSolution as e:
        raise SingularResidue(f"{target!r} is not in the image of res at v={v}, y1={y1}") from e
    result = WPoly.zero(n, j.split)
    for c, f in zip(coords, basis):
        result = result + f * c
    return result


@lru_cache(maxsize=4096)
def _compute_r_cached(n, d, v, y1, y2):
    return can_inv(rtilde_endomorphism(n, d, v, y1, y2), n)


def compute_r(n, d, v, y1, y2):
    """r_(n,d)(v; y1, y2) = can^{-1}(rtilde)."""
    return _compute_r_cached(n, d, Fraction(v), Fraction(y1), Fraction(y2))
