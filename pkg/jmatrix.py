import math
import logging
from dataclasses import dataclass

import numpy as np

from errors import InvalidPair, Undefined
from exact_kernel import SquareMatrix


@dataclass(frozen=True)
class CoprimePair:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise InvalidPair(f"Entries must be positive, got ({self.a},{self.b})")
        if math.gcd(self.a, self.b) != 1:
            raise InvalidPair(f"({self.a},{self.b}) is not a coprime pair")

    def as_tuple(self):
        return (self.a, self.b)


class BlockedJ:
    """The 0/1 matrix J(n-d, d) together with its block split."""

    def __init__(self, size, matrix, split):
        self.size = size
        self.matrix = matrix
        self.split = split

    def ones(self):
        return sorted((i, j) for i, j, _ in self.matrix.nonzero_entries())

    def to_json(self):
        return {"n": self.size, "split": self.split, "ones": [list(p) for p in self.ones()]}

    def __repr__(self):
        return f"BlockedJ(size={self.size}, split={self.split}, ones={self.ones()})"


def check_pair(n, d):
    """Validate 0 < d < n with gcd(n, d) = 1."""
    if not (isinstance(n, int) and isinstance(d, int)) or not 0 < d < n:
        raise InvalidPair(f"Need 0 < d < n, got n={n}, d={d}")
    if math.gcd(n, d) != 1:
        raise InvalidPair(f"n and d must be coprime, got n={n}, d={d}")


def epsilon_step(p):
    if (p.a, p.b) == (1, 1):
        raise Undefined("epsilon is not defined on (1,1)")
    if p.a > p.b:
        return CoprimePair(p.a - p.b, p.b)
    return CoprimePair(p.a, p.b - p.a)


def epsilon_sequence(n, d):
    check_pair(n, d)
    seq = [CoprimePair(n - d, d)]
    while seq[-1].as_tuple() != (1, 1):
        seq.append(epsilon_step(seq[-1]))
    return seq


def _fold(seq):
    """Unwind the epsilon sequence from J(1,1), yielding each intermediate J."""
    current = np.array([[0, 1], [0, 0]], dtype=object)
    split = 1
    chain = [(current, split)]
    for p in reversed(seq[:-1]):
        a, b = epsilon_step(p).as_tuple()
        size = current.shape[0]
        if p.a == a:
            # (a, b+a) case: prepend an a-block with identity into the old J
            new = np.zeros((2 * a + b, 2 * a + b), dtype=object)
            new[0:a, a:2 * a] = np.identity(a, dtype=int)
            new[a:, a:] = current
            split = a
        else:
            # (a+b, b) case: append a b-block fed by identity from the old J
            new = np.zeros((a + 2 * b, a + 2 * b), dtype=object)
            new[0:size, 0:size] = current
            new[a:a + b, a + b:] = np.identity(b, dtype=int)
            split = a + b
        current = new
        chain.append((current, split))
    return chain


def _blocked(array, split):
    return BlockedJ(array.shape[0], SquareMatrix(array.tolist()), split)


def build_j(n, d):
    seq = epsilon_sequence(n, d)
    array, split = _fold(seq)[-1]
    logging.debug(f"J({n - d},{d}) built through {len(seq)} steps, split {split}")
    return _blocked(array, split)


def j_chain(n, d):
    """Every intermediate J from J(1,1) up to J(n-d, d)."""
    return [_blocked(array, split) for array, split in _fold(epsilon_sequence(n, d))]
