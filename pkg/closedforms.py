"""Closed-form tensors used as independent oracles for the construction."""
import logging
from fractions import Fraction

from errors import PoleHit
from exact_kernel import SquareMatrix
from tensoralg import Tensor2, check_h, tensor_omega, tensor_p


class CheckedFormula:
    """A named closed form. `arguments` lists the spectral parameters it takes."""

    def __init__(self, name, n, evaluator, arguments, errata=()):
        self.name = name
        self.n = n
        self.evaluator = evaluator
        self.arguments = arguments
        self.errata = tuple(errata)

    def __call__(self, *args):
        return self.evaluator(*args)

    def __repr__(self):
        return f"CheckedFormula({self.name!r}, n={self.n}, args={self.arguments})"


# Known misprints in the published displays, with the correction applied by default.
ERRATA = {
    "r31": [
        {
            "term": "e31⊗e32",
            "printed": "(1/3)v²(y₁+v)(3v+y₂)",
            "corrected": "(1/3)v²(y₁−v)(3v+y₂)",
            "evidence": "printed form breaks unitarity against the e32⊗e31 term",
        },
    ],
}


def _e(n, i, j):
    return SquareMatrix.unit(n, i, j)


def _t(x, y):
    return Tensor2.decomposable(x, y)


def _require(v=None, y1=None, y2=None, y=None):
    if v is not None and v == 0:
        raise PoleHit("pole at v = 0")
    if y1 is not None and y1 == y2:
        raise PoleHit("pole at y₁ = y₂")
    if y is not None and y == 0:
        raise PoleHit("pole at y = 0")


def r21_closed(v, y1, y2):
    v, y1, y2 = Fraction(v), Fraction(y1), Fraction(y2)
    _require(v=v, y1=y1, y2=y2)
    n = 2
    hc = check_h(n, 1)
    e21 = _e(n, 2, 1)
    return (Tensor2.identity(n) / (2 * v)
            + tensor_p(n) / (y2 - y1)
            + _t(e21, hc) * (v - y1)
            + _t(hc, e21) * (v + y2)
            - _t(e21, e21) * (v * (v - y1) * (v + y2) / 2))


def r31_closed(v, y1, y2, printed=False):
    """r_(3,1). With printed=True the e31⊗e32 coefficient is taken verbatim from the display."""
    v, y1, y2 = Fraction(v), Fraction(y1), Fraction(y2)
    _require(v=v, y1=y1, y2=y2)
    n = 3
    h1, h2 = check_h(n, 1), check_h(n, 2)
    e = {(i, j): _e(n, i, j) for i in range(1, 4) for j in range(1, 4)}
    d13 = e[1, 1] - e[3, 3]
    if printed:
        c_31_32 = Fraction(1, 3) * v ** 2 * (y1 + v) * (3 * v + y2)
    else:
        c_31_32 = Fraction(1, 3) * v ** 2 * (y1 - v) * (3 * v + y2)
    terms = [
        (Tensor2.identity(n), 1 / (3 * v)),
        (tensor_p(n), 1 / (y2 - y1)),
        (_t(e[2, 1], h1), -1),
        (_t(h1, e[2, 1]), 1),
        (_t(e[3, 2], e[1, 2]), 1),
        (_t(e[1, 2], e[3, 2]), -1),
        (_t(e[3, 2], h2), -y1),
        (_t(h2, e[3, 2]), y2),
        (_t(e[3, 1], e[1, 2]), v - y1),
        (_t(e[1, 2], e[3, 1]), v + y2),
        (_t(e[3, 2], d13), v),
        (_t(d13, e[3, 2]), v),
        (_t(e[3, 2], e[2, 1]), Fraction(1, 3) * v * (y1 - 3 * v)),
        (_t(e[2, 1], e[3, 2]), Fraction(1, 3) * v * (y2 + 3 * v)),
        (_t(e[3, 1], h1), v * (v - y1)),
        (_t(h1, e[3, 1]), -v * (v + y2)),
        (_t(e[3, 1], e[2, 1]), Fraction(2, 3) * v ** 2 * (y1 - v)),
        (_t(e[2, 1], e[3, 1]), -Fraction(2, 3) * v ** 2 * (y2 + v)),
        (_t(e[3, 2], e[3, 1]), Fraction(1, 3) * v ** 2 * (y2 + v) * (3 * v - y1)),
        (_t(e[3, 1], e[3, 2]), c_31_32),
        (_t(e[2, 1], e[2, 1]), Fraction(2, 3) * v),
        (_t(e[3, 1], e[3, 1]), Fraction(2, 3) * v ** 3 * (v - y1) * (v + y2)),
        (_t(e[3, 2], e[3, 2]), Fraction(1, 3) * v * (-6 * v ** 2 + 3 * v * (y1 - y2) + 2 * y1 * y2)),
    ]
    out = Tensor2.zero(n)
    for tensor, coefficient in terms:
        out = out + tensor * coefficient
    return out


def c21_closed(y1, y2):
    y1, y2 = Fraction(y1), Fraction(y2)
    _require(y1=y1, y2=y2)
    n = 2
    hc = check_h(n, 1)
    e21 = _e(n, 2, 1)
    return tensor_omega(n) / (y2 - y1) + _t(hc, e21) * y2 - _t(e21, hc) * y1


def c31_closed(y1, y2):
    y1, y2 = Fraction(y1), Fraction(y2)
    _require(y1=y1, y2=y2)
    n = 3
    h1, h2 = check_h(n, 1), check_h(n, 2)
    e = {(i, j): _e(n, i, j) for i in range(1, 4) for j in range(1, 4)}
    return (tensor_omega(n) / (y2 - y1)
            + _t(h2, e[3, 2]) * y2 - _t(e[3, 2], h2) * y1
            + _t(e[1, 2], e[3, 1]) * y2 - _t(e[3, 1], e[1, 2]) * y1
            - _t(e[2, 1], h1) + _t(h1, e[2, 1])
            + _t(e[3, 2], e[1, 2]) - _t(e[1, 2], e[3, 2]))


def yang2_aybe(v, y):
    """Two-variable form, y = y1 - y2."""
    v, y = Fraction(v), Fraction(y)
    _require(v=v, y=y)
    return Tensor2.identity(2) / (2 * v) + tensor_p(2) / y


def yang2_cybe(y):
    y = Fraction(y)
    _require(y=y)
    h = SquareMatrix.diag([1, -1])
    return (_t(h, h) / 2 + _t(_e(2, 1, 2), _e(2, 2, 1)) + _t(_e(2, 2, 1), _e(2, 1, 2))) / y


def yang2_aybe_y(v, y1, y2):
    """yang2_aybe in (v; y1, y2) form."""
    return yang2_aybe(v, Fraction(y1) - Fraction(y2))


def yang2_cybe_y(y1, y2):
    return yang2_cybe(Fraction(y1) - Fraction(y2))


def _r31_corrected(v, y1, y2):
    return r31_closed(v, y1, y2)


def _r31_printed(v, y1, y2):
    return r31_closed(v, y1, y2, printed=True)


ORACLES = {
    "r21": CheckedFormula("r21", 2, r21_closed, ("v", "y1", "y2")),
    "r31": CheckedFormula("r31", 3, _r31_corrected, ("v", "y1", "y2"), errata=ERRATA["r31"]),
    "r31_printed": CheckedFormula("r31_printed", 3, _r31_printed, ("v", "y1", "y2")),
    "c21": CheckedFormula("c21", 2, c21_closed, ("y1", "y2")),
    "c31": CheckedFormula("c31", 3, c31_closed, ("y1", "y2")),
    "yang2": CheckedFormula("yang2", 2, yang2_aybe_y, ("v", "y1", "y2")),
    "yang2_cybe": CheckedFormula("yang2_cybe", 2, yang2_cybe_y, ("y1", "y2")),
}

# The (n, d) each oracle reproduces, for comparison against compute_r.
ORACLE_PAIRS = {"r21": (2, 1), "r31": (3, 1), "r31_printed": (3, 1), "c21": (2, 1), "c31": (3, 1)}


def get_oracle(name):
    if name not in ORACLES:
        raise ValueError(f"Unknown oracle {name!r}; choose from {sorted(ORACLES)}")
    formula = ORACLES[name]
    for erratum in formula.errata:
        logging.info(f"{name}: applying erratum at {erratum['term']}: {erratum['corrected']}")
    return formula
