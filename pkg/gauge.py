"""Gauge transformations of AYBE solutions.

Polynomial gauges are applied numerically. Exponential gauges exp(E) are kept
formal: a twisted tensor carries its exponent as a sympy polynomial next to the
untwisted body, so every check stays exact.
"""
import logging
from collections import namedtuple
from fractions import Fraction

import sympy

from errors import ExponentMismatch, Singular, SingularGauge
from exact_kernel import SquareMatrix, invert
from tensoralg import Tensor2, embed, scalar_multiple_of
from ybe_checks import (
    SolutionHandle, aybe_terms, aybe4_terms, dual_aybe_terms, equation_residual,
)

V, Y1, Y2 = sympy.symbols("v y1 y2")
V1, V2 = sympy.symbols("v1 v2")
THREE_VARIABLE_SYMBOLS = (V, Y1, Y2)
FOUR_VARIABLE_SYMBOLS = (V1, V2, Y1, Y2)

_EQUATIONS = {
    "aybe": (aybe_terms, sympy.symbols("u v y1 y2 y3")),
    "dual": (dual_aybe_terms, sympy.symbols("u v y1 y2 y3")),
    "aybe4": (aybe4_terms, sympy.symbols("v1 v2 v3 y1 y2 y3")),
}


# ============== POLYNOMIAL GAUGES ==============

class GaugeField:
    """phi(v, y) = sum v^a y^b M_ab with SquareMatrix coefficients."""

    def __init__(self, n, terms):
        self.n = n
        self.terms = {(int(a), int(b)): m for (a, b), m in terms.items()}
        for m in self.terms.values():
            if m.n != n:
                raise ValueError(f"Gauge coefficient of size {m.n} in a size-{n} field")

    @classmethod
    def constant(cls, m):
        return cls(m.n, {(0, 0): m})

    @classmethod
    def scalar(cls, n, coefficients):
        """f(v, y) * 1 for f given as {(a, b): c} meaning sum c v^a y^b."""
        ident = SquareMatrix.identity(n)
        return cls(n, {key: ident * Fraction(c) for key, c in coefficients.items()})

    def __call__(self, v, y):
        v, y = Fraction(v), Fraction(y)
        out = SquareMatrix.zero(self.n)
        for (a, b), m in self.terms.items():
            out = out + m * (v ** a * y ** b)
        return out

    def inverse_at(self, v, y):
        try:
            return invert(self(v, y))
        except Singular as e:
            raise SingularGauge(f"gauge is singular at v={v}, y={y}") from e


def gauge_apply(r, phi):
    """(phi(v1;y1) (x) phi(v2;y2)) r (phi^-1(v2;y1) (x) phi^-1(v1;y2))."""
    r4 = r.as_four_variable()

    def evaluator(v1, v2, y1, y2):
        left = Tensor2.decomposable(phi(v1, y1), phi(v2, y2))
        right = Tensor2.decomposable(phi.inverse_at(v2, y1), phi.inverse_at(v1, y2))
        return left @ r4(v1, v2, y1, y2) @ right

    return SolutionHandle(evaluator, r.n, "four", name=f"gauged {r.name}", pair=r.pair)


# ============== FORMAL EXPONENTIAL TWISTS ==============

class ExpTwistedTensor:
    """exp(exponent) * body with a sympy exponent and a Tensor2 or Tensor3 body."""

    def __init__(self, exponent, body):
        self.exponent = sympy.expand(sympy.sympify(exponent))
        self.body = body

    def __matmul__(self, other):
        return ExpTwistedTensor(self.exponent + other.exponent, self.body @ other.body)

    def embed(self, slot_pair):
        return ExpTwistedTensor(self.exponent, embed(self.body, slot_pair))

    def __eq__(self, other):
        if not isinstance(other, ExpTwistedTensor):
            return NotImplemented
        return sympy.expand(self.exponent - other.exponent) == 0 and self.body == other.body

    def __hash__(self):
        return hash((str(self.exponent), self.body))

    def __repr__(self):
        return f"ExpTwistedTensor(exp({self.exponent}), {self.body!r})"


class ExpTwistedHandle:
    """exp(E(args)) * r(args) for a solution handle r and a formal exponent E."""

    def __init__(self, handle, exponent, symbols=None):
        self.handle = handle
        self.exponent = sympy.sympify(exponent)
        if symbols is None:
            symbols = FOUR_VARIABLE_SYMBOLS if handle.flavor == "four" else THREE_VARIABLE_SYMBOLS
        self.symbols = tuple(symbols)
        self.n = handle.n
        self.name = f"exp-twisted {handle.name}"

    def exponent_at(self, *args):
        args = [sympy.Rational(a.numerator, a.denominator) if isinstance(a, Fraction) else sympy.sympify(a)
                for a in args]
        return sympy.expand(self.exponent.xreplace(dict(zip(self.symbols, args))))

    def __call__(self, *args):
        return ExpTwistedTensor(self.exponent_at(*args), self.handle(*args))


def exp_twist(handle, exponent, symbols=None):
    return ExpTwistedHandle(handle, exponent, symbols)


def difference_exponent(g_coefficients, v=V, y1=Y1, y2=Y2):
    """v (g(y2) - g(y1)) for g = sum c_k y^k, coefficients lowest degree first."""
    def g(y):
        return sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * y ** k
                   for k, c in enumerate(g_coefficients))
    return sympy.expand(v * (g(y2) - g(y1)))


def bilinear_exponent(c):
    """c (v2 - v1)(y2 - y1) in four-variable symbols."""
    c = Fraction(c)
    return sympy.expand(sympy.Rational(c.numerator, c.denominator) * (V2 - V1) * (Y2 - Y1))


ExpCheckResult = namedtuple("ExpCheckResult", ["exponent", "residual"])


def exp_aybe_check(handle, point, equation=None):
    """Check an exp-twisted handle against the AYBE (or its four-variable form) at a point.

    The exponent sums of the three products must agree as polynomials; the
    bodies are then checked with the untwisted equation.
    """
    if equation is None:
        equation = "aybe4" if handle.handle.flavor == "four" else "aybe"
    table, symbols = _EQUATIONS[equation]
    forms = []
    for _, factors in table(symbols):
        forms.append(sympy.expand(sum((handle.exponent_at(*args) for _, args in factors), sympy.Integer(0))))
    if any(sympy.expand(f - forms[0]) != 0 for f in forms[1:]):
        raise ExponentMismatch(f"exponent forms differ: {[str(f) for f in forms]}")
    base = handle.handle.as_four_variable() if equation == "aybe4" else handle.handle
    residual = equation_residual(base, base.n, table(tuple(Fraction(x) for x in point)))
    logging.debug(f"{handle.name}: common exponent {forms[0]}")
    return ExpCheckResult(forms[0], residual)


# ============== LAURENT CONSEQUENCES ==============

def twist_laurent(laurent, delta):
    """Laurent data of exp(v * delta) * r where delta = g(y2) - g(y1) at the expansion point."""
    return laurent.twisted(delta)


def scalar_gauge_difference(r0, s0):
    """psi with s0 - r0 = psi * 1 (x) 1, or None."""
    return scalar_multiple_of(s0 - r0, Tensor2.identity(r0.n))
