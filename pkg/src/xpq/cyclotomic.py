"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Exact scalars throughout the package are either ``fractions.Fraction`` (for
rational values) or :class:`Cyclotomic`.  Every arithmetic result is
normalised, so a ``Cyclotomic`` instance never holds a rational number.

A ``Cyclotomic`` of order n stores a polynomial in zeta_n of degree below
phi(n), reduced modulo the n-th cyclotomic polynomial; that representation is
unique, so equality is coefficient equality after lifting both sides to a
common order.  Polynomial arithmetic is delegated to FLINT.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint
import numpy as np


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(n))


def _to_fmpq(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _spread(poly: flint.fmpq_poly, step: int) -> flint.fmpq_poly:
    """poly(x) -> poly(x^step)."""
    if step == 1:
        return poly
    coeffs = poly.coeffs()
    out = [0] * (step * (len(coeffs) - 1) + 1) if coeffs else [0]
    for k, c in enumerate(coeffs):
        out[k * step] = c
    return flint.fmpq_poly(out)


class Cyclotomic:
    """An irrational element of Q(zeta_order)."""

    __slots__ = ("order", "poly")

    def __init__(self, order: int, poly: flint.fmpq_poly):
        self.order = order
        self.poly = poly

    # construction -----------------------------------------------------
    @staticmethod
    def reduce(order: int, poly: flint.fmpq_poly):
        """Reduce poly(zeta_order) to canonical form; rational results become Fraction."""
        poly = poly % cyclotomic_polynomial(order)
        if poly.degree() <= 0:
            return _to_fraction(poly[0]) if poly.degree() == 0 else Fraction(0)
        return Cyclotomic(order, poly)

    def lift(self, order: int) -> flint.fmpq_poly:
        """Canonical polynomial of this element as a member of Q(zeta_order)."""
        if order % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        if order == self.order:
            return self.poly
        return _spread(self.poly, order // self.order) % cyclotomic_polynomial(order)

    @property
    def coefficients(self) -> list[Fraction]:
        """Coefficients c_0, ..., c_{phi(n)-1} with value sum c_k zeta_n^k."""
        return [_to_fraction(c) for c in self.poly.coeffs()]

    # arithmetic -------------------------------------------------------
    def _binary(self, other, op):
        if isinstance(other, Cyclotomic):
            order = _lcm(self.order, other.order)
            return Cyclotomic.reduce(order, op(self.lift(order), other.lift(order)))
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.reduce(self.order, op(self.poly, flint.fmpq_poly([_to_fmpq(other)])))
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return Cyclotomic(self.order, self.poly * _to_fmpq(other))
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return Cyclotomic(self.order, -self.poly)

    def __pos__(self):
        return self

    def inverse(self) -> Cyclotomic:
        g, s, _ = self.poly.xgcd(cyclotomic_polynomial(self.order))
        # g is a nonzero constant because the cyclotomic polynomial is irreducible
        return Cyclotomic.reduce(self.order, s / g[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, self.poly / _to_fmpq(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = Fraction(1)
        base = self
        while e:
            if e & 1:
                result = base * result
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        n = self.order
        coeffs = self.poly.coeffs()
        out = [0] * n
        for k, c in enumerate(coeffs):
            out[(-k) % n] += c
        return Cyclotomic.reduce(n, flint.fmpq_poly(out))

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            order = _lcm(self.order, other.order)
            return self.lift(order) == other.lift(order)
        if isinstance(other, (int, Fraction)):
            return False  # normalised instances are never rational
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __bool__(self) -> bool:
        return True

    # numerics ---------------------------------------------------------
    def __complex__(self) -> complex:
        n = self.order
        return complex(sum(float(_to_fraction(c)) * cmath.exp(2j * cmath.pi * k / n)
                           for k, c in enumerate(self.poly.coeffs())))

    def _real_ball(self, prec: int):
        old = flint.ctx.prec
        flint.ctx.prec = prec
        try:
            total = flint.arb(0)
            for k, c in enumerate(self.poly.coeffs()):
                total += flint.arb(c) * flint.arb(flint.fmpq(2 * k, self.order)).cos_pi()
            return total
        finally:
            flint.ctx.prec = old

    def __repr__(self) -> str:
        terms = [f"({_to_fraction(c)})*z{self.order}^{k}"
                 for k, c in enumerate(self.poly.coeffs()) if c != 0]
        return " + ".join(terms)


Scalar = "Fraction | Cyclotomic"


def root_of_unity(n: int, k: int = 1):
    """zeta_n^k = exp(2 pi i k / n) as an exact scalar."""
    k %= n
    if k == 0:
        return Fraction(1)
    out = [0] * (k + 1)
    out[k] = 1
    return Cyclotomic.reduce(n, flint.fmpq_poly(out))


def from_exponents(n: int, coeffs) -> Fraction | Cyclotomic:
    """sum_k coeffs[k] zeta_n^k for a length-n sequence (exponents read mod n)."""
    if n == 1:
        return sum((Fraction(c) for c in coeffs), Fraction(0))
    return Cyclotomic.reduce(n, flint.fmpq_poly([_to_fmpq(c) for c in coeffs]))


def gaussian(re, im=0):
    """re + i im with rational parts."""
    return from_exponents(4, [re, im])


def conj(x):
    return x.conjugate()


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def is_real(x) -> bool:
    return is_rational(x) or x == x.conjugate()


def sign(x) -> int:
    """Sign of an exact real scalar, certified with interval arithmetic."""
    if is_rational(x):
        return (x > 0) - (x < 0)
    if not is_real(x):
        raise ValueError("sign of a non-real number")
    prec = 64
    while True:
        ball = x._real_ball(prec)
        if ball > 0:
            return 1
        if ball < 0:
            return -1
        prec *= 2


def to_complex(x) -> complex:
    return complex(x)


def to_complex_array(values) -> np.ndarray:
    return np.array([complex(v) for v in np.ravel(values)], dtype=complex).reshape(np.shape(values))
