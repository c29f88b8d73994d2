"""C(X) for a finite phase space and the convolution *-algebra C_c(Z^2, C(X)).

A :class:`CrossedElement` is a finitely supported map g -> a_g, written
sum_g a_g u_g.  With the action alpha_g(a) = a o g^{-1},

    (f * h)(t) = sum_{s1 + s2 = t} f(s1) alpha_{s1}(h(s2))
    f^*(t)     = alpha_t(conj(f(-t)))

The norm completion is never formed; elements are studied through the
finite-dimensional representations in :mod:`xpq.gns`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .cyclotomic import from_exponents, gaussian
from .dynsys import IDENTITY, FiniteSystem, GroupElement, as_group_element


class IndexMismatch(ValueError):
    """Operands live on different finite systems."""


def _check(sys: FiniteSystem, *elements):
    for e in elements:
        if e.sys != sys:
            raise IndexMismatch(f"element on {e.sys} used with {sys}")


@dataclass(frozen=True, eq=False)
class FunctionElement:
    """A function on the residues 0..M-1 (an element of C(X))."""

    sys: FiniteSystem
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.sys.M,):
            raise IndexMismatch(f"expected {self.sys.M} values, got shape {self.values.shape}")

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def _wrap(self, values) -> FunctionElement:
        return FunctionElement(self.sys, values)

    def _other(self, other):
        if isinstance(other, FunctionElement):
            _check(self.sys, other)
            return other.values
        return other

    def __add__(self, other):
        return self._wrap(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.values - self._other(other))

    def __neg__(self):
        return self._wrap(-self.values)

    def __mul__(self, other):
        return self._wrap(self.values * self._other(other))

    __rmul__ = __mul__

    def conj(self) -> FunctionElement:
        return self._wrap(np.conj(self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        if not isinstance(other, FunctionElement) or other.sys != self.sys:
            return NotImplemented
        return all(a == b for a, b in zip(self.values, other.values))

    __hash__ = None

    def close(self, other: FunctionElement, tol: float = 1e-12) -> bool:
        a = np.array([complex(v) for v in self.values])
        b = np.array([complex(v) for v in other.values])
        return bool(np.all(np.abs(a - b) <= tol))

    def __repr__(self) -> str:
        return f"FunctionElement(M={self.sys.M}, values={list(self.values)})"


def function(sys: FiniteSystem, values, exact: bool | None = None) -> FunctionElement:
    values = list(values)
    if exact is None:
        exact = not any(isinstance(v, (float, complex, np.floating, np.complexfloating))
                        for v in values)
    if exact:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [Fraction(v) if isinstance(v, int) else v for v in values]
    else:
        arr = np.array([complex(v) for v in values], dtype=complex)
    return FunctionElement(sys, arr)


def constant(sys: FiniteSystem, c=1, exact: bool = True) -> FunctionElement:
    return function(sys, [c] * sys.M, exact=exact)


def indicator(sys: FiniteSystem, k: int, exact: bool = True) -> FunctionElement:
    return function(sys, [1 if j == k else 0 for j in range(sys.M)], exact=exact)


def coordinate(sys: FiniteSystem, power: int = 1, exact: bool = True) -> FunctionElement:
    """The function k -> omega^(power k), omega = exp(2 pi i / M): the character z^power."""
    M = sys.M
    if exact:
        vals = []
        for k in range(M):
            coeffs = [0] * M
            coeffs[(power * k) % M] = 1
            vals.append(from_exponents(M, coeffs))
        return function(sys, vals, exact=True)
    return function(sys, np.exp(2j * np.pi * power * np.arange(M) / M), exact=False)


def alpha(sys: FiniteSystem, g, a: FunctionElement) -> FunctionElement:
    """(alpha_g a)(x) = a(g^{-1} . x)."""
    _check(sys, a)
    return FunctionElement(sys, a.values[sys.permutation(-as_group_element(g))])


@dataclass(frozen=True, eq=False)
class CrossedElement:
    """Finite sum sum_g a_g u_g; zero coefficients are never stored."""

    sys: FiniteSystem
    terms: Mapping[GroupElement, FunctionElement] = field(default_factory=dict)
    exact: bool = True

    def __post_init__(self):
        pruned = {}
        for g, a in self.terms.items():
            _check(self.sys, a)
            if not a.is_zero():
                pruned[as_group_element(g)] = a
        object.__setattr__(self, "terms", dict(sorted(pruned.items())))

    @property
    def support(self) -> set[GroupElement]:
        return set(self.terms)

    def coefficient(self, g) -> FunctionElement:
        g = as_group_element(g)
        if g in self.terms:
            return self.terms[g]
        return constant(self.sys, 0, exact=self.exact)

    def __add__(self, other: CrossedElement) -> CrossedElement:
        _check(self.sys, other)
        terms = dict(self.terms)
        for g, a in other.terms.items():
            terms[g] = terms[g] + a if g in terms else a
        return CrossedElement(self.sys, terms, self.exact and other.exact)

    def __neg__(self) -> CrossedElement:
        return CrossedElement(self.sys, {g: -a for g, a in self.terms.items()}, self.exact)

    def __sub__(self, other: CrossedElement) -> CrossedElement:
        return self + (-other)

    def scale(self, c) -> CrossedElement:
        return CrossedElement(self.sys, {g: a * c for g, a in self.terms.items()}, self.exact)

    def __matmul__(self, other: CrossedElement) -> CrossedElement:
        return convolve(self.sys, self, other)

    def __eq__(self, other):
        if not isinstance(other, CrossedElement) or other.sys != self.sys:
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[g] == other.terms[g] for g in self.terms)

    __hash__ = None

    def close(self, other: CrossedElement, tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(g).close(other.coefficient(g), tol) for g in keys)

    def __repr__(self) -> str:
        body = ", ".join(f"({g.m},{g.n}): {list(a.values)}" for g, a in self.terms.items())
        return f"CrossedElement(M={self.sys.M}, {{{body}}})"


def monomial(a: FunctionElement, g=IDENTITY) -> CrossedElement:
    """a u_g."""
    return CrossedElement(a.sys, {as_group_element(g): a}, a.exact)


def unit(sys: FiniteSystem, exact: bool = True) -> CrossedElement:
    return monomial(constant(sys, 1, exact=exact))


def u(sys: FiniteSystem, g, exact: bool = True) -> CrossedElement:
    """The canonical unitary u_g."""
    return monomial(constant(sys, 1, exact=exact), g)


def convolve(sys: FiniteSystem, f: CrossedElement, g: CrossedElement) -> CrossedElement:
    _check(sys, f, g)
    out: dict[GroupElement, FunctionElement] = {}
    for s1, a in f.terms.items():
        for s2, b in g.terms.items():
            term = a * alpha(sys, s1, b)
            t = s1 + s2
            out[t] = out[t] + term if t in out else term
    return CrossedElement(sys, out, f.exact and g.exact)


def adjoint(sys: FiniteSystem, f: CrossedElement) -> CrossedElement:
    _check(sys, f)
    return CrossedElement(sys, {-s: alpha(sys, -s, a.conj()) for s, a in f.terms.items()}, f.exact)


# --------------------------------------------------------------------------
# random elements for property checks


def random_scalar(rng: np.random.Generator, exact: bool = True, bound: int = 3):
    if exact:
        re, im = rng.integers(-bound, bound + 1, size=2)
        den = int(rng.integers(1, 4))
        return gaussian(Fraction(int(re), den), Fraction(int(im), den))
    return complex(rng.standard_normal(), rng.standard_normal())


def random_function(sys: FiniteSystem, rng: np.random.Generator, exact: bool = True) -> FunctionElement:
    return function(sys, [random_scalar(rng, exact) for _ in range(sys.M)], exact=exact)


def random_group_element(rng: np.random.Generator, radius: int = 2) -> GroupElement:
    m, n = rng.integers(-radius, radius + 1, size=2)
    return GroupElement(int(m), int(n))


def random_crossed(sys: FiniteSystem, rng: np.random.Generator, terms: int = 3,
                   exact: bool = True, radius: int = 2) -> CrossedElement:
    count = int(rng.integers(1, terms + 1))
    parts = {}
    for _ in range(count):
        parts[random_group_element(rng, radius)] = random_function(sys, rng, exact)
    return CrossedElement(sys, parts, exact)
