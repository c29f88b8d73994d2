"""Invariant probability measures on a finite system, their Fourier moments,
and the extension of those moments to exponents in Z[1/pq] (the pq-solenoid).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

import numpy as np

from .cyclotomic import from_exponents, is_real, sign, to_complex
from .dynsys import FiniteSystem, Orbit, S, T, orbits

FLOAT_INVARIANCE_TOL = 1e-12


class NotAProbability(ValueError):
    """Weights are negative or do not sum to one."""


class NotInvariant(ValueError):
    """The measure is not invariant under x p and x q."""


class WellDefinednessError(RuntimeError):
    """Two representatives of one exponent gave different moments."""


def _validate(sys: FiniteSystem, weights, tol: float = FLOAT_INVARIANCE_TOL):
    if len(weights) != sys.M:
        raise NotAProbability(f"expected {sys.M} weights, got {len(weights)}")
    exact = all(isinstance(w, (int, Fraction)) for w in weights)
    if exact:
        w = tuple(Fraction(x) for x in weights)
        if any(x < 0 for x in w):
            raise NotAProbability("negative weight")
        if sum(w) != 1:
            raise NotAProbability(f"weights sum to {sum(w)}")
        return w, True
    w = np.asarray(weights, dtype=float)
    if np.any(w < -tol):
        raise NotAProbability("negative weight")
    if abs(float(w.sum()) - 1.0) > tol * max(1, sys.M):
        raise NotAProbability(f"weights sum to {w.sum()!r}")
    return w, False


def pushforward(sys: FiniteSystem, weights, g) -> list:
    """Image measure under k -> g . k."""
    perm = sys.permutation(g)
    out = [0 * weights[0] for _ in range(sys.M)]
    for x in range(sys.M):
        out[int(perm[x])] = out[int(perm[x])] + weights[x]
    return out


def is_invariant(sys: FiniteSystem, weights, tol: float = FLOAT_INVARIANCE_TOL) -> bool:
    w, exact = _validate(sys, weights, tol)
    for g in (S, T):
        pushed = pushforward(sys, w, g)
        if exact:
            if any(a != b for a, b in zip(pushed, w)):
                return False
        elif np.max(np.abs(np.asarray(pushed) - w)) > tol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class InvariantMeasure:
    """Probability weights on the residues of a finite system.

    Invariance is checked on construction unless ``require_invariant=False``
    was passed to :func:`measure` (the GNS construction accepts any state).
    """

    sys: FiniteSystem
    weights: tuple
    exact: bool = True

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, w in enumerate(self.weights) if w > 0)

    @property
    def invariant(self) -> bool:
        return is_invariant(self.sys, self.weights)

    @property
    def orbit_decomposition(self) -> list[tuple[Orbit, object]]:
        out = []
        for orb in orbits(self.sys):
            mass = sum((self.weights[k] for k in orb.members), 0 * self.weights[0])
            if mass > 0:
                out.append((orb, mass))
        return out

    @property
    def is_ergodic(self) -> bool:
        """Single charged orbit with uniform weights on it."""
        charged = self.orbit_decomposition
        if len(charged) != 1 or not self.invariant:
            return False
        orb, _ = charged[0]
        return all(self.weights[k] == self.weights[orb.representative] for k in orb.members)

    def __call__(self, a) -> object:
        """Integral of a function element (phi(a))."""
        vals = a.values
        return sum((w * v for w, v in zip(self.weights, vals) if w != 0), 0 * self.weights[0])

    def __eq__(self, other):
        if not isinstance(other, InvariantMeasure) or other.sys != self.sys:
            return NotImplemented
        return all(a == b for a, b in zip(self.weights, other.weights))

    __hash__ = None

    def __repr__(self) -> str:
        charged = [(o.members, str(m)) for o, m in self.orbit_decomposition]
        return f"InvariantMeasure(M={self.sys.M}, orbits={charged})"


def measure(sys: FiniteSystem, weights, require_invariant: bool = True) -> InvariantMeasure:
    w, exact = _validate(sys, weights)
    mu = InvariantMeasure(sys, tuple(w) if exact else tuple(float(x) for x in w), exact)
    if require_invariant and not is_invariant(sys, mu.weights):
        raise NotInvariant("weights are not invariant under x p, x q")
    return mu


def uniform_on(sys: FiniteSystem, members, exact: bool = True,
               require_invariant: bool = True) -> InvariantMeasure:
    members = set(members)
    mass = Fraction(1, len(members)) if exact else 1.0 / len(members)
    zero = Fraction(0) if exact else 0.0
    return measure(sys, [mass if k in members else zero for k in range(sys.M)], require_invariant)


def point_mass(sys: FiniteSystem, k: int, exact: bool = True) -> InvariantMeasure:
    return uniform_on(sys, [k], exact, require_invariant=False)


def mixture(measures, coefficients) -> InvariantMeasure:
    sys = measures[0].sys
    total = [sum((c * m.weights[k] for m, c in zip(measures, coefficients)),
                 0 * measures[0].weights[0]) for k in range(sys.M)]
    return measure(sys, total, require_invariant=False)


def ergodic_measures(sys: FiniteSystem, exact: bool = True) -> list[InvariantMeasure]:
    """Uniform measure on each orbit, in order of orbit representative."""
    return [uniform_on(sys, orb.members, exact) for orb in orbits(sys)]


# --------------------------------------------------------------------------
# moments


def moment(mu: InvariantMeasure, k: int):
    """mu(z^k) = sum_j w_j omega^(k j), omega = exp(2 pi i / M)."""
    M = mu.sys.M
    if mu.exact:
        coeffs = [Fraction(0)] * M
        for j, w in enumerate(mu.weights):
            if w:
                coeffs[(k * j) % M] += w
        return from_exponents(M, coeffs)
    j = np.arange(M)
    return complex(np.sum(np.asarray(mu.weights) * np.exp(2j * np.pi * ((k * j) % M) / M)))


def exponent_value(p: int, q: int, k: int, i: int, j: int) -> Fraction:
    """The element k p^i q^j of Z[1/pq] as an exact rational."""
    return Fraction(k) * Fraction(p) ** i * Fraction(q) ** j


def exponent_normal_form(p: int, q: int, k: int, i: int, j: int) -> tuple[int, int, int]:
    """Rewrite k p^i q^j so that positive powers are absorbed into k and
    negative powers are cancelled while p (then q) divides k.

    The result satisfies (p does not divide k or i = 0) and (q does not
    divide k or j = 0).  It is unique when gcd(p, q) = 1.
    """
    if i > 0:
        k, i = k * p ** i, 0
    if j > 0:
        k, j = k * q ** j, 0
    while i < 0 and k % p == 0:
        k, i = k // p, i + 1
    while j < 0 and k % q == 0:
        k, j = k // q, j + 1
    if k == 0:
        return 0, 0, 0
    return k, i, j


def integer_representative(p: int, q: int, x) -> tuple[int, int]:
    """(k, e) with x = k (pq)^(-e), e >= 0 minimal; raises if x is not in Z[1/pq]."""
    x = Fraction(x)
    rest = x.denominator
    while (g := gcd(rest, p * q)) > 1:
        rest //= g
    if rest != 1:
        raise ValueError(f"{x} is not in Z[1/{p * q}]")
    e = 0
    while (x * (p * q) ** e).denominator != 1:
        e += 1
    return int(x * (p * q) ** e), e


def solenoid_moment(mu: InvariantMeasure, x):
    """nu(z^x) for x in Z[1/pq]: nu(z^(k (pq)^-e)) = mu(z^k)."""
    k, _ = integer_representative(mu.sys.p, mu.sys.q, x)
    return moment(mu, k)


def solenoid_extend(mu: InvariantMeasure, k: int, i: int, j: int):
    """nu(z^(k p^i q^j)) = mu(z^k), cross-checked against other representatives.

    Besides the defining value, the normal form of the exponent, its
    representative over a power of pq, and its image p^i q^j k mod M under
    modular inverses must all give the same moment.
    """
    if not mu.invariant:
        raise NotInvariant("solenoid extension needs an invariant measure")
    value = moment(mu, k)
    sys = mu.sys
    routes = [
        moment(mu, exponent_normal_form(sys.p, sys.q, k, i, j)[0]),
        solenoid_moment(mu, exponent_value(sys.p, sys.q, k, i, j)),
        moment(mu, (k * sys.multiplier((i, j))) % sys.M),
    ]
    for other in routes:
        if not _same(value, other, mu.exact):
            raise WellDefinednessError(f"moment of {k}*{sys.p}^{i}*{sys.q}^{j} is ambiguous")
    return value


def _same(a, b, exact: bool, tol: float = 1e-12) -> bool:
    return a == b if exact else abs(complex(a) - complex(b)) <= tol


@dataclass
class MomentSequence:
    """Moments nu(z^x) recorded at exponents x = k p^i q^j."""

    base: InvariantMeasure
    entries: dict = field(default_factory=dict)

    def __getitem__(self, exponent):
        if exponent not in self.entries:
            self.entries[exponent] = solenoid_extend(self.base, *exponent)
        return self.entries[exponent]

    def well_defined(self) -> bool:
        """Equal elements of Z[1/pq] carry equal values."""
        p, q = self.base.sys.p, self.base.sys.q
        by_value: dict = {}
        for exp, v in self.entries.items():
            by_value.setdefault(exponent_value(p, q, *exp), []).append(v)
        return all(all(_same(vals[0], v, self.base.exact) for v in vals)
                   for vals in by_value.values())


def moment_sequence(mu: InvariantMeasure, exponents) -> MomentSequence:
    seq = MomentSequence(mu)
    for e in exponents:
        seq[tuple(e)]
    return seq


def lebesgue_moment(x) -> Fraction:
    """Moments of Haar measure on the solenoid (and circle): 1 at x = 0, else 0."""
    return Fraction(1) if Fraction(x) == 0 else Fraction(0)


# --------------------------------------------------------------------------
# positive definiteness


@dataclass
class PsdCertificate:
    psd: bool
    exact: bool
    order: int
    min_eigenvalue: float
    pivots: list | None = None
    reason: str = ""


def toeplitz(values, n: int) -> list[list]:
    """[c(r - c)] for r, c < n from c_0..c_{n-1}, with c(-k) = conj(c(k))."""
    def c(k):
        return values[k] if k >= 0 else values[-k].conjugate()
    return [[c(r - s) for s in range(n)] for r in range(n)]


def _exact_ldl(matrix) -> tuple[bool, list, str]:
    """Hermitian LDL* without pivoting; zero pivots need a zero row."""
    work = [list(row) for row in matrix]
    pivots = []
    while work:
        d = work[0][0]
        if not is_real(d):
            return False, pivots, "non-real diagonal entry"
        s = sign(d)
        if s < 0:
            pivots.append(d)
            return False, pivots, "negative pivot"
        if s == 0:
            if any(x != 0 for x in work[0][1:]):
                return False, pivots, "zero pivot with nonzero row"
            pivots.append(d)
            work = [row[1:] for row in work[1:]]
            continue
        pivots.append(d)
        inv = 1 / d
        head = work[0]
        work = [[row[j] - row[0] * inv * head[j] for j in range(1, len(row))]
                for row in work[1:]]
    return True, pivots, ""


def matrix_psd_certificate(matrix, exact: bool, tol_per_dim: float = 1e-10) -> PsdCertificate:
    n = len(matrix)
    arr = np.array([[complex(x) for x in row] for row in matrix], dtype=complex)
    min_eig = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2).min()) if n else 0.0
    if exact:
        ok, pivots, reason = _exact_ldl(matrix)
        return PsdCertificate(ok, True, n, min_eig, pivots, reason)
    ok = min_eig >= -tol_per_dim * n
    return PsdCertificate(ok, False, n, min_eig, None, "" if ok else "negative eigenvalue")


def sequence_psd_certificate(values, n: int, exact: bool | None = None) -> PsdCertificate:
    """PSD test of the n x n Toeplitz matrix of a candidate moment sequence c_0..c_{n-1}."""
    values = list(values)
    if exact is None:
        exact = not any(isinstance(v, (float, complex)) for v in values)
    if exact:
        values = [Fraction(v) if isinstance(v, int) else v for v in values]
    else:
        values = [complex(v) for v in values]
    return matrix_psd_certificate(toeplitz(values, n), exact)


def psd_certificate(mu: InvariantMeasure, n: int) -> PsdCertificate:
    """Certify that [mu(z^(r-c))]_{r,c<n} is positive semidefinite."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return sequence_psd_certificate([moment(mu, k) for k in range(n)], n, exact=mu.exact)


def positive_combination_check(mu: InvariantMeasure, coeffs: Mapping):
    """nu((sum lambda_s z^s)^* (sum lambda_t z^t)) for exponents s = (k, i, j).

    Denominators are cleared by p^K q^L so every exponent becomes an integer,
    and the form is evaluated on the circle moments:
    sum_{s,t} conj(lambda_s) lambda_t mu(z^(p^K q^L (t - s))).
    """
    p, q = mu.sys.p, mu.sys.q
    keys = list(coeffs)
    K = max([0] + [-e[1] for e in keys])
    L = max([0] + [-e[2] for e in keys])
    scaled = [int(exponent_value(p, q, *e) * p ** K * q ** L) for e in keys]
    lam = [coeffs[e] for e in keys]
    total = 0 * mu.weights[0]
    for a, s in zip(lam, scaled):
        for b, t in zip(lam, scaled):
            total = total + a.conjugate() * b * moment(mu, t - s)
    return total


def is_nonnegative(value, tol: float = 1e-12) -> bool:
    if isinstance(value, (float, complex)):
        return abs(complex(value).imag) <= tol and complex(value).real >= -tol
    return is_real(value) and sign(value) >= 0


def as_complex(value) -> complex:
    return to_complex(value)
