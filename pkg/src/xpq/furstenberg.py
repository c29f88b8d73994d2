"""Finitely supported ergodic x p, x q invariant measures and their
representations of C*(s, t, z) with st = ts, sz = z^p s, tz = z^q t.

The measures are uniform measures on orbits of x p, x q on the M-th roots of
unity (M coprime to pq).  On L^2 of such a measure z acts as M_z, s as V_p
and t as V_q, where (V_p f)(k) = f(p k mod M).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .algebra import coordinate
from .dynsys import FiniteSystem, GroupElement, Orbit, make_system, orbits
from .gns import CovariantRep, covariant_rep
from .linalg import ExactMatrix, as_array, character_family_rank, float_rank, matrices_equal
from .repanalysis import fixed_space, is_irreducible
from .states import InvariantMeasure, uniform_on


# --------------------------------------------------------------------------
# N = M p^i q^j


@dataclass(frozen=True)
class Reduction:
    """K N = M p^i q^j with gcd(M, pq) = 1 and K | p^i q^j minimal.

    K = 1 whenever every prime of N dividing pq can be absorbed by p and q
    (always so for coprime prime powers).  ``unique`` holds when gcd(p, q) = 1
    and K = 1; the factorization is then the only one.
    """

    M: int
    i: int
    j: int
    K: int = 1
    unique: bool = True

    def __iter__(self):
        return iter((self.M, self.i, self.j))


def _strip(n: int, f: int) -> tuple[int, int]:
    e = 0
    while n % f == 0:
        n //= f
        e += 1
    return n, e


def coprime_reduction(p: int, q: int, N: int) -> Reduction:
    if N < 1:
        raise ValueError("N must be positive")
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    r, i = _strip(N, p)
    r, j = _strip(r, q)
    # split the remainder into the part coprime to pq and the rest
    M, rest = r, 1
    while (g := gcd(M, p * q)) > 1:
        M //= g
        rest *= g
    K = 1
    if rest > 1:
        a_best = None
        bound = rest.bit_length() + 1
        for total in range(1, 2 * bound + 1):
            for a in range(total + 1):
                if (p ** a * q ** (total - a)) % rest == 0:
                    a_best = (a, total - a)
                    break
            if a_best:
                break
        a, b = a_best
        K = p ** a * q ** b // rest
        i, j = i + a, j + b
    return Reduction(M, i, j, K, gcd(p, q) == 1 and K == 1)


# --------------------------------------------------------------------------
# catalog


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    p: int
    q: int
    M: int
    orbit: Orbit
    exact: bool = True

    @cached_property
    def sys(self) -> FiniteSystem:
        return make_system(self.p, self.q, self.M)

    @cached_property
    def measure(self) -> InvariantMeasure:
        return uniform_on(self.sys, self.orbit.members, exact=self.exact)

    @cached_property
    def rep(self) -> CovariantRep:
        return covariant_rep(self.sys, self.measure)

    @property
    def v_p(self):
        """(V_p f)(k) = f(p k): the Koopman unitary of -(1, 0)."""
        return self.rep.u(GroupElement(-1, 0))

    @property
    def v_q(self):
        return self.rep.u(GroupElement(0, -1))

    @property
    def m_z(self):
        return self.rep.mz

    @property
    def key(self) -> tuple[int, int]:
        return self.M, self.orbit.representative


def is_primitive(orbit: Orbit, M: int) -> bool:
    if M == 1:
        return True
    return gcd(orbit.representative, M) == 1


def _entries_for(p: int, q: int, M: int, exact: bool) -> list[CatalogEntry]:
    sys = make_system(p, q, M)
    return [CatalogEntry(p, q, M, o, exact) for o in orbits(sys) if is_primitive(o, M)]


def thread_count(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("XPQ_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def moduli(p: int, q: int, M_max: int) -> list[int]:
    return [M for M in range(1, M_max + 1) if gcd(M, p * q) == 1]


def catalog(p: int, q: int, M_max: int, exact: bool = True,
            threads: int | None = None) -> list[CatalogEntry]:
    """Primitive orbits mod every M <= M_max coprime to pq, sorted by (M, rep)."""
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    ms = moduli(p, q, M_max)
    n = thread_count(threads)
    if n == 1:
        chunks = [_entries_for(p, q, M, exact) for M in ms]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            chunks = list(pool.map(lambda M: _entries_for(p, q, M, exact), ms))
    return [e for chunk in chunks for e in chunk]


def build_rep(entry: CatalogEntry) -> CovariantRep:
    rep = entry.rep
    if not all(check_relations(entry).values()):
        raise AssertionError(f"relations fail for M={entry.M} orbit {entry.orbit.members}")
    return rep


def _mpow(m, k: int):
    return m ** k if isinstance(m, ExactMatrix) else np.linalg.matrix_power(m, k)


def _eq(a, b, exact: bool, tol: float = 1e-12) -> bool:
    return a == b if exact else matrices_equal(a, b, tol)


def check_relations(entry: CatalogEntry, tol: float = 1e-12) -> dict[str, bool]:
    """st = ts, sz = z^p s, tz = z^q t for (V_p, V_q, M_z)."""
    s, t, z = entry.v_p, entry.v_q, entry.m_z
    ex = entry.rep.exact
    return {
        "st=ts": _eq(s @ t, t @ s, ex, tol),
        "sz=z^p s": _eq(s @ z, _mpow(z, entry.p) @ s, ex, tol),
        "tz=z^q t": _eq(t @ z, _mpow(z, entry.q) @ t, ex, tol),
    }


# --------------------------------------------------------------------------
# the three conditions


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass
class Characterization:
    irreducible: bool
    fixed_dim: int
    zN_fixed: bool
    N_found: int | None
    fixed_basis: list

    @property
    def passed(self) -> bool:
        return self.irreducible and self.fixed_dim >= 1 and self.zN_fixed

    def as_dict(self) -> dict:
        return {"irreducible": self.irreducible, "fixed_dim": self.fixed_dim,
                "zN_fixed": self.zN_fixed, "N_found": self.N_found}


def z_power(rep: CovariantRep, N: int):
    return rep.pi(coordinate(rep.sys, N, exact=rep.exact))


def _fixes(op, vectors, exact: bool, tol: float = 1e-9) -> bool:
    for y in vectors:
        image = op @ y
        if exact:
            if any(a != b for a, b in zip(image, y)):
                return False
        elif np.max(np.abs(as_array(op) @ y - y)) > tol:
            return False
    return True


def verify_characterization(rep, M: int | None = None, tol: float = 1e-10) -> Characterization:
    """Irreducibility, H_Gamma != 0, and the least N | M with pi(z^N) = 1 on H_Gamma."""
    if isinstance(rep, CatalogEntry):
        rep = rep.rep
    M = rep.sys.M if M is None else M
    irr = is_irreducible(rep, tol)
    basis = fixed_space(rep, tol)
    found = None
    for N in divisors(M):
        if _fixes(z_power(rep, N), basis, rep.exact):
            found = N
            break
    return Characterization(irr, len(basis), found is not None, found, basis)


def dimension_bound_check(rep, N_found: int | None) -> bool:
    if isinstance(rep, CatalogEntry):
        rep = rep.rep
    return N_found is not None and rep.dim <= N_found


def span_check(rep, y, N: int, tol: float = 1e-10) -> bool:
    """Span{pi(z^i) y : 0 <= i < N} is the whole space."""
    if isinstance(rep, CatalogEntry):
        rep = rep.rep
    if rep.exact:
        return character_family_rank(y, rep.support, rep.sys.M, N) == rep.dim
    M, support = rep.sys.M, np.array(rep.support)
    vecs = [np.exp(2j * np.pi * i * support / M) * y for i in range(N)]
    return float_rank(np.array(vecs), tol).rank == rep.dim


def mz_power_identity(rep) -> bool:
    """M_z^M = I."""
    if isinstance(rep, CatalogEntry):
        rep = rep.rep
    return _eq(_mpow(rep.mz, rep.sys.M), rep.identity(), rep.exact, 1e-9)
