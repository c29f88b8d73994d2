"""Finite phase spaces carrying the Z^2 action generated by x p and x q.

Residues k in {0, ..., M-1} stand for the circle points k/M (equivalently the
M-th roots of unity exp(2 pi i k / M)).  The generator (1, 0) acts by k -> p k,
the generator (0, 1) by k -> q k, both mod M.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np


class DomainError(ValueError):
    """Parameters outside the domain of an operation."""


class CoprimalityError(DomainError):
    """The modulus shares a factor with p*q, so x p or x q is not a bijection."""


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element (m, n) of Z^2; acts on residues by multiplication with p^m q^n."""

    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    def __add__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.m + other.m, self.n + other.n)

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.m, -self.n)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __iter__(self):
        yield self.m
        yield self.n

    def __repr__(self) -> str:
        return f"GroupElement({self.m}, {self.n})"


IDENTITY = GroupElement(0, 0)
S = GroupElement(1, 0)
T = GroupElement(0, 1)
GENERATORS = (S, T)


def as_group_element(g) -> GroupElement:
    if isinstance(g, GroupElement):
        return g
    m, n = g
    return GroupElement(int(m), int(n))


def multiplicatively_dependent(p: int, q: int) -> bool:
    """True iff p^a = q^b for some a, b >= 1, i.e. log p / log q is rational."""
    while p != q:
        if p < q:
            p, q = q, p
        if q == 1 or p % q:
            return False
        p //= q
    return True


@dataclass(frozen=True)
class FiniteSystem:
    p: int
    q: int
    M: int

    @property
    def points(self) -> range:
        return range(self.M)

    @property
    def multiplicatively_dependent(self) -> bool:
        return multiplicatively_dependent(self.p, self.q)

    @cached_property
    def _inverses(self) -> tuple[int, int]:
        if self.M == 1:
            return 0, 0
        return pow(self.p, -1, self.M), pow(self.q, -1, self.M)

    def multiplier(self, g) -> int:
        """p^m q^n mod M, with negative exponents through modular inverses."""
        m, n = as_group_element(g)
        p_inv, q_inv = self._inverses
        a = pow(self.p, m, self.M) if m >= 0 else pow(p_inv, -m, self.M)
        b = pow(self.q, n, self.M) if n >= 0 else pow(q_inv, -n, self.M)
        return (a * b) % self.M

    def permutation(self, g) -> np.ndarray:
        """Array `perm` with perm[k] = g . k."""
        return (self.multiplier(g) * np.arange(self.M, dtype=np.int64)) % self.M


@dataclass(frozen=True)
class Orbit:
    members: tuple[int, ...]

    @property
    def representative(self) -> int:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, k) -> bool:
        return k in self.members


def make_system(p: int, q: int, M: int) -> FiniteSystem:
    if p < 2 or q < 2:
        raise DomainError(f"p and q must be >= 2, got p={p}, q={q}")
    if M < 1:
        raise DomainError(f"modulus must be >= 1, got M={M}")
    if gcd(M, p * q) != 1:
        raise CoprimalityError(f"gcd({M}, {p * q}) = {gcd(M, p * q)} != 1")
    return FiniteSystem(p, q, M)


def act(sys: FiniteSystem, g, k: int) -> int:
    """Image of residue k under g = (m, n): p^m q^n k mod M."""
    if not 0 <= k < sys.M:
        raise DomainError(f"residue {k} outside 0..{sys.M - 1}")
    return (sys.multiplier(g) * k) % sys.M


def orbits(sys: FiniteSystem) -> list[Orbit]:
    """Partition of the residues into orbits, sorted by representative."""
    seen = np.zeros(sys.M, dtype=bool)
    result = []
    for start in range(sys.M):
        if seen[start]:
            continue
        members = {start}
        frontier = [start]
        while frontier:
            k = frontier.pop()
            for c in (sys.p, sys.q):
                j = (c * k) % sys.M
                if j not in members:
                    members.add(j)
                    frontier.append(j)
        seen[list(members)] = True
        result.append(Orbit(tuple(sorted(members))))
    return result


def orbit_of(sys: FiniteSystem, k: int) -> Orbit:
    for orb in orbits(sys):
        if k in orb.members:
            return orb
    raise DomainError(f"residue {k} outside 0..{sys.M - 1}")
