"""GNS spaces of states on C(X), Koopman unitaries, and the covariant
representation rho_phi(sum a_s u_s) = sum pi_phi(a_s) U_phi(s).

For a finite function algebra the GNS space of phi is concretely the space of
functions on supp(phi) with inner product <x, y> = sum_k phi_k x_k conj(y_k);
the class of a is its restriction to the support.  Operators are stored in
this weighted indicator basis.  On it pi_phi(a) is diagonal and U_phi(s) is
the permutation e_x -> e_{s.x}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .algebra import (CrossedElement, FunctionElement, IndexMismatch, alpha, constant, coordinate,
                      indicator, monomial)
from .dynsys import GENERATORS, FiniteSystem, as_group_element
from .linalg import ExactMatrix, as_array, matrices_equal
from .states import InvariantMeasure, NotInvariant, is_invariant


class NotUnitVector(ValueError):
    """Vector state requested for a vector of norm != 1."""


@dataclass(frozen=True, eq=False)
class GnsSpace:
    sys: FiniteSystem
    state: InvariantMeasure

    @cached_property
    def basis(self) -> tuple[int, ...]:
        return self.state.support

    @cached_property
    def index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def exact(self) -> bool:
        return self.state.exact

    @cached_property
    def weights(self) -> tuple:
        return tuple(self.state.weights[x] for x in self.basis)

    def quotient(self, a: FunctionElement) -> np.ndarray:
        """a -> a^ (restriction to the support)."""
        if a.sys != self.sys:
            raise IndexMismatch("function lives on another system")
        return np.array([a.values[x] for x in self.basis], dtype=a.values.dtype)

    def inner(self, x, y):
        """<x, y> = sum_k w_k x_k conj(y_k)."""
        zero = Fraction(0) if self.exact else 0.0
        return sum((w * a * b.conjugate() for w, a, b in zip(self.weights, x, y)), zero)

    @property
    def one_hat(self) -> np.ndarray:
        return self.quotient(constant(self.sys, 1, exact=self.exact))

    def in_null_ideal(self, a: FunctionElement) -> bool:
        """a in I_phi, i.e. phi(a^* a) = 0."""
        v = self.state(a.conj() * a)
        return v == 0 if self.exact else abs(v) <= 1e-14


def gns(sys: FiniteSystem, phi: InvariantMeasure) -> GnsSpace:
    if phi.sys != sys:
        raise IndexMismatch("state lives on another system")
    return GnsSpace(sys, phi)


@dataclass(frozen=True, eq=False)
class CovariantRep:
    """(pi_phi, U_phi, L^2(A, phi)) for an invariant state phi."""

    space: GnsSpace

    @property
    def sys(self) -> FiniteSystem:
        return self.space.sys

    @property
    def state(self) -> InvariantMeasure:
        return self.space.state

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def exact(self) -> bool:
        return self.space.exact

    @property
    def support(self) -> tuple[int, ...]:
        return self.space.basis

    def pi(self, a: FunctionElement):
        vals = self.space.quotient(a)
        if self.exact:
            return ExactMatrix.diag(list(vals))
        return np.diag(vals.astype(complex))

    def u(self, g):
        g = as_group_element(g)
        idx = self.space.index
        mult = self.sys.multiplier(g)
        perm = [idx[(mult * x) % self.sys.M] for x in self.support]
        if self.exact:
            return ExactMatrix.permutation(perm)
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        mat[perm, np.arange(self.dim)] = 1
        return mat

    @cached_property
    def pi_gens(self) -> list:
        """pi(e_x) for every residue x (zero off the support)."""
        return [self.pi(indicator(self.sys, x, exact=self.exact)) for x in range(self.sys.M)]

    @cached_property
    def u_gens(self) -> list:
        return [self.u(g) for g in GENERATORS]

    @cached_property
    def mz(self):
        """Multiplication by the coordinate z(k) = omega^k."""
        return self.pi(coordinate(self.sys, exact=self.exact))

    def identity(self):
        return ExactMatrix.identity(self.dim) if self.exact else np.eye(self.dim, dtype=complex)

    def inner(self, x, y):
        return self.space.inner(x, y)

    @property
    def one_hat(self) -> np.ndarray:
        return self.space.one_hat


def koopman(sys: FiniteSystem, phi: InvariantMeasure):
    """U_phi(1, 0), U_phi(0, 1): the unitaries a^ -> alpha_s(a)^."""
    if not is_invariant(sys, phi.weights):
        raise NotInvariant("Koopman unitaries need an invariant state")
    return CovariantRep(gns(sys, phi)).u_gens


def covariant_rep(sys: FiniteSystem, phi: InvariantMeasure) -> CovariantRep:
    if not is_invariant(sys, phi.weights):
        raise NotInvariant("covariant representation needs an invariant state")
    return CovariantRep(gns(sys, phi))


def evaluate(rep: CovariantRep, f: CrossedElement):
    """rho_phi(f) = sum_s pi_phi(f(s)) U_phi(s)."""
    if f.sys != rep.sys:
        raise IndexMismatch("element lives on another system")
    total = ExactMatrix.zeros((rep.dim, rep.dim)) if rep.exact else np.zeros((rep.dim, rep.dim), complex)
    for s, a in f.terms.items():
        total = total + rep.pi(a) @ rep.u(s)
    return total


class VectorState:
    """f -> <rho(f) x, x> for a unit vector x."""

    def __init__(self, rep: CovariantRep, x):
        norm = rep.inner(x, x)
        ok = norm == 1 if rep.exact else abs(complex(norm) - 1) <= 1e-12
        if not ok:
            raise NotUnitVector(f"<x, x> = {norm}")
        self.rep = rep
        self.x = x

    def __call__(self, f: CrossedElement):
        return self.rep.inner(evaluate(self.rep, f) @ self.x, self.x)

    def restriction(self) -> list:
        """R(psi): the measure k -> psi(e_k u_0) on the residues."""
        return [self(monomial(indicator(self.rep.sys, k, exact=self.rep.exact)))
                for k in range(self.rep.sys.M)]


def vector_state(rep: CovariantRep, x) -> VectorState:
    return VectorState(rep, x)


def lift(phi: InvariantMeasure) -> VectorState:
    """The state psi(b) = <rho_phi(b) 1^, 1^> on the crossed product."""
    rep = covariant_rep(phi.sys, phi)
    return vector_state(rep, rep.one_hat)


def covariance_holds(rep: CovariantRep, a: FunctionElement, g, tol: float = 1e-12) -> bool:
    """pi(alpha_g(a)) == U_g pi(a) U_g^*."""
    U = rep.u(g)
    lhs = rep.pi(alpha(rep.sys, g, a))
    rhs = U @ rep.pi(a) @ (U.H if rep.exact else U.conj().T)
    return matrices_equal(lhs, rhs, tol)


def to_orthonormal(rep: CovariantRep, mat) -> np.ndarray:
    """Matrix of an operator in the orthonormal basis e_x / sqrt(w_x)."""
    root = np.sqrt(np.array([float(w) for w in rep.space.weights]))
    return (root[:, None] * as_array(mat)) / root[None, :]
