"""Decision procedures on representations: commutants, irreducibility, fixed
vectors, intertwiners, and the ergodicity test by invariant commutant elements.

Every procedure works on an :class:`OperatorSet`.  A covariant representation
is turned into one by taking a diagonal pi(h) for a function h separating the
points (h(x) = x + 1), plus the two Koopman generators; pi(h) generates the
same algebra as all of pi(C(X)), and the Koopman generators are unitary, so
the set is *-closed up to adjoints, which the solvers add themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import function
from .gns import CovariantRep
from .linalg import (DEFAULT_TOL, ExactMatrix, Solution, as_array, common_kernel, float_rank,
                     intertwiner_space)
from .states import NotInvariant, is_invariant


@dataclass(eq=False)
class OperatorSet:
    """Generators of a representation: the algebra part and the group part.

    ``weights`` is the diagonal of the ambient inner product (None means the
    standard one); ``one_hat`` is the cyclic vector when there is one.
    """

    dim: int
    pi_gens: list
    u_gens: list = field(default_factory=list)
    weights: tuple | None = None
    one_hat: object = None

    @property
    def generators(self) -> list:
        return list(self.pi_gens) + list(self.u_gens)

    @property
    def exact(self) -> bool:
        return all(isinstance(g, ExactMatrix) for g in self.generators)

    def conjugate(self, W, W_inv=None) -> OperatorSet:
        """The set W G W^{-1} (W^{-1} defaults to W^*)."""
        if W_inv is None:
            W_inv = W.H if isinstance(W, ExactMatrix) else np.conj(W).T
        return OperatorSet(self.dim, [W @ g @ W_inv for g in self.pi_gens],
                           [W @ g @ W_inv for g in self.u_gens])

    def to_float(self) -> OperatorSet:
        return OperatorSet(self.dim, [as_array(g) for g in self.pi_gens],
                           [as_array(g) for g in self.u_gens],
                           self.weights, None if self.one_hat is None else
                           np.array([complex(v) for v in self.one_hat]))


def separating_function(sys, exact: bool = True):
    return function(sys, [k + 1 for k in range(sys.M)], exact=exact)


def operator_set(rep) -> OperatorSet:
    if isinstance(rep, OperatorSet):
        return rep
    if isinstance(rep, CovariantRep):
        h = separating_function(rep.sys, exact=rep.exact)
        return OperatorSet(rep.dim, [rep.pi(h)], list(rep.u_gens),
                           rep.space.weights, rep.one_hat)
    raise TypeError(f"cannot analyse {type(rep).__name__}")


def direct_sum(a, b) -> OperatorSet:
    """Block-diagonal sum of two operator sets with matching generator lists."""
    a, b = operator_set(a), operator_set(b)

    def block(x, y):
        if isinstance(x, ExactMatrix) and isinstance(y, ExactMatrix):
            entries = list(x.items()) + [(i + a.dim, j + a.dim, v) for i, j, v in y.items()]
            return ExactMatrix.from_entries((a.dim + b.dim,) * 2, entries)
        out = np.zeros((a.dim + b.dim,) * 2, dtype=complex)
        out[:a.dim, :a.dim] = as_array(x)
        out[a.dim:, a.dim:] = as_array(y)
        return out

    return OperatorSet(a.dim + b.dim,
                       [block(x, y) for x, y in zip(a.pi_gens, b.pi_gens)],
                       [block(x, y) for x, y in zip(a.u_gens, b.u_gens)])


def noncommutative_counterexample() -> OperatorSet:
    """Identity representation of the 2x2 matrices, trivial group action.

    Irreducible, yet every vector is fixed: dim H_Gamma = 2.
    """
    units = [ExactMatrix.from_entries((2, 2), [(i, j, Fraction(1))]) for i in range(2) for j in range(2)]
    return OperatorSet(2, units, [ExactMatrix.identity(2), ExactMatrix.identity(2)])


# --------------------------------------------------------------------------


def commutant(ops, tol: float = DEFAULT_TOL) -> Solution:
    """Basis of {T : T A = A T for every generator A} (and their adjoints)."""
    ops = operator_set(ops)
    gens = ops.generators
    if not gens:
        raise ValueError("need at least one generator")
    return intertwiner_space(gens, gens, tol=tol)


def commutant_dim(ops, tol: float = DEFAULT_TOL) -> int:
    return commutant(ops, tol).dim


def is_irreducible(rep, tol: float = DEFAULT_TOL) -> bool:
    return commutant_dim(rep, tol) == 1


def _orthogonalize(vectors, weights, exact):
    """Gram-Schmidt in the weighted inner product."""
    w = weights if weights is not None else [1] * (len(vectors[0]) if vectors else 0)

    def inner(x, y):
        if exact:
            return sum((wk * a * b.conjugate() for wk, a, b in zip(w, x, y)), Fraction(0))
        return complex(np.sum(np.asarray(w, dtype=float) * x * np.conj(y)))

    out = []
    for v in vectors:
        for b in out:
            v = v - b * (inner(v, b) / inner(b, b))
        out.append(v)
    return out


def fixed_space(rep, tol: float = DEFAULT_TOL) -> list:
    """Orthogonal basis of H_Gamma = {x : U x = x for the group generators}."""
    ops = operator_set(rep)
    if not ops.u_gens:
        return [np.eye(ops.dim)[:, k] for k in range(ops.dim)]
    if ops.exact:
        eye = ExactMatrix.identity(ops.dim)
        sol = common_kernel([u - eye for u in ops.u_gens])
    else:
        eye = np.eye(ops.dim)
        sol = common_kernel([as_array(u) - eye for u in ops.u_gens], tol=tol)
    return _orthogonalize(sol.basis, ops.weights, sol.exact)


def intertwiners(rep_a, rep_b, tol: float = DEFAULT_TOL) -> Solution:
    """Basis of {X : X rho_A(g) = rho_B(g) X} over the canonical generators."""
    a, b = operator_set(rep_a), operator_set(rep_b)
    if len(a.pi_gens) != len(b.pi_gens) or len(a.u_gens) != len(b.u_gens):
        raise ValueError("representations have different generator sets")
    ga, gb = a.generators, b.generators
    if not (a.exact and b.exact):
        ga, gb = [as_array(g) for g in ga], [as_array(g) for g in gb]
    return intertwiner_space(ga, gb, tol=tol)


def intertwiner_dim(rep_a, rep_b, tol: float = DEFAULT_TOL) -> int:
    return intertwiners(rep_a, rep_b, tol).dim


@dataclass
class Equivalence:
    equivalent: bool
    intertwiner_dim: int
    heuristic: bool
    reason: str = ""


def check_equivalence(rep_a, rep_b, tol: float = DEFAULT_TOL, seed: int = 0) -> Equivalence:
    """Unitary equivalence test.

    Irreducible pairs are decided by Schur's lemma (intertwiner dimension 1).
    Otherwise the generator traces must agree and a random combination of the
    intertwiner basis must be invertible; that branch is flagged heuristic.
    """
    a, b = operator_set(rep_a), operator_set(rep_b)
    sol = intertwiners(a, b, tol)
    if a.dim != b.dim:
        return Equivalence(False, sol.dim, False, "dimension mismatch")
    if commutant_dim(a, tol) == 1 and commutant_dim(b, tol) == 1:
        return Equivalence(sol.dim == 1, sol.dim, False, "Schur")
    for x, y in zip(a.generators, b.generators):
        if abs(np.trace(as_array(x)) - np.trace(as_array(y))) > 1e-9 * max(1, a.dim):
            return Equivalence(False, sol.dim, True, "generator traces differ")
    if sol.dim == 0:
        return Equivalence(False, 0, True, "no intertwiner")
    rng = np.random.default_rng(seed)
    X = sum(complex(rng.standard_normal(), rng.standard_normal()) * as_array(m) for m in sol.basis)
    full = float_rank(X, tol).rank == a.dim
    return Equivalence(full, sol.dim, True, "invertible intertwiner" if full else "no invertible intertwiner")


def equivalent(rep_a, rep_b, tol: float = DEFAULT_TOL) -> bool:
    return check_equivalence(rep_a, rep_b, tol).equivalent


# --------------------------------------------------------------------------


@dataclass
class ErgodicityResult:
    """Outcome of the test phi(T^* T) = |phi(T)|^2 over the invariant commutant."""

    ergodic: bool
    commutant_dim: int
    witness: object = None
    phi_TT: object = None
    phi_T_sq: object = None


def state_of_operator(ops: OperatorSet, T):
    """phi(T) = <T 1^, 1^> and phi(T^* T) = <T 1^, T 1^>."""
    one = ops.one_hat
    w = ops.weights
    if isinstance(T, ExactMatrix):
        t1 = T @ one
        phi_t = sum((wk * a * b.conjugate() for wk, a, b in zip(w, t1, one)), Fraction(0))
        phi_tt = sum((wk * a * a.conjugate() for wk, a in zip(w, t1)), Fraction(0))
        return phi_t, phi_tt
    wf = np.asarray([float(x) for x in w])
    one = np.asarray([complex(x) for x in one])
    t1 = as_array(T) @ one
    return complex(np.sum(wf * t1 * np.conj(one))), float(np.sum(wf * np.abs(t1) ** 2))


def ergodicity_criterion(rep, tol: float = DEFAULT_TOL) -> ErgodicityResult:
    """Check phi(T^* T) = |phi(T)|^2 on a basis of B(L^2)_Gamma intersect pi(A)'.

    That intersection is the commutant of the whole covariant representation.
    phi(T^* T) - |phi(T)|^2 = ||T 1^ - phi(T) 1^||^2, so the identity holds on
    the span iff it holds on each basis element.
    """
    if isinstance(rep, CovariantRep) and not is_invariant(rep.sys, rep.state.weights):
        raise NotInvariant("ergodicity test needs an invariant state")
    ops = operator_set(rep)
    sol = commutant(ops, tol)
    for T in sol.basis:
        phi_t, phi_tt = state_of_operator(ops, T)
        if sol.exact:
            sq = phi_t * phi_t.conjugate()
            violated = phi_tt != sq
        else:
            sq = abs(phi_t) ** 2
            violated = abs(phi_tt - sq) > 1e-9
        if violated:
            return ErgodicityResult(False, sol.dim, T, phi_tt, sq)
    return ErgodicityResult(True, sol.dim)
