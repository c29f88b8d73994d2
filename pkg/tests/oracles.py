"""Independent reference computations used by the tests.

Each oracle takes a different route from the library code: explicit exponent
grids instead of BFS, floating point evaluation instead of cyclotomic
arithmetic, dense Kronecker systems instead of sparse diagonal reduction,
vertex enumeration instead of orbit structure.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

import numpy as np


def multiplicative_order(a: int, M: int) -> int:
    if M == 1:
        return 1
    k, x = 1, a % M
    while x != 1:
        x = x * a % M
        k += 1
    return k


def closure_grid(p: int, q: int, M: int, k: int) -> frozenset:
    """{p^a q^b k mod M} over a full period grid of exponents."""
    A, B = multiplicative_order(p, M), multiplicative_order(q, M)
    return frozenset(pow(p, a, M) * pow(q, b, M) * k % M for a in range(A) for b in range(B))


def orbit_partition(p: int, q: int, M: int) -> list[list[int]]:
    seen, out = set(), []
    for k in range(M):
        if k not in seen:
            orb = closure_grid(p, q, M, k)
            seen |= orb
            out.append(sorted(orb))
    return sorted(out)


def circle_orbits(p: int, q: int, M_max: int) -> set[frozenset]:
    """Every finite x p, x q invariant minimal set on roots of unity of order <= M_max
    coprime to pq, as sets of reduced fractions in [0, 1)."""
    found = set()
    for M in range(1, M_max + 1):
        if gcd(M, p * q) != 1:
            continue
        for orb in orbit_partition(p, q, M):
            found.add(frozenset(Fraction(k, M) for k in orb))
    return found


def brute_pushforward(p: int, q: int, M: int, weights, m: int, n: int) -> list:
    """Push the weights forward along x p^m q^n by direct reindexing."""
    mult = pow(p, m, M) * pow(q, n, M) % M
    out = [0 * weights[0]] * M
    for k, w in enumerate(weights):
        out[mult * k % M] += w
    return out


def cyclotomic_value(n: int, coeffs) -> complex:
    return sum(complex(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in enumerate(coeffs))


def convolve_dense(M: int, p: int, q: int, f: dict, g: dict) -> dict:
    """(f * g)(t) with f, g as {(m, n): complex vector}; alpha_s(b)(x) = b(s^{-1} x)."""
    def act(s, x):
        return pow(p, s[0], M) * pow(q, s[1], M) * x % M

    out: dict = {}
    for s1, a in f.items():
        for s2, b in g.items():
            ab = np.array([b[act((-s1[0], -s1[1]), x)] for x in range(M)])
            t = (s1[0] + s2[0], s1[1] + s2[1])
            out[t] = out.get(t, 0) + np.asarray(a) * ab
    return {t: v for t, v in out.items() if np.max(np.abs(v)) > 1e-13}


def dense_commutant_dim(mats, tol: float = 1e-9) -> int:
    """dim {X : X A = A X, X A^* = A^* X} from the Kronecker system."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    mats = mats + [m.conj().T for m in mats]
    n = mats[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, A.T) - np.kron(A, eye) for A in mats]
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(n * n - np.sum(s > tol * max(1.0, s.max())))


def dense_intertwiner_dim(gens_a, gens_b, tol: float = 1e-9) -> int:
    """dim {X : X A_i = B_i X and X A_i^* = B_i^* X}."""
    pairs = [(np.asarray(a, complex), np.asarray(b, complex)) for a, b in zip(gens_a, gens_b)]
    pairs += [(a.conj().T, b.conj().T) for a, b in pairs]
    dA, dB = pairs[0][0].shape[0], pairs[0][1].shape[0]
    rows = [np.kron(np.eye(dB), a.T) - np.kron(b, np.eye(dA)) for a, b in pairs]
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(dA * dB - np.sum(s > tol * max(1.0, s.max())))


def invariant_polytope_vertices(p: int, q: int, M: int) -> list[tuple[Fraction, ...]]:
    """Vertices of {w >= 0, sum w = 1, w invariant} via cdd, each certified exactly.

    cdd runs in floating point; every reported vertex is rounded to rationals
    with denominator <= M, then checked to be feasible, invariant and
    supported on a single orbit (which makes it extreme).
    """
    import cdd

    perm_p = [p * k % M for k in range(M)]
    perm_q = [q * k % M for k in range(M)]
    eqs = [[1.0] + [-1.0] * M]
    for perm in (perm_p, perm_q):
        for y in range(M):
            row = [0.0] * (M + 1)
            row[1 + y] += 1.0
            for x in range(M):
                if perm[x] == y:
                    row[1 + x] -= 1.0
            eqs.append(row)
    ineqs = [[0.0] + [1.0 if j == i else 0.0 for j in range(M)] for i in range(M)]
    mat = cdd.matrix_from_array(ineqs + eqs, lin_set=set(range(M, M + len(eqs))),
                                rep_type=cdd.RepType.INEQUALITY)
    poly = cdd.polyhedron_from_matrix(mat)
    gens = cdd.copy_generators(poly)
    verts = []
    for row in gens.array:
        if row[0] != 1:
            continue
        w = tuple(Fraction(x).limit_denominator(M) for x in row[1:])
        verts.append(w)
    for w in verts:
        certify_vertex(w, perm_p, perm_q)
    return sorted(set(verts))


def certify_vertex(w, perm_p, perm_q):
    M = len(w)
    assert sum(w) == 1 and all(x >= 0 for x in w)
    for perm in (perm_p, perm_q):
        push = [Fraction(0)] * M
        for x in range(M):
            push[perm[x]] += w[x]
        assert push == list(w)
    # support must be the closure of one point
    support = {k for k, x in enumerate(w) if x > 0}
    closed = {min(support)}
    frontier = [min(support)]
    while frontier:
        k = frontier.pop()
        for perm in (perm_p, perm_q):
            y = perm[k]
            if y not in closed:
                closed.add(y)
                frontier.append(y)
    assert closed == support


def gram_expansion(p: int, q: int, M: int, weights, coeffs: dict):
    """nu(|sum lambda_x chi_x|^2) evaluated pointwise: x in Z[1/pq] acts on the
    point k/M through the residue x mod M (p and q are units mod M)."""
    from xpq.cyclotomic import root_of_unity

    def residue(k, i, j):
        r = k % M
        r = r * (pow(p, i, M) if i >= 0 else pow(pow(p, -1, M), -i, M)) % M
        r = r * (pow(q, j, M) if j >= 0 else pow(pow(q, -1, M), -j, M)) % M
        return r

    total = Fraction(0)
    for point, w in enumerate(weights):
        if not w:
            continue
        g = Fraction(0)
        for (k, i, j), lam in coeffs.items():
            g = g + lam * root_of_unity(M, point * residue(k, i, j))
        total = total + w * g * g.conjugate()
    return total


def random_unitary(n: int, rng) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    qm, r = np.linalg.qr(z)
    return qm * (np.diag(r) / np.abs(np.diag(r)))
