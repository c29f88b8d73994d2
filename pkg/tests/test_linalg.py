from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_commutant_dim, dense_intertwiner_dim
from xpq.cyclotomic import root_of_unity
from xpq.linalg import (ExactMatrix, RowReducer, as_array, character_family_rank, common_kernel,
                        exact_rank, float_rank, intertwiner_space)

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def exact_matrix(draw, n=None):
    n = n or draw(st.integers(1, 4))
    vals = draw(st.lists(small, min_size=n * n, max_size=n * n))
    return ExactMatrix.from_dense(np.array(vals, dtype=object).reshape(n, n))


def test_basic_constructors():
    eye = ExactMatrix.identity(3)
    assert eye @ eye == eye
    P = ExactMatrix.permutation([1, 2, 0])
    assert P ** 3 == eye
    assert P @ P.H == eye
    D = ExactMatrix.diag([Fraction(1), root_of_unity(3), Fraction(0)])
    assert D.is_diagonal() and D.nnz == 2
    assert (D.H)[1, 1] == root_of_unity(3, 2)


@given(exact_matrix(n=3), exact_matrix(n=3), exact_matrix(n=3))
def test_exact_matrix_ring_laws_match_float(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert np.allclose(as_array(a @ b + c), as_array(a) @ as_array(b) + as_array(c))
    assert (a @ b).H == b.H @ a.H


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=6))
def test_row_reducer_rank_matches_numpy(rows):
    red = RowReducer(4)
    for r in rows:
        red.add({j: x for j, x in enumerate(r)})
    assert red.rank == np.linalg.matrix_rank(np.array(rows, dtype=float))
    A = np.array(rows, dtype=object)
    for vec in red.kernel():
        x = np.array([vec.get(j, Fraction(0)) for j in range(4)], dtype=object)
        assert all(v == 0 for v in A @ x)
    assert len(red.kernel()) == 4 - red.rank


def test_commutant_of_identity_and_full_algebra():
    n = 3
    sol = intertwiner_space([ExactMatrix.identity(n)], [ExactMatrix.identity(n)])
    assert sol.dim == n * n
    units = [ExactMatrix.from_entries((n, n), [(i, j, Fraction(1))]) for i in range(n) for j in range(n)]
    assert intertwiner_space(units, units).dim == 1


@given(st.integers(0, 10_000), st.integers(2, 5))
def test_exact_and_float_commutants_agree_with_kronecker(seed, n):
    rng = np.random.default_rng(seed)
    # block structure so commutants are nontrivial
    k = int(rng.integers(1, n + 1))
    blocks = [np.diag(rng.integers(0, 2, size=n)).astype(object)]
    perm = np.eye(n, dtype=int)[:, rng.permutation(n)]
    perm[k:, :] = 0
    perm[:, k:] = 0
    perm[k:, k:] = np.eye(n - k, dtype=int)
    gens = [ExactMatrix.from_dense(np.array(b, dtype=object)) for b in blocks]
    gens.append(ExactMatrix.from_dense(np.vectorize(Fraction)(perm).astype(object)))
    oracle = dense_commutant_dim([as_array(g) for g in gens])
    assert intertwiner_space(gens, gens).dim == oracle
    assert intertwiner_space([as_array(g) for g in gens], [as_array(g) for g in gens]).dim == oracle


def test_intertwiners_between_different_sizes():
    a = [ExactMatrix.diag([Fraction(1), Fraction(2)])]
    b = [ExactMatrix.diag([Fraction(2), Fraction(3), Fraction(1)])]
    sol = intertwiner_space(a, b)
    assert sol.dim == dense_intertwiner_dim([as_array(a[0])], [as_array(b[0])]) == 2
    for X in sol.basis:
        assert X @ a[0] == b[0] @ X


def test_intertwiner_basis_solves_equations_float():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    W = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    B = W @ A @ W.T
    sol = intertwiner_space([A], [B])
    assert sol.dim == 1
    X = sol.basis[0]
    assert np.allclose(X @ A, B @ X)
    assert sol.rank_info.smallest_kept > 1e-6


def test_common_kernel_exact_and_float():
    P = ExactMatrix.permutation([1, 0, 2])
    eye = ExactMatrix.identity(3)
    sol = common_kernel([P - eye])
    assert sol.dim == 2
    fsol = common_kernel([as_array(P) - np.eye(3)])
    assert fsol.dim == 2


def test_exact_rank_cyclotomic_vandermonde():
    vecs = [[root_of_unity(7, i * k) for k in range(1, 7)] for i in range(6)]
    assert exact_rank(vecs) == 6
    assert exact_rank(vecs + [vecs[0]]) == 6
    assert exact_rank(vecs[:3] + [vecs[1]]) == 3
    assert exact_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1


def test_character_family_rank_matches_dense():
    one = [Fraction(1)] * 4
    for N in range(1, 7):
        dense = [[root_of_unity(5, i * e) for e in (1, 2, 3, 4)] for i in range(N)]
        assert character_family_rank(one, (1, 2, 3, 4), 5, N) == exact_rank(dense) == min(N, 4)
    # repeated residues collapse the rank
    assert character_family_rank([Fraction(1)] * 3, (7, 14, 21), 35, 10) == 3
    assert character_family_rank([Fraction(1)] * 2, (1, 1), 5, 4) == 1


def test_float_rank_threshold():
    info = float_rank(np.diag([1.0, 1e-3, 1e-13]))
    assert info.rank == 2
    assert info.largest_discarded == 1e-13
    assert info.smallest_kept == 1e-3


def test_zero_generators_commute_with_everything():
    assert intertwiner_space([ExactMatrix.zeros((2, 2))], [ExactMatrix.zeros((2, 2))]).dim == 4
    assert intertwiner_space([np.zeros((2, 2))], [np.zeros((2, 2))]).dim == 4
