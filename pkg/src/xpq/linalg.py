"""Exact sparse matrices and the kernel computations behind commutants,
fixed spaces and intertwiners.

Two arithmetic modes run through the package:

* exact: :class:`ExactMatrix` with ``Fraction`` / ``Cyclotomic`` entries,
  ranks decided by Gaussian elimination over the field;
* float: ``numpy`` complex arrays, ranks decided by singular values below
  ``tol * sigma_max * dim``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import flint
import numpy as np

from .cyclotomic import Cyclotomic, is_rational, root_of_unity

DEFAULT_TOL = 1e-10


def _is_zero(v) -> bool:
    return v == 0


class ExactMatrix:
    """Sparse matrix over exact scalars, stored as {row: {col: value}}."""

    __slots__ = ("shape", "rows")

    def __init__(self, shape: tuple[int, int], rows: dict | None = None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = rows if rows is not None else {}

    # construction -----------------------------------------------------
    @classmethod
    def from_entries(cls, shape, entries) -> ExactMatrix:
        rows: dict[int, dict[int, object]] = {}
        for i, j, v in entries:
            row = rows.setdefault(i, {})
            row[j] = row[j] + v if j in row else v
        return cls(shape, _prune(rows))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls((n, n), {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zeros(cls, shape) -> ExactMatrix:
        return cls(shape, {})

    @classmethod
    def diag(cls, values) -> ExactMatrix:
        n = len(values)
        return cls((n, n), {i: {i: v} for i, v in enumerate(values) if not _is_zero(v)})

    @classmethod
    def permutation(cls, perm) -> ExactMatrix:
        """Matrix sending basis vector e_j to e_{perm[j]}."""
        n = len(perm)
        return cls((n, n), {int(perm[j]): {j: Fraction(1)} for j in range(n)})

    @classmethod
    def from_dense(cls, array) -> ExactMatrix:
        array = np.asarray(array, dtype=object)
        r, c = array.shape
        return cls.from_entries((r, c), ((i, j, _exact(array[i, j]))
                                         for i in range(r) for j in range(c)
                                         if not _is_zero(array[i, j])))

    # access -----------------------------------------------------------
    def __getitem__(self, idx):
        i, j = idx
        return self.rows.get(i, {}).get(j, Fraction(0))

    def items(self):
        for i, row in self.rows.items():
            for j, v in row.items():
                yield i, j, v

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def columns(self) -> dict[int, dict[int, object]]:
        cols: dict[int, dict[int, object]] = {}
        for i, j, v in self.items():
            cols.setdefault(j, {})[i] = v
        return cols

    def is_diagonal(self) -> bool:
        return all(set(row) <= {i} for i, row in self.rows.items())

    def diagonal(self) -> list:
        return [self[i, i] for i in range(min(self.shape))]

    def trace(self):
        return sum(self.diagonal(), Fraction(0))

    # algebra ----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.shape[1] != other.shape[0]:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out: dict[int, dict[int, object]] = {}
            for i, row in self.rows.items():
                acc: dict[int, object] = {}
                for k, a in row.items():
                    for j, b in other.rows.get(k, {}).items():
                        acc[j] = acc[j] + a * b if j in acc else a * b
                out[i] = acc
            return ExactMatrix((self.shape[0], other.shape[1]), _prune(out))
        vec = np.asarray(other, dtype=object)
        if vec.shape != (self.shape[1],):
            raise ValueError(f"shape mismatch {self.shape} @ {vec.shape}")
        res = np.array([Fraction(0)] * self.shape[0], dtype=object)
        for i, row in self.rows.items():
            res[i] = sum((a * vec[k] for k, a in row.items()), Fraction(0))
        return res

    def _combine(self, other, sign):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {i: dict(row) for i, row in self.rows.items()}
        for i, j, v in other.items():
            row = out.setdefault(i, {})
            v = v if sign > 0 else -v
            row[j] = row[j] + v if j in row else v
        return ExactMatrix(self.shape, _prune(out))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return ExactMatrix(self.shape, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, ExactMatrix):
            return NotImplemented
        if _is_zero(scalar):
            return ExactMatrix.zeros(self.shape)
        return ExactMatrix(self.shape, {i: {j: v * scalar for j, v in r.items()}
                                        for i, r in self.rows.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ExactMatrix:
        result = ExactMatrix.identity(self.shape[0])
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    @property
    def H(self) -> ExactMatrix:
        return ExactMatrix((self.shape[1], self.shape[0]),
                           _prune_nested((j, i, v.conjugate()) for i, j, v in self.items()))

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix((self.shape[1], self.shape[0]),
                           _prune_nested((j, i, v) for i, j, v in self.items()))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).nnz == 0

    __hash__ = None

    def is_hermitian(self) -> bool:
        return self == self.H

    def toarray(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for i, j, v in self.items():
            out[i, j] = complex(v)
        return out

    def __repr__(self) -> str:
        return f"ExactMatrix(shape={self.shape}, nnz={self.nnz})"


def _exact(v):
    if isinstance(v, Cyclotomic):
        return v
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    raise TypeError(f"not an exact scalar: {v!r}")


def _prune(rows):
    out = {}
    for i, row in rows.items():
        kept = {j: v for j, v in row.items() if not _is_zero(v)}
        if kept:
            out[i] = kept
    return out


def _prune_nested(entries):
    rows: dict[int, dict[int, object]] = {}
    for i, j, v in entries:
        rows.setdefault(i, {})[j] = v
    return _prune(rows)


def is_exact(mat) -> bool:
    return isinstance(mat, ExactMatrix)


def as_array(mat) -> np.ndarray:
    return mat.toarray() if isinstance(mat, ExactMatrix) else np.asarray(mat, dtype=complex)


def matrices_equal(a, b, tol: float = 0.0) -> bool:
    """Exact equality for exact inputs, max-abs residual <= tol otherwise."""
    if isinstance(a, ExactMatrix) and isinstance(b, ExactMatrix):
        return a == b
    a, b = as_array(a), as_array(b)
    return a.shape == b.shape and (a.size == 0 or float(np.max(np.abs(a - b))) <= tol)


def residual(a, b) -> float:
    a, b = as_array(a), as_array(b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


# --------------------------------------------------------------------------
# exact elimination


class RowReducer:
    """Incremental reduced row echelon form over an exact field.

    Rows are sparse dicts {variable: coefficient}; pivot rows are kept fully
    reduced so the kernel can be read off at any time.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.pivots: dict[int, dict[int, object]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict) -> bool:
        row = {v: c for v, c in row.items() if not _is_zero(c)}
        for v in [v for v in row if v in self.pivots]:
            c = row.get(v)
            if c is None:
                continue
            for w, d in self.pivots[v].items():
                nv = row[w] - c * d if w in row else -c * d
                if _is_zero(nv):
                    row.pop(w, None)
                else:
                    row[w] = nv
        if not row:
            return False
        pv = min(row)
        inv = 1 / row[pv]
        row = {w: c * inv for w, c in row.items()}
        row[pv] = Fraction(1)
        for prow in self.pivots.values():
            c = prow.get(pv)
            if c is None:
                continue
            for w, d in row.items():
                nv = prow[w] - c * d if w in prow else -c * d
                if _is_zero(nv):
                    prow.pop(w, None)
                else:
                    prow[w] = nv
        self.pivots[pv] = row
        return True

    def kernel(self) -> list[dict[int, object]]:
        free = [v for v in range(self.nvars) if v not in self.pivots]
        basis = []
        for f in free:
            vec = {f: Fraction(1)}
            for pv, prow in self.pivots.items():
                c = prow.get(f)
                if c is not None:
                    vec[pv] = -c
            basis.append(vec)
        return basis


# --------------------------------------------------------------------------
# float kernels


@dataclass
class FloatRank:
    rank: int
    singular_values: np.ndarray
    threshold: float

    @property
    def smallest_kept(self) -> float:
        kept = self.singular_values[self.singular_values > self.threshold]
        return float(kept.min()) if kept.size else float("inf")

    @property
    def largest_discarded(self) -> float:
        gone = self.singular_values[self.singular_values <= self.threshold]
        return float(gone.max()) if gone.size else 0.0


class _QRAccumulator:
    """Keeps the R factor of a tall stack of rows without storing the stack."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.R = np.zeros((0, ncols), dtype=complex)

    def add(self, block: np.ndarray):
        if block.size == 0:
            return
        stacked = np.vstack([self.R, block])
        if stacked.shape[0] > self.ncols:
            self.R = np.linalg.qr(stacked, mode="r")
        else:
            self.R = stacked

    def kernel(self, tol: float, dim: int, scale: float = 0.0) -> tuple[np.ndarray, FloatRank]:
        """Null space; singular values below tol * max(sigma_max, scale) * dim count as zero.

        ``scale`` is the size of the input coefficients, so a system that is zero
        up to rounding is not promoted to full rank by its own noise.
        """
        n = self.ncols
        if n == 0:
            return np.zeros((0, 0), dtype=complex), FloatRank(0, np.zeros(0), 0.0)
        R = self.R if self.R.shape[0] >= n else np.vstack(
            [self.R, np.zeros((n - self.R.shape[0], n), dtype=complex)])
        _, s, vh = np.linalg.svd(R)
        smax = float(s.max()) if s.size else 0.0
        thr = tol * max(smax, scale) * max(dim, 1)
        rank = int(np.sum(s > thr))
        return vh[rank:].conj().T, FloatRank(rank, s, thr)


# --------------------------------------------------------------------------
# intertwiners


@dataclass
class Solution:
    """Kernel of a linear matrix problem together with rank diagnostics."""

    basis: list
    exact: bool
    rank_info: FloatRank | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


def _row_access(mat):
    """Per-row nonzero (cols, values) for exact or float matrices."""
    if isinstance(mat, ExactMatrix):
        return {i: list(row.items()) for i, row in mat.rows.items()}
    out = {}
    for i in range(mat.shape[0]):
        nz = np.nonzero(mat[i])[0]
        if nz.size:
            out[i] = list(zip(nz.tolist(), mat[i, nz].tolist()))
    return out


def _col_access(mat):
    if isinstance(mat, ExactMatrix):
        return {j: list(col.items()) for j, col in mat.columns().items()}
    return _row_access(mat.T)


def _scalar_key(v, order: int):
    if isinstance(v, Cyclotomic):
        return tuple(Fraction(int(c.p), int(c.q)) for c in v.lift(order).coeffs())
    return Fraction(v)


def _common_order(values) -> int:
    order = 1
    for v in values:
        if isinstance(v, Cyclotomic):
            order = order * v.order // gcd(order, v.order)
    return order


def _exact_labels(pairs, dA: int, dB: int):
    labels_a = [()] * dA
    labels_b = [()] * dB
    for A, B in pairs:
        da, db = A.diagonal(), B.diagonal()
        order = _common_order(da + db)
        labels_a = [lab + (_scalar_key(v, order),) for lab, v in zip(labels_a, da)]
        labels_b = [lab + (_scalar_key(v, order),) for lab, v in zip(labels_b, db)]
    return labels_a, labels_b


def _allowed_from_labels(labels_a, labels_b):
    by_label: dict = {}
    for k, lab in enumerate(labels_a):
        by_label.setdefault(lab, []).append(k)
    allowed = []
    for i, lab in enumerate(labels_b):
        for k in by_label.get(lab, ()):
            allowed.append((i, k))
    return allowed


def _star_close(pairs, hermitian):
    out = list(pairs)
    for A, B in pairs:
        if not (hermitian(A) and hermitian(B)):
            out.append((_adj(A), _adj(B)))
    return out


def _adj(m):
    return m.H if isinstance(m, ExactMatrix) else m.conj().T


def _is_zero_matrix(m) -> bool:
    return m.nnz == 0 if isinstance(m, ExactMatrix) else not np.any(m)


def _equation_entries(A, B, allowed, dA):
    """Yield (equation index, variable index, coefficient) for X A - B X = 0."""
    a_rows = _row_access(A)
    b_cols = _col_access(B)
    for v, (i, k) in enumerate(allowed):
        for c, a in a_rows.get(k, ()):
            yield i * dA + c, v, a
        for r, b in b_cols.get(i, ()):
            yield r * dA + k, v, -b


def intertwiner_space(gens_a, gens_b, *, tol: float = DEFAULT_TOL, seed: int = 0) -> Solution:
    """Basis of {X : X A_g = B_g X for all g} for paired generator lists.

    The generator sets are closed under adjoints before solving, so the result
    is the intertwiner space of the generated *-algebras.  Diagonal generator
    pairs restrict the unknown positions up front; in float mode with no
    diagonal pair, both sides are first rotated into the eigenbasis of a
    random Hermitian element of the generated algebra.
    """
    gens_a, gens_b = list(gens_a), list(gens_b)
    if len(gens_a) != len(gens_b):
        raise ValueError("generator lists must pair up")
    if not gens_a:
        raise ValueError("need at least one generator")
    dA, dB = gens_a[0].shape[0], gens_b[0].shape[0]
    exact = all(isinstance(g, ExactMatrix) for g in gens_a + gens_b)
    if exact:
        return _exact_intertwiners(gens_a, gens_b, dA, dB)
    return _float_intertwiners([as_array(g) for g in gens_a], [as_array(g) for g in gens_b],
                               dA, dB, tol, seed)


def _exact_intertwiners(gens_a, gens_b, dA, dB) -> Solution:
    pairs = [(A, B) for A, B in zip(gens_a, gens_b)
             if not (_is_zero_matrix(A) and _is_zero_matrix(B))]
    pairs = _star_close(pairs, lambda m: m.is_hermitian())
    diag_pairs = [(A, B) for A, B in pairs if A.is_diagonal() and B.is_diagonal()]
    rest = [(A, B) for A, B in pairs if not (A.is_diagonal() and B.is_diagonal())]
    labels_a, labels_b = _exact_labels(diag_pairs, dA, dB)
    allowed = _allowed_from_labels(labels_a, labels_b)
    reducer = RowReducer(len(allowed))
    for A, B in rest:
        eqs: dict[int, dict[int, object]] = {}
        for e, v, c in _equation_entries(A, B, allowed, dA):
            row = eqs.setdefault(e, {})
            row[v] = row[v] + c if v in row else c
        for row in eqs.values():
            reducer.add(row)
    basis = []
    for vec in reducer.kernel():
        basis.append(ExactMatrix.from_entries((dB, dA), ((allowed[v][0], allowed[v][1], c)
                                                         for v, c in vec.items())))
    return Solution(basis, exact=True)


def _float_intertwiners(gens_a, gens_b, dA, dB, tol, seed) -> Solution:
    pairs = [(A, B) for A, B in zip(gens_a, gens_b) if np.any(A) or np.any(B)]
    pairs = _star_close(pairs, lambda m: np.array_equal(m, m.conj().T))

    def diagonal(m):
        return not np.any(m - np.diag(np.diag(m)))

    diag_pairs = [(A, B) for A, B in pairs if diagonal(A) and diagonal(B)]
    scale = max([1.0] + [float(np.max(np.abs(m))) for pr in pairs for m in pr if m.size])
    VA = VB = None
    if not pairs:
        mask = np.ones((dB, dA), dtype=bool)
        rest = []
    elif diag_pairs:
        mask = np.ones((dB, dA), dtype=bool)
        for A, B in diag_pairs:
            mask &= np.abs(np.diag(B)[:, None] - np.diag(A)[None, :]) <= 1e-12 * scale
        rest = [(A, B) for A, B in pairs if not (diagonal(A) and diagonal(B))]
    else:
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal(len(pairs))
        HA = sum(c * (A + A.conj().T) for c, (A, _) in zip(coeffs, pairs))
        HB = sum(c * (B + B.conj().T) for c, (_, B) in zip(coeffs, pairs))
        la, VA = np.linalg.eigh(HA)
        lb, VB = np.linalg.eigh(HB)
        hscale = max(1.0, float(np.max(np.abs(la))) if la.size else 1.0)
        mask = np.abs(lb[:, None] - la[None, :]) <= 1e-6 * hscale
        rest = [(VA.conj().T @ A @ VA, VB.conj().T @ B @ VB) for A, B in pairs]
    allowed = list(zip(*np.nonzero(mask)))
    allowed = [(int(i), int(k)) for i, k in allowed]
    acc = _QRAccumulator(len(allowed))
    for A, B in rest:
        entries = list(_equation_entries(A, B, allowed, dA))
        if not entries:
            continue
        eq, var, val = zip(*entries)
        uniq, inv = np.unique(np.asarray(eq), return_inverse=True)
        block = np.zeros((uniq.size, len(allowed)), dtype=complex)
        np.add.at(block, (inv, np.asarray(var)), np.asarray(val, dtype=complex))
        acc.add(block)
    null, info = acc.kernel(tol, max(dA, dB), scale)
    basis = []
    for col in null.T:
        Y = np.zeros((dB, dA), dtype=complex)
        for v, (i, k) in enumerate(allowed):
            Y[i, k] = col[v]
        if VA is not None:
            Y = VB @ Y @ VA.conj().T
        basis.append(Y)
    return Solution(basis, exact=False, rank_info=info)


def common_kernel(mats, *, tol: float = DEFAULT_TOL) -> Solution:
    """Basis of the intersection of the kernels of the given square matrices."""
    mats = list(mats)
    n = mats[0].shape[1]
    if all(isinstance(m, ExactMatrix) for m in mats):
        reducer = RowReducer(n)
        for m in mats:
            for row in m.rows.values():
                reducer.add(dict(row))
        basis = []
        for vec in reducer.kernel():
            x = np.array([Fraction(0)] * n, dtype=object)
            for v, c in vec.items():
                x[v] = c
            basis.append(x)
        return Solution(basis, exact=True)
    acc = _QRAccumulator(n)
    scale = 0.0
    for m in mats:
        arr = as_array(m)
        scale = max(scale, float(np.max(np.abs(arr))) if arr.size else 0.0)
        acc.add(arr)
    null, info = acc.kernel(tol, n, scale)
    return Solution(list(null.T), exact=False, rank_info=info)


# --------------------------------------------------------------------------
# ranks of vector families


def _primitive_root_prime(order: int, bits: int = 55) -> tuple[int, int]:
    """A prime l = 1 mod order together with an element of exact order `order` mod l."""
    t = (1 << bits) // order
    while True:
        ell = order * t + 1
        if flint.fmpz(ell).is_prime():
            break
        t += 1
    primes = [int(f) for f, _ in flint.fmpz(order).factor()] if order > 1 else []
    rng = random.Random(order)
    while True:
        g = pow(rng.randrange(2, ell - 1), (ell - 1) // order, ell)
        if all(pow(g, order // r, ell) != 1 for r in primes):
            return ell, g


def _reduce_mod(x, ell: int, g: int, order: int) -> int:
    if isinstance(x, Cyclotomic):
        step = order // x.order
        total = 0
        for k, c in enumerate(x.poly.coeffs()):
            total += int(c.p) * pow(int(c.q), -1, ell) * pow(g, k * step, ell)
        return total % ell
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, ell) % ell


def exact_rank(vectors) -> int:
    """Rank over the cyclotomic field of a family of exact vectors.

    A full rank found after reduction modulo a split prime certifies full rank
    in characteristic zero; otherwise the rank is computed by elimination.
    """
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    ncols = len(vectors[0])
    flat = [x for v in vectors for x in v]
    order = _common_order(flat)
    if order > 2 and any(not is_rational(x) for x in flat):
        ell, g = _primitive_root_prime(order)
        try:
            mat = flint.nmod_mat(len(vectors), ncols,
                                 [_reduce_mod(x, ell, g, order) for x in flat], ell)
            r = mat.rank()
            if r == min(len(vectors), ncols):
                return r
        except ValueError:
            pass  # a denominator divisible by l: fall through to elimination
    reducer = RowReducer(ncols)
    for v in vectors:
        reducer.add({j: x for j, x in enumerate(v) if not _is_zero(x)})
    return reducer.rank


def float_rank(vectors, tol: float = DEFAULT_TOL) -> FloatRank:
    arr = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if arr.size == 0:
        return FloatRank(0, np.zeros(0), 0.0)
    s = np.linalg.svd(arr, compute_uv=False)
    thr = tol * float(s.max()) * max(arr.shape)
    return FloatRank(int(np.sum(s > thr)), s, thr)


def character_family_rank(y, exponents, M: int, N: int) -> int:
    """Exact rank of the vectors (omega^(i e_j) y_j)_j, 0 <= i < N, omega = e^(2 pi i / M).

    The matrix is reduced modulo a split prime without building cyclotomic
    entries; only an inconclusive reduction falls back to elimination.
    """
    y = list(y)
    order = _common_order(y)
    order = order * M // gcd(order, M)
    dim = len(y)
    if order > 2:
        ell, g = _primitive_root_prime(order)
        try:
            yr = [_reduce_mod(v, ell, g, order) for v in y]
            w = pow(g, order // M, ell)
            table = [pow(w, r, ell) for r in range(M)]
            entries = [yr[j] * table[(i * e) % M] % ell for i in range(N) for j, e in enumerate(exponents)]
            r = flint.nmod_mat(N, dim, entries, ell).rank()
            if r == min(N, dim):
                return r
        except ValueError:
            pass
    vecs = [[root_of_unity(M, i * e) * v for e, v in zip(exponents, y)] for i in range(N)]
    return exact_rank(vecs)
