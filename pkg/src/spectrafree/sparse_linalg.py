"""CSR sparse kernels and SPD solvers.

Everything spectrum-free in this package funnels through three primitives:
a hand-rolled CSR matrix-vector product, a (optionally Jacobi-preconditioned,
optionally mass-weighted) conjugate gradient, and a reusable sparse
factorization for systems that are solved many times with the same matrix.
"""

from __future__ import annotations

import numpy as np

from ._errors import DefinitenessError, DimensionError, SolverError, ValidationError

DEFAULT_TOL = 1e-10
DIRECT_SOLVE_MAX_N = 5000


class SparseMatrix:
    """Compressed sparse row matrix with sorted, duplicate-free rows."""

    __slots__ = ("n_rows", "n_cols", "row_ptr", "col_idx", "values")

    def __init__(self, n_rows, n_cols, row_ptr, col_idx, values):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(col_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self._validate()

    def _validate(self):
        if self.row_ptr.shape != (self.n_rows + 1,):
            raise ValidationError("row_ptr must have length n_rows + 1")
        if np.any(np.diff(self.row_ptr) < 0):
            raise ValidationError("row_ptr must be nondecreasing")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != len(self.values):
            raise ValidationError("row_ptr endpoints inconsistent with values")
        if len(self.col_idx) != len(self.values):
            raise ValidationError("col_idx and values length mismatch")
        if len(self.col_idx) and (
            self.col_idx.min() < 0 or self.col_idx.max() >= self.n_cols
        ):
            raise ValidationError("column index out of range")
        for r in range(self.n_rows):
            lo, hi = self.row_ptr[r], self.row_ptr[r + 1]
            cols = self.col_idx[lo:hi]
            if np.any(np.diff(cols) <= 0):
                raise ValidationError(f"row {r}: columns not sorted or duplicated")

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, vals):
        """Build from triplets; duplicates are summed."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if not (len(rows) == len(cols) == len(vals)):
            raise DimensionError("triplet arrays must have equal length")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            keep = np.empty(len(rows), dtype=bool)
            keep[0] = True
            keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            group = np.cumsum(keep) - 1
            summed = np.zeros(group[-1] + 1, dtype=np.float64)
            np.add.at(summed, group, vals)
            rows, cols, vals = rows[keep], cols[keep], summed
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.add.at(row_ptr, rows + 1, 1)
        np.cumsum(row_ptr, out=row_ptr)
        return cls(n_rows, n_cols, row_ptr, cols, vals)

    @classmethod
    def identity(cls, n):
        return cls.diagonal(np.ones(n))

    @classmethod
    def diagonal(cls, d):
        d = np.asarray(d, dtype=np.float64)
        n = len(d)
        return cls(n, n, np.arange(n + 1), np.arange(n), d.copy())

    @property
    def nnz(self):
        return len(self.values)

    def to_dense(self):
        out = np.zeros((self.n_rows, self.n_cols))
        for r in range(self.n_rows):
            lo, hi = self.row_ptr[r], self.row_ptr[r + 1]
            out[r, self.col_idx[lo:hi]] = self.values[lo:hi]
        return out

    def diag(self):
        """Main diagonal as a dense vector (absent entries are 0)."""
        d = np.zeros(min(self.n_rows, self.n_cols))
        for r in range(len(d)):
            lo, hi = self.row_ptr[r], self.row_ptr[r + 1]
            pos = np.searchsorted(self.col_idx[lo:hi], r)
            if pos < hi - lo and self.col_idx[lo + pos] == r:
                d[r] = self.values[lo + pos]
        return d

    def scaled(self, c):
        return SparseMatrix(
            self.n_rows, self.n_cols, self.row_ptr, self.col_idx, c * self.values
        )

    def add_diagonal(self, d):
        """Return self + diag(d) as a new matrix."""
        d = np.asarray(d, dtype=np.float64)
        if self.n_rows != self.n_cols or len(d) != self.n_rows:
            raise DimensionError("diagonal length must match a square matrix")
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))
        rows = np.concatenate([rows, np.arange(self.n_rows)])
        cols = np.concatenate([self.col_idx, np.arange(self.n_rows)])
        vals = np.concatenate([self.values, d])
        return SparseMatrix.from_coo(self.n_rows, self.n_cols, rows, cols, vals)

    def __matmul__(self, x):
        return spmv(self, x)


class SolveReport:
    """Outcome of an iterative or direct solve.

    residual_norm is absolute; converged means residual_norm fell at or
    below the requested tolerance times the right-hand-side norm.
    """

    __slots__ = ("iterations", "residual_norm", "converged")

    def __init__(self, iterations, residual_norm, converged):
        self.iterations = int(iterations)
        self.residual_norm = float(residual_norm)
        self.converged = bool(converged)

    def as_dict(self):
        return {
            "iterations": self.iterations,
            "residual_norm": self.residual_norm,
            "converged": self.converged,
        }

    def __repr__(self):
        return (
            f"SolveReport(iterations={self.iterations}, "
            f"residual_norm={self.residual_norm:.3e}, converged={self.converged})"
        )


def spmv(A: SparseMatrix, x) -> np.ndarray:
    """y = A x for CSR A. Empty rows yield exact zeros."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.n_cols,):
        raise DimensionError(f"operand length {x.shape} != {A.n_cols}")
    if A.nnz == 0:
        return np.zeros(A.n_rows)
    prod = A.values * x[A.col_idx]
    # reduceat misreads empty rows (repeated or out-of-range offsets); mask and patch.
    starts = A.row_ptr[:-1]
    y = np.zeros(A.n_rows)
    valid = starts < A.nnz
    y[valid] = np.add.reduceat(prod, starts[valid])
    empty = np.diff(A.row_ptr) == 0
    if empty.any():
        y[empty] = 0.0
    return y


def _as_operator(apply):
    if isinstance(apply, SparseMatrix):
        return lambda v: spmv(apply, v)
    return apply


def cg_solve(
    apply,
    b,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
    precond=None,
    inner_weight=None,
):
    """Conjugate gradient for an SPD operator, matrix-free friendly.

    Parameters
    ----------
    apply : SparseMatrix or callable
        The operator action v -> A v. Must be self-adjoint positive definite
        in the (optionally weighted) inner product.
    b : array
        Right-hand side.
    tol : float
        Relative residual target, ||A x - b|| <= tol * ||b||.
    max_iter : int, optional
        Defaults to 10 * n.
    precond : array, optional
        Jacobi preconditioner diagonal; entries must be positive.
    inner_weight : array, optional
        Diagonal weights of the inner product. Needed when the operator is
        self-adjoint only in a mass-weighted product, e.g. polynomials of
        the random-walk Laplacian.

    Returns
    -------
    (x, SolveReport)
        Non-convergence is reported, not raised; callers decide severity.
    """
    op = _as_operator(apply)
    b = np.asarray(b, dtype=np.float64)
    n = len(b)
    if max_iter is None:
        max_iter = 10 * n
    w = np.ones(n) if inner_weight is None else np.asarray(inner_weight, np.float64)
    if precond is not None:
        md = np.asarray(precond, dtype=np.float64)
        if np.any(md <= 0):
            raise DefinitenessError("Jacobi preconditioner requires positive diagonal")
        apply_prec = lambda r: r / md
    else:
        apply_prec = lambda r: r

    def dot(u, v):
        return float(u @ (w * v))

    bnorm = np.sqrt(dot(b, b))
    if bnorm == 0.0:
        return np.zeros(n), SolveReport(0, 0.0, True)
    x = np.zeros(n)
    r = b.copy()
    z = apply_prec(r)
    p = z.copy()
    rz = dot(r, z)
    res = np.sqrt(dot(r, r))
    it = 0
    while res > tol * bnorm and it < max_iter:
        Ap = op(p)
        pAp = dot(p, Ap)
        if pAp <= 0 or not np.isfinite(pAp):
            raise DefinitenessError("operator is not positive definite on search space")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        res = np.sqrt(dot(r, r))
        z = apply_prec(r)
        rz_new = dot(r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        it += 1
    return x, SolveReport(it, res, res <= tol * bnorm)


class Factorization:
    """Reusable sparse LU of an SPD matrix (scipy SuperLU underneath).

    Immutable once built; concurrent solves are safe since each solve only
    reads the factors.
    """

    def __init__(self, A: SparseMatrix):
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import splu

        if A.n_rows != A.n_cols:
            raise DimensionError("factorization requires a square matrix")
        dense_check = A.to_dense() if A.n_rows <= 64 else None
        if dense_check is not None and not np.allclose(
            dense_check, dense_check.T, atol=1e-12 * max(1.0, np.abs(dense_check).max())
        ):
            raise DefinitenessError("matrix is not symmetric")
        sp = csr_matrix(
            (A.values, A.col_idx, A.row_ptr), shape=(A.n_rows, A.n_cols)
        ).tocsc()
        try:
            self._lu = splu(sp)
        except RuntimeError as exc:  # singular factor
            raise DefinitenessError(f"factorization failed: {exc}") from exc
        u_diag = self._lu.U.diagonal()
        if not np.all(np.isfinite(u_diag)) or np.min(np.abs(u_diag)) <= (
            1e-13 * max(1.0, np.max(np.abs(u_diag)))
        ):
            raise DefinitenessError("matrix is numerically singular")
        self.n = A.n_rows
        self._A = A
        # cheap SPD probe: Rayleigh quotients on a few fixed random vectors
        rng = np.random.default_rng(12345)
        for _ in range(3):
            v = rng.standard_normal(self.n)
            if float(v @ spmv(A, v)) <= 0:
                raise DefinitenessError("matrix fails the positive-definiteness probe")

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=np.float64)
        if b.shape != (self.n,):
            raise DimensionError(f"rhs length {b.shape} != {self.n}")
        return self._lu.solve(b)


def prefactorize(A: SparseMatrix) -> Factorization:
    """Factor an SPD matrix once; reuse across many right-hand sides."""
    return Factorization(A)


def make_solver(A: SparseMatrix, direct_max_n: int = DIRECT_SOLVE_MAX_N,
                tol: float = DEFAULT_TOL):
    """Reusable solve closure for an SPD matrix.

    Direct factorization up to direct_max_n unknowns, Jacobi-preconditioned
    CG beyond; both agree to well below the filter approximation errors this
    package cares about.
    """
    if A.n_rows <= direct_max_n:
        return prefactorize(A).solve
    diag = A.diag()

    def solve(b):
        x, report = cg_solve(A, b, tol=tol, precond=diag)
        if not report.converged:
            raise SolverError("CG did not converge", report)
        return x

    return solve


def write_matrix_market(A: SparseMatrix, path):
    """Write CSR content in MatrixMarket coordinate format.

    Values are printed with shortest round-trip decimals, so a read-back
    reproduces the stored doubles bit-exactly.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write(f"{A.n_rows} {A.n_cols} {A.nnz}\n")
        for r in range(A.n_rows):
            lo, hi = A.row_ptr[r], A.row_ptr[r + 1]
            for k in range(lo, hi):
                fh.write(f"{r + 1} {A.col_idx[k] + 1} {float(A.values[k])!r}\n")


def read_matrix_market(path) -> SparseMatrix:
    rows, cols, vals = [], [], []
    n_rows = n_cols = nnz = None
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("%%MatrixMarket matrix coordinate real"):
            raise ValidationError(f"{path}: unsupported MatrixMarket header")
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if n_rows is None:
                n_rows, n_cols, nnz = (int(t) for t in line.split())
                continue
            r, c, v = line.split()
            rows.append(int(r) - 1)
            cols.append(int(c) - 1)
            vals.append(float(v))
    if n_rows is None:
        raise ValidationError(f"{path}: missing size line")
    if nnz != len(vals):
        raise ValidationError(f"{path}: expected {nnz} entries, found {len(vals)}")
    return SparseMatrix.from_coo(n_rows, n_cols, rows, cols, vals)
