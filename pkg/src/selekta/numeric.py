"""Small dense linear algebra and seeded randomness.

Matrices are plain 2-D ``float64`` numpy arrays; nothing here needs more
than the handful of operations the regressions below rely on.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ContractError, SingularDesignError, ZeroVarianceError

RANK_TOL = 1e-10


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ContractError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ContractError("matrix contains non-finite entries")
    return X


def qr_least_squares(X, y, names=None) -> np.ndarray:
    """Least-squares coefficients via Householder QR.

    Parameters
    ----------
    X : (n, k) array
        Design matrix, ``n >= k``.
    y : (n,) array
    names : sequence of str, optional
        Column labels used in the singular-design message.

    Raises
    ------
    SingularDesignError
        If ``|R_ii| < 1e-10 * max_j |R_jj|`` for some column ``i``; the
        first such column (in design order) is reported.
    """
    X = as_matrix(X)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n < k:
        raise ContractError(f"need n >= k, got n={n}, k={k}")
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    scale = diag.max() if k else 0.0
    bad = np.flatnonzero(diag < RANK_TOL * scale) if scale > 0 else np.arange(k)
    if bad.size:
        i = int(bad[0])
        raise SingularDesignError(i, None if names is None else names[i])
    return _back_substitute(R, Q.T @ y)


def _back_substitute(R, b):
    return solve_triangular(R, b, lower=False, check_finite=False)


def qr_inverse_gram(X) -> np.ndarray:
    """``(X^T X)^{-1}`` from the R factor, without forming ``X^T X``."""
    X = as_matrix(X)
    _, R = np.linalg.qr(X, mode="reduced")
    Rinv = _back_substitute(R, np.eye(R.shape[0]))
    return Rinv @ Rinv.T


def eig_symmetric(S, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns.
    """
    A = as_matrix(S).copy()
    p = A.shape[0]
    if A.shape != (p, p):
        raise ContractError(f"expected a square matrix, got {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12):
        raise ContractError("matrix is not symmetric within 1e-12")
    A = 0.5 * (A + A.T)
    V = np.eye(p)
    norm = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * norm:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                if abs(aij) < 1e-300:
                    continue
                theta = (A[j, j] - A[i, i]) / (2.0 * aij)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J on rows/cols i, j
                Ai = A[:, i].copy()
                Aj = A[:, j].copy()
                A[:, i] = c * Ai - s * Aj
                A[:, j] = s * Ai + c * Aj
                Ai = A[i, :].copy()
                Aj = A[j, :].copy()
                A[i, :] = c * Ai - s * Aj
                A[j, :] = s * Ai + c * Aj
                Vi = V[:, i].copy()
                V[:, i] = c * Vi - s * V[:, j]
                V[:, j] = s * Vi + c * V[:, j]
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], V[:, order]


def pearson_correlation(X, names=None) -> np.ndarray:
    """Pearson correlation matrix of the columns of ``X``."""
    X = as_matrix(X)
    Xc = X - X.mean(axis=0)
    ss = np.sqrt(np.sum(Xc * Xc, axis=0))
    for j, s in enumerate(ss):
        if s == 0.0 or s < 1e-14 * max(1.0, np.abs(X[:, j]).max()):
            raise ZeroVarianceError(names[j] if names is not None else j)
    Z = Xc / ss
    C = Z.T @ Z
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 1.0)
    return np.clip(C, -1.0, 1.0)


class RngStream:
    """Seeded PCG64 stream with index-addressed substreams.

    Substream ``i`` of a stream is derived from the seed and the full path
    of indices leading to it, never from how many draws the parent has
    made. Forests use ``substream(tree_index)``, CV repeats use
    ``substream(repeat)``, so serial and parallel runs see the same numbers.
    A stream must not be shared between threads; split it instead.
    """

    def __init__(self, seed: int, path: tuple = ()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.path = tuple(int(i) for i in path)
        ss = np.random.SeedSequence(seed, spawn_key=self.path)
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, *index) -> "RngStream":
        return RngStream(self.seed, self.path + tuple(index))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, path={self.path})"

    def random(self, size=None):
        return self.generator.random(size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size=size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def permutation(self, x):
        return self.generator.permutation(x)

    def choice(self, a, size=None, replace=True):
        return self.generator.choice(a, size=size, replace=replace)

    def bits(self, size):
        """Raw 64-bit draws; used for byte-level determinism checks."""
        return self.generator.integers(0, 2**64, size=size, dtype=np.uint64)
