"""Conjugate-gradient solvers over Krylov spaces, a ridge baseline, and an oracle.

``cg_fit`` runs the normal-equations recursion: at step m it returns the
coefficient vector minimizing the kernel-weighted residual seminorm over the
Krylov space span{Y, KY, ..., K^(m-1)Y}. The ``euclidean`` mode swaps every
weighted inner product for the plain rescaled Euclidean one, which is the
classical minimum-error / partial-least-squares variant. ``krylov_oracle``
solves the same minimization by explicit basis construction and dense least
squares; it is deliberately independent of the recursion so the two can
check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import InvalidInput, NumericalFailure
from .kernels import KernelMatrix, KernelSpec

Mode = Literal["kn_norm", "euclidean"]

#: Breakdown is declared when a basis norm falls to this fraction of the first.
BREAKDOWN_RTOL = 1e-12


@dataclass(frozen=True)
class CgTrace:
    """Complete per-iteration record of one conjugate-gradient run.

    Fields
    ------
    alphas : ndarray, shape (m_last + 1, n)
        Row m is the coefficient vector after m iterations; row 0 is zero.
    residual_norms : list of float
        Norm of Y - K @ alpha_m for m = 0..m_last, measured in the norm the
        mode minimizes (kernel-weighted for ``kn_norm``, rescaled Euclidean
        for ``euclidean``). Non-increasing in m.
    basis_norms : list of float
        Norm of each new basis vector before normalization, one entry per
        attempted iteration (including the one at which breakdown was
        declared, when it was).
    breakdown_at : int or None
        Iteration index at which the run stopped early, either because the
        basis norm fell below tolerance or because the step no longer
        reduced the residual (numerical floor reached).
    m_last : int
        Number of completed iterations.
    mode : str
        Which norm the run minimized.
    """

    alphas: np.ndarray
    residual_norms: list[float]
    basis_norms: list[float]
    breakdown_at: int | None
    m_last: int
    mode: str

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "alphas", a)


@dataclass(frozen=True)
class RidgeSolution:
    """Coefficients of the penalized least-squares baseline at one lambda."""

    alpha: np.ndarray
    lam: float

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)


def _check_system(K: KernelMatrix, Y) -> np.ndarray:
    y = np.asarray(Y, dtype=float).ravel()
    if y.size != K.n:
        raise InvalidInput(f"dimension mismatch: Y has {y.size}, matrix has {K.n}")
    return y


def cg_fit(
    K: KernelMatrix,
    Y,
    max_iter: int | None = None,
    mode: Mode = "kn_norm",
    reorthogonalize: bool = False,
) -> CgTrace:
    """Run the conjugate-gradient recursion and record every iterate.

    Parameters
    ----------
    K : KernelMatrix
        Normalized kernel matrix.
    Y : array-like, shape (n,)
        Response vector.
    max_iter : int, optional
        Iteration budget; defaults to n and is capped at n.
    mode : {"kn_norm", "euclidean"}
        Norm minimized over the growing Krylov spaces.
    reorthogonalize : bool
        Re-orthogonalize each new basis vector against all previous ones
        (cost O(m n) extra per iteration). Diagnostics only; the plain
        recursion is the default.

    Returns
    -------
    CgTrace

    Raises
    ------
    InvalidInput
        On dimension mismatch or unknown mode.
    NumericalFailure
        If a non-finite value appears; carries the iteration index.
    """
    if mode not in ("kn_norm", "euclidean"):
        raise InvalidInput(f"mode must be 'kn_norm' or 'euclidean', got {mode!r}")
    y = _check_system(K, Y)
    n = K.n
    if max_iter is None:
        max_iter = n
    max_iter = min(int(max_iter), n)
    if max_iter < 0:
        raise InvalidInput(f"max_iter must be nonnegative, got {max_iter}")

    kn = K.entries
    weighted = mode == "kn_norm"

    def mode_norm(vec: np.ndarray, kvec: np.ndarray) -> float:
        # kvec must equal kn @ vec; the weighted norm reuses it for free.
        if weighted:
            return float(np.sqrt(max(vec @ kvec, 0.0) / n))
        return float(np.sqrt((vec @ vec) / n))

    alpha = np.zeros(n)
    r = y.copy()
    kr = kn @ r
    d = y.copy()
    t = kr.copy()  # t = kn @ d throughout

    alphas = [alpha.copy()]
    residual_norms = [mode_norm(r, kr)]
    basis_norms: list[float] = []
    breakdown_at: int | None = None
    break_floor: float | None = None

    # Kept only under reorthogonalize: normalized basis vectors and, in the
    # weighted mode, their images under the matrix.
    t_hist: list[np.ndarray] = []
    d_hist: list[np.ndarray] = []
    kt_hist: list[np.ndarray] = []

    m_done = 0
    for i in range(1, max_iter + 1):
        kt = kn @ t
        s = mode_norm(t, kt)
        if not np.isfinite(s):
            raise NumericalFailure(
                f"non-finite basis norm at iteration {i}", iteration=i
            )
        basis_norms.append(s)
        if break_floor is None:
            break_floor = BREAKDOWN_RTOL * s
        if s <= break_floor:
            breakdown_at = i
            break

        t = t / s
        d = d / s
        kt = kt / s

        # Projecting the current residual is algebraically identical to
        # projecting the full response (earlier basis vectors are orthogonal
        # to it) but does not amplify late-iteration basis drift.
        gamma = float(r @ kt) / n if weighted else float(r @ t) / n
        if not np.isfinite(gamma):
            raise NumericalFailure(
                f"non-finite projection at iteration {i}", iteration=i
            )
        alpha_new = alpha + gamma * d
        r_new = r - gamma * t
        kr_new = kr - gamma * kt
        res_new = mode_norm(r_new, kr_new)

        if res_new > residual_norms[-1]:
            # No progress: the basis has degenerated to rounding noise, so
            # the step carries no information. Discard it and stop.
            breakdown_at = i
            break
        alpha, r, kr = alpha_new, r_new, kr_new

        alphas.append(alpha.copy())
        residual_norms.append(res_new)
        m_done = i

        beta = float(kt @ kr) / n if weighted else float(t @ kr) / n
        d_new = r - beta * d
        t_new = kr - beta * t  # equals kn @ d_new by linearity

        if reorthogonalize:
            t_hist.append(t)
            d_hist.append(d)
            if weighted:
                kt_hist.append(kt)
            for _ in range(2):
                for j in range(len(t_hist)):
                    if weighted:
                        c = float(t_new @ kt_hist[j]) / n
                    else:
                        c = float(t_new @ t_hist[j]) / n
                    t_new = t_new - c * t_hist[j]
                    d_new = d_new - c * d_hist[j]

        d = d_new
        t = t_new

    return CgTrace(
        alphas=np.array(alphas),
        residual_norms=residual_norms,
        basis_norms=basis_norms,
        breakdown_at=breakdown_at,
        m_last=m_done,
        mode=mode,
    )


def krylov_oracle(K: KernelMatrix, Y, m: int, mode: Mode = "kn_norm") -> np.ndarray:
    """Directly minimize the mode's residual norm over the order-m Krylov space.

    Forms the power basis {Y, KY, ..., K^(m-1)Y} explicitly, orthonormalizes
    it with rank detection, and solves the reduced least-squares problem
    densely. Rank-deficient bases are truncated to their numerical dimension,
    so m beyond the reachable space returns the terminal solution.
    """
    if mode not in ("kn_norm", "euclidean"):
        raise InvalidInput(f"mode must be 'kn_norm' or 'euclidean', got {mode!r}")
    y = _check_system(K, Y)
    n = K.n
    m = int(m)
    if m < 0:
        raise InvalidInput(f"m must be nonnegative, got {m}")
    if m == 0 or not np.any(y):
        return np.zeros(n)

    kn = K.entries
    cols = [y]
    for _ in range(min(m, n) - 1):
        cols.append(kn @ cols[-1])
    v = np.column_stack(cols)
    # Guard against overflow/underflow across powers before rank detection.
    scale = np.linalg.norm(v, axis=0)
    scale[scale == 0] = 1.0
    v = v / scale

    u_full, sv, _ = np.linalg.svd(v, full_matrices=False)
    tol = sv[0] * max(v.shape) * np.finfo(float).eps
    rank = int(np.sum(sv > tol))
    u = u_full[:, :rank]

    ku = kn @ u
    if mode == "euclidean":
        coef, *_ = np.linalg.lstsq(ku, y, rcond=None)
    else:
        lam, q = np.linalg.eigh(kn)
        root = (q * np.sqrt(np.clip(lam, 0.0, None))) @ q.T
        coef, *_ = np.linalg.lstsq(root @ ku, root @ y, rcond=None)
    return u @ coef


def ridge_fit(K: KernelMatrix, Y, lam: float) -> RidgeSolution:
    """Solve (K + lam * I) alpha = Y by a symmetric positive-definite solve."""
    if not lam > 0:
        raise InvalidInput(f"lambda must be positive, got {lam}")
    y = _check_system(K, Y)
    a = K.entries + lam * np.eye(K.n)
    factor = scipy.linalg.cho_factor(a, lower=True)
    alpha = scipy.linalg.cho_solve(factor, y)
    return RidgeSolution(alpha=alpha, lam=float(lam))


def predict(alpha, train_points, kernel: KernelSpec, query_points) -> np.ndarray:
    """Evaluate the kernel expansion (1/n) * sum_i alpha_i k(X_i, x) pointwise."""
    alpha = np.asarray(alpha, dtype=float).ravel()
    x = np.asarray(train_points, dtype=float).ravel()
    if alpha.size != x.size:
        raise InvalidInput(
            f"dimension mismatch: alpha has {alpha.size}, train has {x.size}"
        )
    q = np.atleast_1d(np.asarray(query_points, dtype=float)).ravel()
    cross = kernel.gram(q, x)
    return (cross @ alpha) / x.size
