"""Discrepancy-principle thresholds, stop-index selection, and hold-out choice.

Two closed-form threshold formulas cover the two regularity regimes the
theory distinguishes: targets inside the hypothesis space (``threshold_inner``,
requiring smoothness r >= 1/2) and targets outside it (``threshold_outer``,
r < 1/2, where unlabeled padding enters and the response scale is replaced by
max(rho, M)). Both formulas are literal; their constants are conservative by
design. ``threshold_calibrated`` keeps the same dependence on the sample size
but anchors the constant to the empirical noise floor, which is what the
experiment harness uses by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NotReached
from .kernels import KernelSpec
from .solvers import CgTrace


@dataclass(frozen=True)
class ThresholdParams:
    """Inputs of the stopping-threshold formulas.

    Fields
    ------
    M : float
        Noise/response scale bound.
    kappa : float
        Kernel diagonal bound sup_x k(x, x).
    D : float
        Effective-dimension constant, at least 1.
    n : int
        Number of labeled observations.
    gamma : float
        Failure probability in (0, 1).
    r : float
        Source smoothness exponent.
    s : float
        Eigenvalue decay parameter in (0, 1).
    tau_prime : float
        Safety multiplier; the admissible range depends on the regime.
    rho : float, optional
        Source norm scale; required by the outer-regime formula.
    """

    M: float
    kappa: float
    D: float
    n: int
    gamma: float
    r: float
    s: float
    tau_prime: float
    rho: float | None = None

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidInput(f"M must be positive, got {self.M}")
        if not self.kappa > 0:
            raise InvalidInput(f"kappa must be positive, got {self.kappa}")
        if not self.D >= 1:
            raise InvalidInput(f"D must be at least 1, got {self.D}")
        if not self.n >= 1:
            raise InvalidInput(f"n must be a positive integer, got {self.n}")
        if not 0 < self.gamma < 1:
            raise InvalidInput(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.r > 0:
            raise InvalidInput(f"r must be positive, got {self.r}")
        if not 0 < self.s < 1:
            raise InvalidInput(f"s must lie in (0, 1), got {self.s}")
        if self.rho is not None and not self.rho > 0:
            raise InvalidInput(f"rho must be positive, got {self.rho}")


@dataclass(frozen=True)
class ThresholdResult:
    """A stopping threshold plus the sample-size admissibility verdict.

    ``admissible`` reports whether n satisfies the regime's large-sample
    condition; it is informational and nothing downstream enforces it,
    so undersized sweeps still run flagged.
    """

    omega: float
    admissible: bool


def _bracket(p: ThresholdParams) -> float:
    return (4.0 * p.D / math.sqrt(p.n)) * math.log(6.0 / p.gamma)


def threshold_inner(p: ThresholdParams) -> ThresholdResult:
    """Stopping threshold for targets inside the hypothesis space.

    Omega = tau' * M * sqrt(kappa) * ((4D/sqrt(n)) * log(6/gamma)) ** e
    with e = (2r + 1) / (2r + s). Requires tau' > 3/2 and r >= 1/2.
    Admissible when n >= 16 * D^2 * log^2(6/gamma).
    """
    if not p.tau_prime > 1.5:
        raise InvalidInput(
            f"inner regime requires tau_prime > 3/2, got {p.tau_prime}"
        )
    if not p.r >= 0.5:
        raise InvalidInput(f"inner regime requires r >= 1/2, got r={p.r}")
    exponent = (2.0 * p.r + 1.0) / (2.0 * p.r + p.s)
    omega = p.tau_prime * p.M * math.sqrt(p.kappa) * _bracket(p) ** exponent
    admissible = p.n >= 16.0 * p.D**2 * math.log(6.0 / p.gamma) ** 2
    return ThresholdResult(omega=omega, admissible=admissible)


def threshold_outer(p: ThresholdParams) -> ThresholdResult:
    """Stopping threshold for targets outside the hypothesis space.

    Omega = tau' * max(rho, M) * sqrt(kappa) * ((4D/sqrt(n)) * log(6/gamma)) ** e
    with e = (2r + 1) / (2r + s). Requires tau' > 6, r < 1/2, r + s >= 1/2.
    Admissible when n >= 16 * D^2 * log^2(4/gamma); the 6 inside the
    threshold and the 4 inside the admissibility bound are both intentional.
    """
    if not p.tau_prime > 6.0:
        raise InvalidInput(f"outer regime requires tau_prime > 6, got {p.tau_prime}")
    if not p.r < 0.5:
        raise InvalidInput(f"outer regime requires r < 1/2, got r={p.r}")
    if not p.r + p.s >= 0.5:
        raise InvalidInput(
            f"outer regime requires r + s >= 1/2, got r+s={p.r + p.s}"
        )
    if p.rho is None:
        raise InvalidInput("outer regime requires rho")
    exponent = (2.0 * p.r + 1.0) / (2.0 * p.r + p.s)
    scale = max(p.rho, p.M)
    omega = p.tau_prime * scale * math.sqrt(p.kappa) * _bracket(p) ** exponent
    admissible = p.n >= 16.0 * p.D**2 * math.log(4.0 / p.gamma) ** 2
    return ThresholdResult(omega=omega, admissible=admissible)


#: Fraction of the noise floor the calibrated threshold sits at when
#: tau_prime equals its regime minimum and n equals the anchor size.
#: Chosen once against oracle-stopped runs; see the calibration notes in
#: the repository history.
CALIBRATION_FRACTION = 0.39

#: Smallest admissible tau_prime per regime; the calibrated threshold
#: measures tau_prime in units of this minimum so that the customary
#: choices for both regimes land on the same residual scale.
TAU_PRIME_FLOOR_INNER = 1.5
TAU_PRIME_FLOOR_OUTER = 6.0


def threshold_calibrated(
    p: ThresholdParams,
    sigma: float,
    trace_k: float,
    n_ref: float,
) -> ThresholdResult:
    """Noise-floor-anchored threshold with the theoretical decay rate.

    The closed-form thresholds above are safe for any model but their
    constants are so conservative that on desk-scale sample sizes they sit
    far above the data's residual scale, stopping every run at iteration
    zero. This variant keeps the decisive part of the formula, the
    sample-size exponent, and re-anchors the constant on an observable
    scale: the expected weighted norm of pure noise, sigma*sqrt(trace/n).

    Concretely,

        omega(n) = (tau'/tau'_min) * C * floor(n) * (n_ref/n)^x,

    where floor(n) = sigma*sqrt(trace_k/n), C = CALIBRATION_FRACTION,
    tau'_min is the smallest admissible tau' for the regime (3/2 when
    r >= 1/2, 6 below), and x = (1-s)/(2*(2r+s)) is exactly the amount by
    which the theoretical threshold decays faster than the noise floor.
    Oracle-stopped runs put the optimal residual at 0.3-0.5 of the floor
    with the same excess decay, which fixes C.

    Parameters
    ----------
    p : ThresholdParams
        The same parameter set the literal formulas take; regime range
        checks are not applied here, only positivity.
    sigma : float
        Noise standard deviation of the generating model.
    trace_k : float
        Trace of the kernel operator (sum of eigenvalues).
    n_ref : float
        Anchor sample size, typically the geometric mean of the sweep grid.
    """
    if not sigma > 0:
        raise InvalidInput(f"sigma must be positive, got {sigma}")
    if not trace_k > 0:
        raise InvalidInput(f"trace_k must be positive, got {trace_k}")
    if not n_ref > 0:
        raise InvalidInput(f"n_ref must be positive, got {n_ref}")
    tau_floor = TAU_PRIME_FLOOR_INNER if p.r >= 0.5 else TAU_PRIME_FLOOR_OUTER
    excess = (1.0 - p.s) / (2.0 * (2.0 * p.r + p.s))
    floor_n = sigma * math.sqrt(trace_k / p.n)
    omega = (
        (p.tau_prime / tau_floor)
        * CALIBRATION_FRACTION
        * floor_n
        * (n_ref / p.n) ** excess
    )
    admissible = p.n >= 16.0 * p.D**2 * math.log(6.0 / p.gamma) ** 2
    return ThresholdResult(omega=omega, admissible=admissible)


def discrepancy_stop(trace: CgTrace, omega: float) -> int:
    """First iteration whose residual falls strictly below the threshold.

    When no recorded residual beats the threshold but the run exhausted its
    reachable space (breakdown, or as many iterations as the system has
    rows), the terminal iterate is the exact minimizer over that space and
    its index is returned. If the run was merely truncated by ``max_iter``,
    raises ``NotReached`` so the caller can extend the budget.
    """
    if not omega > 0:
        raise InvalidInput(f"omega must be positive, got {omega}")
    if len(trace.residual_norms) == 0:
        raise InvalidInput("trace has no residuals")
    for m, res in enumerate(trace.residual_norms):
        if res < omega:
            return m
    n = trace.alphas.shape[1]
    if trace.breakdown_at is not None or trace.m_last >= n:
        return trace.m_last
    raise NotReached(trace.m_last, trace.residual_norms[-1])


def holdout_select(
    trace: CgTrace,
    kernel: KernelSpec,
    train_points,
    val_points,
    val_labels,
    M_clip: float,
) -> int:
    """Iteration whose clipped predictor best fits held-out data.

    Every recorded iterate is evaluated on the validation points, predictions
    are clamped to [-M_clip, M_clip], and the index with the smallest mean
    squared validation error wins; ties break toward the smallest index.
    """
    val_x = np.asarray(val_points, dtype=float).ravel()
    val_y = np.asarray(val_labels, dtype=float).ravel()
    if val_x.size == 0:
        raise InvalidInput("validation set must be non-empty")
    if val_x.size != val_y.size:
        raise InvalidInput(
            f"validation sizes differ: {val_x.size} points, {val_y.size} labels"
        )
    if not M_clip > 0:
        raise InvalidInput(f"M_clip must be positive, got {M_clip}")
    x = np.asarray(train_points, dtype=float).ravel()
    cross = kernel.gram(val_x, x) / x.size
    preds = trace.alphas @ cross.T  # (m_last + 1, n_val)
    clipped = np.clip(preds, -M_clip, M_clip)
    losses = np.mean((clipped - val_y) ** 2, axis=1)
    return int(np.argmin(losses))


__all__ = [
    "ThresholdParams",
    "ThresholdResult",
    "threshold_inner",
    "threshold_outer",
    "threshold_calibrated",
    "discrepancy_stop",
    "holdout_select",
]
