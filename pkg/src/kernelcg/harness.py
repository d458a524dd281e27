"""Rate-sweep experiments over an n-grid with seeded replicates.

Runs the solver plus a stopping rule across sample sizes, aggregates
replicate medians, fits log-log slopes, and compares them with the
theoretical exponents. Also houses the solver comparison (weighted CG
vs. plain-residual CG vs. ridge on a lambda grid) and the file writers
shared with the command-line front end.

Error columns everywhere hold SQUARED distances, so fitted slopes are
comparable with the exponent -2(r - theta)/(2r + s).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NotReached, NumericalFailure
from .evaluation import ERROR_FLOOR, error_norm
from .kernels import build_kernel_matrix
from .solvers import CgTrace, cg_fit, ridge_fit
from .stopping import (
    ThresholdParams,
    discrepancy_stop,
    holdout_select,
    threshold_calibrated,
    threshold_inner,
    threshold_outer,
)
from .synth import (
    MercerModel,
    NoiseSpec,
    draw_sample,
    make_model,
    noise_from_dict,
    noise_to_dict,
)

#: Iteration budget for the first stopping attempt; doubled on demand.
INITIAL_MAX_ITER = 32

#: Iteration cap for hold-out traces: the validation curve bottoms out
#: within a few dozen iterations at desk scale, and full-length traces
#: on the largest grids would dominate the runtime.
HOLDOUT_MAX_ITER = 64

#: Number of ridge penalties in the comparison grid (log-spaced).
RIDGE_GRID_SIZE = 20

CSV_COLUMNS = ("regime", "n", "rep", "theta", "error", "m_hat", "omega", "seed")


# --- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one rate experiment.

    The JSON form documented in the README mirrors these fields, with the
    model parameters nested under a "model" key.
    """

    s: float
    r: float
    rho: float
    J: int
    noise: NoiseSpec
    regime: str
    n_grid: tuple[int, ...]
    replicates: int
    gamma: float
    tau_prime: float
    theta_list: tuple[float, ...]
    master_seed: int
    stopping: str = "discrepancy"
    holdout_fraction: float | None = None
    threshold: str = "calibrated"
    u_profile: str | int = "inverse_index"

    def __post_init__(self) -> None:
        if self.regime not in ("inner", "outer"):
            raise InvalidInput(f"regime must be 'inner' or 'outer', got {self.regime!r}")
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if len(grid) < 2:
            raise InvalidInput("n_grid needs at least 2 points")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidInput(f"n_grid must be strictly increasing, got {grid}")
        if grid[0] < 1:
            raise InvalidInput(f"n_grid entries must be positive, got {grid}")
        if self.replicates < 1:
            raise InvalidInput(f"replicates must be >= 1, got {self.replicates}")
        if not 0.0 < self.gamma < 1.0:
            raise InvalidInput(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.tau_prime > 0:
            raise InvalidInput(f"tau_prime must be positive, got {self.tau_prime}")
        thetas = tuple(float(t) for t in self.theta_list)
        object.__setattr__(self, "theta_list", thetas)
        if not thetas:
            raise InvalidInput("theta_list must be non-empty")
        for t in thetas:
            if not 0.0 <= t <= 0.5:
                raise InvalidInput(f"theta_list entries must lie in [0, 1/2], got {t}")
        if self.regime == "inner":
            if self.r < 0.5:
                raise InvalidInput(f"inner regime requires r >= 1/2, got r={self.r}")
        else:
            if not self.r < 0.5:
                raise InvalidInput(f"outer regime requires r < 1/2, got r={self.r}")
            if self.r + self.s < 0.5:
                raise InvalidInput(
                    f"outer regime requires r + s >= 1/2, got {self.r + self.s}"
                )
            for t in thetas:
                if t >= self.r:
                    raise InvalidInput(
                        f"outer regime requires theta < r, got theta={t}, r={self.r}"
                    )
        if self.stopping not in ("discrepancy", "holdout"):
            raise InvalidInput(
                f"stopping must be 'discrepancy' or 'holdout', got {self.stopping!r}"
            )
        if self.stopping == "holdout":
            if self.regime == "outer":
                raise InvalidInput(
                    "holdout stopping is not defined for the outer regime: "
                    "the padded responses are rescaled and zero-filled"
                )
            f = self.holdout_fraction
            if f is None or not 0.0 < f < 1.0:
                raise InvalidInput(
                    f"holdout stopping needs holdout_fraction in (0, 1), got {f}"
                )
        elif self.holdout_fraction is not None:
            raise InvalidInput("holdout_fraction is only valid with stopping='holdout'")
        if self.threshold not in ("calibrated", "literal"):
            raise InvalidInput(
                f"threshold must be 'calibrated' or 'literal', got {self.threshold!r}"
            )

    def model(self) -> MercerModel:
        return make_model(
            s=self.s,
            r=self.r,
            rho=self.rho,
            truncation=self.J,
            noise=self.noise,
            u_profile=self.u_profile,
        )

    def to_dict(self) -> dict:
        model: dict = {
            "s": self.s,
            "r": self.r,
            "rho": self.rho,
            "J": self.J,
            "noise": noise_to_dict(self.noise),
        }
        if self.u_profile != "inverse_index":
            model["u_profile"] = self.u_profile
        stopping: object = self.stopping
        if self.stopping == "holdout":
            stopping = {"kind": "holdout", "fraction": self.holdout_fraction}
        out = {
            "model": model,
            "regime": self.regime,
            "n_grid": list(self.n_grid),
            "replicates": self.replicates,
            "gamma": self.gamma,
            "tau_prime": self.tau_prime,
            "theta_list": list(self.theta_list),
            "master_seed": self.master_seed,
            "stopping": stopping,
        }
        if self.threshold != "calibrated":
            out["threshold"] = self.threshold
        return out

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise InvalidInput("config must be a JSON object")
        known = {
            "model", "regime", "n_grid", "replicates", "gamma", "tau_prime",
            "theta_list", "master_seed", "stopping", "threshold",
        }
        unknown = set(d) - known
        if unknown:
            raise InvalidInput(f"unknown config field(s): {', '.join(sorted(unknown))}")
        missing = known - {"stopping", "threshold"} - set(d)
        if missing:
            raise InvalidInput(f"missing config field(s): {', '.join(sorted(missing))}")
        model = d["model"]
        if not isinstance(model, dict):
            raise InvalidInput("config field 'model' must be an object")
        model_known = {"s", "r", "rho", "J", "noise", "u_profile"}
        unknown = set(model) - model_known
        if unknown:
            raise InvalidInput(f"unknown model field(s): {', '.join(sorted(unknown))}")
        model_missing = model_known - {"u_profile"} - set(model)
        if model_missing:
            raise InvalidInput(
                f"missing model field(s): {', '.join(sorted(model_missing))}"
            )
        stopping_raw = d.get("stopping", "discrepancy")
        holdout_fraction = None
        if isinstance(stopping_raw, dict):
            if stopping_raw.get("kind") != "holdout":
                raise InvalidInput(
                    "config field 'stopping' object must have kind='holdout'"
                )
            extra = set(stopping_raw) - {"kind", "fraction"}
            if extra:
                raise InvalidInput(
                    f"unknown stopping field(s): {', '.join(sorted(extra))}"
                )
            if "fraction" not in stopping_raw:
                raise InvalidInput("stopping field 'fraction' is required for holdout")
            stopping = "holdout"
            holdout_fraction = float(stopping_raw["fraction"])
        else:
            stopping = str(stopping_raw)
        return ExperimentConfig(
            s=float(model["s"]),
            r=float(model["r"]),
            rho=float(model["rho"]),
            J=int(model["J"]),
            noise=noise_from_dict(model["noise"]),
            regime=str(d["regime"]),
            n_grid=tuple(int(n) for n in d["n_grid"]),
            replicates=int(d["replicates"]),
            gamma=float(d["gamma"]),
            tau_prime=float(d["tau_prime"]),
            theta_list=tuple(float(t) for t in d["theta_list"]),
            master_seed=int(d["master_seed"]),
            stopping=stopping,
            holdout_fraction=holdout_fraction,
            threshold=str(d.get("threshold", "calibrated")),
            u_profile=model.get("u_profile", "inverse_index"),
        )


def canonical_json(obj) -> str:
    """Deterministic JSON serialization: sorted keys, two-space indent."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def config_hash(cfg: ExperimentConfig) -> str:
    """Hex digest identifying the configuration for provenance stamps."""
    return hashlib.sha256(canonical_json(cfg.to_dict()).encode()).hexdigest()


def derive_seed(master_seed: int, n: int, rep: int) -> int:
    """Per-replicate seed: first 8 bytes of sha256 over 'master:n:rep'."""
    digest = hashlib.sha256(f"{master_seed}:{n}:{rep}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# --- results -----------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    """One replicate at one theta; mirrors the CSV column order."""

    regime: str
    n: int
    rep: int
    theta: float
    error: float  # squared distance at the stopped iterate
    m_hat: int
    omega: float | None  # None under hold-out stopping
    seed: int


@dataclass(frozen=True)
class GridPointStat:
    n: int
    theta: float
    median_error: float
    iqr_low: float
    iqr_high: float
    median_m_hat: float


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float  # sum of squared log-scale OLS residuals


@dataclass(frozen=True)
class SlopeSummary:
    theta: float
    slope: float
    intercept: float
    residual: float
    theoretical_exponent: float
    slope_gap: float
    n_points: int


@dataclass(frozen=True)
class RateReport:
    config_hash: str
    master_seed: int
    regime: str
    rows: tuple[RunRecord, ...]
    per_point: tuple[GridPointStat, ...]
    slopes: tuple[SlopeSummary, ...]
    incomplete: bool = False
    failures: tuple[str, ...] = ()


def fit_loglog_slope(ns, errors) -> SlopeFit:
    """Ordinary least squares of log(error) on log(n).

    Non-positive errors cannot be logged; they are clamped to the spectral
    resolution floor with a warning, since an exactly-zero measured error
    only means the exact norm bottomed out.
    """
    ns = np.asarray(ns, dtype=float).ravel()
    errors = np.asarray(errors, dtype=float).ravel()
    if ns.size != errors.size:
        raise InvalidInput(
            f"length mismatch: {ns.size} sample sizes vs {errors.size} errors"
        )
    if ns.size < 2:
        raise InvalidInput("slope fit needs at least 2 grid points")
    if np.any(errors <= 0.0):
        warnings.warn(
            "non-positive errors clamped to the spectral floor before log-log fit",
            stacklevel=2,
        )
        errors = np.where(errors <= 0.0, ERROR_FLOOR, errors)
    x = np.log(ns)
    y = np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sum((y - (slope * x + intercept)) ** 2))
    return SlopeFit(slope=float(slope), intercept=float(intercept), residual=resid)


def _experiment_context(cfg: ExperimentConfig):
    model = cfg.model()
    n_ref = float(np.exp(np.mean(np.log(np.asarray(cfg.n_grid, dtype=float)))))
    trace_k = float(np.sum(model.eigenvalues))
    return model, n_ref, trace_k


def _threshold_for(cfg: ExperimentConfig, model, n: int, n_ref: float, trace_k: float) -> float:
    params = ThresholdParams(
        M=model.noise.M,
        kappa=model.kappa,
        D=model.ed_constant,
        n=n,
        gamma=cfg.gamma,
        r=model.r,
        s=model.s,
        tau_prime=cfg.tau_prime,
        rho=model.rho,
    )
    if cfg.threshold == "calibrated":
        return threshold_calibrated(params, model.noise_std, trace_k, n_ref).omega
    if cfg.regime == "inner":
        return threshold_inner(params).omega
    return threshold_outer(params).omega


def _stop_by_discrepancy(K, y, omega: float, n_rows: int) -> tuple[CgTrace, int]:
    """Run CG with a growing iteration budget until the threshold decides."""
    max_iter = min(INITIAL_MAX_ITER, n_rows)
    while True:
        trace = cg_fit(K, y, max_iter=max_iter)
        try:
            return trace, discrepancy_stop(trace, omega)
        except NotReached:
            if max_iter >= n_rows:
                raise
            max_iter = min(2 * max_iter, n_rows)


def _run_one(cfg: ExperimentConfig, model, n: int, rep: int, n_ref: float, trace_k: float):
    """One replicate: one RunRecord per theta, all sharing the same stop index."""
    seed = derive_seed(cfg.master_seed, n, rep)
    outer = cfg.regime == "outer"
    sample = draw_sample(model, n, unlabeled=outer, seed=seed)
    if outer:
        x = np.concatenate([sample.X_labeled, sample.X_unlabeled])
        y = sample.Y_padded
    else:
        x = sample.X_labeled
        y = sample.Y

    if cfg.stopping == "discrepancy":
        omega = _threshold_for(cfg, model, n, n_ref, trace_k)
        trace, m_hat = _stop_by_discrepancy(build_kernel_matrix(x, model.kernel), y, omega, x.size)
        anchor_points = x
    else:
        n_val = max(1, round(cfg.holdout_fraction * n))
        if n_val >= n:
            raise InvalidInput(
                f"holdout fraction {cfg.holdout_fraction} leaves no training data at n={n}"
            )
        x_train, x_val = x[: n - n_val], x[n - n_val :]
        y_train, y_val = y[: n - n_val], y[n - n_val :]
        K = build_kernel_matrix(x_train, model.kernel)
        trace = cg_fit(K, y_train, max_iter=min(x_train.size, HOLDOUT_MAX_ITER))
        m_hat = holdout_select(
            trace, model.kernel, x_train, x_val, y_val, M_clip=model.noise.M
        )
        omega = None
        anchor_points = x_train

    alpha = trace.alphas[m_hat]
    records = []
    for theta in cfg.theta_list:
        err = error_norm(alpha, anchor_points, model, theta).error_value
        records.append(
            RunRecord(
                regime=cfg.regime,
                n=n,
                rep=rep,
                theta=theta,
                error=err * err,
                m_hat=m_hat,
                omega=omega,
                seed=seed,
            )
        )
    return records


def run_experiment(cfg: ExperimentConfig) -> RateReport:
    """Sweep the n-grid with seeded replicates and fit log-log slopes.

    Replicates that fail numerically are recorded in ``failures`` and the
    report is flagged incomplete; aggregation uses the surviving runs.
    """
    model, n_ref, trace_k = _experiment_context(cfg)
    rows: list[RunRecord] = []
    failures: list[str] = []
    for n in cfg.n_grid:
        for rep in range(cfg.replicates):
            try:
                rows.extend(_run_one(cfg, model, n, rep, n_ref, trace_k))
            except (NumericalFailure, NotReached) as exc:
                failures.append(
                    f"n={n} rep={rep} seed={derive_seed(cfg.master_seed, n, rep)}: {exc}"
                )

    per_point: list[GridPointStat] = []
    for n in cfg.n_grid:
        for theta in cfg.theta_list:
            errs = [r.error for r in rows if r.n == n and r.theta == theta]
            if not errs:
                continue
            m_hats = [r.m_hat for r in rows if r.n == n and r.theta == theta]
            arr = np.asarray(errs, dtype=float)
            per_point.append(
                GridPointStat(
                    n=n,
                    theta=theta,
                    median_error=float(np.median(arr)),
                    iqr_low=float(np.percentile(arr, 25)),
                    iqr_high=float(np.percentile(arr, 75)),
                    median_m_hat=float(np.median(m_hats)),
                )
            )

    slopes: list[SlopeSummary] = []
    for theta in cfg.theta_list:
        stats = [p for p in per_point if p.theta == theta]
        theo = -2.0 * (cfg.r - theta) / (2.0 * cfg.r + cfg.s)
        if len(stats) < 2:
            failures.append(f"theta={theta}: fewer than 2 grid points survived")
            continue
        fit = fit_loglog_slope([p.n for p in stats], [p.median_error for p in stats])
        slopes.append(
            SlopeSummary(
                theta=theta,
                slope=fit.slope,
                intercept=fit.intercept,
                residual=fit.residual,
                theoretical_exponent=theo,
                slope_gap=fit.slope - theo,
                n_points=len(stats),
            )
        )

    return RateReport(
        config_hash=config_hash(cfg),
        master_seed=cfg.master_seed,
        regime=cfg.regime,
        rows=tuple(rows),
        per_point=tuple(per_point),
        slopes=tuple(slopes),
        incomplete=bool(failures),
        failures=tuple(failures),
    )


# --- solver comparison -------------------------------------------------------


@dataclass(frozen=True)
class CompareRecord:
    n: int
    rep: int
    seed: int
    cg_m_hat: int
    cg_error: float
    cgme_m: int
    cgme_error: float
    cgme_matched: bool
    ridge_lambda: float
    ridge_error: float


@dataclass(frozen=True)
class CompareReport:
    config_hash: str
    master_seed: int
    lambda_grid: tuple[float, ...]
    records: tuple[CompareRecord, ...]
    medians: tuple[dict, ...]  # one summary dict per n


def compare_solvers(cfg: ExperimentConfig) -> CompareReport:
    """Weighted CG vs. plain-residual CG vs. ridge on identical samples.

    The weighted run stops by the configured threshold; the plain-residual
    run reports the first iteration matching that accuracy (or its best
    iteration when it never does); ridge reports its best penalty from a
    log-spaced grid. All errors are squared prediction-norm distances.
    """
    model, n_ref, trace_k = _experiment_context(cfg)
    lam_grid = tuple(
        float(v) for v in model.kappa * np.logspace(-6.0, 0.0, RIDGE_GRID_SIZE)
    )
    outer = cfg.regime == "outer"
    records: list[CompareRecord] = []
    for n in cfg.n_grid:
        for rep in range(cfg.replicates):
            seed = derive_seed(cfg.master_seed, n, rep)
            sample = draw_sample(model, n, unlabeled=outer, seed=seed)
            if outer:
                x = np.concatenate([sample.X_labeled, sample.X_unlabeled])
                y = sample.Y_padded
            else:
                x, y = sample.X_labeled, sample.Y
            K = build_kernel_matrix(x, model.kernel)
            sq = lambda a: error_norm(a, x, model, 0.0).error_value ** 2

            omega = _threshold_for(cfg, model, n, n_ref, trace_k)
            trace, m_hat = _stop_by_discrepancy(K, y, omega, x.size)
            cg_error = sq(trace.alphas[m_hat])

            budget = min(x.size, max(HOLDOUT_MAX_ITER, 2 * (m_hat + 1)))
            euclid = cg_fit(K, y, max_iter=budget, mode="euclidean")
            errs = [sq(euclid.alphas[m]) for m in range(euclid.m_last + 1)]
            matched = next((m for m, e in enumerate(errs) if e <= cg_error), None)
            if matched is None:
                cgme_m = int(np.argmin(errs))
                cgme_matched = False
            else:
                cgme_m = matched
                cgme_matched = True

            ridge_lambda, ridge_error = min(
                ((lam, sq(ridge_fit(K, y, lam).alpha)) for lam in lam_grid),
                key=lambda t: t[1],
            )
            records.append(
                CompareRecord(
                    n=n,
                    rep=rep,
                    seed=seed,
                    cg_m_hat=m_hat,
                    cg_error=cg_error,
                    cgme_m=cgme_m,
                    cgme_error=errs[cgme_m],
                    cgme_matched=cgme_matched,
                    ridge_lambda=ridge_lambda,
                    ridge_error=ridge_error,
                )
            )

    medians = []
    for n in cfg.n_grid:
        group = [rec for rec in records if rec.n == n]
        med = lambda vals: float(np.median(vals))
        medians.append(
            {
                "n": n,
                "cg_m_hat": med([r.cg_m_hat for r in group]),
                "cg_error": med([r.cg_error for r in group]),
                "cgme_m": med([r.cgme_m for r in group]),
                "cgme_error": med([r.cgme_error for r in group]),
                "match_rate": float(
                    np.mean([1.0 if r.cgme_matched else 0.0 for r in group])
                ),
                "ridge_error": med([r.ridge_error for r in group]),
            }
        )
    return CompareReport(
        config_hash=config_hash(cfg),
        master_seed=cfg.master_seed,
        lambda_grid=lam_grid,
        records=tuple(records),
        medians=tuple(medians),
    )


# --- persistence -------------------------------------------------------------


def write_text_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def write_rows_csv(report: RateReport, path: str) -> None:
    """Raw per-replicate records; column order is part of the contract."""
    lines = [
        f"# config_hash={report.config_hash} master_seed={report.master_seed}",
        ",".join(CSV_COLUMNS),
    ]
    for r in report.rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (r.regime, r.n, r.rep, r.theta, r.error, r.m_hat, r.omega, r.seed)
            )
        )
    write_text_atomic(path, "\n".join(lines) + "\n")


def summary_dict(report: RateReport) -> dict:
    return {
        "config_hash": report.config_hash,
        "master_seed": report.master_seed,
        "regime": report.regime,
        "incomplete": report.incomplete,
        "failures": list(report.failures),
        "per_point": [
            {
                "n": p.n,
                "theta": p.theta,
                "median_error": p.median_error,
                "iqr_low": p.iqr_low,
                "iqr_high": p.iqr_high,
                "median_m_hat": p.median_m_hat,
            }
            for p in report.per_point
        ],
        "slopes": [
            {
                "theta": s.theta,
                "slope": s.slope,
                "intercept": s.intercept,
                "residual": s.residual,
                "theoretical_exponent": s.theoretical_exponent,
                "slope_gap": s.slope_gap,
                "n_points": s.n_points,
            }
            for s in report.slopes
        ],
    }


def write_summary_json(report: RateReport, path: str) -> None:
    write_text_atomic(path, canonical_json(summary_dict(report)))


def write_plot_tsv(report: RateReport, out_dir: str) -> list[str]:
    """One TSV per theta: log n, log median error, theoretical line.

    The theoretical line has the exact exponent as slope and is anchored
    on the fitted line at the center of the grid, so the two columns are
    directly comparable in any plotting tool.
    """
    paths = []
    for s in report.slopes:
        stats = [p for p in report.per_point if p.theta == s.theta]
        log_n = np.log([p.n for p in stats])
        log_err = np.log([p.median_error for p in stats])
        center = float(np.mean(log_n))
        anchor = s.slope * center + s.intercept
        theory = anchor + s.theoretical_exponent * (log_n - center)
        lines = [
            f"# config_hash={report.config_hash} master_seed={report.master_seed}",
            "log_n\tlog_median_error\ttheoretical_line",
        ]
        for ln, le, th in zip(log_n, log_err, theory):
            lines.append(f"{float(ln)!r}\t{float(le)!r}\t{float(th)!r}")
        path = os.path.join(out_dir, f"plot_theta_{s.theta:g}.tsv")
        write_text_atomic(path, "\n".join(lines) + "\n")
        paths.append(path)
    return paths


def compare_dict(report: CompareReport) -> dict:
    return {
        "config_hash": report.config_hash,
        "master_seed": report.master_seed,
        "lambda_grid": list(report.lambda_grid),
        "medians": list(report.medians),
    }


def write_compare_csv(report: CompareReport, path: str) -> None:
    columns = (
        "n", "rep", "seed", "cg_m_hat", "cg_error", "cgme_m", "cgme_error",
        "cgme_matched", "ridge_lambda", "ridge_error",
    )
    lines = [
        f"# config_hash={report.config_hash} master_seed={report.master_seed}",
        ",".join(columns),
    ]
    for r in report.records:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.n, r.rep, r.seed, r.cg_m_hat, r.cg_error, r.cgme_m,
                    r.cgme_error, int(r.cgme_matched), r.ridge_lambda, r.ridge_error,
                )
            )
        )
    write_text_atomic(path, "\n".join(lines) + "\n")


def write_compare_json(report: CompareReport, path: str) -> None:
    write_text_atomic(path, canonical_json(compare_dict(report)))
