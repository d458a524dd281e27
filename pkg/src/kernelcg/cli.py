"""Command-line front end: seeded experiments in, CSV/JSON artifacts out.

Every artifact is stamped with the master seed and a hash of the effective
configuration, and JSON output is canonical (sorted keys), so identical
invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .errors import InvalidInput, NotReached, NumericalFailure
from .evaluation import error_norm
from .harness import (
    HOLDOUT_MAX_ITER,
    ExperimentConfig,
    canonical_json,
    compare_solvers,
    config_hash,
    derive_seed,
    run_experiment,
    write_compare_csv,
    write_compare_json,
    write_plot_tsv,
    write_rows_csv,
    write_summary_json,
    write_text_atomic,
    _experiment_context,
    _stop_by_discrepancy,
    _threshold_for,
)
from .kernels import build_kernel_matrix
from .solvers import cg_fit
from .stopping import holdout_select
from .synth import draw_sample, model_to_dict, sample_to_dict

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_NUMERICAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as config-class failures.

    The default parser calls sys.exit(2); exit code 2 is reserved here for
    numerical failures, so usage errors are rerouted to exit code 1.
    """

    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="kernelcg", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("fit", "fit one sample and print the stop index and residuals"),
        ("simulate", "draw and persist synthetic samples"),
        ("rates", "run the rate sweep and fit log-log slopes"),
        ("holdout", "run the rate sweep with hold-out stopping"),
        ("compare", "compare the two CG modes and ridge on shared samples"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return parser


def _load_config(path: str) -> ExperimentConfig:
    if not os.path.exists(path):
        raise InvalidInput(f"config file not found: {path}")
    with open(path) as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"config file {path} is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(raw)


def _effective_config(args) -> ExperimentConfig:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    return cfg


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _print_report(args, report) -> None:
    for p in report.per_point:
        _emit(
            args,
            f"{report.regime} n={p.n} theta={p.theta:g} "
            f"median_error={p.median_error:.6g} "
            f"iqr=[{p.iqr_low:.6g}, {p.iqr_high:.6g}] m_hat={p.median_m_hat:g}",
        )
    for s in report.slopes:
        _emit(
            args,
            f"theta={s.theta:g}: slope={s.slope:+.4f} "
            f"theory={s.theoretical_exponent:+.4f} gap={s.slope_gap:+.4f}",
        )
    for f in report.failures:
        _emit(args, f"FAILED {f}")


def _cmd_rates(args, cfg: ExperimentConfig) -> int:
    report = run_experiment(cfg)
    write_rows_csv(report, os.path.join(args.out, "rates.csv"))
    write_summary_json(report, os.path.join(args.out, "rate_report.json"))
    write_plot_tsv(report, args.out)
    _print_report(args, report)
    if report.incomplete:
        print(
            "partial results written; failures: " + "; ".join(report.failures),
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_holdout(args, cfg: ExperimentConfig) -> int:
    if cfg.stopping != "holdout":
        cfg = dataclasses.replace(
            cfg, stopping="holdout", holdout_fraction=cfg.holdout_fraction or 0.2
        )
    report = run_experiment(cfg)
    write_rows_csv(report, os.path.join(args.out, "holdout.csv"))
    write_summary_json(report, os.path.join(args.out, "holdout_report.json"))
    write_plot_tsv(report, args.out)
    _print_report(args, report)
    if report.incomplete:
        print(
            "partial results written; failures: " + "; ".join(report.failures),
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_compare(args, cfg: ExperimentConfig) -> int:
    report = compare_solvers(cfg)
    write_compare_csv(report, os.path.join(args.out, "compare.csv"))
    write_compare_json(report, os.path.join(args.out, "compare_summary.json"))
    for row in report.medians:
        _emit(
            args,
            f"n={row['n']} cg_m_hat={row['cg_m_hat']:g} cg_error={row['cg_error']:.6g} "
            f"cgme_m={row['cgme_m']:g} match_rate={row['match_rate']:.2f} "
            f"ridge_error={row['ridge_error']:.6g}",
        )
    return EXIT_OK


def _cmd_fit(args, cfg: ExperimentConfig) -> int:
    model, n_ref, trace_k = _experiment_context(cfg)
    n = cfg.n_grid[0]
    seed = derive_seed(cfg.master_seed, n, 0)
    outer = cfg.regime == "outer"
    sample = draw_sample(model, n, unlabeled=outer, seed=seed)
    if outer:
        x = np.concatenate([sample.X_labeled, sample.X_unlabeled])
        y = sample.Y_padded
    else:
        x, y = sample.X_labeled, sample.Y
    if cfg.stopping == "discrepancy":
        omega = _threshold_for(cfg, model, n, n_ref, trace_k)
        trace, m_hat = _stop_by_discrepancy(
            build_kernel_matrix(x, model.kernel), y, omega, x.size
        )
        anchor = x
    else:
        n_val = max(1, round(cfg.holdout_fraction * n))
        x_train, x_val = x[: n - n_val], x[n - n_val:]
        y_train, y_val = y[: n - n_val], y[n - n_val:]
        K = build_kernel_matrix(x_train, model.kernel)
        trace = cg_fit(K, y_train, max_iter=min(x_train.size, HOLDOUT_MAX_ITER))
        m_hat = holdout_select(
            trace, model.kernel, x_train, x_val, y_val, M_clip=model.noise.M
        )
        omega = None
        anchor = x_train
    errors = {
        repr(theta): error_norm(trace.alphas[m_hat], anchor, model, theta).error_value
        ** 2
        for theta in cfg.theta_list
    }
    payload = {
        "config_hash": config_hash(cfg),
        "master_seed": cfg.master_seed,
        "seed": seed,
        "n": int(n),
        "m_hat": int(m_hat),
        "omega": omega,
        "residual_norms": [float(v) for v in trace.residual_norms],
        "errors": errors,
    }
    write_text_atomic(os.path.join(args.out, "fit.json"), canonical_json(payload))
    omega_text = "holdout" if omega is None else f"{omega:.6g}"
    _emit(args, f"n={n} seed={seed} omega={omega_text} m_hat={m_hat}")
    _emit(
        args,
        "residuals: " + " ".join(f"{v:.6g}" for v in trace.residual_norms),
    )
    return EXIT_OK


def _cmd_simulate(args, cfg: ExperimentConfig) -> int:
    model = cfg.model()
    outer = cfg.regime == "outer"
    n0 = cfg.n_grid[0]
    samples = []
    for rep in range(cfg.replicates):
        seed = derive_seed(cfg.master_seed, n0, rep)
        samples.append(sample_to_dict(draw_sample(model, n0, unlabeled=outer, seed=seed)))
    manifest = {
        str(n): [derive_seed(cfg.master_seed, n, rep) for rep in range(cfg.replicates)]
        for n in cfg.n_grid
    }
    payload = {
        "config_hash": config_hash(cfg),
        "master_seed": cfg.master_seed,
        "model": model_to_dict(model),
        "n": int(n0),
        "samples": samples,
        "seed_manifest": manifest,
    }
    write_text_atomic(os.path.join(args.out, "samples.json"), canonical_json(payload))
    _emit(args, f"wrote {cfg.replicates} samples at n={n0} plus the grid seed manifest")
    return EXIT_OK


_COMMANDS = {
    "fit": _cmd_fit,
    "simulate": _cmd_simulate,
    "rates": _cmd_rates,
    "holdout": _cmd_holdout,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    try:
        cfg = _effective_config(args)
        os.makedirs(args.out, exist_ok=True)
        return _COMMANDS[args.subcommand](args, cfg)
    except InvalidInput as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except NumericalFailure as exc:
        print(
            f"numerical failure at iteration {exc.iteration} "
            f"(master_seed={getattr(args, 'seed', None) or 'config'}): {exc}",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    except NotReached as exc:
        print(f"stopping threshold not reached: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
