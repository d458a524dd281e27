"""Tests for the rate-sweep harness, slope fitting, and file writers."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from kernelcg import (
    InvalidInput,
    UniformBounded,
    build_kernel_matrix,
    cg_fit,
    discrepancy_stop,
    error_norm,
    eval_target,
    make_model,
    ridge_fit,
)
from kernelcg.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    canonical_json,
    compare_solvers,
    config_hash,
    derive_seed,
    fit_loglog_slope,
    run_experiment,
    summary_dict,
    write_compare_csv,
    write_plot_tsv,
    write_rows_csv,
    write_summary_json,
)


def inner_config(**overrides):
    base = dict(
        s=0.5,
        r=1.0,
        rho=1.0,
        J=60,
        noise=UniformBounded(1.0),
        regime="inner",
        n_grid=(32, 64, 128),
        replicates=3,
        gamma=0.05,
        tau_prime=2.0,
        theta_list=(0.0,),
        master_seed=11,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def outer_config(**overrides):
    base = dict(
        s=0.5,
        r=0.25,
        rho=1.0,
        J=60,
        noise=UniformBounded(3.0),
        regime="outer",
        n_grid=(16, 32),
        replicates=2,
        gamma=0.05,
        tau_prime=7.0,
        theta_list=(0.0,),
        master_seed=7,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestExperimentConfig:
    def test_roundtrip_through_dict(self):
        cfg = inner_config(theta_list=(0.0, 0.5))
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again == cfg

    def test_holdout_roundtrip(self):
        cfg = inner_config(stopping="holdout", holdout_fraction=0.2)
        d = cfg.to_dict()
        assert d["stopping"] == {"kind": "holdout", "fraction": 0.2}
        assert ExperimentConfig.from_dict(d) == cfg

    def test_unknown_field_named_in_error(self):
        d = inner_config().to_dict()
        d["replicantes"] = 3
        with pytest.raises(InvalidInput, match="replicantes"):
            ExperimentConfig.from_dict(d)

    def test_unknown_model_field_named(self):
        d = inner_config().to_dict()
        d["model"]["bandwidth"] = 0.2
        with pytest.raises(InvalidInput, match="bandwidth"):
            ExperimentConfig.from_dict(d)

    def test_missing_field_named(self):
        d = inner_config().to_dict()
        del d["gamma"]
        with pytest.raises(InvalidInput, match="gamma"):
            ExperimentConfig.from_dict(d)

    def test_grid_must_increase(self):
        with pytest.raises(InvalidInput, match="increasing"):
            inner_config(n_grid=(64, 64))
        with pytest.raises(InvalidInput, match="2 points"):
            inner_config(n_grid=(64,))

    def test_regime_consistency(self):
        with pytest.raises(InvalidInput, match="r >= 1/2"):
            inner_config(r=0.25)
        with pytest.raises(InvalidInput, match="r < 1/2"):
            outer_config(r=1.0)
        with pytest.raises(InvalidInput, match="r \\+ s"):
            outer_config(r=0.2, s=0.2)
        with pytest.raises(InvalidInput, match="theta < r"):
            outer_config(theta_list=(0.25,))

    def test_outer_holdout_rejected(self):
        with pytest.raises(InvalidInput, match="holdout"):
            outer_config(stopping="holdout", holdout_fraction=0.2)

    def test_holdout_needs_fraction(self):
        with pytest.raises(InvalidInput, match="fraction"):
            inner_config(stopping="holdout")
        with pytest.raises(InvalidInput, match="only valid"):
            inner_config(holdout_fraction=0.2)

    def test_hash_is_stable_and_sensitive(self):
        a = config_hash(inner_config())
        b = config_hash(inner_config())
        c = config_hash(inner_config(master_seed=12))
        assert a == b
        assert a != c
        assert len(a) == 64


class TestDeriveSeed:
    def test_documented_rule(self):
        import hashlib

        expected = int.from_bytes(
            hashlib.sha256(b"11:64:3").digest()[:8], "big"
        )
        assert derive_seed(11, 64, 3) == expected

    def test_distinct_across_cells(self):
        seeds = {derive_seed(1, n, rep) for n in (32, 64) for rep in range(10)}
        assert len(seeds) == 20


class TestFitLoglogSlope:
    def test_exact_power_law(self):
        ns = [32, 64, 128, 256]
        errors = [3.0 * n**-0.8 for n in ns]
        fit = fit_loglog_slope(ns, errors)
        assert fit.slope == pytest.approx(-0.8, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
        assert fit.residual == pytest.approx(0.0, abs=1e-20)

    def test_two_points(self):
        fit = fit_loglog_slope([10, 100], [1.0, 0.01])
        assert fit.slope == pytest.approx(-2.0, rel=1e-12)

    def test_multiplicative_noise_tolerance(self):
        # e^{+-0.1} factors on a 6-point dyadic grid keep the fitted slope
        # within 0.15 of the truth.
        rng = np.random.Generator(np.random.Philox(3))
        ns = [64 * 2**k for k in range(6)]
        worst = 0.0
        for _ in range(200):
            noise = rng.uniform(-0.1, 0.1, len(ns))
            errors = [2.0 * n**-0.8 * math.exp(e) for n, e in zip(ns, noise)]
            fit = fit_loglog_slope(ns, errors)
            worst = max(worst, abs(fit.slope + 0.8))
        assert worst <= 0.15

    def test_zero_error_clamped_with_warning(self):
        with pytest.warns(UserWarning, match="clamped"):
            fit = fit_loglog_slope([10, 100], [1.0, 0.0])
        assert np.isfinite(fit.slope)

    def test_bad_lengths(self):
        with pytest.raises(InvalidInput):
            fit_loglog_slope([10, 100], [1.0])
        with pytest.raises(InvalidInput):
            fit_loglog_slope([10], [1.0])


class TestRunExperiment:
    def test_determinism(self):
        cfg = inner_config(replicates=1)
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert a == b
        assert canonical_json(summary_dict(a)) == canonical_json(summary_dict(b))

    def test_report_shape(self):
        cfg = inner_config(theta_list=(0.0, 0.5))
        report = run_experiment(cfg)
        assert not report.incomplete
        assert len(report.rows) == len(cfg.n_grid) * cfg.replicates * 2
        assert len(report.per_point) == len(cfg.n_grid) * 2
        assert len(report.slopes) == 2
        by_theta = {s.theta: s for s in report.slopes}
        assert by_theta[0.0].theoretical_exponent == pytest.approx(-0.8)
        assert by_theta[0.5].theoretical_exponent == pytest.approx(-0.4)
        for s in report.slopes:
            assert s.slope_gap == pytest.approx(s.slope - s.theoretical_exponent)

    def test_stop_index_bounded_by_n(self):
        report = run_experiment(inner_config())
        for row in report.rows:
            assert 0 <= row.m_hat <= row.n
            assert row.omega is not None and row.omega > 0
            assert row.seed == derive_seed(11, row.n, row.rep)

    def test_stopped_error_beats_zero_estimator_in_median(self):
        cfg = inner_config(replicates=5)
        model = cfg.model()
        zero_sq = error_norm(
            np.zeros(4), np.linspace(0.1, 0.9, 4), model, 0.0
        ).error_value ** 2
        report = run_experiment(cfg)
        for p in report.per_point:
            assert p.median_error <= zero_sq

    def test_outer_regime_runs_and_pads(self):
        report = run_experiment(outer_config())
        assert not report.incomplete
        assert {row.regime for row in report.rows} == {"outer"}
        assert len(report.slopes) == 1

    def test_holdout_mode_emits_no_omega(self):
        cfg = inner_config(stopping="holdout", holdout_fraction=0.25)
        report = run_experiment(cfg)
        assert all(row.omega is None for row in report.rows)
        assert all(row.m_hat >= 0 for row in report.rows)

    def test_noiseless_tiny_threshold_interpolates(self):
        # With exact labels and a near-zero threshold the stop lands on the
        # terminal iterate, whose error is the pure approximation error;
        # it shrinks as the design fills in.
        model = make_model(s=0.5, r=1.0, rho=1.0, truncation=40)
        errs = []
        for n in (16, 64, 256):
            rng = np.random.Generator(np.random.Philox(5))
            x = rng.random(n)
            y = eval_target(model, x)
            K = build_kernel_matrix(x, model.kernel)
            trace = cg_fit(K, y, max_iter=n)
            m_hat = discrepancy_stop(trace, 1e-300)
            assert m_hat == trace.m_last
            errs.append(error_norm(trace.alphas[m_hat], x, model, 0.0).error_value)
        assert errs[-1] < errs[0]
        assert all(b <= a * 1.1 for a, b in zip(errs, errs[1:]))


class TestCompareSolvers:
    def test_identical_seeds_identical_tables(self):
        cfg = inner_config(n_grid=(24, 48), replicates=2)
        a = compare_solvers(cfg)
        b = compare_solvers(cfg)
        assert a == b

    def test_cgme_matches_or_reports_best(self):
        cfg = inner_config(n_grid=(24, 48), replicates=3)
        report = compare_solvers(cfg)
        assert len(report.lambda_grid) == 20
        for rec in report.records:
            assert rec.cg_error >= 0
            if rec.cgme_matched:
                assert rec.cgme_error <= rec.cg_error
            assert rec.ridge_error >= 0

    def test_ridge_small_lambda_approaches_terminal_cg_on_clean_data(self):
        model = make_model(s=0.5, r=1.0, rho=1.0, truncation=40)
        rng = np.random.Generator(np.random.Philox(9))
        x = rng.random(32)
        y = eval_target(model, x)
        K = build_kernel_matrix(x, model.kernel)
        trace = cg_fit(K, y, max_iter=32)
        cg_sq = error_norm(trace.alphas[trace.m_last], x, model, 0.0).error_value ** 2
        ridge_sq = error_norm(
            ridge_fit(K, y, 1e-10).alpha, x, model, 0.0
        ).error_value ** 2
        assert ridge_sq <= 4.0 * cg_sq + 1e-12


class TestWriters:
    def test_csv_columns_and_provenance(self, tmp_path):
        cfg = inner_config(replicates=1)
        report = run_experiment(cfg)
        path = tmp_path / "rates.csv"
        write_rows_csv(report, str(path))
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# config_hash=")
        assert report.config_hash in lines[0]
        assert lines[1] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2 + len(report.rows)
        first = lines[2].split(",")
        assert first[0] == "inner"
        assert int(first[1]) == cfg.n_grid[0]

    def test_summary_json_byte_identical(self, tmp_path):
        cfg = inner_config(replicates=1)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_summary_json(run_experiment(cfg), str(p1))
        write_summary_json(run_experiment(cfg), str(p2))
        b1, b2 = p1.read_bytes(), p2.read_bytes()
        assert b1 == b2
        parsed = json.loads(b1)
        assert parsed["config_hash"] == config_hash(cfg)
        assert [s["theta"] for s in parsed["slopes"]] == [0.0]

    def test_plot_tsv_theory_column(self, tmp_path):
        cfg = inner_config(theta_list=(0.0, 0.5), replicates=2)
        report = run_experiment(cfg)
        paths = write_plot_tsv(report, str(tmp_path))
        assert sorted(p.split("plot_theta_")[1] for p in paths) == ["0.5.tsv", "0.tsv"]
        lines = (tmp_path / "plot_theta_0.tsv").read_text().splitlines()
        assert lines[1] == "log_n\tlog_median_error\ttheoretical_line"
        rows = [list(map(float, ln.split("\t"))) for ln in lines[2:]]
        assert len(rows) == len(cfg.n_grid)
        # theoretical column has exactly the theoretical slope
        slope = (rows[1][2] - rows[0][2]) / (rows[1][0] - rows[0][0])
        assert slope == pytest.approx(-0.8, rel=1e-9)

    def test_compare_csv_written(self, tmp_path):
        cfg = inner_config(n_grid=(24, 48), replicates=1)
        report = compare_solvers(cfg)
        path = tmp_path / "compare.csv"
        write_compare_csv(report, str(path))
        lines = path.read_text().splitlines()
        assert lines[1].startswith("n,rep,seed,cg_m_hat")
        assert len(lines) == 2 + len(report.records)
