#!/usr/bin/env python3
"""Compare the weighted-residual solver against its plain-residual twin and ridge.

On shared samples, the weighted run stops by the calibrated threshold; the
plain-residual variant reports the first iteration reaching the same accuracy;
ridge reports its best penalty from a 20-point log grid. Iteration counts stay
comparable while ridge needs a full solve per grid point.
"""

from kernelcg import CompareReport, ExperimentConfig, UniformBounded, compare_solvers

config = ExperimentConfig(
    s=0.5, r=1.0, rho=1.0, J=200,
    noise=UniformBounded(1.0),
    regime="inner",
    n_grid=(64, 128, 256),
    replicates=5,
    gamma=0.05,
    tau_prime=2.0,
    theta_list=(0.0,),
    master_seed=101,
)

report: CompareReport = compare_solvers(config)

print(f"lambda grid: {len(report.lambda_grid)} points "
      f"[{report.lambda_grid[0]:.2e} .. {report.lambda_grid[-1]:.2e}]")
print()
print("   n  weighted m_hat  error        plain m  matched  ridge error")
for row in report.medians:
    print(
        f"{row['n']:4d}  {row['cg_m_hat']:14g}  {row['cg_error']:.3e}  "
        f"{row['cgme_m']:7g}  {row['match_rate']:7.0%}  {row['ridge_error']:.3e}"
    )
print()
print("errors are squared prediction-norm distances, medians over replicates")
