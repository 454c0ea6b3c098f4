#!/usr/bin/env python3
"""
Quick acceptance suite for the share estimators.
Checks the hand oracle, the analytic oracles, the algebraic identities,
streaming equivalence, the speed ordering and (when fetched) the CPS1988 study.
The Monte Carlo bands live in run_multi_eval.py.
"""

import json
from pathlib import Path
from datetime import datetime

import numpy as np

# Load .env file
from dotenv import load_dotenv
load_dotenv()

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent))

from src.config import Settings
from src.cli import DatasetSpec, compare_groups, parse_csv
from src.estimators import Sample, ShareQuery, infer_share
from src.oracles import (
    DistributionModel,
    h_function,
    h_grid,
    integrate_density,
    population_moments,
    population_share,
    population_variance_beach_davidson,
    population_variance_fixed_q,
    population_variance_proposed,
    variance_gap,
)
from src.simulation import SimulationConfig, run_timing, sample_from, stream_rng
from src.streaming import finalize, shard_statistics


def run_hand_oracle_eval() -> dict:
    """[1,2,3,4] at p = 0.5 against the hand expansion."""
    print("\n📊 Running: hand-oracle")
    print("-" * 40)

    est = infer_share(Sample(np.array([1.0, 2.0, 3.0, 4.0])), ShareQuery(0.5))
    expected = {"q_hat": 2.0, "m_hat": 0.3, "proposed": 0.003, "fixed_q": 0.047}
    got = {
        "q_hat": est.q_hat,
        "m_hat": est.m_hat,
        "proposed": est.variance("proposed"),
        "fixed_q": est.variance("fixed_q"),
    }
    errors = {k: abs(got[k] - v) for k, v in expected.items()}

    result = {
        "task": "hand-oracle",
        "passed": all(e <= 1e-12 for e in errors.values()),
        "values": got,
        "max_abs_error": max(errors.values()),
    }
    for k, v in got.items():
        print(f"  {k}: {v:.12g} (expected {expected[k]})")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_oracle_eval() -> dict:
    """Population shares and n * V against the published ground truth."""
    print("\n📊 Running: analytic-oracles")
    print("-" * 40)

    ln = DistributionModel.log_normal(0.4, 0.5)
    exp1 = DistributionModel.exponential(1.0)
    shares = {
        ln.label: population_share(ln, 0.75),
        **{DistributionModel.exponential(r).label: population_share(DistributionModel.exponential(r), 0.75)
           for r in (0.5, 1.0, 2.0)},
    }
    v_exp = population_variance_proposed(exp1, 0.75, 2000)

    checks = [
        abs(shares[ln.label] - 0.57) <= 0.005,
        all(abs(shares[label] - 0.40) <= 0.005 for label in shares if label.startswith("Exp")),
        abs(v_exp / 4.05e-5 - 1.0) <= 0.03,
    ]
    result = {
        "task": "analytic-oracles",
        "passed": all(checks),
        "shares": shares,
        "variance_exp1_n2000": v_exp,
    }
    for label, share in shares.items():
        print(f"  m({label}, p=0.75) = {share:.4f}")
    print(f"  V_proposed(Exp(1), n=2000) = {v_exp:.4g} (reference 4.05e-05)")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_gap_eval() -> dict:
    """Fixed-q inflation computed from the oracles alone."""
    print("\n📊 Running: variance-gap")
    print("-" * 40)

    exp1 = DistributionModel.exponential(1.0)
    ratio = variance_gap(exp1, 0.75, 1) / population_variance_proposed(exp1, 0.75, 1)
    quad_ratio = (
        population_variance_fixed_q(exp1, 0.75, 1, method="quad")
        / population_variance_proposed(exp1, 0.75, 1, method="quad")
        - 1.0
    )

    result = {
        "task": "variance-gap",
        "passed": abs(ratio / 3.79 - 1.0) <= 0.02 and abs(quad_ratio - ratio) <= 1e-6 * ratio,
        "inflation": ratio,
        "inflation_quad": quad_ratio,
    }
    print(f"  (V_fixed - V_proposed) / V_proposed = {ratio:.4f} (reference 3.79)")
    print(f"  Quadrature: {quad_ratio:.4f}")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def _identity_residual(p: float, mu: float, m: float, q: float) -> float:
    gamma = m * mu / p
    left = mu ** 2 * m ** 2 - (2 * m - 1) * p * gamma ** 2 + p * (1 - p) * q ** 2 - 2 * q * m * (1 - m) * mu
    right = p * (1 - p) * (gamma - q) ** 2 - 2 * p * m * (q - gamma) * (mu - gamma)
    scale = max(1.0, abs(mu * m) ** 2, p * gamma ** 2, q ** 2, abs(q * mu))
    return abs(left - right) / scale


def run_identity_eval() -> dict:
    """Conditional-mean identity, population BD = proposed, E[YZ] = m(1 - m) mu."""
    print("\n📊 Running: algebraic-identities")
    print("-" * 40)

    rng = np.random.default_rng(7)
    worst = 0.0
    for u_p, u_mu, u_m, u_q in rng.uniform(size=(10_000, 4)):
        p = 1e-3 + (1 - 2e-3) * u_p
        m = 1e-3 + (1 - 2e-3) * u_m
        worst = max(worst, _identity_residual(p, 1e-3 + 10 * u_mu, m, 1e-3 + 10 * u_q))

    bd_gaps = []
    for model in (DistributionModel.exponential(1.0), DistributionModel.uniform(1.0)):
        for p in (0.25, 0.5, 0.75):
            bd = population_variance_beach_davidson(model, p, 1)
            proposed = population_variance_proposed(model, p, 1, method="quad")
            bd_gaps.append(abs(bd / proposed - 1.0))

    exp1 = DistributionModel.exponential(1.0)
    mom = population_moments(exp1, 0.75)
    q, m, p = mom.q, mom.share, mom.p
    below = integrate_density(exp1, lambda x: (x - m * x) * (1.0 - p), upper=q)
    above = integrate_density(exp1, lambda x: m * p * x, lower=q)
    e_yz = below + above
    yz_gap = abs(e_yz / (mom.share * (1 - mom.share) * mom.mu) - 1.0)

    result = {
        "task": "algebraic-identities",
        "passed": worst <= 1e-10 and max(bd_gaps) <= 1e-8 and yz_gap <= 1e-8,
        "identity_max_residual": worst,
        "bd_max_relative_gap": max(bd_gaps),
        "e_yz_relative_gap": yz_gap,
    }
    print(f"  Identity residual over 10^4 draws: {worst:.3g}")
    print(f"  BD vs proposed (population): {max(bd_gaps):.3g}")
    print(f"  E[YZ] vs m(1 - m) mu: {yz_gap:.3g}")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_positivity_eval() -> dict:
    """h(t) >= 0 and the uniform gap formula."""
    print("\n📊 Running: positivity")
    print("-" * 40)

    grid = h_grid(1e-6, 50.0, 1000)
    uniform_errors = []
    for p in np.arange(1, 10) / 10:
        gap = variance_gap(DistributionModel.uniform(1.0), float(p), 1)
        uniform_errors.append(abs(gap - 4.0 * p ** 4 * (1.0 - p)))

    result = {
        "task": "positivity",
        "passed": h_function(0.0) == 0.0 and bool(np.all(grid[:, 1] >= 0.0)) and max(uniform_errors) <= 1e-12,
        "h_min_on_grid": float(grid[:, 1].min()),
        "uniform_gap_max_error": max(uniform_errors),
    }
    print(f"  h(0) = {h_function(0.0)}")
    print(f"  min h on [1e-6, 50]: {result['h_min_on_grid']:.3g}")
    print(f"  Uniform gap max error: {result['uniform_gap_max_error']:.3g}")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_streaming_eval() -> dict:
    """64-shard merge against the batch estimate for every family."""
    print("\n📊 Running: streaming-equivalence")
    print("-" * 40)

    families = [
        DistributionModel.log_normal(0.4, 0.5),
        DistributionModel.exponential(1.0),
        DistributionModel.uniform(1.0),
    ]
    worst = {}
    for model in families:
        values = sample_from(model, 100_000, stream_rng(3, 0, 0)).values
        batch = infer_share(Sample(values), ShareQuery(0.75))
        shards = np.array_split(np.random.default_rng(5).permutation(values), 64)
        streamed = finalize(shard_statistics(shards, batch.q_hat, 0.75))
        worst[model.label] = max(
            abs(streamed.m_hat / batch.m_hat - 1.0),
            *(abs(streamed.variance(m) / batch.variance(m) - 1.0) for m in ("proposed", "fixed_q")),
        )
        print(f"  {model.label}: max relative difference {worst[model.label]:.3g}")

    result = {
        "task": "streaming-equivalence",
        "passed": all(w <= 1e-12 for w in worst.values()),
        "max_relative_difference": worst,
    }
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_speed_eval(settings: Settings) -> dict:
    """Closed form against b = 200 bootstrap at n = 10^4."""
    print("\n📊 Running: speed-ordering")
    print("-" * 40)

    config = SimulationConfig(
        model=DistributionModel.log_normal(0.4, 0.5),
        n=10_000,
        bootstrap_b=200,
        seed=settings.seed,
        methods=("proposed", "fixed_q", "bootstrap"),
    )
    report = run_timing(config, repeats=20)

    result = {
        "task": "speed-ordering",
        "passed": report.bootstrap_ratio is not None and report.bootstrap_ratio >= 50.0,
        **report.to_dict(),
    }
    for method, secs in report.mean_runtime.items():
        print(f"  {method.value}: {secs * 1e3:.3f} ms")
    print(f"  Bootstrap / proposed: {report.bootstrap_ratio:.0f}x (floor 50x)")
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def run_empirical_eval(settings: Settings) -> dict | None:
    """Urban versus suburban wage shares; None when the CSV is absent."""
    print("\n📊 Running: cps1988")
    print("-" * 40)

    path = settings.cps1988_path
    if not path.is_file():
        print(f"  ⏭️  Skipped: {path} not found (run fetch_cps1988.py)")
        return None

    groups = parse_csv(DatasetSpec(path, "wage", group_column="smsa")).groups
    report = compare_groups(groups, 0.75, order=["yes", "no"])
    published = {"yes": (0.541, 3.34e-6, 1.96e-5), "no": (0.530, 1.42e-5, 6.01e-5)}

    checks = []
    for name, est in zip(report.groups, report.estimates):
        m, v_prop, v_fixed = published[name]
        checks += [
            abs(est.m_hat - m) <= 0.005,
            abs(est.variance("proposed") / v_prop - 1.0) <= 0.10,
            abs(est.variance("fixed_q") / v_fixed - 1.0) <= 0.10,
        ]
        print(f"  {name}: n={est.n} m={est.m_hat:.3f} V_proposed={est.variance('proposed'):.3g} "
              f"V_fixed={est.variance('fixed_q'):.3g}")
    t_ref = {"proposed": 2.59, "fixed_q": 1.22}
    for method, t in t_ref.items():
        got = report.test(method)
        checks.append(abs(got.t_statistic - t) <= 0.1)
        print(f"  t ({method}) = {got.t_statistic:.2f} (reference {t}), p = {got.p_value:.3f}")

    result = {"task": "cps1988", "passed": all(checks), **report.to_dict()}
    print(f"  PASSED: {'✓' if result['passed'] else '✗'}")
    return result


def main():
    print("=" * 50)
    print("🧪 Bottom-p Share Estimators - Eval Suite")
    print("=" * 50)

    settings = Settings.from_env()
    results = []

    try:
        results.append(run_hand_oracle_eval())
        results.append(run_oracle_eval())
        results.append(run_gap_eval())
        results.append(run_identity_eval())
        results.append(run_positivity_eval())
        results.append(run_streaming_eval())
        results.append(run_speed_eval(settings))
        empirical = run_empirical_eval(settings)
        if empirical is not None:
            results.append(empirical)
    except Exception as e:
        print(f"\n❌ Eval failed with error: {e}")
        import traceback
        traceback.print_exc()

    # Summary
    print("\n" + "=" * 50)
    print("📈 EVAL SUMMARY")
    print("=" * 50)

    passed = sum(1 for r in results if r.get("passed", False))
    total = len(results)

    for r in results:
        status = "✓ PASS" if r.get("passed") else "✗ FAIL"
        print(f"  {r['task']}: {status}")

    print(f"\nOverall: {passed}/{total} passed")

    results_file = Path(__file__).parent / "evals" / "results.json"
    results_file.parent.mkdir(exist_ok=True)

    report = {
        "timestamp": datetime.now().isoformat(),
        "seed": settings.seed,
        "results": results,
        "summary": {
            "passed": passed,
            "total": total,
            "pass_rate": round(passed / total * 100, 1) if total > 0 else 0
        }
    }

    with open(results_file, "w") as f:
        json.dump(report, f, indent=2, default=str)

    print(f"\n📁 Results saved to: {results_file}")
    return total > 0 and passed == total


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
