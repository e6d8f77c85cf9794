"""Acceptance criteria, each checked at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line (printed in the pytest
terminal summary, or directly when this file is run as a script) and then
asserts. Nothing here is loosened to make a criterion pass.
"""

import itertools
import json
import sys

import numpy as np
import pytest
from scipy import integrate

from revupdate.cli import main
from revupdate.coverage import compare_reports, run_coverage
from revupdate.fisher import analytic_fisher, combine_fisher, numeric_fisher_oracle
from revupdate.grid import ParameterGrid
from revupdate.inference import (
    jeffreys_prior,
    posterior_standard_sequential,
    revised_posterior,
)
from revupdate.models import (
    CUBE,
    IDENTITY,
    BinomialModel,
    GaussianTransformModel,
    NegativeBinomialModel,
    Transform,
)
from revupdate.presets import example1_configs, example2_configs

RESULTS = []


def record(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def sup(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# 1. Fisher oracle equivalence


def _point_fisher(models, theta):
    grid = ParameterGrid(theta - 1e-4, theta + 1e-4, 3)
    curve = analytic_fisher(models[0], grid)
    for m in models[1:]:
        curve = combine_fisher(curve, analytic_fisher(m, grid))
    return curve.values[1]


FISHER_FORMS = {
    "gaussian-transform": ([GaussianTransformModel(CUBE, 1.7)], (-2.5, 2.5)),
    "binomial": ([BinomialModel(40)], (0.01, 0.99)),
    "negative-binomial": ([NegativeBinomialModel(2)], (0.01, 0.99)),
    "combined": ([BinomialModel(40), NegativeBinomialModel(2)], (0.01, 0.99)),
}


@pytest.mark.parametrize("form", list(FISHER_FORMS))
def test_1_fisher_oracle(form):
    models, (lo, hi) = FISHER_FORMS[form]
    rng = np.random.default_rng(101)
    thetas = rng.uniform(lo, hi, size=50)
    worst = max(
        abs(_point_fisher(models, t) - numeric_fisher_oracle(models, t)) / numeric_fisher_oracle(models, t)
        for t in thetas
    )
    assert record(f"1 [{form}]", worst <= 1e-6, f"max relative error {worst:.2e} over 50 theta (tol 1e-6)")


# 2. Order invariance


def _random_experiments(rng):
    k = int(rng.integers(2, 6))
    if rng.random() < 0.5:
        out = []
        for _ in range(k):
            t = [IDENTITY, CUBE, Transform("poly", coefficients=(0.0, 1.0, 0.0, 0.5))][rng.integers(3)]
            out.append((GaussianTransformModel(t, float(rng.uniform(0.5, 2.0))), float(rng.normal(0.0, 1.5))))
        return out, ParameterGrid(-6.0, 6.0, 2001)
    out = []
    theta = rng.uniform(0.05, 0.5)
    for _ in range(k):
        if rng.random() < 0.5:
            m = BinomialModel(int(rng.integers(1, 50)))
        else:
            m = NegativeBinomialModel(int(rng.integers(1, 5)))
        out.append((m, m.sample(theta, rng)))
    return out, ParameterGrid(1e-6, 1 - 1e-6, 2001)


def test_2_order_invariance():
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(200):
        exps, grid = _random_experiments(rng)
        base = revised_posterior(exps, grid)
        perm = [exps[i] for i in rng.permutation(len(exps))]
        worst = max(worst, sup(revised_posterior(perm, grid).density, base.density))
    assert record("2", worst <= 1e-10, f"max sup-norm difference {worst:.2e} over 200 orderings (tol 1e-10)")


# 3. Duplicated experiments: standard sequential == revised


def test_3_duplicate_reduction():
    real = ParameterGrid(-6.0, 6.0, 2001)
    unit = ParameterGrid(1e-6, 1 - 1e-6, 2001)
    cases = [
        ([(GaussianTransformModel(IDENTITY), 0.3), (GaussianTransformModel(IDENTITY), -1.0)], real),
        ([(GaussianTransformModel(CUBE), 0.4), (GaussianTransformModel(CUBE), 1.3)], real),
        ([(GaussianTransformModel(CUBE, 2.0), -0.2)] * 3, real),
        ([(BinomialModel(40), 2), (BinomialModel(40), 5)], unit),
        ([(NegativeBinomialModel(2), 30), (NegativeBinomialModel(2), 12), (NegativeBinomialModel(2), 41)], unit),
    ]
    worst = max(
        sup(posterior_standard_sequential(exps, g).density, revised_posterior(exps, g).density)
        for exps, g in cases
    )
    assert record("3", worst <= 1e-10, f"max sup-norm difference {worst:.2e} over {len(cases)} configs (tol 1e-10)")


# 4. Exact location matching


def test_4_location_matching():
    report = run_coverage(example1_configs()["panel_a"]["A_alone"])
    dev = float(np.max(np.abs(report.proportions - report.percentiles / 100)))
    assert record(
        "4", dev <= 0.012, f"max |coverage - nominal| {dev:.4f} over 99 percentiles, {report.num_trials} trials (tol 0.012)"
    )


# 5. Example 1 combined-data pattern under the default config


@pytest.fixture(scope="module")
def example1_panel_b():
    return {k: run_coverage(c) for k, c in example1_configs()["panel_b"].items()}


def _tails(r):
    return f"below5={100 * r.tail_below_5:.2f}% above95={100 * r.tail_above_95:.2f}% mad={r.mean_abs_deviation:.5f}"


def test_5i_uniform_prior_tails(example1_panel_b):
    r = example1_panel_b["combined_uniform"]
    ok = r.tail_below_5 < 0.05 and r.tail_above_95 > 0.05
    assert record("5(i)", ok, f"uniform prior {_tails(r)}; need below5 < 5% < above95")


def test_5ii_theta2_prior_tails(example1_panel_b):
    r = example1_panel_b["combined_theta2"]
    ok = r.tail_below_5 > 0.05 and r.tail_above_95 < 0.05
    assert record("5(ii)", ok, f"theta^2 prior {_tails(r)}; need below5 > 5% > above95")


def test_5iii_combined_prior(example1_panel_b):
    r = example1_panel_b["combined_jeffreys"]
    others = [example1_panel_b["combined_uniform"], example1_panel_b["combined_theta2"]]
    ok = (
        abs(r.tail_below_5 - 0.05) <= 0.015
        and abs(r.tail_above_95 - 0.05) <= 0.015
        and all(r.mean_abs_deviation < o.mean_abs_deviation for o in others)
    )
    mads = ", ".join(f"{o.mean_abs_deviation:.5f}" for o in others)
    assert record("5(iii)", ok, f"combined prior {_tails(r)}; tails within 5±1.5%, mad below [{mads}]")


# 6. Example 2


@pytest.fixture(scope="module")
def example2_reports():
    panels = example2_configs()
    return {p: {k: run_coverage(c) for k, c in cfgs.items()} for p, cfgs in panels.items()}


def test_6i_matched_priors(example2_reports):
    a = example2_reports["panel_a"]
    pairs = [("binomial_matched", "binomial_swapped"), ("negbinomial_matched", "negbinomial_swapped")]
    ok = all(a[m].mean_abs_deviation < a[s].mean_abs_deviation for m, s in pairs)
    detail = "; ".join(
        f"{m} {a[m].mean_abs_deviation:.4f} vs {s} {a[s].mean_abs_deviation:.4f}" for m, s in pairs
    )
    assert record("6(i)", ok, f"mad {detail} ({a[pairs[0][0]].num_trials} trials each)")


def test_6ii_combined_prior(example2_reports):
    b = example2_reports["panel_b"]
    ranking = compare_reports(list(b.values()))
    best = b["combined_jeffreys"].mean_abs_deviation
    ok = all(best < r.mean_abs_deviation for k, r in b.items() if k != "combined_jeffreys")
    detail = ", ".join(f"{e.label} {e.mean_abs_deviation:.4f}" for e in ranking)
    assert record("6(ii)", ok, f"ranking by mad: {detail}")


# 7. Reparameterization witness


def test_7_reparameterization():
    g = ParameterGrid(-2.0, 2.0, 2001)
    t = g.points
    jeff = jeffreys_prior(analytic_fisher(GaussianTransformModel(CUBE, 1.0), g)).values
    push = 3 * t**2
    diff = sup(jeff / integrate.trapezoid(jeff, t), push / integrate.trapezoid(push, t))
    assert record("7", diff <= 1e-10, f"sup-norm difference after normalization {diff:.2e} (tol 1e-10)")


# 8. Determinism across thread counts


COMMAND_CONFIGS = {
    "example1": (["--trials", "300"], None),
    "example2": (["--trials", "20"], None),
    "coverage": (
        [],
        {
            "mode": "coverage",
            "experiments": [{"kind": "binomial", "n": 40}, {"kind": "negbinomial", "r": 2}],
            "true_theta": {"kind": "uniform", "low": 0.02, "high": 0.2},
            "num_trials": 1000,
            "grid": {"num_points": 501},
        },
    ),
    "posterior": (
        [],
        {"mode": "posterior", "experiments": [
            {"model": {"kind": "gaussian", "transform": {"kind": "identity"}}, "observation": 0.4},
            {"model": {"kind": "gaussian", "transform": {"kind": "cube"}}, "observation": 1.2}]},
    ),
    "fisher-table": (
        [],
        {"mode": "fisher-table", "models": [{"kind": "binomial", "n": 40}, {"kind": "negbinomial", "r": 2}],
         "grid": {"lower": 0.01, "upper": 0.99, "num_points": 99}},
    ),
}


def test_8_determinism(tmp_path):
    mismatched = []
    for command, (flags, cfg) in COMMAND_CONFIGS.items():
        extra = list(flags)
        if cfg is not None:
            path = tmp_path / f"{command}.json"
            path.write_text(json.dumps(cfg))
            extra += ["--config", str(path)]
        outputs = []
        for run, threads in itertools.product(range(2), (1, 8)):
            out = tmp_path / f"{command}_{run}_{threads}"
            assert main([command, *extra, "--seed", "99", "--threads", str(threads), "--out", str(out)]) == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
        if not outputs[0] or any(o != outputs[0] for o in outputs[1:]):
            mismatched.append(command)
    ok = not mismatched
    assert record(
        "8", ok, f"{len(COMMAND_CONFIGS)} commands x 2 runs x threads(1, 8): "
        + ("all CSV bytes identical" if ok else f"differences in {mismatched}")
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
