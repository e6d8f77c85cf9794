"""Repeated-sampling check of one-sided posterior credible bounds.

Each trial draws a true parameter, simulates every experiment at it,
builds a posterior under the chosen prior strategy and records the
posterior CDF at the true value. For a probability-matching prior those
records are uniform on (0, 1), so the fraction at or below ``p/100``
should equal ``p/100`` at every integer percentile.

Every trial owns a counter-based Philox stream keyed by the run seed and
positioned by the trial index, which makes reports bit-identical however
the trials are scheduled across threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ConfigError, RevUpdateError, TrialError
from .fisher import analytic_fisher
from .grid import DEFAULT_POINTS, ParameterGrid
from .inference import (
    LogLikelihoodCurve,
    fit_experiments_grid,
    jeffreys_prior,
    posterior_from_prior,
    posterior_standard_sequential,
    revised_posterior,
)
from .models import model_from_dict

PERCENTILES = np.arange(1, 100)
MIN_TRIALS = 100
CHUNK = 500

# Philox counter word 3 separates trial streams (0) from run-level draws (1).
_TRIAL_WORD = 0
_RUN_WORD = 1


def _philox_key(seed):
    return np.random.SeedSequence(int(seed)).generate_state(2, np.uint64)


def trial_stream(seed, index, _key=None, word=_TRIAL_WORD):
    """Generator for trial ``index`` of a run seeded with ``seed``."""
    key = _philox_key(seed) if _key is None else _key
    counter = np.array([0, 0, int(index), word], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


# Prior strategies


@dataclass(frozen=True)
class PriorStrategy:
    """How the noninformative prior is chosen for the combined data.

    ``combined``: Jeffreys prior of the summed information of all
    experiments (revised updating). ``first``: standard sequential
    updating with experiment ``first`` analysed first, so only its Jeffreys
    prior is used. ``model``: Jeffreys prior of an arbitrary ``model``,
    e.g. the one belonging to a different experiment design.
    """

    kind: str = "combined"
    first: int = 0
    model: object = None

    def __post_init__(self):
        if self.kind not in ("combined", "first", "model"):
            raise ConfigError(f"unknown prior strategy {self.kind!r}", key="prior.kind")
        if self.kind == "model" and self.model is None:
            raise ConfigError("prior strategy 'model' needs a model", key="prior.model")

    def posterior(self, experiments, grid):
        if self.kind == "combined":
            return revised_posterior(experiments, grid)
        if self.kind == "first":
            order = [experiments[self.first]] + [
                e for i, e in enumerate(experiments) if i != self.first
            ]
            return posterior_standard_sequential(order, grid)
        loglik = LogLikelihoodCurve.zeros(grid)
        for m, x in experiments:
            loglik = loglik + LogLikelihoodCurve.from_model(m, x, grid)
        return posterior_from_prior(loglik, jeffreys_prior(analytic_fisher(self.model, grid)))

    def prior_curve(self, experiments, grid):
        """The (unnormalized) prior this strategy applies on ``grid``."""
        if self.kind == "combined":
            fisher = analytic_fisher(experiments[0][0], grid)
            for m, _ in experiments[1:]:
                fisher = fisher + analytic_fisher(m, grid)
        elif self.kind == "first":
            fisher = analytic_fisher(experiments[self.first][0], grid)
        else:
            fisher = analytic_fisher(self.model, grid)
        return jeffreys_prior(fisher)

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "first":
            out["first"] = self.first
        elif self.kind == "model":
            out["model"] = self.model.to_dict()
        return out


# True-parameter rules


@dataclass(frozen=True)
class FixedTheta:
    value: float

    def draw(self, index, rng):
        return self.value

    def support(self):
        return self.value, self.value

    def to_dict(self):
        return {"kind": "fixed", "value": self.value}


@dataclass(frozen=True)
class UniformTheta:
    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise ConfigError("uniform rule needs low < high", key="true_theta")

    def draw(self, index, rng):
        return float(rng.uniform(self.low, self.high))

    def support(self):
        return self.low, self.high

    def to_dict(self):
        return {"kind": "uniform", "low": self.low, "high": self.high}


@dataclass(frozen=True)
class ThetaSet:
    """A finite set of true values, each used for ``trials_each`` trials."""

    values: tuple
    trials_each: int

    def __post_init__(self):
        if not self.values:
            raise ConfigError("theta set is empty", key="true_theta.values")
        if self.trials_each < 1:
            raise ConfigError("trials_each must be positive", key="true_theta.trials_each")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def uniform_draw(cls, low, high, count, trials_each, seed):
        """``count`` values drawn uniformly on ``[low, high]`` from the run seed."""
        rng = trial_stream(seed, 0, word=_RUN_WORD)
        return cls(tuple(np.sort(rng.uniform(low, high, size=count))), trials_each)

    @property
    def num_trials(self):
        return len(self.values) * self.trials_each

    def draw(self, index, rng):
        return self.values[index // self.trials_each]

    def support(self):
        return min(self.values), max(self.values)

    def to_dict(self):
        return {"kind": "set", "values": list(self.values), "trials_each": self.trials_each}


# Config and report


@dataclass(frozen=True)
class CoverageConfig:
    experiments: tuple
    prior: PriorStrategy = PriorStrategy()
    true_theta: object = FixedTheta(0.0)
    num_trials: int = 20_000
    seed: int = 0
    num_points: int = DEFAULT_POINTS
    bounds: tuple | None = None
    label: str = "coverage"

    def __post_init__(self):
        object.__setattr__(self, "experiments", tuple(self.experiments))
        if not self.experiments:
            raise ConfigError("experiment list is empty", key="experiments")
        if self.num_trials < MIN_TRIALS:
            raise ConfigError(f"num_trials must be at least {MIN_TRIALS}", key="num_trials")
        if isinstance(self.true_theta, ThetaSet) and self.true_theta.num_trials != self.num_trials:
            raise ConfigError(
                f"theta set implies {self.true_theta.num_trials} trials, config says {self.num_trials}",
                key="num_trials",
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
        if self.prior.kind == "first" and not 0 <= self.prior.first < len(self.experiments):
            raise ConfigError("prior.first is not a valid experiment index", key="prior.first")
        bern = {m.bernoulli for m in self.experiments}
        if self.prior.kind == "model":
            bern.add(self.prior.model.bernoulli)
        if len(bern) > 1:
            raise ConfigError("experiments mix unit-interval and real-line parameters", key="experiments")
        lo, hi = self.true_theta.support()
        if bern == {True} and not (0.0 < lo and hi < 1.0):
            raise ConfigError("true theta must lie inside (0, 1)", key="true_theta")
        if self.bounds is not None:
            grid = self.grid()
            if not (grid.lower < lo and hi < grid.upper):
                raise ConfigError("true theta support must lie strictly inside the grid", key="grid")

    def grid(self):
        if self.bounds is None:
            return None
        return ParameterGrid(self.bounds[0], self.bounds[1], self.num_points)

    def to_dict(self):
        out = {
            "label": self.label,
            "experiments": [m.to_dict() for m in self.experiments],
            "prior": self.prior.to_dict(),
            "true_theta": self.true_theta.to_dict(),
            "num_trials": self.num_trials,
            "seed": int(self.seed),
            "grid": {"num_points": self.num_points},
        }
        if self.bounds is not None:
            out["grid"].update(lower=self.bounds[0], upper=self.bounds[1])
        return out

    @classmethod
    def from_dict(cls, spec):
        prior = dict(spec.get("prior", {"kind": "combined"}))
        if "model" in prior:
            prior["model"] = model_from_dict(prior["model"])
        rule = dict(spec["true_theta"])
        kind = rule.pop("kind")
        if kind == "fixed":
            theta = FixedTheta(float(rule["value"]))
        elif kind == "uniform":
            theta = UniformTheta(float(rule["low"]), float(rule["high"]))
        elif kind == "set":
            if "values" in rule:
                theta = ThetaSet(tuple(rule["values"]), int(rule["trials_each"]))
            else:
                theta = ThetaSet.uniform_draw(
                    rule["low"], rule["high"], int(rule["count"]), int(rule["trials_each"]),
                    int(spec.get("seed", 0)),
                )
        else:
            raise ConfigError(f"unknown true_theta kind {kind!r}", key="true_theta.kind")
        grid = spec.get("grid", {})
        bounds = (grid["lower"], grid["upper"]) if "lower" in grid else None
        num_trials = spec.get("num_trials")
        if num_trials is None:
            num_trials = theta.num_trials if isinstance(theta, ThetaSet) else 20_000
        return cls(
            experiments=tuple(model_from_dict(m) for m in spec["experiments"]),
            prior=PriorStrategy(**prior),
            true_theta=theta,
            num_trials=int(num_trials),
            seed=int(spec.get("seed", 0)),
            num_points=int(grid.get("num_points", DEFAULT_POINTS)),
            bounds=bounds,
            label=spec.get("label", "coverage"),
        )


@dataclass(frozen=True, eq=False)
class CoverageReport:
    label: str
    percentiles: np.ndarray
    proportions: np.ndarray
    tail_below_5: float
    tail_above_95: float
    mean_abs_deviation: float
    num_trials: int
    seed: int
    config: dict = field(default_factory=dict)

    @classmethod
    def from_cdf_values(cls, values, label="coverage", seed=0, config=None):
        """Tabulate per-trial posterior CDF values at the true parameter."""
        u = np.sort(np.asarray(values, dtype=float))
        counts = np.searchsorted(u, PERCENTILES / 100.0, side="right")
        props = counts / u.size
        return cls(
            label=label,
            percentiles=PERCENTILES.copy(),
            proportions=props,
            tail_below_5=float(props[4]),
            tail_above_95=float(1.0 - props[94]),
            mean_abs_deviation=float(np.mean(np.abs(props - PERCENTILES / 100.0))),
            num_trials=int(u.size),
            seed=int(seed),
            config=dict(config or {}),
        )

    def __eq__(self, other):
        if not isinstance(other, CoverageReport):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.percentiles, other.percentiles)
            and np.array_equal(self.proportions, other.proportions)
            and self.tail_below_5 == other.tail_below_5
            and self.tail_above_95 == other.tail_above_95
            and self.mean_abs_deviation == other.mean_abs_deviation
            and self.num_trials == other.num_trials
            and self.seed == other.seed
            and self.config == other.config
        )


def _cdf_at_truth(post, theta):
    grid = post.grid
    # the grid is fitted so mass beyond it is negligible
    if theta <= grid.lower:
        return 0.0
    if theta >= grid.upper:
        return 1.0
    return post.cdf_at(theta)


class _TrialRunner:
    def __init__(self, config: CoverageConfig):
        self.config = config
        self.key = _philox_key(config.seed)
        self.fixed_grid = config.grid()
        self.discrete = all(m.bernoulli for m in config.experiments)
        self.cache = {}

    def posterior(self, observations):
        key = tuple(observations)
        if self.discrete and key in self.cache:
            return self.cache[key]
        experiments = list(zip(self.config.experiments, observations))
        grid = self.fixed_grid or fit_experiments_grid(experiments, self.config.num_points)
        post = self.config.prior.posterior(experiments, grid)
        if self.discrete:
            self.cache[key] = post
        return post

    def trial(self, index):
        rng = trial_stream(None, index, _key=self.key)
        theta = self.config.true_theta.draw(index, rng)
        observations = [m.sample(theta, rng) for m in self.config.experiments]
        return _cdf_at_truth(self.posterior(observations), theta)

    def chunk(self, start, stop):
        out = np.empty(stop - start)
        for i in range(start, stop):
            try:
                out[i - start] = self.trial(i)
            except (RevUpdateError, ArithmeticError, ValueError) as exc:
                raise TrialError(i, exc) from exc
        return out


def run_coverage(config: CoverageConfig, threads: int | None = None) -> CoverageReport:
    """Run every trial of ``config`` and tabulate coverage at percentiles 1..99."""
    runner = _TrialRunner(config)
    n = config.num_trials
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    threads = threads or os.cpu_count() or 1
    if threads == 1:
        parts = [runner.chunk(a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: runner.chunk(*ab), bounds))
    values = np.concatenate(parts)
    return CoverageReport.from_cdf_values(
        values, label=config.label, seed=config.seed, config=config.to_dict()
    )


@dataclass(frozen=True)
class RankingEntry:
    rank: int
    label: str
    mean_abs_deviation: float
    tail_below_5: float
    tail_above_95: float


def compare_reports(reports) -> list[RankingEntry]:
    """Order reports by mean absolute deviation from nominal coverage.

    Ties keep their input order.
    """
    reports = list(reports)
    for r in reports[1:]:
        if not np.array_equal(r.percentiles, reports[0].percentiles):
            raise AlignmentError("reports use different percentile axes")
    ordered = sorted(reports, key=lambda r: r.mean_abs_deviation)
    return [
        RankingEntry(i + 1, r.label, r.mean_abs_deviation, r.tail_below_5, r.tail_above_95)
        for i, r in enumerate(ordered)
    ]
