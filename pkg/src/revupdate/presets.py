"""Ready-made coverage configurations for the two worked examples.

Example 1 measures a parameter directly (experiment A) and its cube
(experiment B), both with Gaussian noise of known size. The noise levels
and the true-parameter rule are not pinned down by the original study;
the defaults here are unit noise on both and a fresh uniform draw on
[-2, 2] for every trial.

Example 2 pairs a binomial experiment (40 trials) with a negative
binomial one (stop at 2 counted outcomes), the counted-outcome
probability taking 100 values drawn uniformly on [0.01, 0.11] with 2,000
trials each.
"""

from __future__ import annotations

from .coverage import CoverageConfig, PriorStrategy, ThetaSet, UniformTheta
from .models import CUBE, IDENTITY, BinomialModel, GaussianTransformModel, NegativeBinomialModel

EXAMPLE1_TRIALS = 20_000
EXAMPLE1_THETA = (-2.0, 2.0)

EXAMPLE2_N = 40
EXAMPLE2_R = 2
EXAMPLE2_THETA = (0.01, 0.11)
EXAMPLE2_VALUES = 100
EXAMPLE2_TRIALS_EACH = 2_000

DEFAULT_SEED = 20130812


def example1_configs(
    trials=EXAMPLE1_TRIALS, seed=DEFAULT_SEED, sigma_a=1.0, sigma_b=1.0, theta_range=EXAMPLE1_THETA
):
    """Panel (a) and panel (b) configs, keyed by output name.

    All six share the seed, so every run sees the same simulated data.
    """
    exp_a = GaussianTransformModel(IDENTITY, sigma_a)
    exp_b = GaussianTransformModel(CUBE, sigma_b)
    rule = UniformTheta(*theta_range)

    def cfg(label, experiments, prior):
        return CoverageConfig(
            experiments=experiments, prior=prior, true_theta=rule,
            num_trials=trials, seed=seed, label=label,
        )

    return {
        "panel_a": {
            "A_alone": cfg("A alone, uniform prior", (exp_a,), PriorStrategy("combined")),
            "B_alone": cfg("B alone, theta^2 prior", (exp_b,), PriorStrategy("combined")),
        },
        "panel_b": {
            "combined_uniform": cfg(
                "A+B, uniform prior (A first)", (exp_a, exp_b), PriorStrategy("first", first=0)
            ),
            "combined_theta2": cfg(
                "A+B, theta^2 prior (B first)", (exp_a, exp_b), PriorStrategy("first", first=1)
            ),
            "combined_jeffreys": cfg(
                "A+B, combined Jeffreys prior", (exp_a, exp_b), PriorStrategy("combined")
            ),
        },
    }


def example2_configs(
    trials_each=EXAMPLE2_TRIALS_EACH, seed=DEFAULT_SEED, n=EXAMPLE2_N, r=EXAMPLE2_R,
    num_values=EXAMPLE2_VALUES, theta_range=EXAMPLE2_THETA,
):
    """Panel (a) matched/swapped priors and panel (b) combined-data priors."""
    binom = BinomialModel(n)
    negbin = NegativeBinomialModel(r)
    rule = ThetaSet.uniform_draw(*theta_range, num_values, trials_each, seed)

    def cfg(label, experiments, prior):
        return CoverageConfig(
            experiments=experiments, prior=prior, true_theta=rule,
            num_trials=rule.num_trials, seed=seed, label=label,
        )

    return {
        "panel_a": {
            "binomial_matched": cfg(
                "binomial, binomial prior", (binom,), PriorStrategy("combined")
            ),
            "binomial_swapped": cfg(
                "binomial, negative binomial prior", (binom,), PriorStrategy("model", model=negbin)
            ),
            "negbinomial_matched": cfg(
                "negative binomial, negative binomial prior", (negbin,), PriorStrategy("combined")
            ),
            "negbinomial_swapped": cfg(
                "negative binomial, binomial prior", (negbin,), PriorStrategy("model", model=binom)
            ),
        },
        "panel_b": {
            "combined_binomial_prior": cfg(
                "A+B, binomial prior (A first)", (binom, negbin), PriorStrategy("first", first=0)
            ),
            "combined_negbinomial_prior": cfg(
                "A+B, negative binomial prior (B first)", (binom, negbin),
                PriorStrategy("first", first=1),
            ),
            "combined_jeffreys": cfg(
                "A+B, combined Jeffreys prior", (binom, negbin), PriorStrategy("combined")
            ),
        },
    }
