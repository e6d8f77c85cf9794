"""Revised Bayesian updating for a univariate continuous parameter.

Likelihoods from independent experiments are multiplied, their expected
Fisher information curves are added, and the Jeffreys prior is taken from
the accumulated information once, so the posterior does not depend on the
order in which experiments are analysed. Standard sequential updating and
a Monte Carlo coverage harness are included for comparison.
"""

from .coverage import (
    CoverageConfig,
    CoverageReport,
    FixedTheta,
    PriorStrategy,
    ThetaSet,
    UniformTheta,
    compare_reports,
    run_coverage,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DomainError,
    GridRangeError,
    NumericError,
    TrialError,
    UnderflowError,
)
from .fisher import (
    FisherCurve,
    analytic_fisher,
    analytic_fisher_binomial,
    analytic_fisher_gaussian,
    analytic_fisher_negbinom,
    combine_fisher,
    numeric_fisher_oracle,
)
from .grid import ParameterGrid, fit_grid
from .inference import (
    InferenceState,
    LogLikelihoodCurve,
    PosteriorCurve,
    PriorCurve,
    cdf_at,
    fit_experiments_grid,
    ingest,
    ingest_curves,
    jeffreys_prior,
    posterior_from_prior,
    posterior_revised,
    posterior_standard_sequential,
    quantile,
    revised_posterior,
)
from .models import (
    CUBE,
    IDENTITY,
    BinomialModel,
    GaussianTransformModel,
    NegativeBinomialModel,
    Transform,
    binomial_log_pmf,
    gaussian_log_likelihood,
    negbinom_log_pmf,
    model_from_dict,
    sample,
    transform_derivative,
)

__version__ = "0.1.0"
