"""Expected Fisher information: closed forms, additive combination and a
brute-force oracle that evaluates the defining expectation directly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import roots_hermite

from .errors import DomainError, NumericError
from .grid import ParameterGrid, check_aligned
from .models import BinomialModel, GaussianTransformModel, NegativeBinomialModel

HERMITE_NODES = 64
QUADRATURE_RTOL = 1e-6
TAIL_MASS = 1e-12
MAX_SUM_TERMS = 10**6


@dataclass(frozen=True, eq=False)
class FisherCurve:
    """Expected Fisher information evaluated at every grid point."""

    grid: ParameterGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.num_points,):
            raise DomainError(f"expected {self.grid.num_points} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise DomainError("Fisher information must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.num_points))

    def __add__(self, other):
        return combine_fisher(self, other)


def analytic_fisher_gaussian(model: GaussianTransformModel, grid: ParameterGrid) -> FisherCurve:
    slope = model.transform.derivative(grid.points)
    return FisherCurve(grid, slope**2 / model.noise_sd**2)


def analytic_fisher_binomial(model: BinomialModel, grid: ParameterGrid) -> FisherCurve:
    grid.require_unit_interior()
    t = grid.points
    return FisherCurve(grid, model.num_trials / (t * (1.0 - t)))


def analytic_fisher_negbinom(model: NegativeBinomialModel, grid: ParameterGrid) -> FisherCurve:
    grid.require_unit_interior()
    t = grid.points
    return FisherCurve(grid, model.target_count / (t**2 * (1.0 - t)))


def analytic_fisher(model, grid: ParameterGrid) -> FisherCurve:
    """Dispatch to the closed form for ``model``'s family."""
    if isinstance(model, GaussianTransformModel):
        return analytic_fisher_gaussian(model, grid)
    if isinstance(model, BinomialModel):
        return analytic_fisher_binomial(model, grid)
    if isinstance(model, NegativeBinomialModel):
        return analytic_fisher_negbinom(model, grid)
    raise TypeError(f"no Fisher information for {type(model).__name__}")


def combine_fisher(a: FisherCurve, b: FisherCurve) -> FisherCurve:
    """Information from independent experiments adds pointwise."""
    check_aligned(a.grid, b.grid)
    return FisherCurve(a.grid, a.values + b.values)


# Oracle: E[-d2 log L / d theta2] by quadrature or exact summation.


def _gaussian_support(model: GaussianTransformModel, theta, num_nodes):
    nodes, weights = roots_hermite(num_nodes)
    x = model.transform(theta) + np.sqrt(2.0) * model.noise_sd * nodes
    return x, weights / np.sqrt(np.pi)


def _binomial_support(model: BinomialModel, theta):
    y = np.arange(model.num_trials + 1)
    return y, stats.binom.pmf(y, model.num_trials, theta)


def _negbinom_support(model: NegativeBinomialModel, theta):
    r = model.target_count
    # scipy counts the non-counted trials z - r
    upper = stats.nbinom.isf(TAIL_MASS, r, theta)
    if not np.isfinite(upper) or upper + 1 > MAX_SUM_TERMS:
        raise NumericError(
            f"negative binomial tail above {TAIL_MASS} needs more than {MAX_SUM_TERMS} terms"
        )
    failures = np.arange(int(upper) + 2)
    probs = stats.nbinom.pmf(failures, r, theta)
    if probs.sum() < 1.0 - TAIL_MASS:
        raise NumericError(f"negative binomial truncation lost mass at theta={theta}")
    return failures + r, probs


def _support(model, theta, num_nodes):
    if isinstance(model, GaussianTransformModel):
        return _gaussian_support(model, theta, num_nodes)
    if isinstance(model, BinomialModel):
        return _binomial_support(model, theta)
    if isinstance(model, NegativeBinomialModel):
        return _negbinom_support(model, theta)
    raise TypeError(f"no oracle support for {type(model).__name__}")


def _joint_expectation(models, theta, num_nodes):
    """-E[sum_k d2 log L_k] over the product of the per-model supports."""
    supports = [_support(m, theta, num_nodes) for m in models]
    # joint probability weights, expanded one model at a time
    grids = np.meshgrid(*[s[0] for s in supports], indexing="ij", sparse=True)
    weight = np.ones(())
    for _, w in supports:
        weight = np.multiply.outer(weight, w)
    d2 = sum(m.d2_log_likelihood(g, theta) for m, g in zip(models, grids))
    return float(-np.sum(weight * d2))


def numeric_fisher_oracle(model, theta, num_nodes=HERMITE_NODES) -> float:
    """Expected information at ``theta`` computed from its definition.

    ``model`` may be a single model or a sequence of independent models, in
    which case the expectation runs over their joint sampling distribution.
    Gaussian data use Gauss-Hermite quadrature with ``num_nodes`` nodes and
    a doubled-node convergence check; Bernoulli data are summed exactly
    over their support, truncating the negative binomial tail below
    ``1e-12`` mass.
    """
    models = list(model) if isinstance(model, (list, tuple)) else [model]
    if not models:
        raise DomainError("oracle needs at least one model")
    theta = float(theta)
    for m in models:
        m.validate_theta(theta)
    value = _joint_expectation(models, theta, num_nodes)
    if any(isinstance(m, GaussianTransformModel) for m in models):
        check = _joint_expectation(models, theta, 2 * num_nodes)
        scale = max(abs(check), abs(value))
        if scale > 0 and abs(check - value) > QUADRATURE_RTOL * scale:
            raise NumericError(
                f"quadrature did not converge at theta={theta}: {value} vs {check}"
            )
    return value
