"""Grid posteriors under revised and standard Bayesian updating.

The revised method keeps two running records per analysis: the summed
log-likelihood curve and the summed expected Fisher information curve.
The noninformative prior is computed once, from the accumulated
information, when a posterior is requested. Standard sequential updating
instead fixes the prior from the first experiment and folds in later
likelihoods one at a time.

All curves live on a shared :class:`~revupdate.grid.ParameterGrid`.
Densities are normalized with the trapezoid rule and CDFs are cumulative
trapezoid sums, so linear interpolation of the CDF is exact on each panel.
On grids inside the unit interval the two edge panels are instead integrated
under a power-law fit, which keeps boundary singularities such as
``theta**-0.5`` from inflating the first panel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridRangeError, UnderflowError
from .fisher import FisherCurve, analytic_fisher, combine_fisher
from .grid import BERNOULLI_CLAMP, DEFAULT_POINTS, ParameterGrid, check_aligned, fit_grid

MIN_MASS = 1e-300


def _frozen(values, grid, name):
    v = np.array(values, dtype=float)
    if v.shape != (grid.num_points,):
        raise DomainError(f"{name}: expected {grid.num_points} values, got shape {v.shape}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class LogLikelihoodCurve:
    grid: ParameterGrid
    log_values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.log_values, self.grid, "log-likelihood")
        if np.any(np.isnan(v)) or np.any(v == np.inf):
            raise DomainError("log-likelihood must not be NaN or +inf")
        object.__setattr__(self, "log_values", v)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.num_points))

    @classmethod
    def from_model(cls, model, obs, grid):
        if model.bernoulli:
            grid.require_unit_interior()
        return cls(grid, model.log_likelihood(obs, grid.points))

    def shifted(self):
        """Log values minus their maximum (so the peak is exactly 0)."""
        return self.log_values - np.max(self.log_values)

    def __add__(self, other):
        check_aligned(self.grid, other.grid)
        return LogLikelihoodCurve(self.grid, self.log_values + other.log_values)


@dataclass(frozen=True, eq=False)
class PriorCurve:
    """Unnormalized prior weights; improper priors are fine."""

    grid: ParameterGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values, self.grid, "prior")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise DomainError("prior values must be finite and non-negative")
        if not np.any(v > 0):
            raise DomainError("prior is identically zero")
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, grid):
        return cls(grid, np.ones(grid.num_points))


@dataclass(frozen=True, eq=False)
class PosteriorCurve:
    grid: ParameterGrid
    density: np.ndarray
    cdf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "density", _frozen(self.density, self.grid, "density"))
        object.__setattr__(self, "cdf", _frozen(self.cdf, self.grid, "cdf"))

    def quantile(self, p):
        return quantile(self, p)

    def cdf_at(self, theta):
        return cdf_at(self, theta)


@dataclass(frozen=True, eq=False)
class InferenceState:
    """Cumulative log-likelihood and Fisher information on one grid."""

    grid: ParameterGrid
    cum_loglik: LogLikelihoodCurve
    cum_fisher: FisherCurve

    def __post_init__(self):
        check_aligned(self.grid, self.cum_loglik.grid)
        check_aligned(self.grid, self.cum_fisher.grid)

    @classmethod
    def empty(cls, grid: ParameterGrid):
        return cls(grid, LogLikelihoodCurve.zeros(grid), FisherCurve.zeros(grid))


def ingest(state: InferenceState, model, obs) -> InferenceState:
    """Fold one experiment into ``state``; ``state`` itself is untouched."""
    grid = state.grid
    if model.bernoulli:
        grid.require_unit_interior()
    loglik = LogLikelihoodCurve.from_model(model, obs, grid)
    return ingest_curves(state, loglik, analytic_fisher(model, grid))


def ingest_curves(state: InferenceState, loglik: LogLikelihoodCurve, fisher: FisherCurve):
    """Fold in a caller-supplied likelihood/information pair.

    This is how existing probabilistic knowledge enters: describe it as a
    notional observation with its own likelihood and Fisher information.
    """
    check_aligned(state.grid, loglik.grid)
    check_aligned(state.grid, fisher.grid)
    return InferenceState(
        state.grid, state.cum_loglik + loglik, combine_fisher(state.cum_fisher, fisher)
    )


def jeffreys_prior(fisher: FisherCurve) -> PriorCurve:
    return PriorCurve(fisher.grid, np.sqrt(fisher.values))


def _normalize_log(grid: ParameterGrid, log_density) -> PosteriorCurve:
    grid.require_resolution()
    log_density = np.asarray(log_density, dtype=float)
    top = np.max(log_density)
    if not np.isfinite(top):
        raise UnderflowError("posterior is zero (or undefined) everywhere on the grid")
    w = np.exp(log_density - top)
    panels = 0.5 * (w[1:] + w[:-1]) * grid.spacing
    if grid.lower > 0.0 and grid.upper < 1.0:
        _power_law_edges(grid, w, panels)
    cum = np.cumsum(panels)
    mass = cum[-1]
    if not mass > MIN_MASS:
        raise UnderflowError(f"posterior mass {mass} too small to normalize")
    # dividing the running sum by its own last entry keeps the CDF monotone
    # and makes its final value exactly 1
    cdf = np.concatenate(([0.0], cum / mass))
    return PosteriorCurve(grid, w / mass, cdf)


def _power_law_panel(dist_near, dist_far, w_near, w_far):
    """Integral over a panel of ``w_near * (d / dist_near)**k`` fitted through
    both end values, with ``d`` the distance to the singular boundary."""
    if not (w_near > 0.0 and w_far > 0.0):
        return None
    ratio = dist_far / dist_near
    k = np.log(w_far / w_near) / np.log(ratio)
    if abs(k + 1.0) < 1e-9:
        return w_near * dist_near * np.log(ratio)
    return w_near * dist_near / (k + 1.0) * (ratio ** (k + 1.0) - 1.0)


def _power_law_edges(grid, w, panels):
    # A unit-interval posterior may carry an integrable power-law singularity
    # at 0 or 1 (e.g. theta**-0.5 with no counted outcomes). Trapezoid badly
    # overestimates such an edge panel, so it is integrated under a power law
    # in the distance to the boundary instead.
    pts = grid.points
    first = _power_law_panel(pts[0], pts[1], w[0], w[1])
    if first is not None:
        panels[0] = abs(first)
    last = _power_law_panel(1.0 - pts[-1], 1.0 - pts[-2], w[-1], w[-2])
    if last is not None:
        panels[-1] = abs(last)


def _log_prior(prior: PriorCurve):
    with np.errstate(divide="ignore"):
        return np.log(prior.values)


def posterior_from_prior(loglik: LogLikelihoodCurve, prior: PriorCurve) -> PosteriorCurve:
    """Normalize ``likelihood * prior`` on the grid."""
    check_aligned(loglik.grid, prior.grid)
    return _normalize_log(loglik.grid, loglik.shifted() + _log_prior(prior))


def posterior_revised(state: InferenceState, prior_rule=jeffreys_prior) -> PosteriorCurve:
    """Posterior from the accumulated records.

    ``prior_rule`` maps the accumulated :class:`FisherCurve` to a
    :class:`PriorCurve`; any rule that depends only on the information
    keeps the result independent of ingestion order.
    """
    if not np.any(state.cum_fisher.values > 0):
        raise DomainError("state carries no Fisher information; ingest an experiment first")
    return posterior_from_prior(state.cum_loglik, prior_rule(state.cum_fisher))


def posterior_standard_sequential(experiments, grid: ParameterGrid | None = None) -> PosteriorCurve:
    """Classic updating: Jeffreys prior of the first experiment, then each
    later likelihood multiplied in and renormalized in turn."""
    experiments = list(experiments)
    if not experiments:
        raise DomainError("need at least one experiment")
    if grid is None:
        grid = fit_experiments_grid(experiments)
    first_model, first_obs = experiments[0]
    first = LogLikelihoodCurve.from_model(first_model, first_obs, grid)
    prior = jeffreys_prior(analytic_fisher(first_model, grid))
    post = posterior_from_prior(first, prior)
    # carried in log form so tail points never underflow between steps
    with np.errstate(divide="ignore"):
        log_post = np.log(post.density)
    for model, obs in experiments[1:]:
        step = LogLikelihoodCurve.from_model(model, obs, grid)
        post = _normalize_log(grid, log_post + step.shifted())
        with np.errstate(divide="ignore"):
            log_post = np.log(post.density)
    return post


def quantile(post: PosteriorCurve, p) -> float:
    """First parameter value at which the CDF reaches ``p``."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    cdf, pts = post.cdf, post.grid.points
    i = int(np.searchsorted(cdf, p, side="left"))
    i = min(max(i, 1), len(pts) - 1)
    lo, hi = cdf[i - 1], cdf[i]
    frac = 0.0 if hi == lo else (p - lo) / (hi - lo)
    return float(pts[i - 1] + frac * (pts[i] - pts[i - 1]))


def cdf_at(post: PosteriorCurve, theta) -> float:
    theta = float(theta)
    if not post.grid.contains(theta, tol=1e-9):
        raise GridRangeError(
            f"theta={theta} outside grid [{post.grid.lower}, {post.grid.upper}]"
        )
    return float(np.interp(theta, post.grid.points, post.cdf))


# Grid selection


def joint_log_likelihood(experiments):
    """Vectorized log-likelihood of all ``(model, obs)`` pairs combined."""

    def loglik(theta):
        return sum(m.log_likelihood(x, theta) for m, x in experiments)

    return loglik


def fit_experiments_grid(experiments, num_points=DEFAULT_POINTS) -> ParameterGrid:
    """Grid wide enough that the joint likelihood is negligible outside it."""
    experiments = list(experiments)
    bernoulli = [m.bernoulli for m, _ in experiments]
    if any(bernoulli) and not all(bernoulli):
        raise DomainError("cannot mix unit-interval and real-line parameters")
    brackets = [m.initial_bracket(x) for m, x in experiments]
    lower = min(b[0] for b in brackets)
    upper = max(b[1] for b in brackets)
    clamp = BERNOULLI_CLAMP if bernoulli[0] else None
    return fit_grid(joint_log_likelihood(experiments), lower, upper, num_points, clamp=clamp)


def revised_posterior(experiments, grid: ParameterGrid | None = None, prior_rule=jeffreys_prior):
    """Convenience wrapper: ingest every experiment and build the posterior."""
    experiments = list(experiments)
    if grid is None:
        grid = fit_experiments_grid(experiments)
    state = InferenceState.empty(grid)
    for model, obs in experiments:
        state = ingest(state, model, obs)
    return posterior_revised(state, prior_rule)
