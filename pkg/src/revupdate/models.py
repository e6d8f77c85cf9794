"""Experiment families: Gaussian observation of a polynomial transform,
binomial and negative binomial counts.

Every model is an immutable value exposing a vectorized log-likelihood,
the analytic second derivative of that log-likelihood, its mean, and a
forward sampler. For the Bernoulli families ``theta`` is the probability
of the *counted* outcome in each trial; the binomial datum is the number
of counted outcomes in ``n`` trials and the negative binomial datum is the
number of trials needed to see ``r`` counted outcomes.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import gammaln, xlog1py, xlogy

from .errors import DomainError, NumericError
from .grid import BERNOULLI_CLAMP

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
NEGBINOM_MAX_TRIALS = 10**7


@dataclass(frozen=True)
class Transform:
    """Polynomial map from parameter to observation mean.

    ``kind`` is one of ``identity``, ``cube``, ``power`` (with integer
    ``degree`` >= 1) or ``poly`` (with ascending ``coefficients``, so
    ``(1, 0, 2)`` is ``2*theta**2 + 1``).
    """

    kind: str = "identity"
    degree: int | None = None
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind == "identity":
            coef = (0.0, 1.0)
        elif self.kind == "cube":
            coef = (0.0, 0.0, 0.0, 1.0)
        elif self.kind == "power":
            if self.degree is None or int(self.degree) != self.degree or self.degree < 1:
                raise DomainError(f"power transform needs integer degree >= 1, got {self.degree}")
            coef = (0.0,) * int(self.degree) + (1.0,)
        elif self.kind == "poly":
            if not self.coefficients:
                raise DomainError("poly transform needs at least one coefficient")
            coef = tuple(float(c) for c in self.coefficients)
            if not all(math.isfinite(c) for c in coef):
                raise DomainError("poly coefficients must be finite")
            object.__setattr__(self, "coefficients", coef)
        else:
            raise DomainError(f"unknown transform kind {self.kind!r}")
        poly = Polynomial(coef)
        object.__setattr__(self, "_f", poly)
        object.__setattr__(self, "_df", poly.deriv(1))
        object.__setattr__(self, "_d2f", poly.deriv(2))

    def __call__(self, theta):
        return self._f(theta)

    def derivative(self, theta):
        return self._df(theta)

    def second_derivative(self, theta):
        return self._d2f(theta)

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "power":
            out["degree"] = int(self.degree)
        elif self.kind == "poly":
            out["coefficients"] = list(self.coefficients)
        return out


IDENTITY = Transform("identity")
CUBE = Transform("cube")


def _as_real(obs):
    if isinstance(obs, bool) or not isinstance(obs, numbers.Real):
        raise TypeError(f"Gaussian observation must be a real number, got {type(obs).__name__}")
    return float(obs)


def _as_count(obs):
    if isinstance(obs, bool) or not isinstance(obs, numbers.Integral):
        if isinstance(obs, numbers.Real) and float(obs).is_integer():
            return int(obs)
        raise TypeError(f"count observation must be an integer, got {obs!r}")
    return int(obs)


def _check_unit_theta(theta):
    t = np.asarray(theta, dtype=float)
    if not np.all((t > 0.0) & (t < 1.0)):
        raise DomainError("theta must lie strictly inside (0, 1)")
    return t


@dataclass(frozen=True)
class GaussianTransformModel:
    """Datum ``x = f(theta) + e`` with ``e ~ N(0, noise_sd**2)`` and known noise."""

    transform: Transform = IDENTITY
    noise_sd: float = 1.0

    bernoulli = False

    def __post_init__(self):
        if not (math.isfinite(self.noise_sd) and self.noise_sd > 0):
            raise DomainError(f"noise_sd must be positive and finite, got {self.noise_sd}")

    def log_likelihood(self, obs, theta):
        x = _as_real(obs)
        z = (x - self.transform(np.asarray(theta, dtype=float))) / self.noise_sd
        return -0.5 * z * z - LOG_SQRT_2PI - math.log(self.noise_sd)

    def d2_log_likelihood(self, obs, theta):
        """Second derivative in theta of the log-likelihood."""
        x = np.asarray(obs, dtype=float)
        t = np.asarray(theta, dtype=float)
        tf = self.transform
        resid = x - tf(t)
        return -(tf.derivative(t) ** 2 - resid * tf.second_derivative(t)) / self.noise_sd**2

    def mean(self, theta):
        return self.transform(theta)

    def validate_theta(self, theta):
        t = np.asarray(theta, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError("theta must be finite")
        return t

    def sample(self, theta, rng):
        t = float(self.validate_theta(theta))
        return float(self.transform(t) + self.noise_sd * rng.standard_normal())

    def initial_bracket(self, obs):
        """Rough parameter bracket around the values consistent with ``obs``."""
        x = _as_real(obs)
        roots = (self.transform._f - x).roots()
        real = roots[np.abs(roots.imag) <= 1e-8 * (1 + np.abs(roots.real))].real
        centre = float(real[np.argmin(np.abs(real))]) if real.size else 0.0
        return centre - 1.0, centre + 1.0

    def to_dict(self):
        return {"kind": "gaussian", "transform": self.transform.to_dict(), "sigma": self.noise_sd}


@dataclass(frozen=True)
class BinomialModel:
    """Number of counted outcomes ``y`` in ``num_trials`` Bernoulli trials."""

    num_trials: int

    bernoulli = True

    def __post_init__(self):
        if int(self.num_trials) != self.num_trials or self.num_trials < 1:
            raise DomainError(f"num_trials must be a positive integer, got {self.num_trials}")

    def _count(self, obs):
        y = _as_count(obs)
        if not 0 <= y <= self.num_trials:
            raise DomainError(f"binomial count {y} outside [0, {self.num_trials}]")
        return y

    def log_likelihood(self, obs, theta):
        y, n = self._count(obs), self.num_trials
        t = _check_unit_theta(theta)
        log_choose = gammaln(n + 1) - gammaln(y + 1) - gammaln(n - y + 1)
        return log_choose + xlogy(y, t) + xlog1py(n - y, -t)

    def d2_log_likelihood(self, obs, theta):
        y = np.asarray(obs, dtype=float)
        t = np.asarray(theta, dtype=float)
        return -y / t**2 - (self.num_trials - y) / (1.0 - t) ** 2

    def mean(self, theta):
        return self.num_trials * np.asarray(theta, dtype=float)

    def validate_theta(self, theta):
        return _check_unit_theta(theta)

    def sample(self, theta, rng):
        t = float(_check_unit_theta(theta))
        return int(rng.binomial(self.num_trials, t))

    def initial_bracket(self, obs):
        return BERNOULLI_CLAMP

    def to_dict(self):
        return {"kind": "binomial", "n": int(self.num_trials)}


@dataclass(frozen=True)
class NegativeBinomialModel:
    """Number of trials ``z`` needed to observe ``target_count`` counted outcomes."""

    target_count: int

    bernoulli = True

    def __post_init__(self):
        if int(self.target_count) != self.target_count or self.target_count < 1:
            raise DomainError(f"target_count must be a positive integer, got {self.target_count}")

    def _count(self, obs):
        z = _as_count(obs)
        if z < self.target_count:
            raise DomainError(f"negative binomial count {z} below target {self.target_count}")
        return z

    def log_likelihood(self, obs, theta):
        z, r = self._count(obs), self.target_count
        t = _check_unit_theta(theta)
        log_choose = gammaln(z) - gammaln(r) - gammaln(z - r + 1)
        return log_choose + r * np.log(t) + xlog1py(z - r, -t)

    def d2_log_likelihood(self, obs, theta):
        z = np.asarray(obs, dtype=float)
        t = np.asarray(theta, dtype=float)
        r = self.target_count
        return -r / t**2 - (z - r) / (1.0 - t) ** 2

    def mean(self, theta):
        return self.target_count / np.asarray(theta, dtype=float)

    def validate_theta(self, theta):
        return _check_unit_theta(theta)

    def sample(self, theta, rng):
        t = float(_check_unit_theta(theta))
        # a geometric draw is the trial index of the next counted outcome
        z = int(np.sum(rng.geometric(t, size=self.target_count)))
        if z > NEGBINOM_MAX_TRIALS:
            raise NumericError(
                f"negative binomial draw exceeded {NEGBINOM_MAX_TRIALS} trials at theta={t}"
            )
        return z

    def initial_bracket(self, obs):
        return BERNOULLI_CLAMP

    def to_dict(self):
        return {"kind": "negbinomial", "r": int(self.target_count)}


# Functional entry points


def gaussian_log_likelihood(model: GaussianTransformModel, obs, theta):
    return model.log_likelihood(obs, theta)


def binomial_log_pmf(model: BinomialModel, count, theta):
    """Log of ``C(n, y) theta**y (1 - theta)**(n - y)``."""
    return model.log_likelihood(count, theta)


def negbinom_log_pmf(model: NegativeBinomialModel, count, theta):
    """Log of ``C(z - 1, r - 1) theta**r (1 - theta)**(z - r)``."""
    return model.log_likelihood(count, theta)


def sample(model, theta, rng):
    """Draw one observation from ``model`` at ``theta`` using generator ``rng``."""
    return model.sample(theta, rng)


def transform_derivative(model: GaussianTransformModel, theta):
    return model.transform.derivative(theta)


def model_from_dict(spec: dict):
    """Build a model from its JSON-style description."""
    kind = spec.get("kind")
    if kind == "gaussian":
        tspec = dict(spec.get("transform", {"kind": "identity"}))
        transform = Transform(
            tspec.pop("kind"),
            degree=tspec.pop("degree", None),
            coefficients=tuple(tspec.pop("coefficients")) if "coefficients" in tspec else None,
        )
        return GaussianTransformModel(transform, float(spec.get("sigma", 1.0)))
    if kind == "binomial":
        return BinomialModel(int(spec["n"]))
    if kind == "negbinomial":
        return NegativeBinomialModel(int(spec["r"]))
    raise DomainError(f"unknown model kind {kind!r}")
