"""Uniform parameter grids and automatic bound selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, DomainError

DEFAULT_POINTS = 2001
MIN_POSTERIOR_POINTS = 101
BERNOULLI_CLAMP = (1e-6, 1.0 - 1e-6)
EDGE_THRESHOLD = 1e-10


@dataclass(frozen=True)
class ParameterGrid:
    """Uniform discretization of the parameter axis, both endpoints included.

    Grids used for posterior construction need at least
    ``MIN_POSTERIOR_POINTS`` points (see :meth:`require_resolution`); plain
    tabulation such as a Fisher table may use coarser grids.
    """

    lower: float
    upper: float
    num_points: int = DEFAULT_POINTS
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lower, upper = float(self.lower), float(self.upper)
        if not (np.isfinite(lower) and np.isfinite(upper)):
            raise DomainError("grid bounds must be finite")
        if not lower < upper:
            raise DomainError(f"grid requires lower < upper, got {lower} >= {upper}")
        n = int(self.num_points)
        if n < 2:
            raise DomainError(f"grid needs at least 2 points, got {n}")
        pts = np.linspace(lower, upper, n)
        pts.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "num_points", n)
        object.__setattr__(self, "points", pts)

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / (self.num_points - 1)

    def __len__(self):
        return self.num_points

    def require_resolution(self):
        if self.num_points < MIN_POSTERIOR_POINTS:
            raise DomainError(
                f"posterior grids need at least {MIN_POSTERIOR_POINTS} points, "
                f"got {self.num_points}"
            )

    def require_unit_interior(self):
        """Raise unless the grid lies strictly inside (0, 1)."""
        if not (self.lower > 0.0 and self.upper < 1.0):
            raise DomainError(
                f"grid [{self.lower}, {self.upper}] must lie strictly inside (0, 1)"
            )

    def contains(self, theta, tol=0.0) -> bool:
        slack = tol * self.spacing
        return self.lower - slack <= theta <= self.upper + slack


def check_aligned(a: ParameterGrid, b: ParameterGrid):
    if a != b:
        raise AlignmentError(f"grid mismatch: {a} vs {b}")


def fit_grid(
    log_likelihood,
    lower=-1.0,
    upper=1.0,
    num_points=DEFAULT_POINTS,
    clamp=None,
    threshold=EDGE_THRESHOLD,
    max_iter=200,
) -> ParameterGrid:
    """Choose grid bounds so the likelihood is negligible beyond them.

    ``log_likelihood`` maps an array of parameter values to log-likelihoods.
    Starting from ``[lower, upper]`` the bracket is doubled on any side
    whose edge value exceeds ``threshold`` times the grid maximum, then
    shrunk to the points above threshold (plus one spacing of margin)
    until it stops changing. ``clamp`` bounds the search, e.g. to the unit
    interval for Bernoulli parameters; an edge pinned at the clamp is
    accepted as is.
    """
    log_thr = np.log(threshold)
    lo_lim, hi_lim = clamp if clamp is not None else (-np.inf, np.inf)
    lo, hi = max(lower, lo_lim), min(upper, hi_lim)
    if not lo < hi:
        raise DomainError(f"empty initial bracket [{lo}, {hi}]")
    for _ in range(max_iter):
        pts = np.linspace(lo, hi, num_points)
        ll = np.asarray(log_likelihood(pts), dtype=float)
        top = np.max(ll)
        if not np.isfinite(top):
            raise DomainError("log-likelihood is not finite anywhere on the bracket")
        rel = ll - top
        width = hi - lo
        grow_lo = rel[0] > log_thr and lo > lo_lim
        grow_hi = rel[-1] > log_thr and hi < hi_lim
        if grow_lo or grow_hi:
            if grow_lo:
                lo = max(lo - width, lo_lim)
            if grow_hi:
                hi = min(hi + width, hi_lim)
            continue
        keep = np.flatnonzero(rel > log_thr)
        i0, i1 = max(keep[0] - 1, 0), min(keep[-1] + 1, num_points - 1)
        if i1 - i0 >= 0.9 * (num_points - 1):
            return ParameterGrid(lo, hi, num_points)
        if i1 - i0 < 2:
            # peak narrower than the spacing; zoom in around it
            i0, i1 = max(i0 - 1, 0), min(i1 + 1, num_points - 1)
        lo, hi = pts[i0], pts[i1]
    raise DomainError("grid bounds did not settle; likelihood may be improper")
