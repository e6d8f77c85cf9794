"""
Prior knowledge as a notional observation
=========================================

Existing knowledge about a parameter can be encoded as if it came from an
earlier experiment: supply its likelihood and its Fisher information, and
the state absorbs it exactly like real data. The noninformative prior is
then worked out once, from everything accumulated.
"""

from revupdate import (
    CUBE,
    IDENTITY,
    GaussianTransformModel,
    InferenceState,
    LogLikelihoodCurve,
    ParameterGrid,
    analytic_fisher,
    ingest,
    ingest_curves,
    posterior_revised,
)

grid = ParameterGrid(-5.0, 5.0, 2001)

# Earlier work suggests theta is about 0.8 with a spread of 0.5. Express it
# as one observation of a direct measurement with that noise.
earlier = GaussianTransformModel(IDENTITY, noise_sd=0.5)
state = ingest_curves(
    InferenceState.empty(grid),
    LogLikelihoodCurve.from_model(earlier, 0.8, grid),
    analytic_fisher(earlier, grid),
)

# A new experiment measures the cube of theta
cubed = GaussianTransformModel(CUBE, noise_sd=1.0)
state = ingest(state, cubed, 1.4)
post = posterior_revised(state)
print("prior knowledge + cube experiment:")
print("  median %.4f, 90%% interval (%.4f, %.4f)" % (post.quantile(0.5), post.quantile(0.05), post.quantile(0.95)))

# The same numbers come out when the earlier work is entered as a real experiment
same = posterior_revised(ingest(ingest(InferenceState.empty(grid), earlier, 0.8), cubed, 1.4))
print("  max density difference vs two real experiments:", abs(same.density - post.density).max())

# With the cube experiment alone the prior is ~theta**2, which pulls mass off zero
alone = posterior_revised(ingest(InferenceState.empty(grid), cubed, 1.4))
print("cube experiment alone:")
print("  median %.4f, 90%% interval (%.4f, %.4f)" % (alone.quantile(0.5), alone.quantile(0.05), alone.quantile(0.95)))
