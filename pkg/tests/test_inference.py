import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from revupdate.errors import AlignmentError, DomainError, GridRangeError, UnderflowError
from revupdate.fisher import FisherCurve, analytic_fisher
from revupdate.grid import ParameterGrid, fit_grid
from revupdate.inference import (
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
from revupdate.models import (
    CUBE,
    IDENTITY,
    BinomialModel,
    GaussianTransformModel,
    NegativeBinomialModel,
)

REAL = ParameterGrid(-6.0, 6.0, 2001)
UNIT = ParameterGrid(1e-6, 1 - 1e-6, 2001)
A = GaussianTransformModel(IDENTITY, 1.0)
B = GaussianTransformModel(CUBE, 1.0)


def build(grid, experiments):
    state = InferenceState.empty(grid)
    for m, x in experiments:
        state = ingest(state, m, x)
    return state


def sup(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


class TestIngest:
    def test_empty_state(self):
        s = InferenceState.empty(REAL)
        assert not np.any(s.cum_loglik.log_values)
        assert not np.any(s.cum_fisher.values)

    def test_same_model_twice(self):
        m = GaussianTransformModel(IDENTITY, 0.5)
        s = build(REAL, [(m, 0.1), (m, -0.3)])
        np.testing.assert_allclose(s.cum_fisher.values, 2 / 0.25)

    def test_example1_information(self):
        sa, sb = 1.5, 0.7
        s = build(REAL, [(GaussianTransformModel(IDENTITY, sa), 0.2), (GaussianTransformModel(CUBE, sb), 1.1)])
        np.testing.assert_allclose(s.cum_fisher.values, sa**-2 + 9 * REAL.points**4 / sb**2, rtol=1e-14)

    def test_order_commutes(self):
        ab = build(REAL, [(A, 0.4), (B, -1.2)])
        ba = build(REAL, [(B, -1.2), (A, 0.4)])
        assert sup(ab.cum_loglik.log_values, ba.cum_loglik.log_values) <= 1e-12
        assert sup(ab.cum_fisher.values, ba.cum_fisher.values) <= 1e-12

    def test_value_semantics(self):
        s0 = InferenceState.empty(REAL)
        s1 = ingest(s0, A, 1.0)
        assert s1 is not s0
        assert not np.any(s0.cum_fisher.values)
        with pytest.raises(ValueError):
            s1.cum_fisher.values[0] = 5.0

    def test_bernoulli_on_real_grid(self):
        with pytest.raises(DomainError):
            ingest(InferenceState.empty(REAL), BinomialModel(4), 1)
        with pytest.raises(DomainError):
            ingest(InferenceState.empty(ParameterGrid(0.0, 0.5, 101)), NegativeBinomialModel(2), 5)


class TestIngestCurves:
    def test_zero_curves_identity(self):
        s = build(REAL, [(A, 0.3)])
        t = ingest_curves(s, LogLikelihoodCurve.zeros(REAL), FisherCurve.zeros(REAL))
        np.testing.assert_array_equal(t.cum_loglik.log_values, s.cum_loglik.log_values)
        np.testing.assert_array_equal(t.cum_fisher.values, s.cum_fisher.values)

    def test_matches_ingest(self):
        s = build(REAL, [(A, 0.3)])
        via_curves = ingest_curves(s, LogLikelihoodCurve.from_model(B, 2.0, REAL), analytic_fisher(B, REAL))
        direct = ingest(s, B, 2.0)
        np.testing.assert_array_equal(via_curves.cum_loglik.log_values, direct.cum_loglik.log_values)
        np.testing.assert_array_equal(via_curves.cum_fisher.values, direct.cum_fisher.values)

    def test_notional_observation(self):
        # prior knowledge summarized as a pseudo-observation of the identity experiment
        x_prior, x_cube = 0.6, 1.9
        notional = ingest_curves(
            InferenceState.empty(REAL),
            LogLikelihoodCurve.from_model(A, x_prior, REAL),
            analytic_fisher(A, REAL),
        )
        post_a = posterior_revised(ingest(notional, B, x_cube))
        post_b = posterior_revised(build(REAL, [(A, x_prior), (B, x_cube)]))
        assert sup(post_a.density, post_b.density) <= 1e-12

    def test_grid_mismatch(self):
        other = ParameterGrid(-6.0, 6.0, 2003)
        with pytest.raises(AlignmentError):
            ingest_curves(InferenceState.empty(REAL), LogLikelihoodCurve.zeros(other), FisherCurve.zeros(REAL))


class TestJeffreys:
    def test_constant(self):
        p = jeffreys_prior(FisherCurve(REAL, np.full(REAL.num_points, 4.0)))
        np.testing.assert_array_equal(p.values, 2.0)

    def test_example1(self):
        s = build(REAL, [(A, 0.0), (B, 0.0)])
        np.testing.assert_allclose(jeffreys_prior(s.cum_fisher).values, np.sqrt(1 + 9 * REAL.points**4))

    def test_example2_shape(self):
        g = ParameterGrid(0.01, 0.5, 201)
        s = build(g, [(BinomialModel(40), 3), (NegativeBinomialModel(2), 20)])
        t = g.points
        shape = np.sqrt(2 + 40 * t) / (t * np.sqrt(1 - t))
        ratio = jeffreys_prior(s.cum_fisher).values / shape
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


class TestPosteriorRevised:
    def test_standard_normal(self):
        post = posterior_revised(build(REAL, [(A, 0.0)]))
        assert cdf_at(post, 0.0) == pytest.approx(0.5, abs=1e-6)
        np.testing.assert_allclose(post.density, stats.norm.pdf(REAL.points), atol=1e-6)

    def test_conjugate_normal(self):
        x1, x2 = 0.7, -0.2
        post = posterior_revised(build(REAL, [(A, x1), (A, x2)]))
        expected = stats.norm.pdf(REAL.points, (x1 + x2) / 2, 1 / np.sqrt(2))
        assert sup(post.density, expected) <= 1e-5
        assert cdf_at(post, 0.25) == pytest.approx(0.5, abs=1e-6)

    def test_example1_one_shot_prior(self):
        xa, xb = 0.3, 1.4
        post = posterior_revised(build(REAL, [(A, xa), (B, xb)]))
        t = REAL.points
        w = np.exp(-0.5 * (xa - t) ** 2 - 0.5 * (xb - t**3) ** 2) * np.sqrt(1 + 9 * t**4)
        assert sup(post.density, w / integrate.trapezoid(w, t)) <= 1e-12

    def test_needs_information(self):
        with pytest.raises(DomainError):
            posterior_revised(InferenceState.empty(REAL))

    def test_underflow(self):
        # the max shift leaves a unit peak, so only a sub-1e-300 width can underflow
        tiny = ParameterGrid(0.0, 1e-299, 101)
        loglik = LogLikelihoodCurve.zeros(tiny)
        prior = PriorCurve(tiny, np.where(np.arange(101) == 7, 1.0, 0.0))
        with pytest.raises(UnderflowError):
            posterior_from_prior(loglik, prior)

    def test_extreme_likelihood_no_underflow(self):
        # a log-likelihood around -1e6 would underflow without the max shift
        m = GaussianTransformModel(IDENTITY, 1e-3)
        post = revised_posterior([(m, 1.0), (m, 1.0)], grid=ParameterGrid(-1.0, 0.5, 2001))
        assert post.cdf[-1] == 1.0
        assert np.all(np.isfinite(post.density))

    def test_coarse_grid_rejected(self):
        with pytest.raises(DomainError):
            posterior_revised(build(ParameterGrid(-3, 3, 51), [(A, 0.0)]))


class TestSequential:
    def test_orders_differ_by_theta_squared(self):
        xa, xb = 0.5, 0.9
        ab = posterior_standard_sequential([(A, xa), (B, xb)], REAL)
        ba = posterior_standard_sequential([(B, xb), (A, xa)], REAL)
        t = REAL.points
        mask = (np.abs(t) > 0.05) & (np.abs(t) < 2.0)
        ratio = ba.density[mask] / (ab.density[mask] * t[mask] ** 2)
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)

    def test_duplicate_experiment_matches_revised(self):
        exps = [(B, 0.4), (B, 1.3)]
        seq = posterior_standard_sequential(exps, REAL)
        rev = revised_posterior(exps, REAL)
        assert sup(seq.density, rev.density) <= 1e-10

    def test_proportional_information(self):
        exps = [(GaussianTransformModel(CUBE, 0.8), 0.4), (GaussianTransformModel(CUBE, 2.0), 1.3)]
        assert sup(
            posterior_standard_sequential(exps, REAL).density, revised_posterior(exps, REAL).density
        ) <= 1e-10

    @pytest.mark.parametrize("exp", [(A, 0.3), (B, -0.7), (BinomialModel(40), 3), (NegativeBinomialModel(2), 17)])
    def test_single_experiment(self, exp):
        grid = UNIT if exp[0].bernoulli else REAL
        seq = posterior_standard_sequential([exp], grid)
        rev = revised_posterior([exp], grid)
        assert sup(seq.density, rev.density) <= 1e-10

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            posterior_standard_sequential([], REAL)


class TestQuantileAndCdf:
    def test_linear_interpolation(self):
        g = ParameterGrid(0.0, 2.0, 3)
        post = PosteriorCurve(g, np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.5, 1.0]))
        assert quantile(post, 0.25) == 0.5
        assert quantile(post, 0.5) == 1.0
        assert cdf_at(post, 1.5) == 0.75

    def test_normal_quantiles(self):
        post = posterior_revised(build(REAL, [(A, 0.0)]))
        assert quantile(post, 0.95) == pytest.approx(1.6449, abs=max(1e-3, REAL.spacing))
        assert quantile(post, 0.5) == pytest.approx(0.0, abs=REAL.spacing)

    def test_shifted_symmetric(self):
        post = posterior_revised(build(REAL, [(A, 1.25), (A, 1.25)]))
        assert quantile(post, 0.5) == pytest.approx(1.25, abs=REAL.spacing)
        assert cdf_at(post, 1.25) == pytest.approx(0.5, abs=1e-6)

    def test_cdf_at_lower(self):
        post = posterior_revised(build(REAL, [(A, 0.0)]))
        assert cdf_at(post, REAL.lower) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("p", [0.05, 0.5, 0.95])
    def test_round_trip(self, p):
        post = posterior_revised(build(REAL, [(A, 0.4), (B, 1.1)]))
        assert cdf_at(post, quantile(post, p)) == pytest.approx(p, abs=1e-6)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 2.0])
    def test_quantile_domain(self, p):
        post = posterior_revised(build(REAL, [(A, 0.0)]))
        with pytest.raises(DomainError):
            quantile(post, p)

    def test_cdf_outside_grid(self):
        post = posterior_revised(build(REAL, [(A, 0.0)]))
        with pytest.raises(GridRangeError):
            cdf_at(post, 6.5)


def test_reparameterization_witness():
    # Jeffreys prior for the cube experiment = uniform in phi = theta**3 pushed back by |dphi/dtheta|
    g = ParameterGrid(-2.0, 2.0, 2001)
    t = g.points
    jeff = jeffreys_prior(analytic_fisher(GaussianTransformModel(CUBE, 1.3), g)).values
    push = 3 * t**2
    jeff = jeff / integrate.trapezoid(jeff, t)
    push = push / integrate.trapezoid(push, t)
    assert sup(jeff, push) <= 1e-10


class TestGridFitting:
    def test_gaussian_wide_enough(self):
        exps = [(A, 0.0), (B, 8.0)]
        g = fit_experiments_grid(exps)
        ll = sum(m.log_likelihood(x, g.points) for m, x in exps)
        ll -= ll.max()
        assert ll[0] < np.log(1e-10) and ll[-1] < np.log(1e-10)
        assert g.num_points == 2001

    def test_bernoulli_clamped(self):
        g = fit_experiments_grid([(BinomialModel(40), 0)])
        assert g.lower == 1e-6
        assert g.upper < 1.0

    def test_mixed_families(self):
        with pytest.raises(DomainError):
            fit_experiments_grid([(A, 0.0), (BinomialModel(4), 2)])

    def test_fit_grid_shrinks(self):
        g = fit_grid(lambda t: -0.5 * t**2, -1000.0, 1000.0, 2001)
        assert g.upper < 100
        assert -0.5 * g.upper**2 < np.log(1e-10)

    def test_zero_counts_posterior_mass(self):
        # y = 0 leaves an integrable theta**-0.5 singularity at the lower edge
        post = revised_posterior([(BinomialModel(40), 0)])
        exact = stats.beta(0.5, 40.5).cdf
        for t in (0.001, 0.01, 0.05):
            assert cdf_at(post, t) == pytest.approx(exact(t), abs=5e-3)


finite = st.floats(-3.0, 3.0, allow_nan=False)


def check_posterior(post):
    assert np.all(post.density >= 0)
    assert np.all(np.diff(post.cdf) >= 0)
    assert post.cdf[0] == 0.0
    assert post.cdf[-1] == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["A", "B"]), finite), min_size=1, max_size=4))
def test_gaussian_posterior_invariants(obs):
    exps = [(A if k == "A" else B, x) for k, x in obs]
    grid = ParameterGrid(-4.0, 4.0, 801)
    post = revised_posterior(exps, grid)
    check_posterior(post)
    assert integrate.trapezoid(post.density, grid.points) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.permutations([(A, 0.3), (B, -1.1), (GaussianTransformModel(CUBE, 2.0), 0.8), (A, 1.9)]))
def test_order_invariance(perm):
    base = revised_posterior([(A, 0.3), (B, -1.1), (GaussianTransformModel(CUBE, 2.0), 0.8), (A, 1.9)], REAL)
    assert sup(revised_posterior(perm, REAL).density, base.density) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.integers(2, 200))
def test_bernoulli_posterior_invariants(y, z):
    post = revised_posterior([(BinomialModel(40), y), (NegativeBinomialModel(2), z)])
    check_posterior(post)
