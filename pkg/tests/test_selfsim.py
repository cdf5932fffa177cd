"""Phase-plane separatrix, separable profiles, and their reconstructions."""

import math

import numpy as np
import pytest

from growup.selfsim import (
    Closure,
    CompactReactionProfile,
    SimilarityExponents,
    compact_reaction_profile,
    critical_points,
    integrate_psi,
    lambda_star,
    omega_bound_Y,
    phase_field,
    profile_ode_residual,
    reconstruct_profile,
    separable_profile_pm,
    separatrix,
    supersolution_residual,
)


class TestSimilarityExponents:
    def test_subcritical_pair(self):
        e = SimilarityExponents.from_parameters(0.5, 0.75)
        assert e.alpha == pytest.approx(4.0, abs=1e-14)
        assert e.beta == pytest.approx(0.5, abs=1e-14)
        assert e.closure is Closure.POWER_SUBCRITICAL

    def test_critical_pair(self):
        e = SimilarityExponents.from_parameters(0.5, 1.0)
        assert e.alpha == 1.0
        assert e.beta == pytest.approx(0.25, abs=1e-14)
        assert e.closure is Closure.POWER_CRITICAL

    def test_closure_relation_enforced(self):
        # (alpha, beta) = (2, 0.5) with m = 0.5 closes with gap 0, not 1
        with pytest.raises(ValueError):
            SimilarityExponents(m=0.5, alpha=2.0, beta=0.5,
                                closure=Closure.POWER_SUBCRITICAL)
        SimilarityExponents(m=0.5, alpha=2.0, beta=0.5,
                            closure=Closure.POWER_CRITICAL)

    @pytest.mark.parametrize("m,p", [(0.5, 0.5), (0.5, 0.3), (0.5, 1.2),
                                     (1.0, 1.0), (0.0, 0.5)])
    def test_rejects_out_of_range(self, m, p):
        with pytest.raises(ValueError):
            SimilarityExponents.from_parameters(m, p)

    def test_x_limit(self):
        e = SimilarityExponents.from_parameters(0.5, 0.75)
        assert e.X_limit == pytest.approx(-4.0, abs=1e-14)


class TestPhaseField:
    @pytest.mark.parametrize("m,p", [(0.3, 0.6), (0.5, 0.75), (0.7, 0.9)])
    def test_vanishes_at_critical_points(self, m, p):
        e = SimilarityExponents.from_parameters(m, p)
        for name, (X, Y) in critical_points(e).items():
            dX, dY = phase_field(X, Y, e.alpha, e.beta, m)
            assert abs(dX) <= 1e-12, name
            assert abs(dY) <= 1e-12, name

    def test_critical_closure_has_no_interior_saddle(self):
        e = SimilarityExponents.from_parameters(0.5, 1.0)
        assert set(critical_points(e)) == {"A", "B"}

    def test_dX_vanishes_on_upper_boundary(self):
        e = SimilarityExponents.from_parameters(0.5, 0.75)
        X = np.linspace(-3.9, -0.1, 20)
        dX, _ = phase_field(X, omega_bound_Y(X, e), e.alpha, e.beta, e.m)
        assert np.abs(dX).max() <= 1e-12

    def test_rejects_bad_m(self):
        with pytest.raises(ValueError):
            phase_field(0.0, 0.0, 1.0, 0.25, 1.5)


@pytest.fixture(scope="module")
def path_sub():
    return separatrix(4.0, 0.5, 0.5)


@pytest.fixture(scope="module")
def path_crit():
    return separatrix(1.0, 0.25, 0.5)


@pytest.fixture(scope="module")
def prof_sub(path_sub):
    return reconstruct_profile(path_sub)


@pytest.fixture(scope="module")
def prof_crit(path_crit):
    return reconstruct_profile(path_crit)


class TestSeparatrix:
    def test_terminal_X_subcritical(self, path_sub):
        assert path_sub.terminal_X == pytest.approx(-4.0, rel=0.01)

    def test_terminal_X_critical(self, path_crit):
        assert path_crit.terminal_X == pytest.approx(-4.0, rel=0.01)

    def test_two_closure_zero_pairs_agree(self, path_crit):
        # (2, 0.5) closes with gap 0 for m = 0.5, like (1, 0.25)
        other = separatrix(2.0, 0.5, 0.5)
        assert other.exps.closure is Closure.POWER_CRITICAL
        assert other.terminal_X == pytest.approx(-4.0, rel=0.01)
        assert other.terminal_X == pytest.approx(path_crit.terminal_X,
                                                 rel=1e-3)

    @pytest.mark.parametrize("m", [0.3, 0.7])
    def test_terminal_X_other_m(self, m):
        target = -2.0 / (1.0 - m)
        e = SimilarityExponents.from_parameters(m, 0.5 * (1.0 + m) + 0.05)
        assert separatrix(e.alpha, e.beta, m).terminal_X == pytest.approx(
            target, rel=0.01)
        e = SimilarityExponents.from_parameters(m, 1.0)
        assert separatrix(e.alpha, e.beta, m).terminal_X == pytest.approx(
            target, rel=0.01)

    def test_stays_in_invariant_region(self, path_sub, path_crit):
        for path in (path_sub, path_crit):
            assert path.X.max() <= 1e-6
            assert path.X.min() >= path.exps.X_limit - 1e-6
            assert path.Y.min() >= -1e-12

    def test_Y_growth_rate_near_A(self, path_sub):
        # Y ~ e^{2 eta} at the small end
        k = np.searchsorted(path_sub.eta, path_sub.eta[0] + 1.0)
        d = np.diff(np.log(path_sub.Y[:k])) / np.diff(path_sub.eta[:k])
        assert d == pytest.approx(2.0, abs=1e-3)

    def test_eta_increasing_and_truncation(self, path_sub):
        assert (np.diff(path_sub.eta) > 0).all()
        short = separatrix(4.0, 0.5, 0.5, eta_max=5.0)
        assert short.eta[-1] <= 5.0
        with pytest.raises(ValueError):
            separatrix(4.0, 0.5, 0.5, eta_max=-50.0)

    def test_rejects_closure_gap(self):
        with pytest.raises(ValueError):
            separatrix(3.0, 0.5, 0.5)    # gap = 0.5


class TestProfileReconstruction:
    def test_origin_value(self, prof_sub):
        f, _ = prof_sub.value_and_slope(2e-4)
        assert f == pytest.approx(1.0, abs=2e-3)
        f4, _ = prof_sub.value_and_slope(1e-3)
        assert abs(f4 - 1.0) > abs(f - 1.0)   # deviation shrinks toward 0

    def test_decreasing_and_positive(self, prof_sub, prof_crit):
        for prof in (prof_sub, prof_crit):
            assert (np.diff(prof.f) < 0).all()
            assert (prof.f > 0).all()

    def test_pure_power_tail(self, prof_sub):
        # closure 1: f ~ c xi^{-2/(1-m)}, here xi^{-4}
        sel = prof_sub.xi >= 1e2
        c = prof_sub.f[sel] * prof_sub.xi[sel] ** 4
        assert prof_sub.asymptotic_class == "pure-power"
        assert 0.1 < c.min() and c.max() < 100.0
        assert c.max() / c.min() < 1.5

    def test_log_corrected_tail(self, prof_crit):
        # closure 0: f ~ (log xi / xi^2)^{1/(1-m)}
        sel = prof_crit.xi >= 1e2
        xi = prof_crit.xi[sel]
        ratio = prof_crit.f[sel] * (xi * xi / np.log(xi)) ** 2
        assert prof_crit.asymptotic_class == "log-corrected"
        assert ratio.min() > 0.5 and ratio.max() < 1e3
        assert ratio.max() / ratio.min() < 10.0

    def test_supersolution_residual(self, prof_sub, prof_crit):
        assert supersolution_residual(prof_sub) >= -1e-8
        assert supersolution_residual(prof_crit) >= -1e-8

    def test_supersolution_residual_detects_violation(self, prof_sub):
        class Stub:
            exponents = prof_sub.exponents
            xi = np.array([1.0, 2.0])
            f = np.array([1.0, 1.0])
            # X = -alpha/beta - 1 makes alpha f + beta xi f' = -f < 0
            df = (prof_sub.exponents.X_limit * 0
                  - (prof_sub.exponents.alpha / prof_sub.exponents.beta + 1)
                  ) * f / xi
        assert supersolution_residual(Stub()) < 0.0

    def test_ode_residual(self, prof_sub, prof_crit):
        pts = [1e-2, 1e-1, 1.0, 10.0, 100.0]
        assert profile_ode_residual(prof_sub, pts) <= 1e-6
        assert profile_ode_residual(prof_crit, pts) <= 1e-6

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_scaling_family_closes(self, prof_sub, lam):
        res = profile_ode_residual(prof_sub.rescaled(lam),
                                   [1e-2, 1.0, 50.0])
        assert res <= 1e-6

    def test_f0_scaling(self, path_sub):
        prof = reconstruct_profile(path_sub, f0=4.0)
        f, _ = prof.value_and_slope(2e-4)
        assert f == pytest.approx(4.0, rel=2e-3)
        with pytest.raises(ValueError):
            reconstruct_profile(path_sub, f0=-1.0)


class TestSeparableProfile:
    def test_lam_one_flat_then_grows(self):
        prof = separable_profile_pm(0.5, 1.0, 1.0)
        assert prof.classification == "positive-unbounded"
        inside = prof.phi[prof.r <= 1.0]
        assert np.abs(inside - 1.0).max() <= 1e-9
        assert prof.phi[-1] > 1.0

    def test_lam_zero_crossing_location(self):
        # cosine inside, linear outside: zero at L + cot(L)
        for L in (0.5, 1.0):
            prof = separable_profile_pm(0.5, 0.0, L)
            assert prof.classification == "crosses-zero"
            assert prof.R == pytest.approx(L + 1.0 / math.tan(L), abs=1e-8)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            separable_profile_pm(1.5, 0.5)
        with pytest.raises(ValueError):
            separable_profile_pm(0.5, -0.1)
        with pytest.raises(ValueError):
            separable_profile_pm(0.5, 0.5, L=0.0)


@pytest.fixture(scope="module")
def star():
    return lambda_star(0.5, 1.0)


@pytest.fixture(scope="module")
def compact_prof():
    return compact_reaction_profile(0.5, 1.0, 1.0)


class TestLambdaStar:
    def test_bracket_width(self, star):
        lo, hi = star.bracket
        assert hi - lo <= 1e-8
        assert 0.0 < star.lam_star < 1.0

    def test_sides_classify_oppositely(self, star):
        lo, hi = star.bracket
        assert separable_profile_pm(0.5, max(lo - 0.05, 0.0), 1.0
                                    ).classification == "crosses-zero"
        assert separable_profile_pm(0.5, min(hi + 0.05, 1.0), 1.0
                                    ).classification == "positive-unbounded"

    def test_crossing_radius_grows_toward_star(self, star):
        pairs = sorted(star.crossings)
        radii = [R for _, R in pairs]
        assert len(radii) >= 5
        assert all(a < b for a, b in zip(radii, radii[1:]))

    @pytest.mark.parametrize("m", [0.3, 0.7])
    def test_star_interior_for_other_m(self, m):
        st = lambda_star(m, 1.0, tol=1e-6)
        assert 0.0 < st.lam_star < 1.0


class TestCompactReactionProfile:
    def test_amplitude_identity(self, compact_prof):
        assert compact_prof.A == pytest.approx((compact_prof.R0 / compact_prof.L) ** 4, rel=1e-12)

    def test_endpoint_values(self, compact_prof):
        assert compact_prof.phi[0] == pytest.approx(compact_prof.A, rel=1e-9)
        assert compact_prof.phi[-1] == 0.0
        assert (np.diff(compact_prof.phi) <= 0).all()

    def test_ode_residual_after_rescaling(self, compact_prof):
        # (varphi^m)'' + varphi^p = 0 away from the support edge
        x, phi = compact_prof.x, compact_prof.phi
        h = x[1] - x[0]
        v = phi ** compact_prof.m
        d2 = (v[2:] - 2 * v[1:-1] + v[:-2]) / h ** 2
        resid = d2 + phi[1:-1] ** compact_prof.p
        interior = (x[1:-1] > 0.05) & (x[1:-1] < 0.9)
        scale = np.abs(phi[1:-1] ** compact_prof.p)
        assert (np.abs(resid[interior]) / scale[interior]).max() < 1e-3

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValueError):
            compact_reaction_profile(0.5, 0.5)
        with pytest.raises(ValueError):
            compact_reaction_profile(0.5, 1.2)


class TestPsiFactor:
    def test_exponential_growth_at_p_one(self):
        prof = compact_reaction_profile(0.5, 1.0, 1.0)
        t, psi = integrate_psi(0.5, 1.0, prof.A, 2.0, 30.0)
        slopes = np.diff(np.log(psi[-100:])) / np.diff(t[-100:])
        assert slopes.mean() == pytest.approx(1.0, abs=1e-3)

    def test_power_growth_below_one(self):
        t, psi = integrate_psi(0.5, 0.75, 2.0, 2.0, 5000.0)
        fit = np.polyfit(np.log(t[-200:]), np.log(psi[-200:]), 1)
        assert fit[0] == pytest.approx(4.0, rel=0.05)

    def test_monotone_increasing(self):
        _, psi = integrate_psi(0.5, 0.9, 1.5, 1.2, 50.0)
        assert (np.diff(psi) > 0).all()

    def test_rejects_psi0_at_or_below_one(self):
        with pytest.raises(ValueError):
            integrate_psi(0.5, 0.75, 1.0, 1.0, 10.0)
