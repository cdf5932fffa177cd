"""Flux-driven boundary profiles, energy, beta* shooting, matched fields."""

import numpy as np
import pytest

import growup.flux
from growup.errors import NumericalError
from growup.flux import (
    FLUX_TOL,
    MatchedField,
    SelfSimilarV,
    check_explicit_subsolution,
    check_gradient_bound,
    explicit_flux_profile,
    gradient_bound_constant,
    integrate_F,
    matched_w,
    minimum_bound,
    pk_subsolution_check,
    profile_energy,
    rescaled_profile_residual,
    shoot_beta_star,
    threshold_amplitude,
)

M, P = 2.0, 0.5
ALPHA = 1.0 / (M + 1.0 - 2.0 * P)          # 0.5
K = 1.0
A_TH = 1.2247448713915890                   # threshold_amplitude(2, 0.5, 1, 0.5)
BETA_STAR_3 = 0.4566522                     # frozen from the m=3 bisection


@pytest.fixture(scope="module")
def star():
    return shoot_beta_star(3.0)


@pytest.fixture(scope="module")
def super_prof():
    return integrate_F(M, P, ALPHA, K, 3.0 * A_TH, mode="super")


@pytest.fixture(scope="module")
def sub_prof():
    return integrate_F(M, P, ALPHA, K, 0.3 * A_TH, mode="sub")


class TestIntegrateF:
    def test_head_values(self, super_prof):
        A = 3.0 * A_TH
        assert super_prof.F[0] == pytest.approx(A, rel=1e-12)
        assert super_prof.dFm[0] == pytest.approx(-K * A ** P, rel=1e-12)

    @pytest.mark.parametrize("prof_name", ["super_prof", "sub_prof"])
    def test_flux_identity(self, prof_name, request):
        prof = request.getfixturevalue(prof_name)
        assert prof.flux_residual <= FLUX_TOL

    def test_above_threshold_keeps_positive_minimum(self, super_prof):
        bound = minimum_bound(M, P, K, ALPHA, 3.0 * A_TH)
        assert super_prof.classification == "positive-minimum-then-unbounded"
        assert super_prof.edge is None
        assert super_prof.min_value() >= bound > 0.0

    def test_below_threshold_crosses(self, sub_prof):
        assert sub_prof.classification == "crosses-zero"
        assert sub_prof.edge is not None
        assert sub_prof.edge > sub_prof.xi[-1]
        assert (sub_prof.F >= 0.0).all()
        # decreasing all the way to the contact point
        assert (np.diff(sub_prof.F) <= 1e-12).all()

    def test_no_flux_minimum_sits_at_origin(self):
        prof = integrate_F(M, P, ALPHA, 0.0, 1.0, mode="super")
        assert prof.dFm[0] == 0.0
        assert int(np.argmin(prof.F)) == 0

    def test_kind_split(self, star, super_prof):
        assert super_prof.kind == "power"
        assert star.critical_profile.kind == "exponential"

    def test_mode_mismatch_raises(self):
        with pytest.raises(NumericalError):
            integrate_F(M, P, ALPHA, K, 3.0 * A_TH, mode="sub")
        with pytest.raises(NumericalError):
            integrate_F(M, P, ALPHA, K, 0.3 * A_TH, mode="super")

    @pytest.mark.parametrize("args", [
        (1.0, 0.5, 1.0, 1.0, 1.0),     # m = 1
        (-2.0, 0.5, 1.0, 1.0, 1.0),    # m < 0
        (2.0, 2.0, 1.0, 1.0, 1.0),     # p = m
        (2.0, 0.0, 1.0, 1.0, 1.0),     # p = 0
        (2.0, 0.5, 0.0, 1.0, 1.0),     # rate = 0
        (2.0, 0.5, 1.0, -1.0, 1.0),    # K < 0
        (2.0, 0.5, 1.0, 1.0, 0.0),     # A = 0
    ])
    def test_rejects_bad_arguments(self, args):
        with pytest.raises(ValueError):
            integrate_F(*args)

    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError):
            integrate_F(M, P, ALPHA, K, 1.0, mode="both")


class TestEnergy:
    def test_head_energy_closed_form(self, sub_prof):
        E = profile_energy(sub_prof)
        A = 0.3 * A_TH
        expected = 0.5 * K * K * A ** (2 * P) \
            - ALPHA * M / (M + 1.0) * A ** (M + 1.0)
        assert E.E[0] == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("prof_name", ["super_prof", "sub_prof"])
    def test_nonincreasing(self, prof_name, request):
        E = profile_energy(request.getfixturevalue(prof_name))
        assert E.is_nonincreasing()

    def test_sign_flips_at_threshold(self):
        above = profile_energy(integrate_F(M, P, ALPHA, K, 1.1 * A_TH))
        below = profile_energy(integrate_F(M, P, ALPHA, K, 0.9 * A_TH))
        assert above.E[0] < 0.0 < below.E[0]


class TestThresholdAndBound:
    def test_threshold_value(self):
        # (K^2 (m+1) / (2 alpha m))^{1/(m+1-2p)} = (3/2)^{1/2}
        got = threshold_amplitude(M, P, K, ALPHA)
        assert got == pytest.approx(np.sqrt(1.5), rel=1e-14)
        assert got == pytest.approx(A_TH, rel=1e-14)

    def test_threshold_needs_power_kind(self):
        with pytest.raises(ValueError):
            threshold_amplitude(3.0, 2.0, 1.0, 1.0)

    def test_bound_needs_margin(self):
        # q < 1 only above 4^{1/(m+1-2p)} A_th = 2 A_th here
        with pytest.raises(ValueError):
            minimum_bound(M, P, K, ALPHA, 1.9 * A_TH)
        assert minimum_bound(M, P, K, ALPHA, 2.1 * A_TH) > 0.0


class TestExplicitProfile:
    def test_flat_power_branch(self):
        # m < 1: gamma = 2/m; the head exponent gamma (p - m) + 1 vanishes
        # at p = m - m/2... here it is 4(0.25 - 0.5) + 1 = 0, so B = K/2
        prof = explicit_flux_profile(0.5, 0.25, 1.0, 0.05)
        assert prof.gamma == pytest.approx(4.0, abs=1e-14)
        assert prof.B == pytest.approx(0.5, rel=1e-14)
        assert prof.flux_residual() <= 1e-12

    def test_pme_branch(self):
        prof = explicit_flux_profile(2.0, 0.5, 1.0, 4.0)
        assert prof.gamma == pytest.approx(1.0, abs=1e-14)
        assert prof.flux_residual() <= 1e-12
        assert prof(prof.edge) == 0.0
        assert prof(0.0) == pytest.approx(4.0, rel=1e-14)

    def test_subsolution_small_head_only(self):
        assert check_explicit_subsolution(
            explicit_flux_profile(0.5, 0.25, 1.0, 0.05))
        assert not check_explicit_subsolution(
            explicit_flux_profile(0.5, 0.25, 1.0, 50.0))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            explicit_flux_profile(1.0, 0.5, 1.0, 1.0)
        with pytest.raises(ValueError):
            explicit_flux_profile(2.0, 2.5, 1.0, 1.0)
        with pytest.raises(ValueError):
            explicit_flux_profile(2.0, 0.5, 0.0, 1.0)


class TestBetaStar:
    def test_value_and_bracket(self, star):
        lo, hi = star.bracket
        assert hi - lo <= 1e-6
        assert lo < star.beta_star < hi
        assert star.beta_star == pytest.approx(BETA_STAR_3, abs=1e-6)
        assert star.p == pytest.approx(2.0, abs=1e-14)
        assert star.iterations <= 40

    def test_side_classifications(self, star):
        up = integrate_F(3.0, 2.0, 2.0 * star.beta_star, 1.0, 1.0)
        down = integrate_F(3.0, 2.0, 0.5 * star.beta_star, 1.0, 1.0)
        assert up.classification == "positive-minimum-then-unbounded"
        assert down.classification == "crosses-zero"

    def test_monotone_across_bracket(self, star):
        # one flip, no flip-flopping, across ten refinement levels
        lo, hi = star.bracket
        betas = np.linspace(lo, hi, 11)
        cls = [integrate_F(3.0, 2.0, b, 1.0, 1.0).classification
               for b in betas]
        flips = sum(a != b for a, b in zip(cls, cls[1:]))
        assert cls[0] == "crosses-zero"
        assert cls[-1] == "positive-minimum-then-unbounded"
        assert flips == 1

    def test_floor_independence(self, star, monkeypatch):
        # the sub-floor continuation decides the branch analytically, so
        # the crossing floor must not shift the answer
        monkeypatch.setattr(growup.flux, "EDGE_FRAC", 1e-10)
        again = shoot_beta_star(3.0)
        assert again.beta_star == pytest.approx(star.beta_star, abs=1e-6)

    def test_critical_profile_shape(self, star):
        prof = star.critical_profile
        assert prof.classification == "crosses-zero"
        assert (prof.F >= 0.0).all()
        assert (np.diff(prof.F) <= 1e-12).all()
        assert prof.edge is not None and np.isfinite(prof.edge)

    def test_critical_energy_nonincreasing(self, star):
        assert profile_energy(star.critical_profile).is_nonincreasing()

    def test_gradient_bound(self, star):
        assert gradient_bound_constant(3.0) == pytest.approx(1.0 / 6.0,
                                                             rel=1e-14)
        assert check_gradient_bound(star.critical_profile)
        # the bound forces beta* <= (m+1)/(2m)
        assert star.beta_star <= (3.0 + 1.0) / (2.0 * 3.0)

    def test_gradient_bound_needs_crossing(self, super_prof):
        with pytest.raises(ValueError):
            check_gradient_bound(super_prof)

    def test_rescaling_family(self, star):
        # F(xi) = A G(K A^{p-m} xi) at lambda = beta K^2 is exact here
        assert rescaled_profile_residual(star, 2.5, 0.7) <= 1e-6
        assert rescaled_profile_residual(star, 0.4, 1.3) <= 1e-6

    def test_rejects_m_at_most_one(self):
        with pytest.raises(ValueError):
            shoot_beta_star(1.0)
        with pytest.raises(ValueError):
            gradient_bound_constant(0.5)


class TestMatchedField:
    @staticmethod
    def _field(K_glue):
        A = 3.0 * threshold_amplitude(M, P, K_glue, ALPHA)
        prof = integrate_F(M, P, ALPHA, K_glue, A, mode="super")
        V = SelfSimilarV(prof, M, P, ALPHA, "power")
        return matched_w(V, K_glue, 1.0)

    def test_continuous_and_c1_at_interface(self):
        w = self._field(2.0)
        t = 1.0e4
        eps = 1e-9
        left, right = w.value(np.array([1.0 - eps, 1.0 + eps]), t)
        assert left == pytest.approx(right, rel=1e-6)
        assert w.slope_jump(t) <= 1e-3

    def test_even_in_x(self):
        w = self._field(2.0)
        x = np.array([0.3, 0.9, 1.7])
        assert w.value(-x, 10.0) == pytest.approx(w.value(x, 10.0))

    def test_supersolution_inside_for_large_flux(self):
        w = self._field(2.0)     # K > L
        x = np.linspace(0.0, 1.0, 200)[:-1]
        assert w.interior_residual(x, 1.0e4).min() >= 0.0

    def test_subsolution_inside_for_small_flux(self):
        w = self._field(0.5)     # K < L
        x = np.linspace(0.0, 1.0, 200)[:-1]
        assert w.interior_residual(x, 1.0e4).max() <= 0.0

    def test_interior_probe_rejects_boundary(self):
        w = self._field(2.0)
        with pytest.raises(ValueError):
            w.interior_residual(np.array([0.5, 1.0]), 10.0)

    def test_rejects_bad_geometry(self):
        w = self._field(2.0)
        with pytest.raises(ValueError):
            matched_w(w.V, -1.0, 1.0)
        with pytest.raises(ValueError):
            matched_w(w.V, 1.0, 0.0)


class TestSelfSimilarV:
    def test_power_scaling(self, super_prof):
        V = SelfSimilarV(super_prof, M, P, ALPHA, "power")
        # V(0, t) = t^alpha F(0)
        assert V.value(0.0, 16.0) == pytest.approx(
            16.0 ** ALPHA * super_prof.F[0], rel=1e-12)

    def test_explicit_profile_backend(self):
        prof = explicit_flux_profile(2.0, 0.5, 1.0, 4.0)
        V = SelfSimilarV(prof, 2.0, 0.5, ALPHA, "power")
        assert V.value(0.0, 9.0) == pytest.approx(9.0 ** ALPHA * 4.0,
                                                  rel=1e-12)

    def test_range_guard(self, super_prof):
        V = SelfSimilarV(super_prof, M, P, ALPHA, "power")
        with pytest.raises(ValueError):
            # small t stretches x far beyond the integrated span
            V.value(super_prof.xi[-1] + 1.0, 1.0)


class TestPkSubsolution:
    def test_large_b_passes(self):
        assert pk_subsolution_check(0.5, 2.0)

    def test_small_b_fails(self):
        assert not pk_subsolution_check(0.5, 0.01)

    @pytest.mark.parametrize("m,B", [(1.0, 1.0), (0.0, 1.0), (0.5, 0.0)])
    def test_rejects_out_of_range(self, m, B):
        with pytest.raises(ValueError):
            pk_subsolution_check(m, B)
