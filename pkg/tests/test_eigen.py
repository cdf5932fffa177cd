"""Linear eigenvalue problem for the critical case m = p = 1.

Groups:
  1. matching function h and the root lam0(L)
  2. closed-form oracle at L = pi*sqrt(2)/4
  3. monotonicity and window invariants
  4. two-piece profile: C^1 matching, ODE residuals, vanishing radius
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from growup import eigen_profile, h, lambda0

L_STAR = math.pi * math.sqrt(2.0) / 4.0

# ---------------------------------------------------------------- group 1


def test_h_endpoint_values():
    # h(1, L) = 1 for every L; h(0, L) = -sin(L)
    for L in (0.25, 1.0, 3.0):
        assert h(1.0, L) == pytest.approx(1.0, abs=1e-15)
        assert h(0.0, L) == pytest.approx(-math.sin(L), abs=1e-15)


def test_h_rejects_out_of_range():
    with pytest.raises(ValueError):
        h(1.5, 1.0)
    with pytest.raises(ValueError):
        h(-0.1, 1.0)
    with pytest.raises(ValueError):
        h(0.5, 0.0)


@pytest.mark.parametrize("L", [0.25, 0.5, 1.0, L_STAR, 2.0, 4.0, 8.0])
def test_lambda0_residual(L):
    lam = lambda0(L)
    assert 0.0 < lam < 1.0
    assert abs(h(lam, L)) <= 1e-12


def test_lambda0_small_and_large_L():
    assert lambda0(0.25) < 0.2
    assert 0.9 < lambda0(8.0) < 1.0


def test_lambda0_rejects_bad_L():
    with pytest.raises(ValueError):
        lambda0(0.0)
    with pytest.raises(ValueError):
        lambda0(-1.0)


# ---------------------------------------------------------------- group 2


def test_lambda0_closed_form_oracle():
    # Independent oracle: the root condition rearranges to
    # tan(L sqrt(1-lam)) = sqrt(lam/(1-lam)); at L = pi*sqrt(2)/4 and
    # lam = 1/2 both sides equal tan(pi/4) = 1 exactly.
    lhs = math.tan(L_STAR * math.sqrt(0.5))
    rhs = math.sqrt(0.5 / 0.5)
    assert lhs == pytest.approx(rhs, abs=1e-15)
    assert lambda0(L_STAR) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------- group 3


def test_lambda0_increasing_in_L():
    Ls = np.linspace(0.25, 8.0, 24)
    vals = [lambda0(L) for L in Ls]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("L", [0.3, 0.8, 1.7, 3.0, 6.0])
def test_lambda0_above_window_bottom(L):
    lam = lambda0(L)
    assert lam > max(0.0, 1.0 - (math.pi / (2.0 * L)) ** 2)


# ---------------------------------------------------------------- group 4


def test_profile_value_and_slope_match_at_L():
    L = 1.0
    prof = eigen_profile(lambda0(L), L)
    eps = 5e-4
    # value continuity
    assert prof(L - 1e-12) == pytest.approx(prof(L + 1e-12), abs=1e-10)
    # one-sided slopes agree
    left = (prof(L) - prof(L - eps)) / eps
    right = (prof(L + eps) - prof(L)) / eps
    assert left == pytest.approx(right, abs=1e-3)


@pytest.mark.parametrize("lam,L", [(0.4, 1.0), (0.5, L_STAR), (0.7, 2.0)])
def test_profile_solves_both_odes(lam, L):
    prof = eigen_profile(lam, L)
    eps = 5e-4

    def second_diff(r):
        return (prof(r - eps) - 2.0 * prof(r) + prof(r + eps)) / eps ** 2

    for r in np.linspace(0.1 * L, 0.9 * L, 7):
        # interior: phi'' + (1-lam) phi = 0
        assert abs(second_diff(r) + (1.0 - lam) * prof(r)) <= 1e-8
    for r in np.linspace(1.1 * L, 2.0 * L, 7):
        # exterior: phi'' - lam phi = 0
        assert abs(second_diff(r) - lam * prof(r)) <= 1e-8


def test_vanish_radius_is_a_zero():
    prof = eigen_profile(0.4, 1.0)
    R = prof.vanish_radius
    assert R is not None and R > 1.0
    assert abs(float(prof(R))) <= 1e-10
    assert float(prof.truncated(R + 0.5)) == 0.0


def test_vanish_radius_absent_above_lambda0():
    L = 1.0
    lam = lambda0(L)
    above = eigen_profile(min(lam + 0.05, 0.99), L)
    assert above.C1 > 0.0
    assert above.vanish_radius is None
    near = eigen_profile(lam, L)
    assert abs(near.C1) < 1e-12


def test_profile_rejects_bad_arguments():
    with pytest.raises(ValueError):
        eigen_profile(0.0, 1.0)
    with pytest.raises(ValueError):
        eigen_profile(0.5, -1.0)
    prof = eigen_profile(0.5, 1.0)
    with pytest.raises(ValueError):
        prof(np.array([-0.5]))
