import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from porosurf.constants import ETA0, MU0
from porosurf.errors import DomainError, InfeasibleTargetError
from porosurf.material import (
    SurfaceSpec,
    background_index,
    derive_surface,
    effective_index,
    effective_permittivity,
    skin_depth,
    solve_thickness,
    surface_reactance,
)

F0 = 26e9
DELTA_CU = skin_depth(59.6e6, F0)


class TestEffectivePermittivity:
    def test_reference_porous_row(self):
        assert effective_permittivity(2.1, 0.0785) == pytest.approx(2.00, abs=0.005)

    def test_zero_porosity_is_exact(self):
        assert effective_permittivity(2.1, 0.0) == 2.1

    def test_vacuum_is_porosity_invariant(self):
        assert effective_permittivity(1.0, 0.3) == 1.0

    def test_interleaved_row_value(self):
        assert effective_permittivity(2.1, 0.3926) == pytest.approx(1.6308, abs=1e-4)

    @pytest.mark.parametrize("eps_r,rho", [(0.5, 0.1), (2.1, -0.01), (2.1, 1.0)])
    def test_domain_errors(self, eps_r, rho):
        with pytest.raises(DomainError):
            effective_permittivity(eps_r, rho)

    @given(eps_r=st.floats(1.0, 10.0), rho=st.floats(0.0, 0.999))
    def test_bounded_by_endpoints(self, eps_r, rho):
        v = effective_permittivity(eps_r, rho)
        assert 1.0 - 1e-12 <= v <= eps_r + 1e-12

    @given(eps_r=st.floats(1.001, 10.0), rho=st.floats(0.0, 0.99),
           step=st.floats(1e-4, 0.009))
    def test_strictly_decreasing_in_porosity(self, eps_r, rho, step):
        assert (effective_permittivity(eps_r, rho)
                > effective_permittivity(eps_r, rho + step))


class TestSkinDepth:
    def test_ground_metal(self):
        assert skin_depth(59.6e6, F0) == pytest.approx(4.04e-7, rel=0.01)

    def test_fluid_metal(self):
        assert skin_depth(3.46e6, F0) == pytest.approx(1.68e-6, rel=0.01)

    def test_perfect_conductor_limit(self):
        assert skin_depth(1e12, F0) < 1e-8

    def test_decreasing_in_both_arguments(self):
        assert skin_depth(2e7, F0) > skin_depth(4e7, F0)
        assert skin_depth(2e7, F0) > skin_depth(2e7, 2 * F0)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            skin_depth(-1.0, F0)
        with pytest.raises(DomainError):
            skin_depth(1e7, 0.0)


class TestSurfaceReactance:
    def test_matched_design_row(self):
        assert surface_reactance(1.86, 2.85e-3, F0, 4.04e-7) == pytest.approx(270.0, abs=1.5)

    def test_zero_thickness_zero_skin(self):
        assert surface_reactance(1.5, 0.0, F0, 0.0) == 0.0

    def test_unporous_matched_thickness(self):
        assert surface_reactance(2.10, 2.5106e-3, F0, 4.04e-7) == pytest.approx(270.0, abs=0.5)

    def test_skin_term_only(self):
        assert surface_reactance(2.1, 0.0, F0, DELTA_CU) == pytest.approx(0.0415, abs=0.005)

    def test_rejects_eps_below_one(self):
        with pytest.raises(DomainError):
            surface_reactance(0.99, 1e-3, F0, 0.0)

    @given(h=st.floats(1e-5, 5e-3), dh=st.floats(1e-5, 1e-3))
    def test_strictly_increasing_in_thickness(self, h, dh):
        assert (surface_reactance(2.0, h + dh, F0, 0.0)
                > surface_reactance(2.0, h, F0, 0.0))


class TestSolveThickness:
    def test_model1_thickness(self):
        assert solve_thickness(2.00, F0, DELTA_CU, 270.0) == pytest.approx(2.63e-3, abs=0.02e-3)

    def test_model5_thickness(self):
        assert solve_thickness(1.63, F0, DELTA_CU, 270.0) == pytest.approx(3.40e-3, abs=0.02e-3)

    def test_skin_term_alone_meets_target(self):
        x_floor = 2.0 * math.pi * F0 * MU0 * DELTA_CU / 2.0
        assert solve_thickness(2.0, F0, DELTA_CU, x_floor) == pytest.approx(0.0, abs=1e-12)

    def test_infeasible_target(self):
        x_floor = 2.0 * math.pi * F0 * MU0 * DELTA_CU / 2.0
        with pytest.raises(InfeasibleTargetError):
            solve_thickness(2.0, F0, DELTA_CU, 0.5 * x_floor)

    def test_unit_permittivity_singular(self):
        with pytest.raises(DomainError):
            solve_thickness(1.0, F0, DELTA_CU, 270.0)

    @given(eps_eff=st.floats(1.001, 4.0), f=st.floats(5e9, 60e9),
           sigma=st.floats(1e6, 6e7), x_target=st.floats(10.0, 600.0))
    @settings(max_examples=200)
    def test_round_trip(self, eps_eff, f, sigma, x_target):
        delta = skin_depth(sigma, f)
        floor = 2.0 * math.pi * f * MU0 * delta / 2.0
        if x_target <= floor:
            return
        h = solve_thickness(eps_eff, f, delta, x_target)
        assert abs(surface_reactance(eps_eff, h, f, delta) - x_target) < 0.01


class TestEffectiveIndex:
    def test_free_space(self):
        assert effective_index(0.0, F0) == 1.0

    def test_matched_reactance(self):
        assert effective_index(270.0, F0) == pytest.approx(1.2303, abs=1e-3)

    def test_symmetry_point(self):
        assert effective_index(376.73, F0) == pytest.approx(math.sqrt(2.0), abs=1e-4)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            effective_index(-1.0, F0)


class TestDeriveSurface:
    def test_matched_porous_design(self):
        spec = SurfaceSpec(rho=0.1963, h=2.85e-3)
        d = derive_surface(spec)
        assert round(d.eps_eff, 2) == 1.86
        assert d.x_s == pytest.approx(270.0, abs=1.5)
        assert d.n_eff == pytest.approx(1.23, abs=0.005)

    def test_unporous_matched_thickness(self):
        d = derive_surface(SurfaceSpec(rho=0.0, h=2.5106e-3))
        assert d.x_s == pytest.approx(270.0, abs=0.5)

    def test_vanishing_thickness_leaves_skin_term(self):
        d = derive_surface(SurfaceSpec(rho=0.0, h=1e-12))
        assert d.x_s == pytest.approx(0.0415, abs=0.005)

    def test_spec_invariants_enforced(self):
        with pytest.raises(DomainError):
            SurfaceSpec(rho=1.0)
        with pytest.raises(DomainError):
            SurfaceSpec(h=-1e-3)
        with pytest.raises(DomainError):
            SurfaceSpec(eps_r=0.9)

    def test_background_index_uses_unporous_sheet(self):
        spec = SurfaceSpec(rho=0.1963, h=2.85e-3)
        n = background_index(spec, 2.85e-3)
        x = surface_reactance(2.1, 2.85e-3, F0, DELTA_CU)
        assert n == pytest.approx(math.sqrt(1.0 + (x / ETA0) ** 2), rel=1e-12)
