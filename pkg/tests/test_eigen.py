import numpy as np
import pytest

from stripdamp import cap, eigen
from stripdamp.errors import AdmissibilityError, RootFindError
from stripdamp.model import BC_DIRICHLET, BC_NEUMANN


@pytest.fixture(scope="module")
def ctx1():
    return eigen.build_context(1.0, 1.0, 1, BC_DIRICHLET)


class TestReflection:
    def test_dirichlet_at_exact_multiple(self):
        h, a, l = 0.05, 1.0, 3
        lam = np.pi * l * h / a
        assert eigen.reflection_coeff(lam, h, a, BC_DIRICHLET) == pytest.approx(-1.0)

    def test_neumann_half_integer(self):
        h, a, l = 0.05, 1.0, 2.5
        lam = np.pi * l * h / a
        ref = eigen.reflection_coeff(lam, h, a, BC_NEUMANN)
        assert ref == pytest.approx(-1.0)

    def test_unimodular_for_real_frequency(self):
        ref = eigen.reflection_coeff(0.123, 0.04, 1.0, BC_DIRICHLET)
        assert abs(ref) == pytest.approx(1.0, rel=1e-14)

    def test_modulus_formula(self):
        lam, h, a = 0.1 + 0.002j, 0.05, 1.0
        ref = eigen.reflection_coeff(lam, h, a, BC_DIRICHLET)
        assert abs(ref) == pytest.approx(np.exp(2 * a * lam.imag / h), rel=1e-12)


class TestLeftSolution:
    def test_dirichlet_vanishes_at_origin(self):
        v, _ = eigen.left_solution(0.0, 0.11 + 0.001j, 0.04, 1.0, BC_DIRICHLET)
        assert abs(v) < 1e-12

    def test_neumann_slope_vanishes_at_origin(self):
        _, dv = eigen.left_solution(0.0, 0.11 + 0.001j, 0.04, 1.0, BC_NEUMANN)
        assert abs(dv) < 1e-10

    def test_value_at_matching_point(self):
        lam, h, a = 0.13 + 0.002j, 0.04, 1.0
        v, _ = eigen.left_solution(a, lam, h, a, BC_DIRICHLET)
        ref = eigen.reflection_coeff(lam, h, a, BC_DIRICHLET)
        assert v == pytest.approx(1.0 + ref, rel=1e-14)

    def test_solves_equation(self):
        # second derivative equals -(lam/h)^2 v, checked by differences
        lam, h, a = 0.13 + 0.002j, 0.04, 1.0
        x = np.linspace(0.2, 0.8, 7)
        eps = 1e-5
        v0, _ = eigen.left_solution(x, lam, h, a, BC_DIRICHLET)
        vp, _ = eigen.left_solution(x + eps, lam, h, a, BC_DIRICHLET)
        vm, _ = eigen.left_solution(x - eps, lam, h, a, BC_DIRICHLET)
        d2 = (vp - 2 * v0 + vm) / eps**2
        assert np.allclose(d2, -((lam / h) ** 2) * v0, rtol=1e-5)


class TestCompatibilityFunction:
    def test_zero_at_origin_of_parameters(self, ctx1):
        G, *_ = eigen.compatibility_value(0.0, 0.0, ctx1)
        assert abs(G) < 1e-14

    def test_slope_at_origin(self, ctx1):
        # derivative in mu at (0, 0) is -2ia
        G, dG, *_ = eigen.compatibility_value(0.0, 0.0, ctx1, deriv=True)
        assert dG == pytest.approx(-2j * ctx1.a, rel=1e-14)

    def test_linear_in_mu_at_h_zero(self, ctx1):
        G1, *_ = eigen.compatibility_value(0.3 + 0.1j, 0.0, ctx1)
        G0, *_ = eigen.compatibility_value(0.0, 0.0, ctx1)
        assert G1 - G0 == pytest.approx(-2j * ctx1.a * (0.3 + 0.1j), rel=1e-12)

    def test_derivative_matches_difference(self, ctx1):
        mu, h = 0.1 - 0.2j, 0.02
        G, dG, *_ = eigen.compatibility_value(mu, h, ctx1, deriv=True)
        d = 1e-4
        Gp, *_ = eigen.compatibility_value(mu + d, h, ctx1)
        Gm, *_ = eigen.compatibility_value(mu - d, h, ctx1)
        assert abs(dG - (Gp - Gm) / (2 * d)) / abs(dG) < 1e-3

    def test_equals_raw_matching_determinant(self, ctx1):
        # the remainder-split form and the undecomposed determinant are the
        # same function of (mu, h)
        mu, h = 0.05 - 0.1j, 0.03
        G, lam, eta, f0 = eigen.compatibility_value(mu, h, ctx1)
        eps = h ** (2.0 / 3.0)
        ref = eigen.reflection_coeff(lam, h, ctx1.a, ctx1.bc)
        v_la = 1.0 + ref
        dv_la = (1j * lam / h) * (1.0 - ref)
        D = dv_la * f0 - v_la / eps
        assert G == pytest.approx(D, rel=1e-9)

    def test_inadmissible_h_rejected(self, ctx1):
        with pytest.raises(AdmissibilityError):
            eigen.compatibility_value(0.0, 0.5, ctx1)


class TestFindEigenvalue:
    def test_fixed_point_and_bounds(self, ctx1):
        sol = eigen.find_eigenvalue(1, 0.02, ctx1)
        G, *_ = eigen.compatibility_value(sol.mu, sol.h, ctx1)
        assert abs(G) <= 1e-10
        assert abs(sol.mu) < 1.0
        assert abs(sol.C_h) < ctx1.K_bound
        assert sol.glue_residual < 1e-7

    def test_lambda_definition_exact(self, ctx1):
        sol = eigen.find_eigenvalue(1, 0.02, ctx1)
        lam = np.pi * 1 * sol.h / 1.0 + sol.C_h * sol.h ** (5.0 / 3.0)
        assert lam == pytest.approx(sol.lambda_h, rel=1e-14)

    def test_imaginary_part_positive(self, ctx1):
        # damping pushes the matched frequency into the decaying half plane
        sol = eigen.find_eigenvalue(1, 0.02, ctx1)
        assert (sol.lambda_h**2).imag > 0

    def test_reflection_tends_to_unimodular(self, ctx1):
        mods = []
        for h in (0.04, 0.02, 0.01, 0.005):
            sol = eigen.find_eigenvalue(1, h, ctx1)
            ref = eigen.reflection_coeff(sol.lambda_h, h, 1.0, BC_DIRICHLET)
            mods.append(abs(abs(ref) - 1.0))
        assert all(np.diff(mods) < 0)

    def test_neumann_branch(self):
        ctx = eigen.build_context(1.0, 1.0, 0.5, BC_NEUMANN)
        sol = eigen.find_eigenvalue(0.5, 0.02, ctx)
        assert abs(sol.mu) < 1.0
        # the glued profile satisfies the slope condition at the origin
        _, dv = eigen.left_solution(0.0, sol.lambda_h, sol.h, 1.0, BC_NEUMANN)
        assert abs(dv) < 1e-8

    def test_continuation_sweep_monotone_gap(self, ctx1):
        sols = eigen.eigen_sweep(ctx1, [0.02, 0.013, 0.008])
        gaps = [s.scaling_gap for s in sols]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_out_of_window_h_raises(self, ctx1):
        with pytest.raises((RootFindError, AdmissibilityError)):
            eigen.find_eigenvalue(1, 0.2, ctx1)


class TestRawCompatibilityRoot:
    def test_matches_newton(self, ctx1):
        sol = eigen.find_eigenvalue(1, 0.025, ctx1)
        lam_raw, mu_raw, _ = eigen.raw_compatibility_root(1, 0.025, ctx1)
        assert abs(mu_raw - sol.mu) < 1e-8
        assert abs(lam_raw - sol.lambda_h) < 1e-10

    def test_admissible_window_estimate(self, ctx1):
        h0 = eigen.admissible_h_max(ctx1)
        assert 0.01 < h0 < 0.2
        eigen.find_eigenvalue(1, 0.45 * h0, ctx1)  # solvable well inside
