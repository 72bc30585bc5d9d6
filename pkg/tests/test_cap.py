"""Half-line solver against independent oracles.

Frozen oracle values:
  * beta = 1, eta = 0: the decaying solution is C Ai(x e^{i pi/6}) with
    C = e^{-i pi/6}/Ai'(0), so F(0) = (Ai(0)/Ai'(0)) e^{-i pi/6}.
    With Ai(0) = 3^(-2/3)/Gamma(2/3) and Ai'(0) = -3^(-1/3)/Gamma(1/3):
    F(0) = -1.18794537514136... + 0.68586058210542...j
  * beta = 0: pure exponential, F(0) = -1/sqrt(i - eta).
  * Neumann ground levels: beta=2 -> 1 (even oscillator levels 4n+1);
    beta=1 -> 1.018792971647471 (first zero of Ai'); beta=0 -> 1 (essential).
"""

import math

import numpy as np
import pytest

from stripdamp import cap
from stripdamp.errors import AdmissibilityError, TruncationError

AIRY_F0 = -1.1879453751046215 + 0.6858605820992242j


def airy_f0_from_gammas():
    ai0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    aip0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
    return (ai0 / aip0) * np.exp(-1j * np.pi / 6.0)


class TestBoundaryValue:
    def test_frozen_airy_constant_is_consistent(self):
        assert abs(airy_f0_from_gammas() - AIRY_F0) < 1e-15

    def test_airy_oracle(self):
        sol = cap.solve_cap(0.0, 1.0)
        assert abs(sol.boundary_value - AIRY_F0) / abs(AIRY_F0) < 1e-6

    def test_sign_structure_at_eta_zero(self):
        # real part is minus the slope energy, imaginary part the potential mass
        for beta in (0.5, 1.0, 2.0):
            f0 = cap.solve_cap(0.0, beta).boundary_value
            assert f0.real < 0
            assert f0.imag > 0

    @pytest.mark.parametrize("eta", [0.0, 0.3, 0.2 + 0.3j, -0.1 - 0.35j])
    def test_beta0_closed_form(self, eta):
        sol = cap.solve_cap(eta, 0.0)
        exact = cap.boundary_value_closed_form_beta0(eta)
        assert abs(sol.boundary_value - exact) / abs(exact) < 1e-6

    def test_truncation_stability(self):
        # doubling (L, n) together isolates the cut-off error
        a = cap.solve_cap(0.3, 2.0, L=10.0, n=40000)
        b = cap.solve_cap(0.3, 2.0, L=20.0, n=80000)
        assert abs(a.boundary_value - b.boundary_value) < 1e-8

    def test_shooting_cross_check_grid(self):
        ground = cap.neumann_ground(1.0)
        for eta in (0.0, 0.25, 0.3j, -0.2 + 0.2j):
            assert cap.check_eta_admissible(eta, ground)
            banded = cap.solve_cap(eta, 1.0).boundary_value
            shot = cap.boundary_value_by_shooting(eta, 1.0)
            assert abs(banded - shot) / abs(shot) < 1e-6

    def test_energy_identity_recorded(self):
        sol = cap.solve_cap(0.2 + 0.1j, 1.5)
        assert sol.identity_residual < 1e-6

    def test_slope_normalization(self):
        sol = cap.solve_cap(0.0, 1.0)
        dx = sol.dx
        one_sided = (
            -25 * sol.values[0] + 48 * sol.values[1] - 36 * sol.values[2]
            + 16 * sol.values[3] - 3 * sol.values[4]
        ) / (12 * dx)
        assert abs(one_sided - 1.0) < 1e-7

    def test_tail_guard_raises_for_short_cut(self):
        with pytest.raises(TruncationError):
            cap.solve_cap(0.0, 1.0, L=1.0, n=5000)

    def test_derivative_of_boundary_value(self):
        # exact discrete derivative vs a centered difference at a step large
        # enough to stay above the factorization noise
        f0, df0, _ = cap.boundary_pair(0.1 + 0.05j, 1.0, 10.5, 40000)
        d = 1e-3
        fp = cap.boundary_pair(0.1 + 0.05j + d, 1.0, 10.5, 40000)[0]
        fm = cap.boundary_pair(0.1 + 0.05j - d, 1.0, 10.5, 40000)[0]
        fd = (fp - fm) / (2 * d)
        assert abs(df0 - fd) / abs(fd) < 1e-4


class TestAdmissibility:
    def test_disk_examples(self):
        ground = cap.neumann_ground(2.0)
        assert cap.check_eta_admissible(0.49, ground)
        assert not cap.check_eta_admissible(0.51, ground)
        assert cap.check_eta_admissible(0.5j, ground)

    def test_solver_rejects_outside_disk(self):
        with pytest.raises(AdmissibilityError):
            cap.solve_cap(0.9, 2.0)

    def test_boundary_value_bounded_on_disk(self):
        ground = cap.neumann_ground(1.0)
        r = ground.admissible_radius
        vals = []
        for ang in np.linspace(0, 2 * np.pi, 12, endpoint=False):
            for rho in (0.5 * r, 0.95 * r):
                eta = rho * np.exp(1j * ang)
                vals.append(abs(cap.solve_cap(eta, 1.0, n=20000).boundary_value))
        vals = np.array(vals)
        assert vals.min() > 0.2 and vals.max() < 5.0

    def test_boundary_value_smooth_in_eta(self):
        # bounded second differences across the disk, the working proxy for
        # analyticity of the boundary value
        ground = cap.neumann_ground(1.0)
        d = 5e-3
        for eta in (0.0, 0.2, 0.15j, -0.1 + 0.1j):
            f = [cap.boundary_pair(eta + k * d, 1.0, 10.5, 40000)[0]
                 for k in (-1, 0, 1)]
            second = (f[0] - 2 * f[1] + f[2]) / d**2
            assert abs(second) < 50.0
        assert ground.value > 1.0  # sanity on the cached ground level


class TestNeumannGround:
    def test_quadratic_potential(self):
        g = cap.neumann_ground(2.0)
        assert abs(g.value - 1.0) < 1e-5
        assert not g.essential

    def test_linear_potential(self):
        g = cap.neumann_ground(1.0)
        assert abs(g.value - 1.018792971647471) < 1e-4

    def test_indicator_case_flagged_essential(self):
        g = cap.neumann_ground(0.0)
        assert g.value == 1.0
        assert g.essential

    def test_variational_inequality(self):
        # ground level bounds the Rayleigh quotient of arbitrary test functions
        rng = np.random.default_rng(3)
        g = cap.neumann_ground(1.0)
        x = np.linspace(0, 30, 30001)
        dx = x[1] - x[0]
        for _ in range(5):
            c = rng.normal(size=4)
            u = (c[0] + c[1] * x + c[2] * x**2 + c[3] * x**3) * np.exp(-x**2 / 2)
            up = np.gradient(u, dx)
            num = np.trapezoid(up**2, x) + np.trapezoid(x * u**2, x)
            den = np.trapezoid(u**2, x)
            assert g.value * den <= num * (1 + 1e-3)
