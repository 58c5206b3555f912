import numpy as np
import pytest

from jamcraft.errors import DomainError
from jamcraft.linalg import is_psd, log_det
from jamcraft.scenario import assemble_qz, effective_quantities, rate_single
from jamcraft.spca import (
    SpcaOptions,
    kkt_residual,
    spca_iterate,
    subproblem_solve,
)
from jamcraft.spectral import closed_form_pd

from helpers import (
    engineered_indefinite_scenario,
    example1_scenario,
    feasible_grid_points_2x2,
    random_psd,
    reduced_rate_components_2x2,
    rng_for,
)
from test_spectral import scalar_scenario


class TestSubproblem:
    def test_scalar_zero_signal_term(self):
        # G = 1, f(q) = q - ln(q+1); f' = 1 - 1/(q+1) >= 0 on q >= 0 so q*=0
        q = subproblem_solve(np.zeros((1, 1)), np.eye(1), 1.0,
                             np.zeros((1, 1)))
        assert abs(q[0, 0]) < 1e-9

    def test_scalar_clipped_at_budget(self):
        # G = 1/3: unconstrained optimum q = 2 clips to the budget 1
        q = subproblem_solve(np.eye(1), np.eye(1), 1.0, np.eye(1))
        assert q[0, 0].real == pytest.approx(1.0, abs=1e-9)

    def test_symmetric_instance_stays_isotropic(self):
        q = subproblem_solve(np.eye(2), np.eye(2), 1.0, 0.5 * np.eye(2))
        assert abs(q[0, 0] - q[1, 1]) < 1e-8
        assert abs(q[0, 1]) < 1e-8

    def test_scalar_interior_grid_oracle(self):
        # d0 = 2, anchor 0.5, p_z = 4: minimize q/(2.5+a) - ln(q+2)
        a, d, anchor, p_z = 1.0, 2.0, 0.5, 4.0
        q = subproblem_solve([[a]], [[d]], p_z, [[anchor]])
        g = 1.0 / (anchor + d + a)
        grid = np.linspace(0, p_z, 400001)
        vals = g * grid - np.log(grid + d)
        assert q[0, 0].real == pytest.approx(grid[np.argmin(vals)], abs=1e-4)

    def test_inner_descent(self):
        rng = rng_for(301)
        a = random_psd(rng, 3)
        d = random_psd(rng, 3) + 0.2 * np.eye(3)
        anchor = random_psd(rng, 3)
        anchor *= 1.0 / max(np.trace(anchor).real, 1.0)
        q = subproblem_solve(a, d, 1.0, anchor)
        g = np.linalg.inv(anchor + d + a)

        def f(m):
            return float(np.trace(g @ m).real) - log_det(m + d)

        assert f(q) <= f(anchor) + 1e-12

    def test_rejects_singular_d0(self):
        with pytest.raises(DomainError):
            subproblem_solve(np.eye(2), np.diag([1.0, 0.0]), 1.0,
                             np.zeros((2, 2)))


class TestSpcaIterate:
    def test_scalar_full_power(self):
        sc = scalar_scenario()
        eff = effective_quantities(sc)
        q, trace = spca_iterate(eff, 1.0)
        assert q[0, 0].real == pytest.approx(1.0, abs=1e-9)
        rate = rate_single(sc, assemble_qz(eff, q, 1))
        assert rate == pytest.approx(np.log(1.5), abs=1e-10)
        assert trace.converged

    def test_matches_closed_form_when_psd(self):
        rng = rng_for(311)
        checked = 0
        while checked < 10:
            sc = example1_scenario(rng, p_z=float(rng.uniform(4, 20)))
            eff = effective_quantities(sc)
            out = closed_form_pd(eff, sc.jam_budget, 1.0)
            if not out.psd_ok:
                continue
            checked += 1
            q, _ = spca_iterate(eff, sc.jam_budget)
            r_closed = rate_single(sc, assemble_qz(eff, out.q_prime, sc.n_z))
            r_spca = rate_single(sc, assemble_qz(eff, q, sc.n_z))
            assert abs(r_closed - r_spca) < 1e-6

    def test_indefinite_case_beats_brute_force_grid(self):
        rng = rng_for(312)
        sc = engineered_indefinite_scenario(rng, p_z=0.08, spread=6.0)
        eff = effective_quantities(sc)
        assert not closed_form_pd(eff, sc.jam_budget, 1.0).psd_ok
        q, trace = spca_iterate(eff, sc.jam_budget)
        assert is_psd(q, 1e-9)
        assert np.trace(q).real <= sc.jam_budget + 1e-8
        qa, qb, off = feasible_grid_points_2x2(sc.jam_budget, 60, 60, 8, 10)
        grid_vals = reduced_rate_components_2x2(eff.a_tilde, eff.d0,
                                                qa, qb, off)
        core = q + eff.d0
        mine = log_det(core + eff.a_tilde) - log_det(core)
        assert mine <= grid_vals.min() + 1e-3

    def test_monotone_objective_trace(self):
        rng = rng_for(313)
        for _ in range(5):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.1, 2)))
            eff = effective_quantities(sc)
            _, trace = spca_iterate(eff, sc.jam_budget)
            assert np.all(np.diff(trace.objectives) <= 1e-12)

    def test_iteration_budget_respected(self):
        rng = rng_for(314)
        sc = example1_scenario(rng, p_z=1.0)
        eff = effective_quantities(sc)
        opts = SpcaOptions(max_outer_iters=2)
        q, trace = spca_iterate(eff, 1.0, opts)
        assert trace.iterations <= 2
        assert not trace.converged
        assert is_psd(q, 1e-9)

    def test_anchor_fixed_point(self):
        rng = rng_for(315)
        for _ in range(5):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.3, 3)))
            eff = effective_quantities(sc)
            q, _ = spca_iterate(eff, sc.jam_budget)
            q_again = subproblem_solve(eff.a_tilde, eff.d0, sc.jam_budget, q)
            assert np.linalg.norm(q_again - q) < 1e-7


class TestMajorization:
    def test_tangent_dominates(self):
        rng = rng_for(321)
        for _ in range(100):
            n = int(rng.integers(1, 5))
            a = random_psd(rng, n)
            d = random_psd(rng, n) + 0.1 * np.eye(n)
            q = random_psd(rng, n)
            anchor = random_psd(rng, n)
            g = np.linalg.inv(anchor + d + a)
            lhs = log_det(q + d + a)
            rhs = log_det(anchor + d + a) \
                + float(np.trace(g @ (q - anchor)).real)
            assert lhs <= rhs + 1e-10


class TestKktResidual:
    def test_scalar_active_budget(self):
        # optimum q = 1 with the budget active: outward gradient, residual 0
        sc = scalar_scenario()
        eff = effective_quantities(sc)
        assert kkt_residual(np.eye(1), eff.a_tilde, eff.d0, 1.0) < 1e-12

    def test_converged_iterate_is_stationary(self):
        rng = rng_for(331)
        for _ in range(5):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.3, 3)))
            eff = effective_quantities(sc)
            q, trace = spca_iterate(eff, sc.jam_budget)
            assert trace.kkt_residual < 1e-6
            assert kkt_residual(q, eff.a_tilde, eff.d0,
                                sc.jam_budget) < 1e-6

    def test_zero_point_not_stationary(self):
        sc = scalar_scenario()
        eff = effective_quantities(sc)
        assert kkt_residual(np.zeros((1, 1)), eff.a_tilde, eff.d0,
                            1.0) > 1e-3
