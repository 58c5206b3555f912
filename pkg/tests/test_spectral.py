import numpy as np
import pytest

from jamcraft.errors import DomainError
from jamcraft.linalg import is_psd
from jamcraft.scenario import (
    JammingScenario,
    assemble_qz,
    effective_quantities,
    rate_single,
)
from jamcraft.spectral import (
    closed_form_pd,
    closed_form_psd,
    identity_channel_solution,
    lemma1_minimize,
    solve_single,
)

from helpers import (
    engineered_indefinite_scenario,
    example1_scenario,
    random_complex,
    random_pd,
    random_psd,
    rng_for,
)


def scalar_scenario(p_z=1.0):
    return JammingScenario(h_r=[[1.0]], q_s=[[1.0]], h_z=[[1.0]],
                           noise_power=1.0, jam_budget=p_z)


class TestLemma1:
    def test_scalar_forced_to_one(self):
        for a in (0.3, 1.0, 7.5):
            x = lemma1_minimize([[a]])
            assert x[0, 0].real == pytest.approx(1.0, abs=1e-10)

    def test_identity_symmetry(self):
        x = lemma1_minimize(np.eye(2))
        assert np.allclose(x, np.eye(2) / 2, atol=1e-10)

    def test_diagonal_grid_oracle(self):
        # For diagonal A the optimum is diagonal; scan the 1-D power split.
        a = np.diag([4.0, 1.0])
        x = lemma1_minimize(a)
        assert np.abs(x[0, 1]) < 1e-10
        splits = np.linspace(1e-6, 1 - 1e-6, 200001)
        obj = np.log1p(4.0 / splits) + np.log1p(1.0 / (1 - splits))
        best = splits[np.argmin(obj)]
        assert x[0, 0].real == pytest.approx(best, abs=1e-4)
        achieved = np.log1p(4.0 / x[0, 0].real) + np.log1p(1.0 / x[1, 1].real)
        assert achieved <= obj.min() + 1e-9

    def test_kkt_and_trace(self):
        rng = rng_for(201)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            a = random_pd(rng, n)
            x = lemma1_minimize(a)
            assert np.trace(x).real == pytest.approx(1.0, abs=1e-10)
            inv_x = np.linalg.inv(x)
            inv_xa = np.linalg.inv(x + a)
            lam = float(np.trace(inv_x - inv_xa).real) / n
            resid = inv_xa - inv_x + lam * np.eye(n)
            assert np.max(np.abs(resid)) < 1e-7

    def test_rejects_non_pd(self):
        with pytest.raises(DomainError):
            lemma1_minimize(np.diag([1.0, 0.0]))


class TestClosedFormPd:
    def test_scalar_ground_truth(self):
        sc = scalar_scenario()
        eff = effective_quantities(sc)
        out = closed_form_pd(eff, 1.0, 1.0)
        assert out.psd_ok
        assert out.q_prime[0, 0].real == pytest.approx(1.0, abs=1e-10)
        assert out.lam == pytest.approx(1 / 6, abs=1e-10)
        rate = rate_single(sc, assemble_qz(eff, out.q_prime, 1))
        assert rate == pytest.approx(np.log(1.5), abs=1e-10)

    def test_identity_channel_reduces_to_clamped_form(self):
        rng = rng_for(211)
        hits = 0
        for _ in range(20):
            h_r = random_complex(rng, 2, 3)
            q_s = random_psd(rng, 3) + 0.1 * np.eye(3)
            sc = JammingScenario(h_r=h_r, q_s=q_s, h_z=np.eye(2),
                                 noise_power=1.0, jam_budget=6.0)
            eff = effective_quantities(sc)
            out = closed_form_pd(eff, sc.jam_budget, 1.0)
            if not out.psd_ok:
                continue
            hits += 1
            clamped = identity_channel_solution(sc.signal_gram(), 1.0,
                                                sc.jam_budget)
            assert np.linalg.norm(out.q_prime - clamped) < 1e-8
        assert hits >= 5

    def test_small_budget_goes_indefinite(self):
        rng = rng_for(212)
        out = None
        for _ in range(5):
            sc = engineered_indefinite_scenario(rng, p_z=0.01, spread=10.0)
            eff = effective_quantities(sc)
            out = closed_form_pd(eff, sc.jam_budget, 1.0)
            if not out.psd_ok:
                break
        assert out is not None and not out.psd_ok
        # the raw expression is still returned and meets the trace equality
        assert np.trace(out.q_prime).real == pytest.approx(0.01, abs=1e-8)

    def test_trace_equality_across_budgets(self):
        rng = rng_for(213)
        for _ in range(20):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.05, 40)))
            eff = effective_quantities(sc)
            out = closed_form_pd(eff, sc.jam_budget, 1.0)
            assert np.trace(out.q_prime).real == pytest.approx(
                sc.jam_budget, abs=1e-8)

    def test_reduced_kkt_when_psd(self):
        rng = rng_for(214)
        checked = 0
        while checked < 20:
            sc = example1_scenario(rng, p_z=float(rng.uniform(5, 30)))
            eff = effective_quantities(sc)
            gram_eigs = np.linalg.eigvalsh(sc.signal_gram())
            if gram_eigs[0] < 1e-10 * gram_eigs[-1]:
                continue
            out = closed_form_pd(eff, sc.jam_budget, 1.0)
            if not out.psd_ok:
                continue
            checked += 1
            core = out.q_prime + eff.d0
            resid = np.linalg.inv(core + eff.a_tilde) - np.linalg.inv(core) \
                + out.lam * np.eye(eff.r_z)
            assert np.max(np.abs(resid)) < 1e-7


class TestClosedFormPsd:
    def test_full_rank_matches_pd_formula(self):
        rng = rng_for(221)
        for _ in range(100):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.2, 20)))
            eff = effective_quantities(sc)
            gram_eigs = np.linalg.eigvalsh(sc.signal_gram())
            if gram_eigs[0] < 1e-8 * gram_eigs[-1]:
                continue
            a = closed_form_pd(eff, sc.jam_budget, 1.0)
            b = closed_form_psd(eff, sc.jam_budget, 1.0)
            assert np.linalg.norm(a.q_prime - b.q_prime) < 1e-9

    def test_rank_one_structure(self):
        # rank-1 compressed signal: only the first eigen-direction matters
        a, d, p_z = 1.5, 0.3, 1.0
        sc = JammingScenario(
            h_r=np.diag([np.sqrt(a), 0.0]), q_s=np.eye(2),
            h_z=np.sqrt(1 / d) * np.eye(2), noise_power=1.0, jam_budget=p_z)
        eff = effective_quantities(sc)
        assert np.allclose(np.diag(eff.d0).real, [d, d])
        out = closed_form_psd(eff, p_z, 1.0)
        # the raw candidate acts as -d0 on the dead eigen-direction
        assert out.q_prime[1, 1].real == pytest.approx(-d, abs=1e-9)
        assert abs(out.q_prime[0, 1]) < 1e-10
        assert not out.psd_ok
        assert np.trace(out.q_prime).real == pytest.approx(p_z, abs=1e-8)

    def test_zero_signal_returns_zero(self):
        sc = JammingScenario(h_r=np.zeros((2, 2)), q_s=np.eye(2),
                             h_z=np.eye(2), noise_power=1.0, jam_budget=1.0)
        eff = effective_quantities(sc)
        out = closed_form_psd(eff, 1.0, 1.0)
        assert out.psd_ok
        assert np.allclose(out.q_prime, 0)


class TestIdentityChannelSolution:
    def test_zero_gram_uniform(self):
        q = identity_channel_solution(np.zeros((3, 3)), 1.0, 1.5)
        assert np.allclose(q, 0.5 * np.eye(3), atol=1e-12)

    def test_scalar_matches_general_form(self):
        q = identity_channel_solution([[1.0]], 1.0, 1.0)
        assert q[0, 0].real == pytest.approx(1.0, abs=1e-10)

    def test_tiny_budget_starves_weak_mode(self):
        # 1-D oracle over the split between the two modes
        b = np.diag([5.0, 0.1])
        p_z = 0.05
        q = identity_channel_solution(b, 1.0, p_z)
        splits = np.linspace(0, p_z, 20001)
        obj = np.log1p(5.0 / (splits + 1.0)) \
            + np.log1p(0.1 / (p_z - splits + 1.0))
        assert splits[np.argmin(obj)] == pytest.approx(p_z, abs=1e-5)
        assert q[0, 0].real == pytest.approx(p_z, abs=1e-9)
        assert abs(q[1, 1]) < 1e-12
        assert np.trace(q).real == pytest.approx(p_z, abs=1e-10)

    def test_always_psd(self):
        rng = rng_for(231)
        for _ in range(20):
            b = random_psd(rng, 3, 2.0)
            q = identity_channel_solution(b, 1.0, float(rng.uniform(0.01, 5)))
            assert is_psd(q, 1e-9)


class TestSolveSingle:
    def test_scalar_dispatch(self):
        sol = solve_single(scalar_scenario())
        assert sol.method == "closed_form"
        assert sol.rate == pytest.approx(np.log(1.5), abs=1e-10)
        assert sol.diagnostics.psd_condition_held

    def test_zero_channel(self):
        sc = JammingScenario(h_r=np.eye(2), q_s=np.eye(2),
                             h_z=np.zeros((2, 2)), noise_power=1.0,
                             jam_budget=1.0)
        sol = solve_single(sc)
        assert sol.method == "zero"
        assert np.allclose(sol.q_z, 0)
        assert sol.rate == pytest.approx(rate_single(sc, np.zeros((2, 2))))

    def test_zero_budget(self):
        sol = solve_single(scalar_scenario(p_z=0.0))
        assert sol.method == "zero"

    def test_indefinite_dispatch_to_spca(self):
        rng = rng_for(241)
        sc = engineered_indefinite_scenario(rng, p_z=0.05)
        sol = solve_single(sc, prefer="closed_then_spca")
        assert sol.method == "spca"
        assert is_psd(sol.q_z, 1e-9)
        assert np.trace(sol.q_z).real <= sc.jam_budget + 1e-8

    def test_indefinite_dispatch_to_suboptimal(self):
        rng = rng_for(242)
        sc = engineered_indefinite_scenario(rng, p_z=0.05)
        sol = solve_single(sc, prefer="closed_then_suboptimal")
        assert sol.method == "suboptimal"
        assert sol.diagnostics.epsilon is not None
        assert sol.diagnostics.epsilon > 0

    def test_solution_invariants(self):
        rng = rng_for(243)
        for _ in range(10):
            sc = example1_scenario(rng, p_z=float(rng.uniform(0.1, 10)))
            sol = solve_single(sc)
            assert is_psd(sol.q_z, 1e-9)
            assert np.trace(sol.q_z).real <= sc.jam_budget + 1e-8
            assert sol.rate == pytest.approx(rate_single(sc, sol.q_z),
                                             abs=1e-10)

    def test_closed_form_never_beaten_when_psd(self):
        from jamcraft.spca import spca_iterate
        from jamcraft.suboptimal import suboptimal_pd

        rng = rng_for(244)
        checked = 0
        while checked < 5:
            sc = example1_scenario(rng, p_z=float(rng.uniform(5, 20)))
            sol = solve_single(sc)
            if sol.method != "closed_form":
                continue
            checked += 1
            eff = effective_quantities(sc)
            q_spca, _ = spca_iterate(eff, sc.jam_budget)
            r_spca = rate_single(sc, assemble_qz(eff, q_spca, sc.n_z))
            q_sub, _ = suboptimal_pd(eff, sc.jam_budget)
            r_sub = rate_single(sc, assemble_qz(eff, q_sub, sc.n_z))
            assert sol.rate <= r_spca + 1e-6
            assert sol.rate <= r_sub + 1e-6
