"""Cross-module property checks runnable from the CLI.

Each check draws seeded random cases, exercises one of the library's
contract properties, and reports pass/fail with a counterexample payload on
failure.  The ``quick`` scale trims case counts so the whole suite stays
interactive; ``full`` runs the documented counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import multi_target, spca, spectral, suboptimal
from .harness import random_channel, random_scenario, substream
from .linalg import evd, hermitian_part, is_psd, log_det, \
    psd_trace_projection, svd
from .scenario import assemble_qz, effective_quantities, rate_single, \
    waterfilling

__all__ = ["CheckResult", "validate_suite", "ALL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""


def _random_hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(scale * m)


def _random_psd(rng, n: int, scale: float = 1.0) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(scale * (m @ m.conj().T) / n)


def _scenario(rng, n_t=4, n_r=3, n_z=5, p=3.0, sig=1.0, p_z=1.0):
    return random_scenario(rng, n_t, n_r, n_z, p, sig, p_z)


def check_decomposition_reconstruction(seed: int, cases: int) -> CheckResult:
    """EVD/SVD reconstruction residual below 1e-10 for dims up to 16."""
    rng = substream(seed, 1, 0)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 17))
        h = _random_hermitian(rng, n, 3.0)
        eig = evd(h)
        worst = max(worst, float(np.linalg.norm(eig.reconstruct() - h)))
        rows, cols = int(rng.integers(2, 17)), int(rng.integers(2, 17))
        m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        u, s, v = svd(m)
        sig_full = np.zeros((rows, cols))
        np.fill_diagonal(sig_full, s)
        worst = max(worst, float(np.linalg.norm(u @ sig_full @ v.conj().T - m)))
    return CheckResult("decomposition_reconstruction", worst < 1e-10, cases,
                       f"worst residual {worst:.2e}")


def check_projection_contract(seed: int, cases: int) -> CheckResult:
    """Projection output is PSD, within budget, idempotent, and no sampled
    feasible point is closer."""
    rng = substream(seed, 2, 0)
    for i in range(cases):
        n = 2 if i % 2 == 0 else 3
        h = _random_hermitian(rng, n, 2.0)
        budget = float(rng.uniform(0.5, 4.0))
        p = psd_trace_projection(h, budget)
        if not is_psd(p, 1e-9) or np.trace(p).real > budget + 1e-9:
            return CheckResult("projection_contract", False, cases,
                               f"infeasible projection at case {i}")
        if np.linalg.norm(psd_trace_projection(p, budget) - p) > 1e-10:
            return CheckResult("projection_contract", False, cases,
                               f"not idempotent at case {i}")
        base = float(np.linalg.norm(p - h))
        for _ in range(200):
            cand = _random_psd(rng, n)
            tr = float(np.trace(cand).real)
            if tr > budget:
                cand *= rng.uniform(0.0, 1.0) * budget / tr
            if float(np.linalg.norm(cand - h)) < base - 1e-6:
                return CheckResult("projection_contract", False, cases,
                                   f"sampled point beats projection at {i}")
    return CheckResult("projection_contract", True, cases)


def check_rate_monotone(seed: int, cases: int) -> CheckResult:
    """Rate never increases along PSD jamming directions."""
    rng = substream(seed, 3, 0)
    for i in range(cases):
        sc = _scenario(rng, p_z=2.0)
        q = _random_psd(rng, sc.n_z, 0.5)
        delta = _random_psd(rng, sc.n_z, 0.5)
        base = rate_single(sc, q)
        for t in (0.1, 1.0, 5.0):
            if rate_single(sc, q + t * delta) > base + 1e-10:
                return CheckResult("rate_monotone_psd", False, cases,
                                   f"rate increased at case {i}")
    return CheckResult("rate_monotone_psd", True, cases)


def check_unjammed_rate(seed: int, cases: int) -> CheckResult:
    """Zero jamming reproduces the clean-link rate exactly."""
    rng = substream(seed, 4, 0)
    worst = 0.0
    for _ in range(cases):
        sc = _scenario(rng)
        direct = log_det(np.eye(sc.n_r) + sc.signal_gram() / sc.noise_power)
        got = rate_single(sc, np.zeros((sc.n_z, sc.n_z)))
        worst = max(worst, abs(direct - got))
    return CheckResult("unjammed_rate_exact", worst < 1e-9, cases,
                       f"worst gap {worst:.2e}")


def check_schur_compression_pd(seed: int, cases: int) -> CheckResult:
    """The compressed signal block stays PD whenever the Gram is PD."""
    from .scenario import JammingScenario

    rng = substream(seed, 5, 0)
    worst = np.inf
    for _ in range(cases):
        # explicitly PD transmit covariance so the Gram premise holds
        h_r = random_channel(rng, 3, 4)
        q_s = _random_psd(rng, 4) + 0.1 * np.eye(4)
        h_z = random_channel(rng, 3, 5)
        sc = JammingScenario(h_r=h_r, q_s=q_s, h_z=h_z, noise_power=1.0,
                             jam_budget=1.0)
        eff = effective_quantities(sc)
        worst = min(worst, float(np.linalg.eigvalsh(eff.b_tilde)[0]))
    return CheckResult("schur_compression_pd", worst > 0.0, cases,
                       f"min eigenvalue {worst:.2e}")


def check_offdiagonal_block_irrelevance(seed: int, cases: int) -> CheckResult:
    """Couplings outside the active eigen-channel block leave the rate alone."""
    rng = substream(seed, 6, 0)
    worst = 0.0
    for _ in range(cases):
        sc = _scenario(rng, n_r=3, n_z=5, p_z=2.0)
        eff = effective_quantities(sc)
        tail = sc.n_z - eff.r_z
        if tail == 0:
            continue
        q_prime = _random_psd(rng, eff.r_z) + 0.1 * np.eye(eff.r_z)
        gamma = 0.1 * (rng.standard_normal((eff.r_z, tail))
                       + 1j * rng.standard_normal((eff.r_z, tail)))
        # Pad the tail block so the full matrix stays PSD.
        closure = gamma.conj().T @ np.linalg.inv(q_prime) @ gamma \
            + 1e-6 * np.eye(tail)
        q_hat = np.block([[q_prime, gamma], [gamma.conj().T, closure]])
        q_plain = np.zeros_like(q_hat)
        q_plain[:eff.r_z, :eff.r_z] = q_prime
        r_with = rate_single(sc, hermitian_part(
            eff.v_z @ q_hat @ eff.v_z.conj().T))
        r_without = rate_single(sc, hermitian_part(
            eff.v_z @ q_plain @ eff.v_z.conj().T))
        worst = max(worst, abs(r_with - r_without))
    return CheckResult("offdiagonal_block_irrelevance", worst < 1e-9, cases,
                       f"worst rate shift {worst:.2e}")


def check_waterfilling_kkt(seed: int, cases: int) -> CheckResult:
    """Active modes share one water level; allocations match it."""
    rng = substream(seed, 7, 0)
    worst = 0.0
    for _ in range(cases):
        n_r, n_t = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        h = random_channel(rng, n_r, n_t)
        p, sig = float(rng.uniform(0.5, 5.0)), float(rng.uniform(0.5, 2.0))
        q_s = waterfilling(h, p, sig)
        gains = np.linalg.svd(h, compute_uv=False) ** 2
        _, _, v = svd(h)
        alloc = np.real(np.diag(v.conj().T @ q_s @ v))[: gains.size]
        active = alloc > 1e-12
        if not np.any(active):
            continue
        mu = alloc[active] + sig / gains[active]
        worst = max(worst, float(mu.max() - mu.min()))
        worst = max(worst, abs(float(np.trace(q_s).real) - p))
    return CheckResult("waterfilling_kkt", worst < 1e-8, cases,
                       f"worst level spread {worst:.2e}")


def check_closed_form_trace(seed: int, cases: int) -> CheckResult:
    """Closed-form designs meet the power budget with equality."""
    rng = substream(seed, 8, 0)
    worst = 0.0
    for _ in range(cases):
        sc = _scenario(rng, p_z=float(rng.uniform(0.2, 20.0)))
        eff = effective_quantities(sc)
        out = spectral.closed_form_pd(eff, sc.jam_budget, sc.noise_power)
        worst = max(worst, abs(float(np.trace(out.q_prime).real)
                               - sc.jam_budget))
    return CheckResult("closed_form_trace", worst < 1e-8, cases,
                       f"worst trace error {worst:.2e}")


def check_lemma1_kkt(seed: int, cases: int) -> CheckResult:
    """Stationarity of the trace-budget log-det primitive."""
    rng = substream(seed, 9, 0)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        a = _random_psd(rng, n) + 0.05 * np.eye(n)
        x = spectral.lemma1_minimize(a)
        lam_implied = np.real(np.trace(
            np.linalg.inv(x) - np.linalg.inv(x + a))) / n
        resid = np.linalg.inv(x + a) - np.linalg.inv(x) \
            + lam_implied * np.eye(n)
        worst = max(worst, float(np.max(np.abs(resid))),
                    abs(float(np.trace(x).real) - 1.0) * 1e3)
    return CheckResult("lemma1_kkt", worst < 1e-7, cases,
                       f"worst residual {worst:.2e}")


def check_closed_vs_spca(seed: int, cases: int) -> CheckResult:
    """Iterative solver reproduces the closed form when the latter is valid."""
    rng = substream(seed, 10, 0)
    worst = 0.0
    done = 0
    while done < cases:
        sc = _scenario(rng, p_z=float(rng.uniform(5.0, 40.0)))
        eff = effective_quantities(sc)
        out = spectral.closed_form_pd(eff, sc.jam_budget, sc.noise_power)
        if not out.psd_ok:
            continue
        q_spca, _ = spca.spca_iterate(eff, sc.jam_budget)
        r_closed = rate_single(sc, assemble_qz(eff, out.q_prime, sc.n_z))
        r_spca = rate_single(sc, assemble_qz(eff, q_spca, sc.n_z))
        worst = max(worst, abs(r_closed - r_spca))
        done += 1
    return CheckResult("closed_vs_spca_agreement", worst < 1e-6, cases,
                       f"worst rate gap {worst:.2e}")


def check_rank_aware_reduction(seed: int, cases: int) -> CheckResult:
    """Full-rank rank-aware closed form matches the PD formula."""
    rng = substream(seed, 11, 0)
    worst = 0.0
    done = 0
    while done < cases:
        sc = _scenario(rng, p_z=float(rng.uniform(0.5, 20.0)))
        gram = np.linalg.eigvalsh(sc.signal_gram())
        if gram[0] < 1e-8 * gram[-1]:  # the formulas only agree at full rank
            continue
        done += 1
        eff = effective_quantities(sc)
        a = spectral.closed_form_pd(eff, sc.jam_budget, sc.noise_power)
        b = spectral.closed_form_psd(eff, sc.jam_budget, sc.noise_power)
        worst = max(worst, float(np.linalg.norm(a.q_prime - b.q_prime)))
    return CheckResult("rank_aware_reduction", worst < 1e-9, cases,
                       f"worst Frobenius gap {worst:.2e}")


def check_spca_descent(seed: int, cases: int) -> CheckResult:
    """Objective traces are nonincreasing; tangent bound majorizes."""
    rng = substream(seed, 12, 0)
    for i in range(max(cases // 10, 3)):
        sc = _scenario(rng, p_z=float(rng.uniform(0.1, 2.0)))
        eff = effective_quantities(sc)
        _, trace = spca.spca_iterate(eff, sc.jam_budget)
        diffs = np.diff(trace.objectives)
        if np.any(diffs > 1e-12):
            return CheckResult("spca_descent", False, cases,
                               f"objective increased at run {i}")
    rng2 = substream(seed, 12, 1)
    for i in range(cases):
        n = int(rng2.integers(1, 5))
        a = _random_psd(rng2, n)
        d = _random_psd(rng2, n) + 0.1 * np.eye(n)
        q = _random_psd(rng2, n)
        q_anchor = _random_psd(rng2, n)
        g = np.linalg.inv(q_anchor + d + a)
        lhs = log_det(q + d + a)
        rhs = log_det(q_anchor + d + a) \
            + float(np.trace(g @ (q - q_anchor)).real)
        if lhs > rhs + 1e-10:
            return CheckResult("spca_descent", False, cases,
                               f"majorization violated at pair {i}")
    return CheckResult("spca_descent", True, cases)


def check_suboptimal_contracts(seed: int, cases: int) -> CheckResult:
    """Suboptimal designs are PSD, budget-tight, and dominate the optimum
    from above."""
    rng = substream(seed, 13, 0)
    for i in range(cases):
        sc = _scenario(rng, p_z=float(rng.uniform(0.1, 5.0)))
        eff = effective_quantities(sc)
        q_sub, params = suboptimal.suboptimal_pd(eff, sc.jam_budget)
        if not is_psd(q_sub, 1e-9):
            return CheckResult("suboptimal_contracts", False, cases,
                               f"indefinite output at case {i}")
        if abs(float(np.trace(q_sub).real) - sc.jam_budget) > 1e-8:
            return CheckResult("suboptimal_contracts", False, cases,
                               f"trace violation at case {i}")
        q_opt, _ = spca.spca_iterate(eff, sc.jam_budget)
        r_sub = rate_single(sc, assemble_qz(eff, q_sub, sc.n_z))
        r_opt = rate_single(sc, assemble_qz(eff, q_opt, sc.n_z))
        if r_sub < r_opt - 1e-6:
            return CheckResult("suboptimal_contracts", False, cases,
                               f"suboptimal beat the optimum at case {i}")
    return CheckResult("suboptimal_contracts", True, cases)


def check_mac_exactness(seed: int, cases: int) -> CheckResult:
    """The folded multiple-access scenario reproduces the direct sum rate."""
    rng = substream(seed, 14, 0)
    worst = 0.0
    for _ in range(cases):
        n_r, n_z = 3, 4
        links = []
        for _ in range(3):
            n_t = int(rng.integers(2, 4))
            h = random_channel(rng, n_r, n_t)
            links.append((h, _random_psd(rng, n_t)))
        h_z = random_channel(rng, n_r, n_z)
        mac = multi_target.MacScenario(links=links, h_z=h_z,
                                       noise_power=1.0, jam_budget=2.0)
        sc = multi_target.mac_reduce(mac)
        for _ in range(5):
            q_z = _random_psd(rng, n_z)
            gram = sum(h @ q @ h.conj().T for h, q in links)
            noise = h_z @ q_z @ h_z.conj().T + np.eye(n_r)
            direct = log_det(noise + gram) - log_det(noise)
            worst = max(worst, abs(direct - rate_single(sc, q_z)))
    return CheckResult("mac_exactness", worst < 1e-9, cases,
                       f"worst gap {worst:.2e}")


def check_multi_feasibility(seed: int, cases: int) -> CheckResult:
    """Multi-target solvers return feasible designs and never help the link."""
    rng = substream(seed, 15, 0)
    for i in range(cases):
        receivers = []
        for n_r, sig in ((2, 0.5), (3, 1.0)):
            receivers.append((random_channel(rng, n_r, 3),
                              random_channel(rng, n_r, 3), sig))
        bc = multi_target.BcScenario(q_s=np.eye(3), receivers=receivers,
                                     jam_budget=2.0)
        sol = multi_target.bc_solve(bc)
        if not is_psd(sol.q_z, 1e-8) \
                or np.trace(sol.q_z).real > bc.jam_budget + 1e-8:
            return CheckResult("multi_feasibility", False, cases,
                               f"bc infeasible at case {i}")
        if sol.rate > multi_target.bc_rate(bc, np.zeros((3, 3))) + 1e-10:
            return CheckResult("multi_feasibility", False, cases,
                               f"bc jamming helped at case {i}")
    return CheckResult("multi_feasibility", True, cases)


ALL_CHECKS = (
    check_decomposition_reconstruction,
    check_projection_contract,
    check_rate_monotone,
    check_unjammed_rate,
    check_schur_compression_pd,
    check_offdiagonal_block_irrelevance,
    check_waterfilling_kkt,
    check_closed_form_trace,
    check_lemma1_kkt,
    check_closed_vs_spca,
    check_rank_aware_reduction,
    check_spca_descent,
    check_suboptimal_contracts,
    check_mac_exactness,
    check_multi_feasibility,
)

_QUICK_CASES = {
    "check_decomposition_reconstruction": 20,
    "check_projection_contract": 10,
    "check_rate_monotone": 10,
    "check_unjammed_rate": 20,
    "check_schur_compression_pd": 40,
    "check_offdiagonal_block_irrelevance": 10,
    "check_waterfilling_kkt": 30,
    "check_closed_form_trace": 30,
    "check_lemma1_kkt": 20,
    "check_closed_vs_spca": 5,
    "check_rank_aware_reduction": 20,
    "check_spca_descent": 20,
    "check_suboptimal_contracts": 5,
    "check_mac_exactness": 10,
    "check_multi_feasibility": 2,
}

_FULL_CASES = {
    "check_decomposition_reconstruction": 100,
    "check_projection_contract": 100,
    "check_rate_monotone": 50,
    "check_unjammed_rate": 100,
    "check_schur_compression_pd": 200,
    "check_offdiagonal_block_irrelevance": 50,
    "check_waterfilling_kkt": 100,
    "check_closed_form_trace": 100,
    "check_lemma1_kkt": 100,
    "check_closed_vs_spca": 100,
    "check_rank_aware_reduction": 100,
    "check_spca_descent": 100,
    "check_suboptimal_contracts": 30,
    "check_mac_exactness": 30,
    "check_multi_feasibility": 5,
}


def validate_suite(seed: int = 0, scale: str = "quick") -> list[CheckResult]:
    """Run every property check at the chosen scale; failures are data."""
    if scale not in ("quick", "full"):
        raise ValueError("scale must be 'quick' or 'full'")
    counts = _QUICK_CASES if scale == "quick" else _FULL_CASES
    results = []
    for check in ALL_CHECKS:
        results.append(check(seed, counts[check.__name__]))
    return results


def report_text(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  ({r.detail})" if r.detail else ""
        lines.append(f"{status}  {r.name} [{r.cases} cases]{detail}")
    return "\n".join(lines)
