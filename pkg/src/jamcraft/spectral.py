"""Closed-form jamming covariance solvers.

The core primitive minimizes log|I + A X^{-1}| over PD X with a trace
budget; its solution is a spectral square-root map of A with a scalar level
lambda pinned by the trace equality.  The two main solvers apply that
primitive on the reduced eigen-channel problem, for positive definite and
general positive semidefinite signal Grams respectively; the result is valid
exactly when the resulting expression is PSD, which the dispatcher checks
before falling back to the iterative or suboptimal paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateChannelError, DomainError, InvalidInputError
from .linalg import evd, hermitian_part, is_psd
from .scenario import (
    RANK_RTOL,
    EffectiveDecomposition,
    JammerSolution,
    JammingScenario,
    SolveDiagnostics,
    assemble_qz,
    effective_quantities,
    rate_single,
)

__all__ = [
    "ClosedFormOutcome",
    "lemma1_minimize",
    "closed_form_pd",
    "closed_form_psd",
    "identity_channel_solution",
    "solve_single",
    "solve_trace_level",
]

PSD_TOL = 1e-9


@dataclass(frozen=True)
class ClosedFormOutcome:
    """Closed-form candidate with its trace multiplier and PSD verdict.

    When ``psd_ok`` the candidate is the global optimum; it is returned
    as-is even when indefinite so the dispatcher (and the experiment
    harness, which counts PSD outcomes) can decide what to do with it.
    ``lam`` is +inf in the degenerate all-zero-spectrum case where the trace
    equality has no solution and the zero matrix is returned.
    """

    q_prime: np.ndarray
    lam: float
    psd_ok: bool


def solve_trace_level(trace_fn, target: float, name: str = "trace") -> float:
    """Solve trace_fn(lam) = target for the unique lam > 0.

    trace_fn must be continuous and strictly decreasing wherever it exceeds
    the target, with trace_fn -> inf as lam -> 0+.  The bracket is grown by
    doubling from 1 until the function drops below the target, which the
    monotone decreasing map guarantees terminates.
    """
    lo = np.finfo(float).eps
    hi = 1.0
    for _ in range(200):
        if trace_fn(hi) < target:
            break
        hi *= 2.0
    else:
        raise DomainError(f"{name} level bracket did not close")
    if trace_fn(lo) < target:
        raise DomainError(f"{name} target unreachable: function below target "
                          "at the smallest representable level")
    lam = brentq(lambda l: trace_fn(l) - target, lo, hi,
                 xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=300)
    return float(lam)


def _sqrt_water_values(eigvals: np.ndarray, lam: float) -> np.ndarray:
    """Elementwise sqrt(a/lam + a^2/4) with negatives clipped to zero."""
    a = np.maximum(np.asarray(eigvals, dtype=float), 0.0)
    return np.sqrt(a / lam + a * a / 4.0)


def lemma1_minimize(a) -> np.ndarray:
    """Minimize log|I + A X^{-1}| over {X PSD, Tr X <= 1} for PD A.

    Closed form: X = U sqrt(L/lam + L^2/4) U^H - A/2 on the eigensystem
    (U, L) of A, with lam pinned so the unit trace budget is met with
    equality.  The returned X is PD.
    """
    eig = evd(a)
    if eig.values.size == 0 or eig.values[-1] <= 0.0:
        raise DomainError("lemma1_minimize requires a positive definite input")
    half_trace = float(eig.values.sum()) / 2.0

    def trace_fn(lam: float) -> float:
        return float(_sqrt_water_values(eig.values, lam).sum()) - half_trace

    lam = solve_trace_level(trace_fn, 1.0, "lemma1")
    x = (eig.vectors * _sqrt_water_values(eig.values, lam)) @ eig.vectors.conj().T
    return hermitian_part(x - hermitian_part(a) / 2.0)


def closed_form_pd(eff: EffectiveDecomposition, p_z: float,
                   noise_power: float) -> ClosedFormOutcome:
    """Closed-form candidate for the reduced problem when the signal Gram is PD.

    Q' = U sqrt(L/lam + L^2/4) U^H - (a_tilde/2 + d0) with (U, L) the
    eigensystem of a_tilde and lam pinned by Tr Q' = p_z.  Valid (optimal)
    exactly when PSD; the indefinite candidate is still returned with
    psd_ok=False.
    """
    if p_z <= 0:
        raise InvalidInputError("p_z must be positive")
    eig = evd(eff.a_tilde)
    subtrahend = hermitian_part(eff.a_tilde / 2.0 + eff.d0)
    sub_trace = float(np.trace(subtrahend).real)

    def trace_fn(lam: float) -> float:
        return float(_sqrt_water_values(eig.values, lam).sum()) - sub_trace

    lam = solve_trace_level(trace_fn, p_z, "closed_form_pd")
    sqrt_part = (eig.vectors * _sqrt_water_values(eig.values, lam)) \
        @ eig.vectors.conj().T
    q_prime = hermitian_part(sqrt_part - subtrahend)
    return ClosedFormOutcome(q_prime=q_prime, lam=lam,
                             psd_ok=is_psd(q_prime, PSD_TOL))


def closed_form_psd(eff: EffectiveDecomposition, p_z: float,
                    noise_power: float) -> ClosedFormOutcome:
    """Rank-aware closed-form candidate for a PSD (not necessarily PD) Gram.

    Restricts the square-root map to the r_A positive eigenvalues of
    a_tilde; reduces to the PD formula when a_tilde has full rank.  A zero
    a_tilde means jamming cannot move the rate at all, and the zero design
    is returned with psd_ok=True.
    """
    if p_z <= 0:
        raise InvalidInputError("p_z must be positive")
    eig = evd(eff.a_tilde)
    wmax = eig.values[0] if eig.values.size else 0.0
    if wmax <= 0.0:
        zero = np.zeros_like(eff.a_tilde)
        return ClosedFormOutcome(q_prime=zero, lam=math.inf, psd_ok=True)
    r_a = int(np.count_nonzero(eig.values > RANK_RTOL * wmax))
    u1 = eig.vectors[:, :r_a]
    lam_plus = eig.values[:r_a]
    d0_trace = float(np.trace(eff.d0).real)
    half_trace = float(lam_plus.sum()) / 2.0

    def trace_fn(lam: float) -> float:
        return float(_sqrt_water_values(lam_plus, lam).sum()) \
            - half_trace - d0_trace

    lam = solve_trace_level(trace_fn, p_z, "closed_form_psd")
    sqrt_part = (u1 * _sqrt_water_values(lam_plus, lam)) @ u1.conj().T
    half_part = (u1 * (lam_plus / 2.0)) @ u1.conj().T
    q_prime = hermitian_part(sqrt_part - half_part - eff.d0)
    return ClosedFormOutcome(q_prime=q_prime, lam=lam,
                             psd_ok=is_psd(q_prime, PSD_TOL))


def identity_channel_solution(b, noise_power: float, p_z: float) -> np.ndarray:
    """Clamped closed form for the identity-jamming-channel special case.

    Q' = U (sqrt(L/lam + L^2/4) - L/2 - sigma^2 I)_+ U^H on the eigensystem
    of the signal Gram, with lam re-pinned on the clamped trace so the
    budget is met; the clamping makes the result PSD unconditionally.
    A zero Gram makes the objective constant, and the uniform allocation is
    returned for determinism.
    """
    if p_z <= 0:
        raise InvalidInputError("p_z must be positive")
    eig = evd(b)
    n = eig.values.size
    if n == 0 or eig.values[0] <= 0.0:
        return (p_z / n) * np.eye(n, dtype=np.complex128)

    def clamped_values(lam: float) -> np.ndarray:
        raw = _sqrt_water_values(eig.values, lam) \
            - np.maximum(eig.values, 0.0) / 2.0 - noise_power
        return np.maximum(raw, 0.0)

    lam = solve_trace_level(lambda l: float(clamped_values(l).sum()), p_z,
                            "identity_channel")
    return hermitian_part(
        (eig.vectors * clamped_values(lam)) @ eig.vectors.conj().T)


def _zero_solution(sc: JammingScenario) -> JammerSolution:
    q_z = np.zeros((sc.n_z, sc.n_z), dtype=np.complex128)
    return JammerSolution(q_z=q_z, rate=rate_single(sc, q_z), method="zero",
                          diagnostics=SolveDiagnostics(psd_condition_held=None))


def _gram_is_pd(sc: JammingScenario) -> bool:
    # Same relative eigenvalue cutoff as the rank decisions elsewhere.
    w = np.linalg.eigvalsh(sc.signal_gram())
    if w.size == 0 or w[-1] <= 0.0:
        return False
    return bool(w[0] > RANK_RTOL * w[-1])


def solve_single(sc: JammingScenario,
                 prefer: str = "closed_then_spca") -> JammerSolution:
    """Full single-target dispatch.

    Tests the signal Gram for positive definiteness, evaluates the matching
    closed form, and accepts it when PSD.  Otherwise falls back to the
    iterative optimal solver or the closed-form suboptimal solver according
    to ``prefer`` ("closed_then_spca" | "closed_then_suboptimal").  A zero
    jamming channel or a zero budget short-circuits to the zero covariance.
    """
    if prefer not in ("closed_then_spca", "closed_then_suboptimal"):
        raise InvalidInputError(f"unknown preference {prefer!r}")
    if sc.jam_budget <= 0:
        return _zero_solution(sc)
    try:
        eff = effective_quantities(sc)
    except DegenerateChannelError:
        return _zero_solution(sc)

    gram_pd = _gram_is_pd(sc)
    if gram_pd:
        outcome = closed_form_pd(eff, sc.jam_budget, sc.noise_power)
    else:
        outcome = closed_form_psd(eff, sc.jam_budget, sc.noise_power)

    if outcome.psd_ok:
        from .spca import kkt_residual  # local import to avoid a cycle

        q_z = assemble_qz(eff, outcome.q_prime, sc.n_z)
        diag = SolveDiagnostics(
            iterations=0, lam=outcome.lam, psd_condition_held=True,
            kkt_residual=kkt_residual(outcome.q_prime, eff.a_tilde, eff.d0,
                                      sc.jam_budget))
        return JammerSolution(q_z=q_z, rate=rate_single(sc, q_z),
                              method="closed_form", diagnostics=diag)

    if prefer == "closed_then_spca":
        from .spca import SpcaOptions, spca_iterate

        q_prime, trace = spca_iterate(eff, sc.jam_budget, SpcaOptions())
        q_z = assemble_qz(eff, q_prime, sc.n_z)
        diag = SolveDiagnostics(
            iterations=trace.iterations, lam=None,
            kkt_residual=trace.kkt_residual, psd_condition_held=False,
            converged=trace.converged)
        return JammerSolution(q_z=q_z, rate=rate_single(sc, q_z),
                              method="spca", diagnostics=diag)

    from .spca import kkt_residual
    from .suboptimal import suboptimal_pd, suboptimal_psd

    if gram_pd:
        q_prime, params = suboptimal_pd(eff, sc.jam_budget)
    else:
        q_prime, params = suboptimal_psd(eff, sc.jam_budget)
    q_z = assemble_qz(eff, q_prime, sc.n_z)
    diag = SolveDiagnostics(
        iterations=0, lam=params.lam, epsilon=params.epsilon,
        kkt_residual=kkt_residual(q_prime, eff.a_tilde, eff.d0, sc.jam_budget),
        psd_condition_held=False)
    return JammerSolution(q_z=q_z, rate=rate_single(sc, q_z),
                          method="suboptimal", diagnostics=diag)
