"""Closed-form suboptimal solver via noise-shaping relaxation.

When the exact closed form is indefinite, adding back a fraction epsilon of
the effective-noise diagonal D0 restores positive semidefiniteness: the
expression without -D0 is PSD by construction, so epsilon = 1 always works.
The solver picks the smallest epsilon in [0, 1] whose design is PSD, with
the trace level lambda re-pinned for every epsilon so the power budget is
met with equality.  With epsilon = 0 the design coincides with the exact
closed form, so this path is optimal whenever the exact form is PSD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FeasibilityError, InvalidInputError
from .linalg import evd, hermitian_part, is_psd
from .scenario import RANK_RTOL, EffectiveDecomposition
from .spectral import PSD_TOL, _sqrt_water_values, solve_trace_level

__all__ = ["EpsilonLambda", "suboptimal_pd", "suboptimal_psd",
           "epsilon_lambda_search"]

_PROBES = (0.0, 0.25, 0.5, 0.75, 1.0)
_BISECT_WIDTH = 1e-7
_SCAN_STEP = 1e-3


@dataclass(frozen=True)
class EpsilonLambda:
    """The noise-shaping fraction and trace level of a suboptimal design."""

    epsilon: float
    lam: float


def _assemble(u1: np.ndarray, lam_plus: np.ndarray, half_part: np.ndarray,
              d0: np.ndarray, eps: float, lam: float) -> np.ndarray:
    sqrt_part = (u1 * _sqrt_water_values(lam_plus, lam)) @ u1.conj().T
    return hermitian_part(sqrt_part - half_part + (eps - 1.0) * d0)


def epsilon_lambda_search(u1, lam_plus, half_part, d0,
                          p_z: float) -> EpsilonLambda:
    """Find the minimal epsilon in [0, 1] giving a PSD design.

    For each candidate epsilon the trace equality pins lambda uniquely
    (the trace is strictly decreasing in lambda), so the search is a nested
    bisection: outer on epsilon, inner on lambda.  PSD feasibility is
    probed on a coarse grid first; if it is not monotone there, a linear
    scan from 0 preserves minimality.  epsilon = 1 is feasible by
    construction; if even that fails the numerical contract is violated and
    the error is surfaced loudly.
    """
    u1 = np.asarray(u1, dtype=np.complex128)
    lam_plus = np.asarray(lam_plus, dtype=float)
    half_part = hermitian_part(half_part)
    d0 = hermitian_part(d0)
    if p_z <= 0:
        raise InvalidInputError("p_z must be positive")
    d0_trace = float(np.trace(d0).real)
    half_trace = float(lam_plus.sum()) / 2.0

    def lam_for(eps: float) -> float:
        target = p_z - (eps - 1.0) * d0_trace + half_trace
        return solve_trace_level(
            lambda l: float(_sqrt_water_values(lam_plus, l).sum()),
            target, "suboptimal")

    def psd_at(eps: float) -> tuple[bool, float]:
        lam = lam_for(eps)
        q = _assemble(u1, lam_plus, half_part, d0, eps, lam)
        return is_psd(q, PSD_TOL), lam

    probe_ok = []
    probe_lam = {}
    for eps in _PROBES:
        ok, lam = psd_at(eps)
        probe_ok.append(ok)
        probe_lam[eps] = lam
    if probe_ok[0]:
        return EpsilonLambda(epsilon=0.0, lam=probe_lam[0.0])

    first_true = next((i for i, ok in enumerate(probe_ok) if ok), None)
    monotone = first_true is not None and all(probe_ok[first_true:])

    if monotone:
        lo, hi = _PROBES[first_true - 1], _PROBES[first_true]
        lam_hi = probe_lam[hi]
        while hi - lo > _BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            ok, lam = psd_at(mid)
            if ok:
                hi, lam_hi = mid, lam
            else:
                lo = mid
        return EpsilonLambda(epsilon=hi, lam=lam_hi)

    # Non-monotone probe pattern: fall back to the conservative scan.
    eps = _SCAN_STEP
    while eps < 1.0:
        ok, lam = psd_at(eps)
        if ok:
            return EpsilonLambda(epsilon=eps, lam=lam)
        eps += _SCAN_STEP
    ok, lam = psd_at(1.0)
    if ok:
        return EpsilonLambda(epsilon=1.0, lam=lam)
    raise FeasibilityError(
        "no epsilon in [0, 1] yields a PSD design; the epsilon = 1 endpoint "
        "should be feasible by construction")


def suboptimal_pd(eff: EffectiveDecomposition, p_z: float
                  ) -> tuple[np.ndarray, EpsilonLambda]:
    """Suboptimal closed form for a PD signal Gram.

    Uses the full eigensystem of a_tilde with the subtracted half-term
    a_tilde/2; reduces to the exact closed form when that is already PSD
    (epsilon = 0).
    """
    eig = evd(eff.a_tilde)
    params = epsilon_lambda_search(eig.vectors, eig.values,
                                   eff.a_tilde / 2.0, eff.d0, p_z)
    q = _assemble(eig.vectors, eig.values, hermitian_part(eff.a_tilde / 2.0),
                  hermitian_part(eff.d0), params.epsilon, params.lam)
    return q, params


def suboptimal_psd(eff: EffectiveDecomposition, p_z: float
                   ) -> tuple[np.ndarray, EpsilonLambda]:
    """Rank-aware suboptimal closed form for a general PSD signal Gram.

    Restricts the spectral terms to the positive eigenvalues of a_tilde;
    identical to the PD variant at full rank.  A zero a_tilde cannot
    affect the rate and yields the zero design.
    """
    eig = evd(eff.a_tilde)
    wmax = eig.values[0] if eig.values.size else 0.0
    if wmax <= 0.0:
        zero = np.zeros_like(eff.a_tilde)
        return zero, EpsilonLambda(epsilon=0.0, lam=math.inf)
    r_a = int(np.count_nonzero(eig.values > RANK_RTOL * wmax))
    u1 = eig.vectors[:, :r_a]
    lam_plus = eig.values[:r_a]
    half_part = hermitian_part((u1 * (lam_plus / 2.0)) @ u1.conj().T)
    params = epsilon_lambda_search(u1, lam_plus, half_part, eff.d0, p_z)
    q = _assemble(u1, lam_plus, half_part, hermitian_part(eff.d0),
                  params.epsilon, params.lam)
    return q, params
