"""Iterative optimal solver for the reduced jamming problem.

The reduced objective log|Q' + D0 + A| - log|Q' + D0| is a difference of
concave terms; replacing the first term by its tangent at an anchor point
turns each round into a smooth convex program over the trace-bounded PSD
cone, which a projected-gradient method with backtracking solves.  Anchors
are refreshed with the subproblem solution until the objective stalls; the
tangent construction makes the objective sequence monotone nonincreasing
and the fixed point is the global optimum of the (convex) reduced problem.

Gradient steps use the Barzilai-Borwein spectral length as the backtracking
start; on the badly conditioned instances produced by weak eigen-channels
(large spread in D0) this cuts the iteration counts by orders of magnitude
compared to fixed-step descent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidInputError
from .linalg import hermitian_part, log_det, psd_trace_projection, simplex_clip
from .scenario import EffectiveDecomposition

__all__ = ["SpcaOptions", "SpcaTrace", "subproblem_solve", "spca_iterate",
           "kkt_residual"]

ARMIJO_SLOPE = 1e-4


@dataclass(frozen=True)
class SpcaOptions:
    """Iteration budgets and tolerances for the outer/inner loops."""

    max_outer_iters: int = 500
    outer_tol: float = 1e-9
    inner_max_iters: int = 2000
    inner_tol: float = 1e-10
    step_shrink: float = 0.5

    def __post_init__(self):
        if self.max_outer_iters <= 0 or self.inner_max_iters <= 0:
            raise InvalidInputError("iteration budgets must be positive")
        if not (0 < self.outer_tol < 1) or not (0 < self.inner_tol < 1):
            raise InvalidInputError("tolerances must lie in (0, 1)")
        if not (0 < self.step_shrink < 1):
            raise InvalidInputError("step_shrink must lie in (0, 1)")


@dataclass
class SpcaTrace:
    """Per-iteration objective values and end-state diagnostics."""

    objectives: list[float] = field(default_factory=list)
    kkt_residual: float = float("nan")
    iterations: int = 0
    converged: bool = False


# ---------------------------------------------------------------------------
# Lean internal kernels (validated entry points live in linalg)
# ---------------------------------------------------------------------------

def _sym(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) * 0.5


def _project(q: np.ndarray, budget: float) -> np.ndarray:
    w, v = np.linalg.eigh(_sym(q))
    x = simplex_clip(w, budget)
    return _sym((v * x) @ v.conj().T)


def _logdet_pd(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh(_sym(m))
    if w[0] <= 0.0:
        raise DomainError("matrix lost positive definiteness")
    return float(np.sum(np.log(w)))


# Generic monotone projected-gradient driver.  ``x`` may be a single ndarray
# or a list of ndarrays (block variables); the helpers below hide that.

def _lin(x, a: float, y):
    if isinstance(x, list):
        return [xi + a * yi for xi, yi in zip(x, y)]
    return x + a * y


def _diff_norm(x, y) -> float:
    if isinstance(x, list):
        return float(np.sqrt(sum(
            np.linalg.norm(xi - yi) ** 2 for xi, yi in zip(x, y))))
    return float(np.linalg.norm(x - y))


def _inner(x, y) -> float:
    if isinstance(x, list):
        return float(sum(np.real(np.vdot(xi, yi)) for xi, yi in zip(x, y)))
    return float(np.real(np.vdot(x, y)))


def _pgd(objective, gradient, project, x0, opts: SpcaOptions):
    """Monotone projected gradient with BB step and Armijo backtracking.

    Stops once the unit-step gradient-mapping norm drops below
    inner_tol * (1 + |objective|).  Initial point must be feasible; every
    accepted step decreases the objective, so the final value never exceeds
    the starting one.
    """
    x = project(x0)
    f_x = objective(x)
    grad = gradient(x)
    step = 1.0
    prev_x = None
    prev_grad = None
    for _ in range(opts.inner_max_iters):
        residual = _diff_norm(x, project(_lin(x, -1.0, grad)))
        if residual < opts.inner_tol * (1.0 + abs(f_x)):
            break
        if prev_x is not None:
            s = _lin(x, -1.0, prev_x)
            y = _lin(grad, -1.0, prev_grad)
            sy = _inner(s, y)
            ss = _inner(s, s)
            if sy > 1e-18 * max(ss, 1e-300):
                step = min(max(ss / sy, 1e-12), 1e12)
            # otherwise keep the last accepted step
        accepted = False
        for _ in range(200):
            x_new = project(_lin(x, -step, grad))
            delta = _lin(x_new, -1.0, x)
            slope = _inner(grad, delta)
            if slope >= 0.0:  # no descent direction left at this step
                step *= opts.step_shrink
                if step < 1e-18:
                    return x
                continue
            f_new = objective(x_new)
            if f_new <= f_x + ARMIJO_SLOPE * slope:
                accepted = True
                break
            step *= opts.step_shrink
            if step < 1e-18:
                return x
        if not accepted:
            return x
        prev_x, prev_grad = x, grad
        x, f_x = x_new, f_new
        grad = gradient(x)
    return x


def subproblem_solve(a_tilde, d0, p_z: float, q_anchor,
                     opts: SpcaOptions | None = None) -> np.ndarray:
    """Solve one tangent subproblem by projected gradient.

    Minimizes Tr{G Q'} - log|Q' + D0| over {Q' PSD, Tr Q' <= p_z} with
    G = (anchor + D0 + A)^{-1}.  Starts at the anchor (so the achieved
    objective can only improve on it) and stops when the unit-step
    projected-gradient residual falls below inner_tol * (1 + |objective|).
    """
    if opts is None:
        opts = SpcaOptions()
    a = hermitian_part(a_tilde, "a_tilde")
    d = hermitian_part(d0, "d0")
    d_eigs = np.linalg.eigvalsh(d)
    if d_eigs.size == 0 or d_eigs[0] <= 0.0:
        raise DomainError("d0 must be positive definite")
    if p_z <= 0:
        raise InvalidInputError("p_z must be positive")

    g_lin = _sym(np.linalg.inv(hermitian_part(q_anchor) + d + a))

    def objective(q):
        return float(np.trace(g_lin @ q).real) - _logdet_pd(q + d)

    def gradient(q):
        return _sym(g_lin - np.linalg.inv(q + d))

    return _pgd(objective, gradient, lambda m: _project(m, p_z),
                hermitian_part(q_anchor), opts)


def _reduced_objective(q: np.ndarray, a: np.ndarray, d: np.ndarray) -> float:
    core = q + d
    return _logdet_pd(core + a) - _logdet_pd(core)


def spca_iterate(eff: EffectiveDecomposition, p_z: float,
                 opts: SpcaOptions | None = None
                 ) -> tuple[np.ndarray, SpcaTrace]:
    """Run the anchor-refresh iteration from the uniform-power start.

    Returns the final design (PSD, trace <= p_z) and a trace whose
    objective list is nonincreasing.  If the outer budget is exhausted the
    best iterate is returned with converged=False.
    """
    if opts is None:
        opts = SpcaOptions()
    if eff.r_z < 1:
        raise InvalidInputError("decomposition has no jammable eigen-channel")
    a = hermitian_part(eff.a_tilde)
    d = hermitian_part(eff.d0)

    q = (p_z / eff.r_z) * np.eye(eff.r_z, dtype=np.complex128)
    trace = SpcaTrace()
    obj = _reduced_objective(q, a, d)
    trace.objectives.append(obj)
    # The objective stalls long before the iterate settles, so after the
    # stall a bounded number of extra anchor refreshes chases a tight
    # stationarity point; the anchor map contracts at a rate that degrades
    # with the power budget, which is why the polish phase must be capped.
    stalled_at = None
    polish_budget = 150
    for it in range(1, opts.max_outer_iters + 1):
        q_new = subproblem_solve(a, d, p_z, q, opts)
        obj_new = _reduced_objective(q_new, a, d)
        trace.objectives.append(obj_new)
        trace.iterations = it
        step_norm = float(np.linalg.norm(q_new - q))
        q, prev_obj, obj = q_new, obj, obj_new
        if abs(prev_obj - obj) >= opts.outer_tol * max(1.0, abs(obj)):
            continue
        if stalled_at is None:
            stalled_at = it
        settled = step_norm < 1e-9 * (1.0 + float(np.linalg.norm(q)))
        if settled:
            trace.kkt_residual = kkt_residual(q, a, d, p_z)
            if trace.kkt_residual < 1e-7:
                trace.converged = True
                break
        if it - stalled_at >= polish_budget:
            trace.converged = True  # the documented objective criterion
            break
    trace.kkt_residual = kkt_residual(q, a, d, p_z)
    return q, trace


def kkt_residual(q_prime, a_tilde, d0, p_z: float) -> float:
    """Projected-stationarity residual of the reduced objective.

    Frobenius norm of Q' - Proj(Q' - grad), the unit-step gradient mapping
    onto {PSD, trace <= p_z}; zero exactly at optima of the reduced
    problem.
    """
    q = hermitian_part(q_prime, "q_prime")
    a = hermitian_part(a_tilde, "a_tilde")
    d = hermitian_part(d0, "d0")
    core = q + d
    grad = _sym(np.linalg.inv(core + a) - np.linalg.inv(core))
    return float(np.linalg.norm(q - psd_trace_projection(q - grad, p_z)))
