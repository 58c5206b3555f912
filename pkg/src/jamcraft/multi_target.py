"""Multi-target jamming: MAC reduction, broadcast, TDM pairs, interference.

The multiple-access case folds into the single-target machinery by summing
the per-transmitter signal Grams.  The broadcast and interference cases
keep one shared jamming covariance and are solved by the same
tangent-majorization scheme as the single-target iterative solver, with the
concave with-signal log-det linearized at an anchor and each round solved
by projected gradient.  The TDM case optimizes one covariance per time
slot under a time-share-weighted joint power budget, either by an exact
simplex-grid search with per-slot single-target solves or by a joint
iteration over all slots with a shared water-level projection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateChannelError, InvalidInputError
from .linalg import as_matrix, evd, hermitian_part, is_psd, log_det, \
    psd_trace_projection
from .scenario import (
    EffectiveDecomposition,
    JammerSolution,
    JammingScenario,
    SolveDiagnostics,
    assemble_qz,
    effective_quantities,
    rate_single,
)
from .spca import SpcaOptions, SpcaTrace, _logdet_pd, _pgd, _project, _sym

__all__ = [
    "MacScenario", "BcScenario", "TdmScenario", "IcScenario", "TdmSolution",
    "mac_reduce", "bc_rate", "bc_solve", "tdm_rate", "tdm_solve_grid",
    "tdm_solve_joint", "ic_rate", "ic_solve",
]


@dataclass(frozen=True)
class MacScenario:
    """Several transmitters, one receiver, one jammer."""

    links: Sequence[tuple[np.ndarray, np.ndarray]]  # (h_i, q_i) pairs
    h_z: np.ndarray
    noise_power: float
    jam_budget: float

    def __post_init__(self):
        if not self.links:
            raise InvalidInputError("links must be nonempty")
        h_z = as_matrix(self.h_z, "h_z")
        n_r = h_z.shape[0]
        checked = []
        for i, (h, q) in enumerate(self.links):
            h = as_matrix(h, f"links[{i}].h")
            q = hermitian_part(q, f"links[{i}].q")
            if h.shape[0] != n_r:
                raise InvalidInputError(f"links[{i}].h row count mismatch")
            if not is_psd(q, 1e-9):
                raise InvalidInputError(f"links[{i}].q must be PSD")
            checked.append((h, q))
        object.__setattr__(self, "links", tuple(checked))
        object.__setattr__(self, "h_z", h_z)


@dataclass(frozen=True)
class BcScenario:
    """One transmitter broadcasting to several receivers, one jammer.

    receivers : sequence of (h_i, h_zi, noise_power_i)
    """

    q_s: np.ndarray
    receivers: Sequence[tuple[np.ndarray, np.ndarray, float]]
    jam_budget: float

    def __post_init__(self):
        if not self.receivers:
            raise InvalidInputError("receivers must be nonempty")
        q_s = hermitian_part(self.q_s, "q_s")
        n_t = q_s.shape[0]
        n_z = None
        checked = []
        for i, (h, h_z, sig) in enumerate(self.receivers):
            h = as_matrix(h, f"receivers[{i}].h")
            h_z = as_matrix(h_z, f"receivers[{i}].h_z")
            if h.shape[1] != n_t:
                raise InvalidInputError(f"receivers[{i}].h column mismatch")
            if h.shape[0] != h_z.shape[0]:
                raise InvalidInputError(f"receivers[{i}] row mismatch")
            if n_z is None:
                n_z = h_z.shape[1]
            elif h_z.shape[1] != n_z:
                raise InvalidInputError(f"receivers[{i}].h_z column mismatch")
            if sig <= 0:
                raise InvalidInputError(f"receivers[{i}] noise must be > 0")
            checked.append((h, h_z, float(sig)))
        object.__setattr__(self, "q_s", q_s)
        object.__setattr__(self, "receivers", tuple(checked))

    @property
    def n_z(self) -> int:
        return self.receivers[0][1].shape[1]


@dataclass(frozen=True)
class TdmScenario:
    """Time-multiplexed transceiver pairs sharing one jammer budget.

    pairs : sequence of (h_i, q_i, h_zi, noise_power_i, beta_i); the time
    shares beta_i must sum to 1.
    """

    pairs: Sequence[tuple[np.ndarray, np.ndarray, np.ndarray, float, float]]
    jam_budget: float

    def __post_init__(self):
        if not self.pairs:
            raise InvalidInputError("pairs must be nonempty")
        checked = []
        beta_sum = 0.0
        for i, (h, q, h_z, sig, beta) in enumerate(self.pairs):
            h = as_matrix(h, f"pairs[{i}].h")
            q = hermitian_part(q, f"pairs[{i}].q")
            h_z = as_matrix(h_z, f"pairs[{i}].h_z")
            if h.shape[0] != h_z.shape[0]:
                raise InvalidInputError(f"pairs[{i}] row mismatch")
            if sig <= 0 or beta <= 0:
                raise InvalidInputError(f"pairs[{i}] noise and beta must be > 0")
            beta_sum += beta
            checked.append((h, q, h_z, float(sig), float(beta)))
        if abs(beta_sum - 1.0) > 1e-12:
            raise InvalidInputError(f"time shares sum to {beta_sum}, not 1")
        object.__setattr__(self, "pairs", tuple(checked))


@dataclass(frozen=True)
class IcScenario:
    """Interfering transceiver pairs, one jamming covariance for all.

    pairs : sequence of (h_i, q_i, h_zi, noise_power_i)
    cross : cross[j][i] is the interference channel from transmitter j to
            receiver i (entries on the diagonal are ignored)
    """

    pairs: Sequence[tuple[np.ndarray, np.ndarray, np.ndarray, float]]
    cross: Sequence[Sequence[Optional[np.ndarray]]]
    jam_budget: float

    def __post_init__(self):
        if not self.pairs:
            raise InvalidInputError("pairs must be nonempty")
        m = len(self.pairs)
        checked = []
        n_z = None
        for i, (h, q, h_z, sig) in enumerate(self.pairs):
            h = as_matrix(h, f"pairs[{i}].h")
            q = hermitian_part(q, f"pairs[{i}].q")
            h_z = as_matrix(h_z, f"pairs[{i}].h_z")
            if h.shape[0] != h_z.shape[0]:
                raise InvalidInputError(f"pairs[{i}] row mismatch")
            if n_z is None:
                n_z = h_z.shape[1]
            elif h_z.shape[1] != n_z:
                raise InvalidInputError(f"pairs[{i}].h_z column mismatch")
            if sig <= 0:
                raise InvalidInputError(f"pairs[{i}] noise must be > 0")
            checked.append((h, q, h_z, float(sig)))
        cross_checked = []
        for j in range(m):
            row = []
            for i in range(m):
                if j == i:
                    row.append(None)
                    continue
                h_ji = as_matrix(self.cross[j][i], f"cross[{j}][{i}]")
                n_ri = checked[i][0].shape[0]
                n_tj = checked[j][0].shape[1]
                if h_ji.shape != (n_ri, n_tj):
                    raise InvalidInputError(
                        f"cross[{j}][{i}] must be {n_ri}x{n_tj}")
                row.append(h_ji)
            cross_checked.append(tuple(row))
        object.__setattr__(self, "pairs", tuple(checked))
        object.__setattr__(self, "cross", tuple(cross_checked))

    @property
    def n_z(self) -> int:
        return self.pairs[0][2].shape[1]


@dataclass(frozen=True)
class TdmSolution:
    """Per-slot covariances, power shares rho_i, and the achieved sum rate."""

    q_list: tuple[np.ndarray, ...]
    rho: tuple[float, ...]
    sum_rate: float
    diagnostics: SolveDiagnostics = field(default_factory=SolveDiagnostics)


# ---------------------------------------------------------------------------
# Multiple access channel
# ---------------------------------------------------------------------------

def mac_reduce(mac: MacScenario) -> JammingScenario:
    """Fold a multiple-access scenario into an equivalent single-target one.

    Only the summed signal Gram enters the rate, so a spectral square root
    of sum_i H_i Q_i H_i^H serves as the equivalent channel with identity
    signal covariance.
    """
    n_r = mac.h_z.shape[0]
    gram = np.zeros((n_r, n_r), dtype=np.complex128)
    for h, q in mac.links:
        gram += h @ q @ h.conj().T
    eig = evd(gram)
    root = (eig.vectors * np.sqrt(np.maximum(eig.values, 0.0))) \
        @ eig.vectors.conj().T
    return JammingScenario(
        h_r=root, q_s=np.eye(n_r, dtype=np.complex128), h_z=mac.h_z,
        noise_power=mac.noise_power, jam_budget=mac.jam_budget)


# ---------------------------------------------------------------------------
# Broadcast channel
# ---------------------------------------------------------------------------

def _bc_parts(bc: BcScenario):
    h_stack = np.vstack([h for h, _, _ in bc.receivers])
    signal = hermitian_part(h_stack @ bc.q_s @ h_stack.conj().T)
    sizes = [h.shape[0] for h, _, _ in bc.receivers]
    noise_diag = np.concatenate([
        np.full(n, sig) for n, (_, _, sig) in zip(sizes, bc.receivers)])
    return signal, np.diag(noise_diag).astype(np.complex128), sizes


def _bc_theta(bc: BcScenario, q_z: np.ndarray) -> np.ndarray:
    blocks = [hermitian_part(h_z @ q_z @ h_z.conj().T)
              for _, h_z, _ in bc.receivers]
    total = sum(b.shape[0] for b in blocks)
    theta = np.zeros((total, total), dtype=np.complex128)
    at = 0
    for b in blocks:
        n = b.shape[0]
        theta[at:at + n, at:at + n] = b
        at += n
    return theta


def bc_rate(bc: BcScenario, q_z) -> float:
    """Broadcast sum rate under a jamming covariance (nats)."""
    q = hermitian_part(q_z, "q_z")
    if q.shape[0] != bc.n_z:
        raise InvalidInputError(
            f"q_z is {q.shape[0]}x{q.shape[0]}, expected {bc.n_z}")
    signal, noise, _ = _bc_parts(bc)
    theta = _bc_theta(bc, q)
    return log_det(signal + noise + theta) - log_det(noise + theta)


def _outer_loop(sum_rate, subproblem, q0: np.ndarray,
                opts: SpcaOptions) -> tuple[np.ndarray, SpcaTrace]:
    """Anchor-refresh loop shared by the bc/tdm/ic solvers.

    Convergence needs both a stalled objective and a settled anchor; the
    objective flattens well before the iterate does.
    """
    trace = SpcaTrace()
    q = q0
    obj = sum_rate(q)
    trace.objectives.append(obj)
    for it in range(1, opts.max_outer_iters + 1):
        q_new = subproblem(q)
        obj_new = sum_rate(q_new)
        trace.objectives.append(obj_new)
        trace.iterations = it
        step_norm = float(np.linalg.norm(q_new - q))
        q, prev_obj, obj = q_new, obj, obj_new
        if abs(prev_obj - obj) < opts.outer_tol * max(1.0, abs(obj)) \
                and step_norm < 1e-9 * (1.0 + float(np.linalg.norm(q))):
            trace.converged = True
            break
    return q, trace


def bc_solve(bc: BcScenario, opts: SpcaOptions | None = None) -> JammerSolution:
    """Minimize the broadcast sum rate over the shared jamming covariance.

    The block-diagonal jamming Gram is substituted as a function of Q_z, so
    the iteration runs over Q_z alone: linearize the with-signal log-det at
    the anchor, solve the resulting convex program by projected gradient,
    refresh, repeat.
    """
    if opts is None:
        opts = SpcaOptions()
    n_z = bc.n_z
    if bc.jam_budget <= 0:
        q = np.zeros((n_z, n_z), dtype=np.complex128)
        return JammerSolution(q_z=q, rate=bc_rate(bc, q), method="zero")
    signal, noise, _ = _bc_parts(bc)
    channels = [h_z for _, h_z, _ in bc.receivers]
    noises = [sig for _, _, sig in bc.receivers]
    p_z = bc.jam_budget

    def without_signal_terms(q):
        return [_sym(h @ q @ h.conj().T) + sig * np.eye(h.shape[0])
                for h, sig in zip(channels, noises)]

    def subproblem(q_anchor):
        g_full = _sym(np.linalg.inv(
            signal + noise + _bc_theta(bc, q_anchor)))
        lin = np.zeros((n_z, n_z), dtype=np.complex128)
        at = 0
        for h in channels:
            n = h.shape[0]
            lin += h.conj().T @ g_full[at:at + n, at:at + n] @ h
            at += n
        lin = _sym(lin)

        def objective(q):
            val = float(np.trace(lin @ q).real)
            for term in without_signal_terms(q):
                val -= _logdet_pd(term)
            return val

        def gradient(q):
            g = lin.astype(np.complex128).copy()
            for h, term in zip(channels, without_signal_terms(q)):
                g -= h.conj().T @ np.linalg.inv(term) @ h
            return _sym(g)

        return _pgd(objective, gradient, lambda m: _project(m, p_z),
                    q_anchor, opts)

    q0 = (p_z / n_z) * np.eye(n_z, dtype=np.complex128)
    q, trace = _outer_loop(lambda q: bc_rate(bc, q), subproblem, q0, opts)
    diag = SolveDiagnostics(iterations=trace.iterations,
                            converged=trace.converged)
    return JammerSolution(q_z=q, rate=bc_rate(bc, q), method="spca",
                          diagnostics=diag)


# ---------------------------------------------------------------------------
# TDM transceiver pairs
# ---------------------------------------------------------------------------

def tdm_rate(tdm: TdmScenario, q_list: Sequence[np.ndarray]) -> float:
    """Time-share-weighted sum rate across the pairs (nats)."""
    if len(q_list) != len(tdm.pairs):
        raise InvalidInputError("one jamming covariance per pair required")
    total = 0.0
    for (h, q_s, h_z, sig, beta), q_z in zip(tdm.pairs, q_list):
        sc = JammingScenario(h_r=h, q_s=q_s, h_z=h_z, noise_power=sig,
                             jam_budget=max(tdm.jam_budget, 0.0))
        total += beta * rate_single(sc, q_z)
    return total


def _pair_scenario(pair, budget: float) -> JammingScenario:
    h, q_s, h_z, sig, _ = pair
    return JammingScenario(h_r=h, q_s=q_s, h_z=h_z, noise_power=sig,
                           jam_budget=budget)


def tdm_solve_grid(tdm: TdmScenario, grid_steps: int = 20,
                   prefer: str = "closed_then_spca") -> TdmSolution:
    """Search the power-share simplex with per-slot single-target solves.

    Each share vector rho assigns slot i the budget rho_i P_z / beta_i (so
    the time-weighted power equals rho_i P_z); slots are then independent
    and solved by the single-target dispatch.  Per-slot solutions are
    cached per grid level, so the cost is m * (grid_steps + 1) solves plus
    the simplex enumeration.
    """
    if grid_steps < 2:
        raise InvalidInputError("grid_steps must be at least 2")
    m = len(tdm.pairs)
    p_z = tdm.jam_budget

    per_pair: list[dict[int, tuple[float, np.ndarray]]] = []
    for pair in tdm.pairs:
        beta = pair[4]
        cache: dict[int, tuple[float, np.ndarray]] = {}
        for k in range(grid_steps + 1):
            budget = (k / grid_steps) * p_z / beta
            sol = _solve_pair(pair, budget, prefer)
            cache[k] = (pair[4] * sol.rate, sol.q_z)
        per_pair.append(cache)

    best = None
    for combo in itertools.product(range(grid_steps + 1), repeat=m - 1):
        used = sum(combo)
        if used > grid_steps:
            continue
        ks = combo + (grid_steps - used,)
        total = sum(per_pair[i][k][0] for i, k in enumerate(ks))
        if best is None or total < best[0] - 1e-15:
            best = (total, ks)
    total, ks = best
    q_list = tuple(per_pair[i][k][1] for i, k in enumerate(ks))
    rho = tuple(k / grid_steps for k in ks)
    return TdmSolution(q_list=q_list, rho=rho, sum_rate=total)


def _solve_pair(pair, budget: float, prefer: str) -> JammerSolution:
    from .spectral import solve_single

    return solve_single(_pair_scenario(pair, budget), prefer=prefer)


def _weighted_simplex_clip(values: np.ndarray, weights: np.ndarray,
                           budget: float) -> np.ndarray:
    """Project eigenvalues onto {x >= 0, sum_j w_j x_j <= budget} in l2.

    Shared-water-level form x_j = (v_j - w_j theta)_+ with theta found
    exactly on the sorted breakpoints v_j / w_j.
    """
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    clipped = np.maximum(v, 0.0)
    if float(w @ clipped) <= budget:
        return clipped
    ratios = v / w
    order = np.argsort(ratios)[::-1]
    r_sorted = ratios[order]
    css_wv = np.cumsum((w * v)[order])
    css_ww = np.cumsum((w * w)[order])
    # Largest active-set size whose water level stays below its smallest
    # active breakpoint; valid sizes form a prefix.
    theta = (css_wv[0] - budget) / css_ww[0]
    for k in range(v.size):
        cand = (css_wv[k] - budget) / css_ww[k]
        if r_sorted[k] > cand:
            theta = cand
    return np.maximum(v - w * max(theta, 0.0), 0.0)


def tdm_solve_joint(tdm: TdmScenario, opts: SpcaOptions | None = None
                    ) -> TdmSolution:
    """Jointly optimize all per-slot covariances under the coupled budget.

    Works in the reduced eigen-channel coordinates of each slot; each
    round linearizes the with-signal log-dets at the anchors and applies
    projected gradient over the product of PSD cones with the
    time-share-weighted trace budget (shared water-level projection over
    the concatenated, weight-scaled eigenvalues).
    """
    if opts is None:
        opts = SpcaOptions()
    m = len(tdm.pairs)
    p_z = tdm.jam_budget
    betas = np.array([pair[4] for pair in tdm.pairs])

    effs: list[Optional[EffectiveDecomposition]] = []
    for pair in tdm.pairs:
        try:
            effs.append(effective_quantities(_pair_scenario(pair, max(p_z, 0.0))))
        except DegenerateChannelError:
            effs.append(None)

    active = [i for i, e in enumerate(effs) if e is not None]
    if p_z <= 0 or not active:
        q_list = tuple(np.zeros((pair[2].shape[1],) * 2, dtype=np.complex128)
                       for pair in tdm.pairs)
        return TdmSolution(q_list=q_list, rho=tuple([1.0 / m] * m),
                           sum_rate=tdm_rate(tdm, q_list))

    dims = [effs[i].r_z for i in active]

    weights = np.concatenate([
        np.full(d, betas[i]) for d, i in zip(dims, active)])

    def project(blocks):
        eigs = [np.linalg.eigh(_sym(b)) for b in blocks]
        vals = np.concatenate([w for w, _ in eigs])
        projected = _weighted_simplex_clip(vals, weights, p_z)
        out = []
        at = 0
        for (_, v), d in zip(eigs, dims):
            x = projected[at:at + d]
            out.append(_sym((v * x) @ v.conj().T))
            at += d
        return out

    def reduced_sum_rate(blocks):
        total = 0.0
        for b, i in zip(blocks, active):
            eff = effs[i]
            core = b + eff.d0
            total += betas[i] * (log_det(core + eff.a_tilde) - log_det(core))
        return total

    def subproblem(anchor_blocks):
        gs = []
        for b, i in zip(anchor_blocks, active):
            eff = effs[i]
            gs.append(_sym(np.linalg.inv(b + eff.d0 + eff.a_tilde)))

        def objective(blocks):
            val = 0.0
            for b, g, i in zip(blocks, gs, active):
                eff = effs[i]
                val += betas[i] * (float(np.trace(g @ b).real)
                                   - _logdet_pd(b + eff.d0))
            return val

        def gradient(blocks):
            out = []
            for b, g, i in zip(blocks, gs, active):
                eff = effs[i]
                out.append(betas[i] * _sym(g - np.linalg.inv(b + eff.d0)))
            return out

        return _pgd(objective, gradient, project,
                    [b.copy() for b in anchor_blocks], opts)

    # Feasible uniform start: each active slot gets an equal share of the
    # weighted budget.
    share = p_z / len(active)
    q0 = [(share / (betas[i] * d)) * np.eye(d, dtype=np.complex128)
          for d, i in zip(dims, active)]

    trace = SpcaTrace()
    blocks = q0
    obj = reduced_sum_rate(blocks)
    trace.objectives.append(obj)
    for it in range(1, opts.max_outer_iters + 1):
        blocks_new = subproblem(blocks)
        obj_new = reduced_sum_rate(blocks_new)
        trace.objectives.append(obj_new)
        trace.iterations = it
        step_norm = float(np.sqrt(sum(
            np.linalg.norm(bn - b) ** 2
            for bn, b in zip(blocks_new, blocks))))
        scale = float(np.sqrt(sum(
            np.linalg.norm(b) ** 2 for b in blocks_new)))
        blocks, prev_obj, obj = blocks_new, obj, obj_new
        if abs(prev_obj - obj) < opts.outer_tol * max(1.0, abs(obj)) \
                and step_norm < 1e-9 * (1.0 + scale):
            trace.converged = True
            break

    q_list = []
    for i, pair in enumerate(tdm.pairs):
        n_zi = pair[2].shape[1]
        if i in active:
            block = blocks[active.index(i)]
            q_list.append(assemble_qz(effs[i], block, n_zi))
        else:
            q_list.append(np.zeros((n_zi, n_zi), dtype=np.complex128))
    rho = tuple(float(betas[i] * np.trace(q_list[i]).real / p_z)
                for i in range(m))
    diag = SolveDiagnostics(iterations=trace.iterations,
                            converged=trace.converged)
    return TdmSolution(q_list=tuple(q_list), rho=rho,
                       sum_rate=tdm_rate(tdm, q_list), diagnostics=diag)


# ---------------------------------------------------------------------------
# Interfering transceiver pairs
# ---------------------------------------------------------------------------

def _ic_offsets(ic: IcScenario) -> list[np.ndarray]:
    """Interference-plus-noise covariance at each receiver (PD, fixed)."""
    offsets = []
    for i, (h_i, _, _, sig) in enumerate(ic.pairs):
        n_ri = h_i.shape[0]
        c = sig * np.eye(n_ri, dtype=np.complex128)
        for j, (_, q_j, _, _) in enumerate(ic.pairs):
            if j == i:
                continue
            h_ji = ic.cross[j][i]
            c += h_ji @ q_j @ h_ji.conj().T
        offsets.append(hermitian_part(c))
    return offsets


def ic_rate(ic: IcScenario, q_z) -> float:
    """Sum rate of the interfering pairs under a shared jamming covariance."""
    q = hermitian_part(q_z, "q_z")
    if q.shape[0] != ic.n_z:
        raise InvalidInputError(
            f"q_z is {q.shape[0]}x{q.shape[0]}, expected {ic.n_z}")
    total = 0.0
    for (h_i, q_i, h_zi, _), c in zip(ic.pairs, _ic_offsets(ic)):
        signal = hermitian_part(h_i @ q_i @ h_i.conj().T)
        floor = hermitian_part(h_zi @ q @ h_zi.conj().T) + c
        total += log_det(floor + signal) - log_det(floor)
    return total


def ic_solve(ic: IcScenario, opts: SpcaOptions | None = None) -> JammerSolution:
    """Minimize the interference-network sum rate over the shared covariance.

    Same tangent-majorization scheme as the broadcast solver; the
    interference-plus-noise matrices enter as fixed PD offsets.
    """
    if opts is None:
        opts = SpcaOptions()
    n_z = ic.n_z
    if ic.jam_budget <= 0:
        q = np.zeros((n_z, n_z), dtype=np.complex128)
        return JammerSolution(q_z=q, rate=ic_rate(ic, q), method="zero")
    p_z = ic.jam_budget
    offsets = _ic_offsets(ic)
    signals = [hermitian_part(h @ q @ h.conj().T) for h, q, _, _ in ic.pairs]
    channels = [h_z for _, _, h_z, _ in ic.pairs]

    def floors(q):
        return [_sym(h @ q @ h.conj().T) + c
                for h, c in zip(channels, offsets)]

    def subproblem(q_anchor):
        lin = np.zeros((n_z, n_z), dtype=np.complex128)
        for s, h, f in zip(signals, channels, floors(q_anchor)):
            g_i = np.linalg.inv(s + f)
            lin += h.conj().T @ g_i @ h
        lin = _sym(lin)

        def objective(q):
            val = float(np.trace(lin @ q).real)
            for f in floors(q):
                val -= _logdet_pd(f)
            return val

        def gradient(q):
            g = lin.astype(np.complex128).copy()
            for h, f in zip(channels, floors(q)):
                g -= h.conj().T @ np.linalg.inv(f) @ h
            return _sym(g)

        return _pgd(objective, gradient, lambda m: _project(m, p_z),
                    q_anchor, opts)

    q0 = (p_z / n_z) * np.eye(n_z, dtype=np.complex128)
    q, trace = _outer_loop(lambda q: ic_rate(ic, q), subproblem, q0, opts)
    diag = SolveDiagnostics(iterations=trace.iterations,
                            converged=trace.converged)
    return JammerSolution(q_z=q, rate=ic_rate(ic, q), method="spca",
                          diagnostics=diag)
