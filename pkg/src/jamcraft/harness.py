"""Monte Carlo experiment harness: configs, seeded sweeps, CSV output.

Channel draws use counter-based Philox substreams derived from
(seed, grid_index, trial_index), so trials are reproducible and safe to
evaluate concurrently.  The experiments key their channel substreams with
grid_index 0: every grid point then sees the same channel realizations,
which is what makes the method curves paired comparisons and keeps the
unjammed reference rates flat across the grid.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DegenerateChannelError, InvalidInputError
from .linalg import psd_trace_projection
from .multi_target import BcScenario, TdmScenario, bc_rate, bc_solve, \
    tdm_rate, tdm_solve_joint
from .scenario import JammingScenario, assemble_qz, effective_quantities, \
    rate_single, waterfilling
from .spca import SpcaOptions, spca_iterate
from .spectral import closed_form_pd, closed_form_psd, _gram_is_pd
from .suboptimal import suboptimal_pd, suboptimal_psd

__all__ = [
    "ExperimentConfig", "SweepResult", "substream", "random_channel",
    "random_scenario", "run_example1", "run_example2", "run_example3",
    "run_experiment", "example1_defaults", "example2_defaults",
    "example3_defaults",
]

METHODS = ("closed_form", "spca", "suboptimal")


# ---------------------------------------------------------------------------
# Randomness
# ---------------------------------------------------------------------------

def substream(seed: int, grid_index: int, trial_index: int) -> np.random.Generator:
    """Independent counter-based stream for one (grid point, trial) cell."""
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(int(grid_index), int(trial_index)))
    return np.random.Generator(np.random.Philox(ss))


def random_channel(rng: np.random.Generator, rows: int, cols: int,
                   variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian channel, i.i.d. entries.

    Real and imaginary parts are each Normal(0, variance/2) so that
    E|h_ij|^2 = variance.
    """
    if variance <= 0:
        raise InvalidInputError("variance must be positive")
    scale = math.sqrt(variance / 2.0)
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return scale * (real + 1j * imag)


def random_scenario(rng: np.random.Generator, n_t: int, n_r: int, n_z: int,
                    transmit_power: float, noise_power: float,
                    jam_budget: float,
                    channel_variance: float = 2.0) -> JammingScenario:
    """One random scenario with waterfilled legitimate covariance."""
    h_r = random_channel(rng, n_r, n_t, channel_variance)
    h_z = random_channel(rng, n_r, n_z, channel_variance)
    q_s = waterfilling(h_r, transmit_power, noise_power)
    return JammingScenario(h_r=h_r, q_s=q_s, h_z=h_z,
                           noise_power=noise_power, jam_budget=jam_budget)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

_COMMON_FIELDS = {"experiment", "trials", "seed"}
_FIELDS_BY_EXPERIMENT = {
    "fig1": _COMMON_FIELDS | {"n_t", "n_r", "n_z", "transmit_power",
                              "noise_power", "pz_grid", "methods",
                              "clamp_indefinite", "channel_variance"},
    "fig2": _COMMON_FIELDS | {"n_t", "n_r", "n_z", "transmit_power",
                              "noise_power", "pz_grid", "methods",
                              "clamp_indefinite", "channel_variance"},
    "fig3": _COMMON_FIELDS | {"n_t", "n_z", "receivers", "pz_grid",
                              "channel_variance"},
    "fig45": _COMMON_FIELDS | {"n_z", "pairs", "jam_budget", "total_power",
                               "noise_power", "p1_grid", "v1_grid"},
}

# Channel entries default to variance 1 per real/imaginary component
# (E|h|^2 = 2).  This is the convention under which the fraction of PSD
# closed-form outcomes at the reference single-target setup matches the
# published ~80% plateau; with E|h|^2 = 1 the waterfilled signal covariance
# drops a spatial mode too often and the plateau sits near 55%.
DEFAULT_CHANNEL_VARIANCE = 2.0


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description.

    ``receivers`` entries are (n_r, noise_power) for the broadcast
    experiment; ``pairs`` entries are (n_t, n_r, beta) for the TDM one.
    """

    experiment: str
    trials: int
    seed: int
    n_t: int = 0
    n_r: int = 0
    n_z: int = 0
    transmit_power: float = 0.0
    noise_power: float = 1.0
    channel_variance: float = DEFAULT_CHANNEL_VARIANCE
    pz_grid: tuple[float, ...] = ()
    methods: tuple[str, ...] = METHODS
    clamp_indefinite: bool = False
    receivers: tuple[tuple[int, float], ...] = ()
    pairs: tuple[tuple[int, int, float], ...] = ()
    jam_budget: float = 0.0
    total_power: float = 0.0
    p1_grid: tuple[float, ...] = ()
    v1_grid: tuple[float, ...] = ()

    def canonical_dict(self) -> dict:
        return {
            "experiment": self.experiment, "trials": self.trials,
            "seed": self.seed, "n_t": self.n_t, "n_r": self.n_r,
            "n_z": self.n_z, "transmit_power": self.transmit_power,
            "noise_power": self.noise_power,
            "channel_variance": self.channel_variance,
            "pz_grid": list(self.pz_grid),
            "methods": list(self.methods),
            "clamp_indefinite": self.clamp_indefinite,
            "receivers": [list(r) for r in self.receivers],
            "pairs": [list(p) for p in self.pairs],
            "jam_budget": self.jam_budget, "total_power": self.total_power,
            "p1_grid": list(self.p1_grid), "v1_grid": list(self.v1_grid),
        }

    def digest(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _require(cond: bool, path: str, message: str):
    if not cond:
        raise ConfigError(f"{path}: {message}")


def _grid(raw, path: str) -> tuple[float, ...]:
    _require(isinstance(raw, (list, tuple)) and len(raw) > 0, path,
             "must be a nonempty list")
    vals = []
    for i, v in enumerate(raw):
        _require(isinstance(v, (int, float)) and math.isfinite(v),
                 f"{path}[{i}]", "must be a finite number")
        vals.append(float(v))
    _require(all(b > a for a, b in zip(vals, vals[1:])), path,
             "must be strictly increasing")
    return tuple(vals)


def parse_config(raw: dict) -> ExperimentConfig:
    """Parse and validate a JSON-style config dict; unknown fields rejected."""
    _require(isinstance(raw, dict), "config", "must be an object")
    experiment = raw.get("experiment")
    _require(experiment in _FIELDS_BY_EXPERIMENT, "experiment",
             f"must be one of {sorted(_FIELDS_BY_EXPERIMENT)}")
    allowed = _FIELDS_BY_EXPERIMENT[experiment]
    for key in raw:
        _require(key in allowed, key, "unknown field for this experiment")

    trials = raw.get("trials", 1)
    _require(isinstance(trials, int) and trials >= 1, "trials",
             "must be an integer >= 1")
    seed = raw.get("seed", 0)
    _require(isinstance(seed, int) and 0 <= seed < 2**64, "seed",
             "must be a 64-bit unsigned integer")

    kwargs: dict = {"experiment": experiment, "trials": trials, "seed": seed}

    if experiment in ("fig1", "fig2"):
        for name, default in (("n_t", 4), ("n_r", 3), ("n_z", 5)):
            v = raw.get(name, default)
            _require(isinstance(v, int) and v >= 1, name, "must be >= 1")
            kwargs[name] = v
        for name, default in (("transmit_power", 3.0), ("noise_power", 1.0),
                              ("channel_variance", DEFAULT_CHANNEL_VARIANCE)):
            v = float(raw.get(name, default))
            _require(v > 0, name, "must be positive")
            kwargs[name] = v
        kwargs["pz_grid"] = _grid(raw.get("pz_grid",
                                          [0.1, 0.5, 1, 2, 5, 10, 20, 50]),
                                  "pz_grid")
        _require(all(p > 0 for p in kwargs["pz_grid"]), "pz_grid",
                 "powers must be positive")
        methods = tuple(raw.get("methods", list(METHODS)))
        for m in methods:
            _require(m in METHODS, "methods", f"unknown method {m!r}")
        kwargs["methods"] = methods
        kwargs["clamp_indefinite"] = bool(raw.get("clamp_indefinite", False))
    elif experiment == "fig3":
        v = raw.get("n_t", 4)
        _require(isinstance(v, int) and v >= 1, "n_t", "must be >= 1")
        kwargs["n_t"] = v
        v = raw.get("n_z", 4)
        _require(isinstance(v, int) and v >= 1, "n_z", "must be >= 1")
        kwargs["n_z"] = v
        v = float(raw.get("channel_variance", DEFAULT_CHANNEL_VARIANCE))
        _require(v > 0, "channel_variance", "must be positive")
        kwargs["channel_variance"] = v
        receivers = raw.get("receivers",
                            [[3, 0.5], [4, 0.5], [4, 1.0]])
        _require(isinstance(receivers, list) and receivers, "receivers",
                 "must be a nonempty list")
        recs = []
        for i, entry in enumerate(receivers):
            _require(isinstance(entry, (list, tuple)) and len(entry) == 2,
                     f"receivers[{i}]", "must be [n_r, noise_power]")
            n_r, sig = entry
            _require(isinstance(n_r, int) and n_r >= 1,
                     f"receivers[{i}].n_r", "must be >= 1")
            _require(float(sig) > 0, f"receivers[{i}].noise_power",
                     "must be positive")
            recs.append((n_r, float(sig)))
        kwargs["receivers"] = tuple(recs)
        kwargs["pz_grid"] = _grid(raw.get("pz_grid", [0, 1, 2, 4, 8]),
                                  "pz_grid")
        _require(all(p >= 0 for p in kwargs["pz_grid"]), "pz_grid",
                 "powers must be nonnegative")
    else:  # fig45
        v = raw.get("n_z", 4)
        _require(isinstance(v, int) and v >= 1, "n_z", "must be >= 1")
        kwargs["n_z"] = v
        pairs = raw.get("pairs", [[4, 4, 0.5], [3, 3, 0.5]])
        _require(isinstance(pairs, list) and len(pairs) >= 1, "pairs",
                 "must be a nonempty list")
        checked = []
        for i, entry in enumerate(pairs):
            _require(isinstance(entry, (list, tuple)) and len(entry) == 3,
                     f"pairs[{i}]", "must be [n_t, n_r, beta]")
            n_t, n_r, beta = entry
            _require(isinstance(n_t, int) and n_t >= 1,
                     f"pairs[{i}].n_t", "must be >= 1")
            _require(isinstance(n_r, int) and n_r >= 1,
                     f"pairs[{i}].n_r", "must be >= 1")
            _require(0 < float(beta) < 1 or float(beta) == 1.0,
                     f"pairs[{i}].beta", "must lie in (0, 1]")
            checked.append((n_t, n_r, float(beta)))
        _require(abs(sum(b for _, _, b in checked) - 1.0) < 1e-12,
                 "pairs", "time shares must sum to 1")
        kwargs["pairs"] = tuple(checked)
        for name, default in (("jam_budget", 4.0), ("total_power", 5.0),
                              ("noise_power", 1.0)):
            v = float(raw.get(name, default))
            _require(v > 0, name, "must be positive")
            kwargs[name] = v
        kwargs["p1_grid"] = _grid(raw.get("p1_grid", [1.0, 2.5, 4.0]),
                                  "p1_grid")
        _require(all(0 < p < kwargs["total_power"] for p in kwargs["p1_grid"]),
                 "p1_grid", "entries must lie in (0, total_power)")
        kwargs["v1_grid"] = _grid(raw.get("v1_grid", [0.5, 1.0, 1.5]),
                                  "v1_grid")
        _require(all(0 < v < 2 for v in kwargs["v1_grid"]), "v1_grid",
                 "entries must lie in (0, 2)")

    return ExperimentConfig(**kwargs)


# ---------------------------------------------------------------------------
# Sweep results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    coords: tuple[tuple[str, float], ...]
    metric: str
    mean: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class SweepResult:
    """Averaged metrics on a grid plus reproducibility provenance."""

    experiment: str
    rows: tuple[SweepRow, ...]
    seed: int
    config_digest: str
    metadata: dict = field(default_factory=dict)

    def coord_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.rows[0].coords)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        names = self.coord_names()
        header = ["experiment", *names, "metric", "mean", "stderr",
                  "trials", "seed"]
        lines = [",".join(header)]
        for row in self.rows:
            cells = [self.experiment]
            cells += [f"{value:.12g}" for _, value in row.coords]
            cells += [row.metric, f"{row.mean:.12g}", f"{row.stderr:.12g}",
                      str(row.trials), str(self.seed)]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def lookup(self, metric: str, **coords) -> SweepRow:
        for row in self.rows:
            if row.metric != metric:
                continue
            if all(abs(dict(row.coords)[k] - v) < 1e-12
                   for k, v in coords.items()):
                return row
        raise KeyError(f"no row for metric={metric!r} coords={coords}")

    def series(self, metric: str) -> list[tuple[tuple[float, ...], float, float]]:
        out = []
        for row in self.rows:
            if row.metric == metric:
                out.append((tuple(v for _, v in row.coords),
                            row.mean, row.stderr))
        return out


def _reduce_rows(experiment: str, coord_names: Sequence[str],
                 coords_list: Sequence[tuple[float, ...]],
                 per_trial: Sequence[dict[str, np.ndarray]],
                 trials: int) -> list[SweepRow]:
    """Canonical grid-major, metric-minor reduction of per-trial outputs."""
    rows = []
    for g, coords in enumerate(coords_list):
        metrics = per_trial[g]
        for metric in sorted(metrics):
            vals = np.asarray(metrics[metric], dtype=float)
            if not np.all(np.isfinite(vals)):
                bad = int(np.nonzero(~np.isfinite(vals))[0][0])
                raise FloatingPointError(
                    f"non-finite {metric} at grid point {coords}, trial {bad}")
            mean = float(vals.mean())
            stderr = float(vals.std(ddof=1) / math.sqrt(trials)) \
                if trials > 1 else 0.0
            rows.append(SweepRow(
                coords=tuple(zip(coord_names, coords)), metric=metric,
                mean=mean, stderr=stderr, trials=trials))
    return rows


# ---------------------------------------------------------------------------
# Worker-pool plumbing
# ---------------------------------------------------------------------------

def _worker_count(n_tasks: int) -> int:
    raw = os.environ.get("JAMCRAFT_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"JAMCRAFT_THREADS: not an integer: {raw!r}")
    cpus = os.cpu_count() or 1
    workers = cpus if cap == 0 else max(1, min(cap, cpus))
    if n_tasks < 4 * workers:  # pool start-up not worth it for tiny sweeps
        return 1
    return workers


def _map_trials(task_fn, cfg: ExperimentConfig) -> list:
    """Evaluate task_fn(cfg, trial) for every trial, in canonical order."""
    trials = list(range(cfg.trials))
    workers = _worker_count(len(trials))
    if workers == 1:
        return [task_fn(cfg, t) for t in trials]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task_fn, [cfg] * len(trials), trials,
                             chunksize=max(1, len(trials) // (4 * workers))))


# ---------------------------------------------------------------------------
# Example 1: single-target methods versus jammer power
# ---------------------------------------------------------------------------

def _matrix_payload(name: str, m: np.ndarray) -> dict:
    return {name: {"re": np.asarray(m).real.tolist(),
                   "im": np.asarray(m).imag.tolist()}}


def _check_finite(point: dict[str, float], trial: int, payload: dict):
    bad = [k for k, v in point.items() if not math.isfinite(v)]
    if bad:
        raise FloatingPointError(
            f"non-finite metrics {bad} in trial {trial}: "
            + json.dumps(payload))


def _closed_curve_rate(eff, q_prime, noise_power: float) -> float:
    """Rate bookkeeping for the raw closed-form expression.

    The raw candidate can make the effective noise covariance singular on
    eigen-channels the signal never reaches (rank-deficient compressed
    Gram); signal and noise vanish together there, so the rate is evaluated
    as a determinant ratio restricted to the non-null subspace.
    """
    from .linalg import evd, hermitian_part, log_det
    from .scenario import reduced_rate

    m = hermitian_part(q_prime) + eff.d0
    w = np.linalg.eigvalsh(m)
    if w[0] > 1e-12 * max(1.0, w[-1]):
        r_bar, r0 = reduced_rate(eff, q_prime, noise_power)
        return r_bar + r0
    eig = evd(m)
    keep = eig.values > 1e-12 * max(1.0, eig.values[0])
    basis = eig.vectors[:, keep]
    core = basis.conj().T @ m @ basis
    sig = basis.conj().T @ eff.a_tilde @ basis
    r_bar = log_det(hermitian_part(core + sig)) - log_det(hermitian_part(core))
    n_tail = eff.b22.shape[0]
    r0 = log_det(np.eye(n_tail) + eff.b22 / noise_power) if n_tail else 0.0
    return float(r_bar + r0)


def _example1_trial(cfg: ExperimentConfig, trial: int) -> list[dict[str, float]]:
    rng = substream(cfg.seed, 0, trial)
    sc0 = random_scenario(rng, cfg.n_t, cfg.n_r, cfg.n_z,
                          cfg.transmit_power, cfg.noise_power, jam_budget=1.0,
                          channel_variance=cfg.channel_variance)
    try:
        eff = effective_quantities(sc0)
    except DegenerateChannelError:
        eff = None
    gram_pd = _gram_is_pd(sc0)

    out = []
    for p_z in cfg.pz_grid:
        sc = JammingScenario(h_r=sc0.h_r, q_s=sc0.q_s, h_z=sc0.h_z,
                             noise_power=cfg.noise_power, jam_budget=p_z)
        point: dict[str, float] = {}
        if eff is None:
            base = rate_single(sc, np.zeros((cfg.n_z, cfg.n_z)))
            point["psd_fraction"] = 1.0
            for m in cfg.methods:
                point[f"rate_{m}"] = base
            out.append(point)
            continue

        closed = closed_form_pd(eff, p_z, cfg.noise_power) if gram_pd \
            else closed_form_psd(eff, p_z, cfg.noise_power)
        point["psd_fraction"] = 1.0 if closed.psd_ok else 0.0
        if "closed_form" in cfg.methods:
            if cfg.clamp_indefinite and not closed.psd_ok:
                q_prime = psd_trace_projection(closed.q_prime, p_z)
                point["rate_closed_form"] = rate_single(
                    sc, assemble_qz(eff, q_prime, cfg.n_z))
            else:
                point["rate_closed_form"] = _closed_curve_rate(
                    eff, closed.q_prime, cfg.noise_power)
        if "spca" in cfg.methods:
            q_prime, _ = spca_iterate(eff, p_z, SpcaOptions())
            point["rate_spca"] = rate_single(
                sc, assemble_qz(eff, q_prime, cfg.n_z))
        if "suboptimal" in cfg.methods:
            q_prime, _ = (suboptimal_pd if gram_pd else suboptimal_psd)(
                eff, p_z)
            point["rate_suboptimal"] = rate_single(
                sc, assemble_qz(eff, q_prime, cfg.n_z))
        _check_finite(point, trial, {**_matrix_payload("h_r", sc0.h_r),
                                     **_matrix_payload("h_z", sc0.h_z),
                                     "pz": p_z})
        out.append(point)
    return out


def run_example1(cfg: ExperimentConfig) -> SweepResult:
    """Single-target sweep over jammer power: method rates and PSD fraction."""
    if cfg.experiment not in ("fig1", "fig2"):
        raise ConfigError("experiment: run_example1 needs fig1 or fig2")
    results = _map_trials(_example1_trial, cfg)
    per_grid: list[dict[str, list[float]]] = [dict() for _ in cfg.pz_grid]
    for trial_points in results:
        for g, point in enumerate(trial_points):
            for metric, value in point.items():
                per_grid[g].setdefault(metric, []).append(value)
    rows = _reduce_rows(cfg.experiment, ("pz",),
                        [(p,) for p in cfg.pz_grid], per_grid, cfg.trials)
    return SweepResult(
        experiment=cfg.experiment, rows=tuple(rows), seed=cfg.seed,
        config_digest=cfg.digest(),
        metadata={"closed_form_policy":
                  "clamped" if cfg.clamp_indefinite else "as_is"})


# ---------------------------------------------------------------------------
# Example 2: broadcast channel
# ---------------------------------------------------------------------------

def _example2_trial(cfg: ExperimentConfig, trial: int) -> list[dict[str, float]]:
    rng = substream(cfg.seed, 0, trial)
    q_s = np.eye(cfg.n_t, dtype=np.complex128)
    receivers = []
    for n_r, sig in cfg.receivers:
        h = random_channel(rng, n_r, cfg.n_t, cfg.channel_variance)
        h_z = random_channel(rng, n_r, cfg.n_z, cfg.channel_variance)
        receivers.append((h, h_z, sig))

    out = []
    for p_z in cfg.pz_grid:
        bc = BcScenario(q_s=q_s, receivers=receivers, jam_budget=p_z)
        unjammed = bc_rate(bc, np.zeros((cfg.n_z, cfg.n_z)))
        sol = bc_solve(bc)
        point = {"rate_unjammed": unjammed, "rate_jammed": sol.rate}
        _check_finite(point, trial, {"pz": p_z})
        out.append(point)
    return out


def run_example2(cfg: ExperimentConfig) -> SweepResult:
    """Broadcast-channel sweep: unjammed and jammed sum rates per budget."""
    if cfg.experiment != "fig3":
        raise ConfigError("experiment: run_example2 needs fig3")
    results = _map_trials(_example2_trial, cfg)
    per_grid: list[dict[str, list[float]]] = [dict() for _ in cfg.pz_grid]
    for trial_points in results:
        for g, point in enumerate(trial_points):
            for metric, value in point.items():
                per_grid[g].setdefault(metric, []).append(value)
    rows = _reduce_rows(cfg.experiment, ("pz",),
                        [(p,) for p in cfg.pz_grid], per_grid, cfg.trials)
    return SweepResult(experiment=cfg.experiment, rows=tuple(rows),
                       seed=cfg.seed, config_digest=cfg.digest())


# ---------------------------------------------------------------------------
# Example 3: TDM pairs over a (P1, v1) grid
# ---------------------------------------------------------------------------

def _example3_trial(cfg: ExperimentConfig, trial: int) -> list[dict[str, float]]:
    rng = substream(cfg.seed, 0, trial)
    legit = [random_channel(rng, n_r, n_t) for n_t, n_r, _ in cfg.pairs]
    jam_unit = [random_channel(rng, n_r, cfg.n_z) for _, n_r, _ in cfg.pairs]

    out = []
    for p1 in cfg.p1_grid:
        for v1 in cfg.v1_grid:
            powers = [p1, cfg.total_power - p1] if len(cfg.pairs) == 2 \
                else [cfg.total_power / len(cfg.pairs)] * len(cfg.pairs)
            variances = [v1, 2.0 - v1] if len(cfg.pairs) == 2 \
                else [1.0] * len(cfg.pairs)
            pairs = []
            for i, (n_t, n_r, beta) in enumerate(cfg.pairs):
                q_i = waterfilling(legit[i], powers[i], cfg.noise_power)
                h_zi = math.sqrt(variances[i]) * jam_unit[i]
                pairs.append((legit[i], q_i, h_zi, cfg.noise_power, beta))
            tdm = TdmScenario(pairs=pairs, jam_budget=cfg.jam_budget)
            sol = tdm_solve_joint(tdm)
            zero = [np.zeros((cfg.n_z, cfg.n_z)) for _ in pairs]
            unjammed = tdm_rate(tdm, zero)
            r1 = 1.0 - sol.sum_rate / unjammed if unjammed > 0 else 0.0
            point = {"r1": r1, "r2": sol.rho[0],
                     "rate_jammed": sol.sum_rate,
                     "rate_unjammed": unjammed}
            _check_finite(point, trial, {"p1": p1, "v1": v1})
            out.append(point)
    return out


def run_example3(cfg: ExperimentConfig) -> SweepResult:
    """TDM sweep over the (P1, v1) grid: rate-reduction and power-share maps."""
    if cfg.experiment != "fig45":
        raise ConfigError("experiment: run_example3 needs fig45")
    coords = [(p1, v1) for p1 in cfg.p1_grid for v1 in cfg.v1_grid]
    results = _map_trials(_example3_trial, cfg)
    per_grid: list[dict[str, list[float]]] = [dict() for _ in coords]
    for trial_points in results:
        for g, point in enumerate(trial_points):
            for metric, value in point.items():
                per_grid[g].setdefault(metric, []).append(value)
    rows = _reduce_rows(cfg.experiment, ("p1", "v1"), coords, per_grid,
                        cfg.trials)
    return SweepResult(experiment=cfg.experiment, rows=tuple(rows),
                       seed=cfg.seed, config_digest=cfg.digest())


def run_experiment(cfg: ExperimentConfig) -> SweepResult:
    """Dispatch a parsed config to its experiment runner."""
    if cfg.experiment in ("fig1", "fig2"):
        return run_example1(cfg)
    if cfg.experiment == "fig3":
        return run_example2(cfg)
    return run_example3(cfg)


def example1_defaults(**overrides) -> ExperimentConfig:
    raw = {"experiment": "fig1", "trials": 800, "seed": 0}
    raw.update(overrides)
    return parse_config(raw)


def example2_defaults(**overrides) -> ExperimentConfig:
    raw = {"experiment": "fig3", "trials": 400, "seed": 0}
    raw.update(overrides)
    return parse_config(raw)


def example3_defaults(**overrides) -> ExperimentConfig:
    raw = {"experiment": "fig45", "trials": 400, "seed": 0}
    raw.update(overrides)
    return parse_config(raw)
