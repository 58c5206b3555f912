"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own solver paths: rates
are evaluated through explicit 2x2 determinant arithmetic and optima come
from dense parameter grids, so agreement with the solvers is evidence, not
tautology.
"""

from __future__ import annotations

import numpy as np

from jamcraft.linalg import hermitian_part
from jamcraft.scenario import JammingScenario


def rng_for(tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(tag)))


def random_complex(rng, rows: int, cols: int, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal((rows, cols))
                    + 1j * rng.standard_normal((rows, cols)))


def random_hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    return hermitian_part(random_complex(rng, n, n, scale))


def random_psd(rng, n: int, scale: float = 1.0) -> np.ndarray:
    m = random_complex(rng, n, n)
    return hermitian_part(scale * (m @ m.conj().T) / n)


def random_pd(rng, n: int, scale: float = 1.0, floor: float = 0.05) -> np.ndarray:
    return random_psd(rng, n, scale) + floor * np.eye(n)


def example1_scenario(rng, p_z: float, variance: float = 2.0) -> JammingScenario:
    """Reference single-target setup: 4 tx / 3 rx / 5 jammer antennas,
    waterfilled transmit covariance, unit noise."""
    from jamcraft.scenario import waterfilling

    h_r = random_complex(rng, 3, 4, np.sqrt(variance / 2))
    h_z = random_complex(rng, 3, 5, np.sqrt(variance / 2))
    q_s = waterfilling(h_r, 3.0, 1.0)
    return JammingScenario(h_r=h_r, q_s=q_s, h_z=h_z, noise_power=1.0,
                           jam_budget=p_z)


def engineered_indefinite_scenario(rng, p_z: float = 0.05,
                                   spread: float = 8.0) -> JammingScenario:
    """2x2 scenario whose exact closed form is indefinite: one strong and
    one weak jamming eigen-channel plus a small power budget."""
    h_r = random_complex(rng, 2, 2)
    h_z = np.diag([1.0, spread]).astype(complex)
    return JammingScenario(h_r=h_r, q_s=np.eye(2), h_z=h_z, noise_power=1.0,
                           jam_budget=p_z)


# ---------------------------------------------------------------------------
# Independent 2x2 oracles
# ---------------------------------------------------------------------------

def reduced_rate_2x2_grid(a_tilde: np.ndarray, d0: np.ndarray, p_z: float,
                          n_trace: int = 24, n_split: int = 24,
                          n_phase: int = 14) -> float:
    """Dense-grid minimum of log|Q+D0+A| - log|Q+D0| over feasible 2x2 Q.

    Parametrizes Hermitian PSD Q with trace <= p_z by diagonal entries and
    an off-diagonal complex disc, and evaluates the objective with explicit
    2x2 determinants.  Returns the best (smallest) value found.
    """
    a11 = complex(a_tilde[0, 0])
    a22 = complex(a_tilde[1, 1])
    a12 = complex(a_tilde[0, 1])
    d11 = float(np.real(d0[0, 0]))
    d22 = float(np.real(d0[1, 1]))

    qa, qb, qc, qd = [], [], [], []
    for t in np.linspace(0.0, p_z, n_trace):
        for x in np.linspace(0.0, t, n_split):
            a_val, b_val = x, t - x
            rad = np.sqrt(a_val * b_val)
            for r in np.linspace(0.0, rad, max(n_phase // 2, 2)):
                phases = np.linspace(0.0, 2 * np.pi, n_phase, endpoint=False) \
                    if r > 0 else [0.0]
                for ph in phases:
                    qa.append(a_val)
                    qb.append(b_val)
                    qc.append(r * np.cos(ph))
                    qd.append(r * np.sin(ph))
    qa = np.asarray(qa)
    qb = np.asarray(qb)
    off = np.asarray(qc) + 1j * np.asarray(qd)

    m11 = qa + d11
    m22 = qb + d22
    det_m = m11 * m22 - np.abs(off) ** 2
    det_ma = (m11 + a11) * (m22 + a22) - np.abs(off + a12) ** 2
    valid = det_m > 1e-15
    vals = np.log(np.real(det_ma[valid])) - np.log(np.real(det_m[valid]))
    return float(np.min(vals))


def feasible_grid_points_2x2(p_z: float, n_trace: int, n_split: int,
                             n_radius: int, n_phase: int):
    """Feasible 2x2 Hermitian PSD matrices with trace <= p_z, as component
    arrays (diag a, diag b, complex off-diagonal)."""
    qa, qb, off = [], [], []
    for t in np.linspace(0.0, p_z, n_trace):
        for x in np.linspace(0.0, 1.0, n_split):
            a_val = t * x
            b_val = t - a_val
            rad = np.sqrt(a_val * b_val)
            radii = np.linspace(0.0, rad, n_radius)
            for r in radii:
                phases = np.linspace(0.0, 2 * np.pi, n_phase,
                                     endpoint=False) if r > 0 else [0.0]
                for ph in phases:
                    qa.append(a_val)
                    qb.append(b_val)
                    off.append(r * np.exp(1j * ph))
    return np.asarray(qa), np.asarray(qb), np.asarray(off)


def reduced_rate_components_2x2(a_tilde, d0, qa, qb, off) -> np.ndarray:
    """Vectorized reduced-rate evaluation for component-form 2x2 designs."""
    a11 = complex(a_tilde[0, 0])
    a22 = complex(a_tilde[1, 1])
    a12 = complex(a_tilde[0, 1])
    d11 = float(np.real(d0[0, 0]))
    d22 = float(np.real(d0[1, 1]))
    m11 = qa + d11
    m22 = qb + d22
    det_m = np.real(m11 * m22) - np.abs(off) ** 2
    det_ma = np.real((m11 + a11) * (m22 + a22)) - np.abs(off + a12) ** 2
    det_m = np.maximum(det_m, 1e-300)
    det_ma = np.maximum(det_ma, 1e-300)
    return np.log(det_ma) - np.log(det_m)
