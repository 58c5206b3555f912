"""System model for a jammed MIMO Gaussian link and its derived quantities.

A scenario bundles the legitimate channel/covariance, the jamming channel,
the receiver noise power and the jammer's power budget.  The "effective
decomposition" reduces the full n_z-dimensional jamming design to an
r_z-dimensional one on the nonzero eigen-channels of the jamming channel,
which is where all solvers operate.

Rates are natural-log (nats) throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateChannelError, InvalidInputError
from .linalg import as_matrix, evd, hermitian_part, is_psd, log_det, svd

__all__ = [
    "JammingScenario",
    "EffectiveDecomposition",
    "SolveDiagnostics",
    "JammerSolution",
    "RANK_RTOL",
    "rate_single",
    "effective_quantities",
    "reduced_rate",
    "assemble_qz",
    "waterfilling",
]

# Relative cutoff below which singular values / eigenvalues count as zero.
# One constant so rank decisions agree across the whole pipeline.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class JammingScenario:
    """One legitimate link, one jamming link, noise power, jammer budget.

    h_r : (n_r, n_t) legitimate channel
    q_s : (n_t, n_t) legitimate signal covariance, PSD
    h_z : (n_r, n_z) jamming channel
    noise_power : receiver noise variance sigma^2 > 0
    jam_budget : jammer transmit power limit P_z >= 0
    """

    h_r: np.ndarray
    q_s: np.ndarray
    h_z: np.ndarray
    noise_power: float
    jam_budget: float

    def __post_init__(self):
        h_r = as_matrix(self.h_r, "h_r")
        h_z = as_matrix(self.h_z, "h_z")
        q_s = hermitian_part(self.q_s, "q_s")
        if self.noise_power <= 0:
            raise InvalidInputError("noise_power must be positive")
        if self.jam_budget < 0:
            raise InvalidInputError("jam_budget must be nonnegative")
        if h_r.shape[0] != h_z.shape[0]:
            raise InvalidInputError(
                f"h_r has {h_r.shape[0]} rows but h_z has {h_z.shape[0]}")
        if q_s.shape[0] != h_r.shape[1]:
            raise InvalidInputError(
                f"q_s is {q_s.shape[0]}x{q_s.shape[0]} but h_r has "
                f"{h_r.shape[1]} columns")
        if not is_psd(q_s, 1e-9):
            raise InvalidInputError("q_s must be positive semidefinite")
        object.__setattr__(self, "h_r", h_r)
        object.__setattr__(self, "q_s", q_s)
        object.__setattr__(self, "h_z", h_z)

    @property
    def n_r(self) -> int:
        return self.h_r.shape[0]

    @property
    def n_t(self) -> int:
        return self.h_r.shape[1]

    @property
    def n_z(self) -> int:
        return self.h_z.shape[1]

    def signal_gram(self) -> np.ndarray:
        """H_r Q_s H_r^H, the received signal covariance (noise-free)."""
        return hermitian_part(self.h_r @ self.q_s @ self.h_r.conj().T)


@dataclass(frozen=True)
class EffectiveDecomposition:
    """Derived quantities of the eigen-channel reduction.

    u_z, v_z : unitary factors of the jamming-channel SVD
    omega_plus : the r_z positive singular values (descending)
    r_z : numerical rank of the jamming channel
    b : signal Gram rotated into the receive eigenbasis, u_z^H S u_z
    b11, b12, b21, b22 : blocks of ``b`` partitioned at r_z
    b_tilde : Schur-type compression of ``b`` onto the jammable block
    a_tilde : b_tilde scaled by the inverse eigen-channel gains
    d0 : diagonal effective noise on the eigen-channels, sigma^2/omega_i^2
    noise_power : sigma^2 the decomposition was computed with
    """

    u_z: np.ndarray
    v_z: np.ndarray
    omega_plus: np.ndarray
    r_z: int
    b: np.ndarray
    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray
    b_tilde: np.ndarray
    a_tilde: np.ndarray
    d0: np.ndarray
    noise_power: float


@dataclass(frozen=True)
class SolveDiagnostics:
    """Solver bookkeeping attached to a solution."""

    iterations: int = 0
    lam: Optional[float] = None
    epsilon: Optional[float] = None
    kkt_residual: Optional[float] = None
    psd_condition_held: Optional[bool] = None
    converged: bool = True


@dataclass(frozen=True)
class JammerSolution:
    """A jamming covariance, its achieved rate (nats) and how it was found."""

    q_z: np.ndarray
    rate: float
    method: str  # closed_form | spca | suboptimal | zero
    diagnostics: SolveDiagnostics = field(default_factory=SolveDiagnostics)


def rate_single(sc: JammingScenario, q_z) -> float:
    """Information rate of the legitimate link under jamming covariance q_z.

    log|I + H_r Q_s H_r^H (H_z Q_z H_z^H + sigma^2 I)^{-1}| in nats,
    evaluated as a difference of two log-dets of PD matrices.
    """
    q = hermitian_part(q_z, "q_z")
    if q.shape[0] != sc.n_z:
        raise InvalidInputError(
            f"q_z is {q.shape[0]}x{q.shape[0]}, expected {sc.n_z}x{sc.n_z}")
    noise = hermitian_part(sc.h_z @ q @ sc.h_z.conj().T) \
        + sc.noise_power * np.eye(sc.n_r)
    return log_det(noise + sc.signal_gram()) - log_det(noise)


def effective_quantities(sc: JammingScenario) -> EffectiveDecomposition:
    """Compute the eigen-channel reduction of a scenario.

    Raises DegenerateChannelError when the jamming channel is numerically
    zero (r_z = 0); callers must fall back to the zero covariance.
    """
    u_z, sigma, v_z = svd(sc.h_z)
    smax = sigma[0] if sigma.size else 0.0
    r_z = int(np.count_nonzero(sigma > RANK_RTOL * max(smax, 1e-300)))
    if r_z == 0 or smax == 0.0:
        raise DegenerateChannelError("jamming channel is numerically zero")
    omega = sigma[:r_z].astype(float)

    b = hermitian_part(u_z.conj().T @ sc.signal_gram() @ u_z)
    b11 = b[:r_z, :r_z]
    b12 = b[:r_z, r_z:]
    b21 = b[r_z:, :r_z]
    b22 = b[r_z:, r_z:]
    n_tail = b22.shape[0]
    if n_tail:
        core = sc.noise_power * np.eye(n_tail) + b22
        b_tilde = hermitian_part(b11 - b12 @ np.linalg.solve(core, b21))
    else:
        b_tilde = b11

    inv_omega = 1.0 / omega
    a_tilde = hermitian_part(b_tilde * np.outer(inv_omega, inv_omega))
    d0 = np.diag(sc.noise_power * inv_omega**2).astype(np.complex128)

    return EffectiveDecomposition(
        u_z=u_z, v_z=v_z, omega_plus=omega, r_z=r_z,
        b=b, b11=b11, b12=b12, b21=b21, b22=b22,
        b_tilde=b_tilde, a_tilde=a_tilde, d0=d0,
        noise_power=sc.noise_power,
    )


def reduced_rate(eff: EffectiveDecomposition, q_prime,
                 noise_power: float) -> tuple[float, float]:
    """Split the rate into a jammable part and a jamming-immune part.

    Returns (r_bar, r0) where r_bar = log|I + a_tilde (Q' + D0)^{-1}| is
    the part the jammer can influence and r0 = log|I + B22/sigma^2| is the
    residual rate on receive directions outside the jamming channel's range
    (zero when r_z = n_r).  r_bar + r0 equals the full rate of the
    assembled covariance.
    """
    q = hermitian_part(q_prime, "q_prime")
    core = q + eff.d0
    r_bar = log_det(core + eff.a_tilde) - log_det(core)
    n_tail = eff.b22.shape[0]
    if n_tail:
        r0 = log_det(np.eye(n_tail) + eff.b22 / noise_power)
    else:
        r0 = 0.0
    return float(r_bar), float(r0)


def assemble_qz(eff: EffectiveDecomposition, q_prime, n_z: int) -> np.ndarray:
    """Embed an r_z x r_z design into the full jamming covariance.

    Q_z = V_z blkdiag(Q', 0) V_z^H; power outside the nonzero eigen-channels
    is pure waste, so the optimal covariance always has this form.
    """
    q = hermitian_part(q_prime, "q_prime")
    if q.shape[0] != eff.r_z:
        raise InvalidInputError(
            f"q_prime is {q.shape[0]}x{q.shape[0]}, expected r_z={eff.r_z}")
    padded = np.zeros((n_z, n_z), dtype=np.complex128)
    padded[: eff.r_z, : eff.r_z] = q
    return hermitian_part(eff.v_z @ padded @ eff.v_z.conj().T)


def waterfilling(h_r, transmit_power: float, noise_power: float) -> np.ndarray:
    """Capacity-achieving transmit covariance for a known MIMO channel.

    Spectral waterfilling on the right-singular basis of h_r: mode i gets
    p_i = (mu - sigma^2/g_i)_+ with the water level mu solved exactly by
    the sorted active-set formula.  Tr Q_s = transmit_power.

    A zero channel gets the uniform covariance (the rate is zero whatever
    the allocation).
    """
    if transmit_power <= 0:
        raise InvalidInputError("transmit_power must be positive")
    if noise_power <= 0:
        raise InvalidInputError("noise_power must be positive")
    h = as_matrix(h_r, "h_r")
    n_t = h.shape[1]
    u, sigma, v = svd(h)
    gains = sigma**2
    if not gains.size or gains[0] <= 0.0:
        return (transmit_power / n_t) * np.eye(n_t, dtype=np.complex128)

    active = gains > RANK_RTOL * gains[0]
    g = gains[active]
    thresholds = noise_power / g  # ascending because gains are descending
    k_active = 1
    mu = thresholds[0] + transmit_power
    for k in range(1, g.size + 1):
        mu_k = (transmit_power + thresholds[:k].sum()) / k
        if mu_k > thresholds[k - 1]:
            k_active, mu = k, mu_k
    powers = np.maximum(mu - thresholds[:k_active], 0.0)
    alloc = np.zeros(n_t)
    alloc[:k_active] = powers
    return hermitian_part((v * alloc) @ v.conj().T)
