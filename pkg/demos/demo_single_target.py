#!/usr/bin/env python3
"""Walk through the single-target jamming solvers on one random scenario.

Draws a 4x3 legitimate link and a 5-antenna jammer, waterfills the
transmit covariance, then compares the closed-form, iterative, and
suboptimal jamming designs across power budgets.
"""

import numpy as np

from jamcraft import (
    assemble_qz,
    closed_form_pd,
    effective_quantities,
    rate_single,
    solve_single,
    spca_iterate,
    suboptimal_pd,
    substream,
)
from jamcraft.harness import random_scenario

rng = substream(seed=42, grid_index=0, trial_index=0)
sc = random_scenario(rng, n_t=4, n_r=3, n_z=5, transmit_power=3.0,
                     noise_power=1.0, jam_budget=2.0)

unjammed = rate_single(sc, np.zeros((sc.n_z, sc.n_z)))
print(f"unjammed rate: {unjammed:.4f} nats")

print(f"\n{'P_z':>6} {'closed-form':>12} {'iterative':>12} "
      f"{'suboptimal':>12} {'valid?':>7}")
for p_z in (0.2, 0.5, 1.0, 2.0, 5.0, 20.0):
    eff = effective_quantities(sc)
    closed = closed_form_pd(eff, p_z, sc.noise_power)
    r_closed = np.nan
    if closed.psd_ok:
        r_closed = rate_single(sc, assemble_qz(eff, closed.q_prime, sc.n_z))
    q_spca, _ = spca_iterate(eff, p_z)
    r_spca = rate_single(sc, assemble_qz(eff, q_spca, sc.n_z))
    q_sub, params = suboptimal_pd(eff, p_z)
    r_sub = rate_single(sc, assemble_qz(eff, q_sub, sc.n_z))
    print(f"{p_z:>6.1f} {r_closed:>12.4f} {r_spca:>12.4f} {r_sub:>12.4f} "
          f"{'yes' if closed.psd_ok else 'no':>7}")

print("\nDispatcher at P_z = 0.3 (closed form usually indefinite here):")
sol = solve_single(type(sc)(h_r=sc.h_r, q_s=sc.q_s, h_z=sc.h_z,
                            noise_power=sc.noise_power, jam_budget=0.3))
print(f"  method: {sol.method}, rate {sol.rate:.4f} nats, "
      f"kkt residual {sol.diagnostics.kkt_residual:.1e}")
