#!/usr/bin/env python3
"""Run a desk-scale Monte Carlo sweep and print the resulting table.

Equivalent CLI: jamcraft reproduce fig1 --seed 7 --trials 40 --out fig1.csv
"""

from jamcraft.harness import parse_config, run_example1

cfg = parse_config({
    "experiment": "fig1",
    "trials": 40,
    "seed": 7,
    "pz_grid": [0.25, 0.5, 1.0, 2.0, 5.0, 10.0],
})
result = run_example1(cfg)

print(f"config digest {result.config_digest}, "
      f"closed-form policy: {result.metadata['closed_form_policy']}")
print(f"\n{'P_z':>6} {'closed':>9} {'optimal':>9} {'subopt':>9} "
      f"{'PSD frac':>9}")
for p_z in cfg.pz_grid:
    closed = result.lookup("rate_closed_form", pz=p_z).mean
    spca = result.lookup("rate_spca", pz=p_z).mean
    sub = result.lookup("rate_suboptimal", pz=p_z).mean
    frac = result.lookup("psd_fraction", pz=p_z).mean
    print(f"{p_z:>6.2f} {closed:>9.4f} {spca:>9.4f} {sub:>9.4f} "
          f"{frac:>9.2f}")

result.to_csv("fig1_demo.csv")
print("\nwrote fig1_demo.csv")
