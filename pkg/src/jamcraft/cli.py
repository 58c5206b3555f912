"""Command-line surface.

Subcommands:
  solve <config>                 solve one scenario, print the solution
  sweep <config> --out FILE      run a configured experiment, write CSV
  reproduce fig1|fig2|fig3|fig45 run a canned experiment at chosen scale
  validate --scale quick|full    run the cross-module property checks

Exit codes: 0 success, 2 config error, 3 numerical-contract violation,
4 non-convergence under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, FeasibilityError, InvalidInputError
from .harness import (
    example1_defaults,
    example2_defaults,
    example3_defaults,
    parse_config,
    run_experiment,
    substream,
)
from .scenario import JammingScenario
from .spectral import solve_single
from .validate import report_text, validate_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTRACT = 3
EXIT_NONCONVERGED = 4


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")


def _matrix_from_config(raw, path: str) -> np.ndarray:
    if not isinstance(raw, dict) or "re" not in raw:
        raise ConfigError(f"{path}: expected an object with 're' (and "
                          "optionally 'im') 2-D arrays")
    re = np.asarray(raw["re"], dtype=float)
    im = np.asarray(raw.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ConfigError(f"{path}: 're' and 'im' must be equal-shape 2-D")
    return re + 1j * im


_SOLVE_FIELDS = {"n_t", "n_r", "n_z", "transmit_power", "noise_power",
                 "jam_budget", "seed", "prefer", "h_r", "q_s", "h_z"}


def _solve_scenario_from_config(raw: dict) -> tuple[JammingScenario, str]:
    for key in raw:
        if key not in _SOLVE_FIELDS:
            raise ConfigError(f"{key}: unknown field for solve")
    prefer = raw.get("prefer", "closed_then_spca")
    noise = float(raw.get("noise_power", 1.0))
    budget = float(raw.get("jam_budget", 1.0))
    if noise <= 0:
        raise ConfigError("noise_power: must be positive")
    if budget < 0:
        raise ConfigError("jam_budget: must be nonnegative")

    if "h_r" in raw or "h_z" in raw or "q_s" in raw:
        for name in ("h_r", "q_s", "h_z"):
            if name not in raw:
                raise ConfigError(f"{name}: explicit scenarios need h_r, "
                                  "q_s and h_z together")
        h_r = _matrix_from_config(raw["h_r"], "h_r")
        q_s = _matrix_from_config(raw["q_s"], "q_s")
        h_z = _matrix_from_config(raw["h_z"], "h_z")
    else:
        from .harness import random_scenario

        seed = raw.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed: must be an integer")
        n_t = int(raw.get("n_t", 4))
        n_r = int(raw.get("n_r", 3))
        n_z = int(raw.get("n_z", 5))
        power = float(raw.get("transmit_power", 3.0))
        if min(n_t, n_r, n_z) < 1:
            raise ConfigError("antenna counts must be >= 1")
        if power <= 0:
            raise ConfigError("transmit_power: must be positive")
        rng = substream(seed, 0, 0)
        sc = random_scenario(rng, n_t, n_r, n_z, power, noise,
                             max(budget, 1e-12))
        h_r, q_s, h_z = sc.h_r, sc.q_s, sc.h_z
    try:
        scenario = JammingScenario(h_r=h_r, q_s=q_s, h_z=h_z,
                                   noise_power=noise, jam_budget=budget)
    except InvalidInputError as exc:
        raise ConfigError(str(exc))
    return scenario, prefer


def _cmd_solve(args) -> int:
    raw = _load_json(args.config)
    sc, prefer = _solve_scenario_from_config(raw)
    if prefer not in ("closed_then_spca", "closed_then_suboptimal"):
        raise ConfigError(f"prefer: unknown value {prefer!r}")
    sol = solve_single(sc, prefer=prefer)
    if args.strict and not sol.diagnostics.converged:
        print("solver did not converge (strict mode)", file=sys.stderr)
        return EXIT_NONCONVERGED
    payload = {
        "method": sol.method,
        "rate_nats": sol.rate,
        "q_z": {"re": sol.q_z.real.tolist(), "im": sol.q_z.imag.tolist()},
        "diagnostics": {
            "iterations": sol.diagnostics.iterations,
            "lambda": sol.diagnostics.lam,
            "epsilon": sol.diagnostics.epsilon,
            "kkt_residual": sol.diagnostics.kkt_residual,
            "psd_condition_held": sol.diagnostics.psd_condition_held,
            "converged": sol.diagnostics.converged,
        },
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = parse_config(_load_json(args.config))
    result = run_experiment(cfg)
    result.to_csv(args.out)
    print(f"wrote {args.out} (config {result.config_digest}, "
          f"seed {result.seed})")
    for key, value in result.metadata.items():
        print(f"{key}: {value}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    overrides: dict = {"seed": args.seed}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.figure in ("fig1", "fig2"):
        overrides["experiment"] = args.figure
        if args.figure == "fig2":
            # the validity-fraction figure needs no solver curves
            overrides["methods"] = []
        if args.clamp_indefinite:
            overrides["clamp_indefinite"] = True
        cfg = example1_defaults(**overrides)
    elif args.figure == "fig3":
        cfg = example2_defaults(**overrides)
    else:
        cfg = example3_defaults(**overrides)
    result = run_experiment(cfg)
    result.to_csv(args.out)
    print(f"wrote {args.out} (config {result.config_digest}, "
          f"seed {result.seed})")
    for key, value in result.metadata.items():
        print(f"{key}: {value}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    results = validate_suite(seed=args.seed, scale=args.scale)
    print(report_text(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CONTRACT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jamcraft",
        description="Jamming covariance design and experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a single scenario")
    p.add_argument("config", help="JSON scenario description")
    p.add_argument("--strict", action="store_true",
                   help="exit 4 if the solver did not converge")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("sweep", help="run a configured experiment")
    p.add_argument("config", help="JSON experiment config")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("reproduce", help="run a canned experiment")
    p.add_argument("figure", choices=["fig1", "fig2", "fig3", "fig45"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--clamp-indefinite", action="store_true",
                   help="project indefinite closed-form designs onto the "
                        "feasible cone before rating them (fig1/fig2)")
    p.set_defaults(fn=_cmd_reproduce)

    p = sub.add_parser("validate", help="run the property-check suite")
    p.add_argument("--scale", choices=["quick", "full"], default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FeasibilityError, FloatingPointError) as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
