"""CLI: render figures from sweep CSVs.

  jamcraft-figures render --spec spec.json
  jamcraft-figures render fig1 sweep.csv out.png
"""

from __future__ import annotations

import argparse
import json
import sys

from .render import FigureSpec, SchemaError, preset_spec, render


def _spec_from_json(path: str) -> FigureSpec:
    with open(path) as fh:
        raw = json.load(fh)
    known = {"csv_path", "kind", "out_path", "metrics", "heatmap_metric",
             "x_label", "y_label", "title"}
    for key in raw:
        if key not in known:
            raise SchemaError(f"unknown spec field: {key}")
    for key in ("csv_path", "kind", "out_path"):
        if key not in raw:
            raise SchemaError(f"spec is missing required field: {key}")
    return FigureSpec(**raw)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="jamcraft-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render a figure from a sweep CSV")
    p.add_argument("args", nargs="*",
                   help="either nothing (use --spec) or: "
                        "PRESET CSV OUT (e.g. fig1 sweep.csv out.png)")
    p.add_argument("--spec", help="JSON figure spec")
    ns = parser.parse_args(argv)

    try:
        if ns.spec:
            spec = _spec_from_json(ns.spec)
        elif len(ns.args) == 3:
            spec = preset_spec(ns.args[0], ns.args[1], ns.args[2])
        else:
            print("usage: render --spec FILE  |  render PRESET CSV OUT",
                  file=sys.stderr)
            return 2
        out = render(spec)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
