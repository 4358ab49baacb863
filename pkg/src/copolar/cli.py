"""Command-line entry point: ``copolar run | families | eval``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from .centroaffine import ca_metric, christoffel, cubic_form
from .diffgeo import BoundaryChart, crucial_map, equiaffine_support, gauss_curvature, gradient_map
from .duality import htilde, ratio_support, scale_saddle
from .errors import CopolarError, NumericError, ParseError, UnknownAudit
from .pseudocone import FAMILIES, copolar, make_family
from .report import jsonable
from .runner import EXIT_NUMERIC, EXIT_PARSE, run_scenario, write_outputs
from .scenario import load_scenario


def _chart_params(K, x):
    chart = BoundaryChart(K)
    return chart, chart.params_of(x)


def _on_chart(fn):
    def op(K, x):
        chart, t = _chart_params(K, x)
        return fn(K, t, chart)

    return op


# single-point operations: (family, point) -> value
OPERATIONS = {
    "radial": lambda K, x: K.radial(x),
    "gauge": lambda K, x: K.gauge(x),
    "member": lambda K, x: K.member(x),
    "support": lambda K, x: K.support(x),
    "support_numeric": lambda K, x: K.support_numeric(x),
    "copolar_radial": lambda K, x: copolar(K).radial(x),
    "copolar_support": lambda K, x: copolar(K).support(x),
    "htilde": lambda K, x: htilde(K, x),
    "ratio_support": lambda K, x: ratio_support(K, x),
    "scale_saddle": lambda K, x: scale_saddle(K, x),
    "gradient_map": lambda K, x: gradient_map(K, x),
    "crucial_map": lambda K, x: crucial_map(K, x).x_star,
    "gauss_curvature": _on_chart(gauss_curvature),
    "equiaffine_support": _on_chart(equiaffine_support),
    "ca_metric": _on_chart(ca_metric),
    "christoffel": _on_chart(christoffel),
    "cubic_form": _on_chart(cubic_form),
}


def _parse_param(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ParseError(f"parameter {text!r} is not of the form key=value")
    try:
        return key, yaml.safe_load(value)
    except yaml.YAMLError as exc:
        raise ParseError(f"parameter {key!r}: cannot parse value {value!r}: {exc}") from None


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ParseError(f"point {text!r} is not a comma-separated list of numbers") from None


def _scenario_paths(target: Path) -> list[Path]:
    if target.is_dir():
        paths = sorted(p for p in target.iterdir() if p.suffix in (".yaml", ".yml"))
        if not paths:
            raise ParseError(f"{target}: no scenario files found")
        return paths
    return [target]


def cmd_run(args) -> int:
    paths = _scenario_paths(Path(args.scenario))
    scenarios = [load_scenario(p) for p in paths]
    if args.seed is not None:
        scenarios = [s.with_seed(args.seed) for s in scenarios]
    status = 0
    for sc in scenarios:
        run = run_scenario(sc, tol_scale=args.tol_scale)
        out = Path(args.out) / sc.name if len(scenarios) > 1 else Path(args.out)
        write_outputs(run, out)
        print(run.summary())
        print()
        status = max(status, run.exit_status)
    return status


def cmd_families(args) -> int:
    yn = {True: "yes", False: "no"}
    head = f"{'family':<22} {'parameters':<22} {'class':>5}  {'analytic':>8}  {'support':>7}  {'copolar':>7}"
    print(head)
    print("-" * len(head))
    for spec in FAMILIES.values():
        print(
            f"{spec.name:<22} {spec.parameters:<22} {spec.smoothness:>5}  "
            f"{yn[spec.analytic_derivatives]:>8}  {yn[spec.closed_support]:>7}  {yn[spec.closed_copolar]:>7}"
        )
    print("\nclass: smoothness class; analytic: analytic radial derivatives;")
    print("support / copolar: closed-form support function / closed-form copolar set")
    return 0


def cmd_eval(args) -> int:
    params = dict(_parse_param(p) for p in args.param)
    try:
        K = make_family(args.family, **params)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"family {args.family!r}: {exc}") from None
    value = OPERATIONS[args.operation](K, _parse_point(args.point))
    print(json.dumps(jsonable(value)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copolar", description="Copolar pseudo-cones and audits of their duality identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file, or every scenario in a directory")
    run.add_argument("--scenario", required=True, help="scenario YAML file or directory of them")
    run.add_argument("--out", default="out", help="output directory (default: out)")
    run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance by this factor")
    run.set_defaults(func=cmd_run)

    fam = sub.add_parser("families", help="list the built-in families")
    fam.set_defaults(func=cmd_families)

    ev = sub.add_parser("eval", help="evaluate one operation at one point")
    ev.add_argument("operation", choices=sorted(OPERATIONS))
    ev.add_argument("--family", required=True, choices=sorted(FAMILIES))
    ev.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="family parameter (repeatable)")
    ev.add_argument("--point", required=True, help="comma-separated coordinates")
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnknownAudit) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_PARSE
    except (NumericError, CopolarError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
