"""Command-line entry point.

Exit codes: 0 success, 1 domain or solver error, 2 configuration error,
3 property-check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import charts, checks, field, flow
from .errors import DomainFlowError
from .functionspace import holder_norm
from .io import (SIMULATE_SCHEMA, ConfigError, chart_from_spec, domain_from_spec,
                 domain_to_spec, field_from_spec, flow_config_from_spec, json_arg,
                 load_json, validate)

EXIT_OK, EXIT_DOMAIN, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2, 3

DIAGNOSTIC_COLUMNS = ["t", "area", "perimeter", "max_speed", "c1_fill", "rechart_count"]


def _snapshot_record(state: flow.FlowState, recharted: bool) -> dict:
    d = state.diagnostics
    return {
        "t": state.t,
        "chart": state.dom.chart.to_spec(),
        "rho": state.dom.rho.values.tolist(),
        "area": d.area,
        "perimeter": d.perimeter,
        "max_speed": d.max_speed,
        "rechart": recharted,
    }


def cmd_simulate(args) -> int:
    cfg_doc = load_json(args.config)
    validate(cfg_doc, SIMULATE_SCHEMA, "config")
    dom = domain_from_spec(cfg_doc["domain"])
    try:
        cfg = flow_config_from_spec(cfg_doc)
    except ValueError as exc:
        raise ConfigError(f"config: {exc}") from None
    out = Path(args.out or cfg_doc.get("output", {}).get("path", "run"))
    out.mkdir(parents=True, exist_ok=True)
    jsonl = (out / "snapshots.jsonl").open("w")
    csv_file = (out / "diagnostics.csv").open("w", newline="")
    writer = csv.writer(csv_file, lineterminator="\n")
    writer.writerow(DIAGNOSTIC_COLUMNS)

    def sink(state, recharted):
        jsonl.write(json.dumps(_snapshot_record(state, recharted)) + "\n")
        d = state.diagnostics
        writer.writerow([repr(state.t), repr(d.area), repr(d.perimeter), repr(d.max_speed),
                         repr(d.chart_c1_fill), d.rechart_count])

    try:
        final = flow.simulate(dom, cfg, sink)
    finally:
        jsonl.close()
        csv_file.close()
    d = final.diagnostics
    print(f"t={final.t:.6g} area={d.area:.12g} perimeter={d.perimeter:.12g} "
          f"max_speed={d.max_speed:.3e} recharts={d.rechart_count}")
    print(f"wrote {out / 'snapshots.jsonl'} and {out / 'diagnostics.csv'}")
    return EXIT_OK


def cmd_laplace(args) -> int:
    dom = domain_from_spec(load_json(args.domain))
    bd = field.boundary_geometry(dom)
    if args.data in ("curvature", "-curvature"):
        g = -bd.curvature if args.data == "-curvature" else bd.curvature
    else:
        g = field_from_spec(json_arg(args.data), dom.curve).values
    sol = field.solve_dirichlet_full(bd, g)
    rows = zip(dom.curve.s, bd.points[:, 0], bd.points[:, 1], g, sol.normal_derivative)
    target = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(target, lineterminator="\n")
        w.writerow(["s", "x", "y", "g", "dn_u"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r])
    finally:
        if args.out:
            target.close()
    print(f"residual {sol.residual:.3e}, condition estimate {sol.condition:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_transition(args) -> int:
    dom = domain_from_spec(load_json(args.domain))
    target_doc = load_json(args.to)
    chart2 = chart_from_spec(target_doc.get("chart", target_doc))
    rho2 = charts.transition(dom, chart2, check_admissible=not args.collar_only)
    dom2 = charts.DomainRep(chart2, rho2)
    back = charts.transition(dom2, dom.chart, check_admissible=not args.collar_only)
    report = {
        "max_abs_rho": rho2.sup(),
        "c1_fill": holder_norm(rho2, (1, 0)) / chart2.delta,
        "round_trip_error": float(np.max(np.abs(back.values - dom.rho.values))),
        "hausdorff": charts.boundary_hausdorff(dom, dom2),
    }
    print(json.dumps(report, indent=2))
    if args.out:
        Path(args.out).write_text(json.dumps(domain_to_spec(dom2)))
    return EXIT_OK


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="domainflow", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="integrate the Hele-Shaw flow")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory (overrides output.path)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("laplace", help="one interior Dirichlet solve, CSV of the normal derivative")
    s.add_argument("--domain", required=True)
    s.add_argument("--data", default="-curvature",
                   help="'curvature', '-curvature', or a field spec (inline JSON or file)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_laplace)

    s = sub.add_parser("transition", help="re-express a domain in another chart")
    s.add_argument("--domain", required=True)
    s.add_argument("--to", required=True, help="chart spec {curve, delta} or a domain file")
    s.add_argument("--collar-only", action="store_true", help="skip the C^1 admissibility check")
    s.add_argument("--out")
    s.set_defaults(func=cmd_transition)

    s = sub.add_parser("check", help="run a property suite")
    s.add_argument("suite", choices=list(checks.SUITES) + ["all"])
    s.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_check)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainFlowError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
