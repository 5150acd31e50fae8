"""Command-line entry point: ``isingnet <command> ...``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import sys

from . import graphs
from .dynamics import DynamicsParams, dynamics_record, fourier_spectrum, imbalance_trace, select_initial_states
from .entanglement import min_eigenstate_entanglement
from .hamiltonian import FieldParams, build_hamiltonian_fock, diagonalize
from .landscape import build_equienergy_subgraph
from .survey import FIGURES, NUMERIC_FIELDS, correlate_catalog, find_network, plot_data, run_survey


def _fraction(text: str) -> tuple[int, int]:
    a, sep, b = text.partition("/")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected i/k, got {text!r}")
    return int(a), int(b)


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_enumerate(args) -> int:
    codes = graphs.network_codes(args.spins)
    with _output(args.out) as fh:
        for k, code in enumerate(codes, start=1):
            net = graphs.network_from_code(args.spins, code, k)
            fh.write(json.dumps(graphs.network_to_json(net), separators=(", ", ": ")) + "\n")
    print(f"{len(codes)} networks on {args.spins} spins", file=sys.stderr)
    return 0


def cmd_survey(args) -> int:
    num, stride = args.sample
    if num != 1:
        raise SystemExit("--sample must have the form 1/k")
    fields = FieldParams(args.hx)
    p = DynamicsParams(args.tau, args.dt, args.hx)

    def progress(done, total):
        if done % 5000 == 0 or done == total:
            logging.info("%d/%d networks", done, total)

    path = run_survey(
        args.spins,
        fields,
        p,
        args.out,
        shard=args.shard,
        sample=stride,
        skip_dynamics=args.skip_dynamics,
        workers=args.workers,
        progress=progress,
    )
    print(path)
    return 0


def cmd_correlate(args) -> int:
    report, hist = correlate_catalog(args.files, args.x, args.y, args.bins)
    print(report)
    if args.json:
        data = report.to_json()
        data["histogram"] = {
            "counts": hist.counts.tolist(),
            "x_edges": hist.x_edges.tolist(),
            "y_edges": hist.y_edges.tolist(),
        }
        with open(args.json, "w") as fh:
            json.dump(data, fh, indent=2)
    return 0


def cmd_plot_data(args) -> int:
    text = plot_data(args.files, args.figure, args.bins)
    with _output(args.out) as fh:
        fh.write(text)
    return 0


def cmd_landscape(args) -> int:
    net = find_network(args.net_id, args.catalog or ())
    sub = build_equienergy_subgraph(net, include_isolated=args.include_isolated)
    with _output(args.out) as fh:
        json.dump({"id": args.net_id, **sub.to_json()}, fh)
        fh.write("\n")
    return 0


def cmd_dynamics(args) -> int:
    net = find_network(args.net_id, args.catalog or ())
    fields = FieldParams(args.hx)
    p = DynamicsParams(args.tau, args.dt, args.hx)
    spec = diagonalize(build_hamiltonian_fock(net, fields))
    q_min, nu = min_eigenstate_entanglement(spec)
    closest, furthest = select_initial_states(spec, nu)
    initial = closest if args.initial == "closest" else furthest
    trace = imbalance_trace(spec, initial, p)
    spectrum = fourier_spectrum(trace, p)
    if args.emit_trace:
        with open(args.emit_trace, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "imbalance"])
            w.writerows((format(t, ".17g"), format(v, ".17g")) for t, v in zip(trace.times, trace.samples))
    if args.emit_spectrum:
        with open(args.emit_spectrum, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["f", "amplitude"])
            w.writerows(
                (format(f, ".17g"), format(a, ".17g")) for f, a in zip(spectrum.frequencies, spectrum.amplitudes)
            )
    rec = dynamics_record(net, fields, p, spec=spec, nu=nu)
    print(
        json.dumps(
            {
                "id": args.net_id,
                "q_min": q_min,
                "nu": nu,
                "closest_state": rec.closest_state,
                "closest": {"amplitude": rec.closest[0], "frequency": rec.closest[1]},
                "furthest_state": rec.furthest_state,
                "furthest": {"amplitude": rec.furthest[0], "frequency": rec.furthest[1]},
            }
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isingnet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list every interaction network on N spins as JSON lines")
    p.add_argument("--spins", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("survey", help="compute the catalog for all networks on N spins")
    p.add_argument("--spins", type=int, required=True)
    p.add_argument("--hx", type=float, default=0.2)
    p.add_argument("--tau", type=float, default=1000.0)
    p.add_argument("--dt", type=float, default=0.25)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--shard", type=_fraction, default=(0, 1), metavar="i/k")
    p.add_argument("--sample", type=_fraction, default=(1, 1), metavar="1/k", help="keep every k-th network")
    p.add_argument("--skip-dynamics", action="store_true")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: $ISINGNET_WORKERS or CPU count)")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("correlate", help="Pearson correlation and 64x64 histogram of two catalog fields")
    p.add_argument("--x", required=True, choices=NUMERIC_FIELDS)
    p.add_argument("--y", required=True, choices=NUMERIC_FIELDS)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--json", help="also write the report and histogram as JSON")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("plot-data", help="scatter and density data behind a figure, as CSV")
    p.add_argument("--figure", required=True, choices=sorted([*FIGURES, "fig5"]))
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("landscape", help="dump the equienergy subgraph of one network as JSON")
    p.add_argument("--net-id", required=True)
    p.add_argument("--catalog", action="append", help="catalog or enumeration file to look the id up in")
    p.add_argument("--include-isolated", action="store_true")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("dynamics", help="imbalance trace and spectrum for one network")
    p.add_argument("--net-id", required=True)
    p.add_argument("--catalog", action="append")
    p.add_argument("--hx", type=float, default=0.2)
    p.add_argument("--tau", type=float, default=1000.0)
    p.add_argument("--dt", type=float, default=0.25)
    p.add_argument("--initial", choices=("closest", "furthest"), default="closest")
    p.add_argument("--emit-trace", metavar="FILE")
    p.add_argument("--emit-spectrum", metavar="FILE")
    p.set_defaults(func=cmd_dynamics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
