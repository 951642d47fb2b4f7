"""Command-line interface.

Subcommands: analyze, design, sweep, crossing, import. Primary output is
JSON (reports) or CSV (sweeps, traces) on stdout or --out; --plot renders
a matplotlib figure next to it. Exit codes: 0 success, 2 validation
errors, 3 numerical errors, with a machine-readable JSON error object on
stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .circuit import ChainSpec, import_capacitance_csv
from .closedform import design_capacitances, strong_coupling_form
from .constants import FF, GHZ, MHZ, NH, TWO_PI
from .errors import NumericalError, QubitChainError, ValidationError
from .modes import SWEEP_POINTS, avoided_crossing_J
from .report import (DEFAULT_L_J, analyze_chain, analyze_node_matrix,
                     effective_coupling_for, render_json,
                     sweep_coupling_parameters, sweep_rows_to_csv)
from .spectrum import DEFAULT_N_CUT, SpectrumMethod

_METHODS = [m.value for m in SpectrumMethod]


def _emit_error(err: QubitChainError):
    payload = {"code": err.code, "message": str(err), "context": err.context}
    sys.stderr.write(json.dumps(payload) + "\n")


def _write_text(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as handle:
            handle.write(text)


def _load_spec(path) -> ChainSpec:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ValidationError(f"config is not valid JSON: {err}", context={"path": str(path)})
    return ChainSpec.from_json_dict(data)


def _analysis_args(sub):
    sub.add_argument("--lj-nH", type=float, default=DEFAULT_L_J / NH,
                     help="junction inductance in nH (default 12)")
    sub.add_argument("--method", choices=_METHODS, default=SpectrumMethod.HARMONIC.value,
                     help="qubit spectrum model (default harmonic)")
    sub.add_argument("--n-cut", type=int, default=DEFAULT_N_CUT,
                     help="charge-basis cutoff (default 40)")
    sub.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub.add_argument("--plot", default=None, metavar="PNG",
                     help="also render a coupling overview figure")


def cmd_analyze(args) -> int:
    spec = _load_spec(args.config)
    rep = analyze_chain(spec, l_j=args.lj_nH * NH,
                        method=SpectrumMethod(args.method), n_cut=args.n_cut)
    _write_text(render_json(rep.to_dict()), args.out)
    if args.plot:
        from .plots import plot_coupling_overview
        plot_coupling_overview(rep, args.plot)
    return 0


def cmd_import(args) -> int:
    node = import_capacitance_csv(args.csv, unit=args.unit)
    rep = analyze_node_matrix(node, l_j=args.lj_nH * NH,
                              method=SpectrumMethod(args.method), n_cut=args.n_cut)
    _write_text(render_json(rep.to_dict()), args.out)
    if args.plot:
        from .plots import plot_coupling_overview
        plot_coupling_overview(rep, args.plot)
    return 0


def cmd_design(args) -> int:
    c_q_eff = args.c_q_eff_fF * FF
    c_q, c_c, c_g = design_capacitances(args.chi, args.xi, c_q_eff)
    roundtrip = None
    if c_q > 0:
        form = strong_coupling_form(c_q, c_g, c_c)
        errs = [abs(form.chi - args.chi) / args.chi if args.chi else 0.0,
                abs(form.xi - args.xi) / args.xi if args.xi else 0.0,
                abs(form.c_q_eff - c_q_eff) / c_q_eff]
        roundtrip = {
            "chi": form.chi, "xi": form.xi, "c_q_eff_fF": form.c_q_eff / FF,
            "eta1": form.eta1, "eta2": form.eta2,
            "max_rel_err": max(errs),
        }
    payload = {
        "report": "design",
        "targets": {"chi": args.chi, "xi": args.xi, "c_q_eff_fF": args.c_q_eff_fF},
        "capacitances": {"c_q_fF": c_q / FF, "c_c_fF": c_c / FF, "c_g_fF": c_g / FF},
        "roundtrip": roundtrip,
    }
    _write_text(render_json(payload), args.out)
    return 0


def cmd_sweep(args) -> int:
    ratios = np.geomspace(args.cg_ratio_min, args.cg_ratio_max, args.cg_points)
    c_c_values = [value * FF for value in (args.cc_fF or [27.4])]
    rows = sweep_coupling_parameters(args.cq_eff_fF * FF, ratios, c_c_values,
                                     n=args.n, jobs=args.jobs)
    buffer = io.StringIO()
    sweep_rows_to_csv(rows, buffer)
    _write_text(buffer.getvalue(), args.out)
    if args.plot:
        from .plots import plot_sweep
        plot_sweep(rows, args.plot)
    failed = [row for row in rows if row.error]
    if failed:
        raise NumericalError(
            f"{len(failed)} of {len(rows)} grid points were singular or unreachable "
            "(rows kept, marked NaN)",
            context={"errors": sorted({row.error for row in failed})})
    return 0


def cmd_crossing(args) -> int:
    spec = _load_spec(args.config)
    ec = effective_coupling_for(spec)
    l_fixed = args.lj_nH * NH
    sweep_range = None
    if (args.l_min_nH is None) != (args.l_max_nH is None):
        raise ValidationError("give both --l-min-nH and --l-max-nH, or neither")
    if args.l_min_nH is not None:
        sweep_range = (args.l_min_nH * NH, args.l_max_nH * NH)
    crossing = avoided_crossing_J(ec.c_eff, tuple(args.pair), l_fixed,
                                  l_sweep_range=sweep_range, n_points=args.points,
                                  spectators=args.spectators)
    if args.trace_out:
        with open(args.trace_out, "w") as handle:
            handle.write("L_nH,f_minus_GHz,f_plus_GHz\n")
            for l, low, high in zip(crossing.trace_inductance,
                                    crossing.trace_lower, crossing.trace_upper):
                handle.write(f"{float(l / NH)!r},{float(low / TWO_PI / GHZ)!r},"
                             f"{float(high / TWO_PI / GHZ)!r}\n")
    payload = {
        "report": "avoided-crossing",
        "pair": list(args.pair),
        "spectators": args.spectators,
        "l_fixed_nH": args.lj_nH,
        "j_MHz": crossing.j_coupling / TWO_PI / MHZ,
        "l_cross_nH": crossing.l_cross / NH,
        "trace_csv": args.trace_out,
    }
    _write_text(render_json(payload), args.out)
    if args.plot:
        from .plots import plot_crossing_trace
        plot_crossing_trace(crossing, args.plot)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitchain",
        description="Mediated-coupling analysis and design for floating-transmon chains")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("analyze", help="full pipeline on a chain config JSON")
    sub.add_argument("config", help="chain config JSON ({n, scheme, c_q_fF, ...})")
    _analysis_args(sub)
    sub.set_defaults(handler=cmd_analyze)

    sub = subs.add_parser("import", help="analyze an imported capacitance CSV")
    sub.add_argument("csv", help="square labelled capacitance table")
    sub.add_argument("--unit", choices=["F", "fF"], default="fF",
                     help="unit of the table entries (default fF)")
    _analysis_args(sub)
    sub.set_defaults(handler=cmd_import)

    sub = subs.add_parser("design", help="capacitances realizing target (chi, xi)")
    sub.add_argument("chi", type=float, help="target relative coupling strength")
    sub.add_argument("xi", type=float, help="target damping factor")
    sub.add_argument("c_q_eff_fF", type=float, help="target effective qubit capacitance, fF")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=cmd_design)

    sub = subs.add_parser("sweep", help="chain-center chi/xi over a capacitance grid")
    sub.add_argument("--cq-eff-fF", type=float, default=50.0,
                     help="fixed effective qubit capacitance, fF (default 50)")
    sub.add_argument("--cg-ratio-min", type=float, default=1e-3)
    sub.add_argument("--cg-ratio-max", type=float, default=1.0)
    sub.add_argument("--cg-points", type=int, default=13)
    sub.add_argument("--cc-fF", type=float, action="append",
                     help="coupler capacitance in fF; repeat for several curves "
                          "(default 27.4)")
    sub.add_argument("--n", type=int, default=100, help="chain length (default 100)")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    sub.add_argument("--out", default=None)
    sub.add_argument("--plot", default=None, metavar="PNG")
    sub.set_defaults(handler=cmd_sweep)

    sub = subs.add_parser("crossing", help="extract |J| from an avoided crossing")
    sub.add_argument("config", help="chain config JSON")
    sub.add_argument("--pair", type=int, nargs=2, required=True, metavar=("I", "J"),
                     help="1-based chain sites of the qubit pair")
    sub.add_argument("--lj-nH", type=float, default=DEFAULT_L_J / NH,
                     help="fixed junction inductance in nH (default 12)")
    sub.add_argument("--l-min-nH", type=float, default=None)
    sub.add_argument("--l-max-nH", type=float, default=None)
    sub.add_argument("--points", type=int, default=SWEEP_POINTS)
    sub.add_argument("--spectators", choices=["eliminate", "pin"], default="eliminate",
                     help="junctions of the other qubits: open ('eliminate', tracks the "
                          "full-chain couplings) or shorted ('pin')")
    sub.add_argument("--trace-out", default=None, help="write the sweep trace CSV here")
    sub.add_argument("--out", default=None)
    sub.add_argument("--plot", default=None, metavar="PNG")
    sub.set_defaults(handler=cmd_crossing)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as err:
        _emit_error(err)
        return 2
    except NumericalError as err:
        _emit_error(err)
        return 3


if __name__ == "__main__":
    sys.exit(main())
