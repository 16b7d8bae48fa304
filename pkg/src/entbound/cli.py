"""Command-line front end: ``entbound {bounds,verify,simulate,scan}``.

Exit codes: 0 pass, 1 usage or parse error, 2 law violated, 3 scan
inconclusive, 4 numerical failure.
"""

import argparse
import re
import sys

import numpy as np

from . import bounds, factorization, formats, lindblad
from .errors import EntboundError, NumericalError
from .states import PureBipartiteState, as_density, density_from_pure, phi_plus

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_NUMERICAL = 0, 1, 2, 3, 4

PAIR_HELP = ("0-based level pair 'i,j' (same pair on both sides) or 'i,j,m,n'. "
             "A figure label '12,12' read as levels |1>,|2> is '--pair 1,2'; "
             "the alternative 1-based reading would be '--pair 0,1'.")


class UsageError(EntboundError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_pair_arg(text):
    try:
        nums = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--pair: cannot parse {text!r}") from None
    if len(nums) == 2:
        return bounds.make_pair(nums), bounds.make_pair(nums)
    if len(nums) == 4:
        return bounds.make_pair(nums[:2]), bounds.make_pair(nums[2:])
    raise UsageError(f"--pair: expected 2 or 4 integers, got {text!r}")


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _pair_list(p):
    return [p.lo, p.hi]


def bounds_report(obj, pair=None):
    """Every bound quantity for a pure state or density operator (computational basis)."""
    rho = as_density(obj)
    dA, dB = rho.dims
    if pair is None:
        combos = [(a, b) for a in bounds.all_pairs(dA) for b in bounds.all_pairs(dB)]
    else:
        combos = [(bounds.make_pair(pair[0], dim=dA), bounds.make_pair(pair[1], dim=dB))]
    ensemble = bounds.eigen_ensemble(rho)
    basis = bounds.LocalBasisPair.computational(dA, dB)
    alb_rows, mlb_rows = [], []
    for pa, pb in combos:
        chi = bounds.chi_vector(pa, pb, basis)
        alb_rows.append({"pairA": _pair_list(pa), "pairB": _pair_list(pb),
                         "value": bounds.alb_from_ensemble(ensemble, chi, rho.dims)})
        for k in (1, 2):
            v = bounds.mlb_squared(rho, k, pa, pb, basis)
            mlb_rows.append({"k": k, "pairA": _pair_list(pa), "pairB": _pair_list(pb),
                             "raw": v.raw, "clamped": v.bound})
    return {
        "dimA": dA,
        "dimB": dB,
        "kind": "pure" if isinstance(obj, PureBipartiteState) else "density",
        "basis": "computational",
        "concurrence": bounds.concurrence_pure(obj) if isinstance(obj, PureBipartiteState) else None,
        "tau": bounds.tau(rho, basis),
        "alb": alb_rows,
        "mlb_squared": mlb_rows,
    }


def cmd_bounds(args):
    if bool(args.state) == bool(args.density):
        raise UsageError("give exactly one of --state or --density")
    if args.state:
        obj = formats.state_from_dict(formats.load_json(args.state))
    else:
        obj = formats.density_from_dict(formats.load_json(args.density))
    pair = parse_pair_arg(args.pair) if args.pair else None
    _emit(formats.dumps(bounds_report(obj, pair)), args.output)
    return EXIT_OK


def cmd_verify(args):
    if args.law not in factorization.VERIFIERS:
        raise UsageError(f"unknown law {args.law!r}; choose from {', '.join(factorization.LAWS)}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    channel = formats.channel_from_dict(formats.load_json(args.channel)) if args.channel else None
    report = factorization.run_law(args.law, args.dims, args.trials, args.seed,
                                   family=args.family, channel=channel)
    doc = report.to_dict()
    doc["dims"] = args.dims
    doc["seed"] = args.seed
    _emit(formats.dumps(doc), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _initial_state(source):
    m = re.fullmatch(r"phi\+(\d+)", source)
    if m:
        return density_from_pure(phi_plus(int(m.group(1))))
    return as_density(formats.state_or_density_from_dict(formats.load_json(source)))


def _model(args):
    if args.model == "decay":
        gamma = lindblad.spontaneous_decay_gamma()
    elif args.model == "decoherence":
        gamma = lindblad.decoherence_gamma()
    else:
        if not args.gamma:
            raise UsageError("--model custom needs --gamma FILE")
        gamma = formats.gamma_from_dict(formats.load_json(args.gamma))
    return lindblad.LindbladModel(gamma, 1.0, args.side)


def simulation_summary(traj):
    clamped = traj.series["clamped"]
    hits = np.flatnonzero(clamped <= 0)
    return {
        "initial_raw": float(traj.series["raw"][0]),
        "first_zero_time": float(traj.times[hits[0]]) if hits.size else None,
        "final_raw": float(traj.series["raw"][-1]),
        "points": len(traj),
    }


def cmd_simulate(args):
    rho0 = _initial_state(args.init)
    model = _model(args)
    pairA, pairB = parse_pair_arg(args.pair)
    traj = lindblad.evolve(rho0, model, args.tmax, args.dt, every=args.every)
    lindblad.bound_trajectory(traj, pairA, pairB, k=args.k)
    text = formats.trajectory_csv(traj) if args.format == "csv" else formats.trajectory_json(traj)
    _emit(text, args.output)
    summary = formats.dumps(simulation_summary(traj))
    print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


def cmd_scan(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    report = factorization.scan_refuted_relations(args.dims, args.trials, args.seed, args.basis)
    doc = report.to_dict()
    doc["dims"] = args.dims
    doc["seed"] = args.seed
    _emit(formats.dumps(doc), args.output)
    return EXIT_OK if report.violations else EXIT_INCONCLUSIVE


def build_parser():
    parser = _Parser(prog="entbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="concurrence, ALB, MLB and tau of a state file")
    p.add_argument("--state", help="pure-state JSON file")
    p.add_argument("--density", help="density-matrix JSON file")
    p.add_argument("--pair", help=PAIR_HELP)
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check a factorization law on random instances")
    p.add_argument("--law", required=True, help=", ".join(factorization.LAWS))
    p.add_argument("--dims", required=True, help="e.g. 3x3")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family", choices=("cptp", "filter", "mixed"),
                   help="channel family (default depends on the law)")
    p.add_argument("--channel", help="Kraus channel JSON file used for every trial")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="two-qutrit master-equation bound trajectory")
    p.add_argument("--model", choices=("decay", "decoherence", "custom"), default="decay")
    p.add_argument("--gamma", help="coupling-operator JSON file for --model custom")
    p.add_argument("--side", choices=("A", "B"), default="B")
    p.add_argument("--init", default="phi+3", help="'phi+D' or a state/density JSON file")
    p.add_argument("--pair", default="1,2", help=PAIR_HELP)
    p.add_argument("--k", type=int, choices=(1, 2), default=1)
    p.add_argument("--tmax", type=float, default=5.0, help="horizon in units of 1/Gamma")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--every", type=int, default=1, help="store every N-th step")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="search for violations of the tau lower-bound relation")
    p.add_argument("--dims", default="3x3")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--basis", choices=("schmidt", "computational"), default="schmidt")
    p.add_argument("--output")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"entbound: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (EntboundError, OSError) as exc:
        print(f"entbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
