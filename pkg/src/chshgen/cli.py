"""Command-line entry point: ``chshgen <command> [options]``.

Every command that writes files also writes ``<stem>.manifest.json`` next to
them, recording the arguments, library version, seed, output paths and
wall-clock time. Data files themselves carry no timestamps, so rerunning a
command reproduces them byte for byte.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, catalog, reference, simulator, sweep
from .funcs import AND, EMBEDDED_XOR, XOR, TruthTable2, TruthTable3
from .game import GameSpec, chsh_closed_form

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 2, 3, 4
# kind-3 member listings above this size are summarised instead of written out
MAX_LISTED_MEMBERS = 1_000_000


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# --- argument types -----------------------------------------------------------


def _table_type(cls):
    def parse(text):
        try:
            return cls.parse(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid truth table {text!r}") from None

    parse.__name__ = cls.__name__
    return parse


def _angle(text):
    try:
        return sweep.parse_angle(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}") from None


def _grid_angle(text):
    try:
        return sweep.angle_to_index(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"angle {text!r} is not a multiple of pi/32") from None


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _positive_int(text):
    v = _nonneg_int(text)
    if v == 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed(text):
    v = _nonneg_int(text)
    if v >= 2**64:
        raise argparse.ArgumentTypeError(f"seed {text!r} does not fit in 64 bits")
    return v


def _unit_real(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold {text!r} outside [0, 1]")
    return v


def _dim(text):
    if text not in ("2", "3"):
        raise argparse.ArgumentTypeError(f"dimension must be 2 or 3, got {text!r}")
    return int(text)


GLOBAL_DEFAULTS = {
    "precision": 2,
    "rounding": catalog.DEFAULT_MODE,
    "out": Path("out"),
    "seed": 0,
    "threads": 1,
    "threshold": catalog.D3_THRESHOLD,
}


def _add_global_flags(p, suppress):
    def d(name):
        return argparse.SUPPRESS if suppress else GLOBAL_DEFAULTS[name]

    p.add_argument("--precision", type=_nonneg_int, default=d("precision"), help="decimal places for keys and tables (default 2)")
    p.add_argument("--rounding", choices=catalog.ROUNDING_MODES, default=d("rounding"), help="how values are cut to --precision (default truncate)")
    p.add_argument("--out", type=Path, default=d("out"), help="output directory (default ./out)")
    p.add_argument("--seed", type=_seed, default=d("seed"), help="RNG seed for simulate (u64)")
    p.add_argument("--threads", type=_positive_int, default=d("threads"), help="worker threads for the sweeps")
    p.add_argument("--threshold", type=_unit_real, default=d("threshold"), help="minimum gap for the D3 catalog (default 0.44)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chshgen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sub.add_parser("chsh", parents=[common], help="CHSH optimum: closed form vs grid sweep")

    p = sub.add_parser("table", parents=[common], help="reproduce a numbered table with a concordance report")
    p.add_argument("number", type=int, choices=range(1, 6))

    p = sub.add_parser("surface", parents=[common], help="64x64 winning-probability surface")
    p.add_argument("--dim", type=_dim, required=True)
    p.add_argument("--f", required=True, type=_table_type(TruthTable2))
    p.add_argument("--g", required=True, help="[4 bits] for dim 2, [9 bits] for dim 3")

    p = sub.add_parser("classes", parents=[common], help="equivalence classes of kind 1, 2 or 3")
    p.add_argument("kind", type=int, choices=(1, 2, 3))
    p.add_argument("--dim", type=_dim, default=2)
    p.add_argument("--f", type=_table_type(TruthTable2), help="kind 1")
    p.add_argument("--g", help="kind 1")
    p.add_argument("--theta0", type=_grid_angle, help="kind 2, e.g. pi/8")
    p.add_argument("--theta1", type=_grid_angle, help="kind 2, e.g. 15pi/8")
    p.add_argument("--stratum", choices=("all", "max"), default=None, help="kind 3 domain (default: all for dim 2, max for dim 3)")

    p = sub.add_parser("distinguishers", parents=[common], help="D1, D2 or D3 catalog")
    p.add_argument("which", choices=("d1", "d2", "d3"))

    p = sub.add_parser("simulate", parents=[common], help="run the dimension-distinguishing protocol")
    p.add_argument("--dim", type=_dim, required=True, help="true dimension of the shared state")
    p.add_argument("--rounds", type=_positive_int, default=100_000)
    p.add_argument("--theta0", type=_angle, default=simulator.DEFAULT_THETA0)
    p.add_argument("--theta1", type=_angle, default=simulator.DEFAULT_THETA1)
    p.add_argument("--f", type=_table_type(TruthTable2), default=AND)
    p.add_argument("--g3", type=_table_type(TruthTable3), default=EMBEDDED_XOR)
    p.add_argument("--log", action="store_true", help="also write the per-round CSV log")
    return parser


# --- output helpers -------------------------------------------------------------


def _fmt(value, args) -> str:
    return f"{catalog.quantize(value, args.precision, args.rounding):.{args.precision}f}"


class Outputs:
    def __init__(self, args, stem):
        self.args, self.stem, self.paths = args, stem, []
        try:
            args.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CLIError(f"cannot create output directory {str(args.out)!r}: {exc.strerror}", EXIT_IO) from None

    def _open(self, name):
        path = self.args.out / name
        try:
            fh = open(path, "w", newline="")
        except OSError as exc:
            raise CLIError(f"cannot write {str(path)!r}: {exc.strerror}", EXIT_IO) from None
        self.paths.append(path)
        return fh

    def json(self, name, obj):
        with self._open(name) as fh:
            json.dump(obj, fh, indent=2, allow_nan=False)
            fh.write("\n")

    def csv(self, name, header, rows):
        with self._open(name) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    def surface(self, surface, stem):
        for name in (f"{stem}.csv", f"{stem}.json"):
            path = self.args.out / name
            self.paths.append(path)
        try:
            sweep.write_surface(surface, self.paths[-2], self.paths[-1])
        except OSError as exc:
            raise CLIError(f"cannot write {str(self.paths[-2])!r}: {exc.strerror}", EXIT_IO) from None

    def manifest(self, argv, started):
        params = {k: (str(v) if isinstance(v, (Path, TruthTable2, TruthTable3)) else v) for k, v in sorted(vars(self.args).items())}
        manifest = {
            "command": self.args.command,
            "argv": list(argv),
            "params": params,
            "version": __version__,
            "seed": self.args.seed if self.args.command == "simulate" else None,
            "outputs": [str(p) for p in self.paths],
            "duration_s": time.perf_counter() - started,
        }
        with open(self.args.out / f"{self.stem}.manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")


def _parse_g(text, dim):
    cls = TruthTable2 if dim == 2 else TruthTable3
    try:
        return cls.parse(text)
    except ValueError:
        raise CLIError(f"invalid truth table {text!r} for dim {dim}", EXIT_USAGE) from None


def _spec(dim, f, g):
    try:
        return GameSpec(dim, f, g)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from None


def _pair_json(pair):
    return [pair[0].to_list(), pair[1].to_list()]


def _records_csv(records, args):
    return [
        [str(r.f), str(r.g2p), str(r.g3), _fmt(r.p_d2, args), _fmt(r.p_d3, args), _fmt(r.gap, args)]
        for r in records
    ]


RECORD_HEADER = ["f", "g2p", "g3", "p_d2", "p_d3", "gap"]


# --- commands ----------------------------------------------------------------------


def cmd_chsh(args, out):
    spec = GameSpec(2, AND, XOR)
    surface = sweep.compute_surface(spec)
    best = sweep.find_max(surface)
    t0, t1 = sweep.grid_angles()
    closed = np.array([chsh_closed_form(a, b) for a, b in zip(t0, t1)])
    closed_best = sweep.find_max(sweep.WinProbSurface(spec, closed.reshape(64, 64)))
    report = {
        "analytic_optimum": (2 + math.sqrt(2)) / 4,
        "sweep_max": best.max_value,
        "sweep_argmax": [list(p.label()) for p in best.argmax],
        "closed_form_max": closed_best.max_value,
        "closed_form_argmax": [list(p.label()) for p in closed_best.argmax],
        "max_abs_difference": float(np.max(np.abs(closed - surface.values.ravel()))),
    }
    out.json("chsh.json", report)
    return report


def cmd_table(args, out):
    n = args.number
    stem = f"table{n}"
    if n == 1:
        t1 = catalog.build_table1(args.precision, args.rounding)
        rows = [[f"{k:.{args.precision}f}", str(f), str(g)] for k, pairs in t1.groups.items() for f, g in pairs]
        out.csv(f"{stem}.csv", ["max_value", "f", "g"], rows)
        doc = {
            "groups": {f"{k:.{args.precision}f}": [_pair_json(p) for p in v] for k, v in t1.groups.items()},
            "results": [r.to_dict() for r in t1.results],
            "diff": reference.table1_report(t1),
        }
        summary = {"groups": doc["diff"]["computed_counts"]}
    elif n == 2:
        results = catalog.build_game2_max(args.precision, args.rounding)
        rows = [
            [str(r.spec.f), str(r.spec.g), *r.canonical_argmax.label(), _fmt(r.max_value, args)]
            for r in results
        ]
        out.csv(f"{stem}.csv", ["f", "g3", "theta0", "theta1", "max_value"], rows)
        doc = {"results": [r.to_dict() for r in results], "diff": reference.table2_report(args.precision, args.rounding)}
        summary = {"rows": len(results), "sets_equal": doc["diff"]["sets_equal"]}
    else:
        records = _catalog_records({3: "d1", 4: "d2", 5: "d3"}[n], args)
        out.csv(f"{stem}.csv", RECORD_HEADER, _records_csv(records, args))
        diff = reference.distinguisher_report(n, threshold=args.threshold, decimals=args.precision, mode=args.rounding)
        doc = {"records": [r.to_dict() for r in records], "diff": diff}
        summary = {"rows": len(records), "printed_rows_matched": diff["matched"], "printed_rows_mismatched": diff["mismatched"]}
    out.json(f"{stem}.json", doc)
    return summary


def _catalog_records(which, args):
    if which == "d1":
        return catalog.build_D1(args.precision, args.rounding)
    if which == "d2":
        return catalog.build_D2(args.precision, args.rounding)
    return catalog.build_D3(args.threshold, args.precision, args.rounding)


def cmd_surface(args, out):
    spec = _spec(args.dim, args.f, _parse_g(args.g, args.dim))
    surface = sweep.compute_surface(spec)
    out.surface(surface, f"surface_d{args.dim}")
    best = sweep.find_max(surface)
    return {"max_value": best.max_value, "argmax": [list(p.label()) for p in best.argmax]}


def cmd_classes(args, out):
    kind, dim = args.kind, args.dim
    extra = {}
    if kind == 1:
        if args.f is None or args.g is None:
            raise CLIError("classes 1 needs --f and --g", EXIT_USAGE)
        spec = _spec(dim, args.f, _parse_g(args.g, dim))
        classes = catalog.basis_classes(spec, args.precision, args.rounding)
        members = [[list(p.label()) for p in c.members] for c in classes]
        extra = {"f": spec.f.to_list(), "g": spec.g.to_list()}
    elif kind == 2:
        if args.theta0 is None or args.theta1 is None:
            raise CLIError("classes 2 needs --theta0 and --theta1", EXIT_USAGE)
        point = sweep.AngleGridPoint(args.theta0, args.theta1)
        classes = catalog.pair_classes(dim, point, args.precision, args.rounding)
        members = [[_pair_json(p) for p in c.members] for c in classes]
        extra = {"point": list(point.label())}
    else:
        stratum = args.stratum or ("all" if dim == 2 else "max")
        pairs = None if stratum == "all" else catalog.max_stratum_pairs(dim, args.precision, args.rounding)
        classes = catalog.tuple_classes(dim, args.precision, args.rounding, pairs)
        total = sum(len(c) for c in classes)
        domain = sweep.function_pairs(dim) if pairs is None else pairs
        extra = {"stratum": stratum, "pairs": [_pair_json(p) for p in domain]}
        if total <= MAX_LISTED_MEMBERS:
            # (pair index into "pairs", i0, i1)
            members = [
                np.stack([c.members.pair_idx, *np.divmod(c.members.flat_idx, sweep.GRID_SIZE)], axis=1).tolist()
                for c in classes
            ]
        else:
            members = None
            extra["members_omitted"] = f"{total} tuples exceed the listing limit of {MAX_LISTED_MEMBERS}"
    stem = f"classes{kind}_d{dim}"
    out.csv(f"{stem}.csv", ["key", "size"], [[f"{c.key:.{args.precision}f}", len(c)] for c in classes])
    doc = {"kind": kind, "dim": dim, "precision": args.precision, "rounding": args.rounding, **extra}
    doc["classes"] = [
        {"key": c.key, "size": len(c), **({"members": members[i]} if members is not None else {})}
        for i, c in enumerate(classes)
    ]
    out.json(f"{stem}.json", doc)
    return {"classes": len(classes), "top_key": classes[0].key, "top_size": len(classes[0])}


def cmd_distinguishers(args, out):
    records = _catalog_records(args.which, args)
    stem = f"distinguishers_{args.which}"
    out.csv(f"{stem}.csv", RECORD_HEADER, _records_csv(records, args))
    doc = {"class": args.which.upper(), "records": [r.to_dict() for r in records]}
    if args.which == "d3":
        doc["threshold"] = args.threshold
    out.json(f"{stem}.json", doc)
    return {"records": len(records)}


def cmd_simulate(args, out):
    try:
        cfg = simulator.ProtocolConfig(
            args.dim, args.rounds, args.theta0, args.theta1, args.f, args.g3, seed=args.seed
        )
        result = simulator.run_protocol(cfg, keep_log=args.log)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from None
    stem = f"simulate_d{args.dim}"
    report = result.to_dict()
    out.json(f"{stem}.json", report)
    if args.log:
        out.csv(f"{stem}_log.csv", ["i", "x", "y", "a", "b", "Y"], result.log.rows())
    return {"S": report["S"], "expected_S": report["expected_S"], "decided_dim": report["decided_dim"]}


COMMANDS = {
    "chsh": (cmd_chsh, lambda a: "chsh"),
    "table": (cmd_table, lambda a: f"table{a.number}"),
    "surface": (cmd_surface, lambda a: f"surface_d{a.dim}"),
    "classes": (cmd_classes, lambda a: f"classes{a.kind}_d{a.dim}"),
    "distinguishers": (cmd_distinguishers, lambda a: f"distinguishers_{a.which}"),
    "simulate": (cmd_simulate, lambda a: f"simulate_d{a.dim}"),
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    func, stem = COMMANDS[args.command]
    try:
        if args.command in ("table", "classes", "distinguishers"):
            for dim in (2, 3):
                sweep.sweep_table(dim, threads=args.threads)
        out = Outputs(args, stem(args))
        summary = func(args, out)
        out.manifest(argv, started)
    except CLIError as exc:
        print(f"chshgen: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"chshgen: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"chshgen: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(json.dumps(summary, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
