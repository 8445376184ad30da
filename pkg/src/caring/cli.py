"""Command-line entry point: construct / verify / search / capacity.

Exit status: 0 all checks pass, 1 verification failure (witness printed),
2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from . import colorings, designs, extremal, shannon, verify
from .graph import FormatError, PatternKind
from .scan import default_workers

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

VERIFY_CHECKS = ("caring", "mono", "rainbow", "rounds-p4", "rounds-triangle", "kts-good")
SEARCH_PARAMS = ("b", "g", "a", "f", "p", "ramsey")
# fields that never enter the config hash or the report payload
_VOLATILE = {"workers", "timing", "out", "rounds_out", "witness_out", "cert_out", "func"}


class UsageError(Exception):
    pass


def _config_hash(args: argparse.Namespace) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE}
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _envelope(args, payload: dict, seconds: float | None) -> dict:
    return {
        "tool": "caring",
        "version": __version__,
        "command": args.command,
        "config_hash": _config_hash(args),
        **payload,
        "wall_time_s": round(seconds, 6) if args.timing and seconds is not None else None,
    }


def _emit_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"cannot read {path}")
    return p.read_text()


# -- construct --------------------------------------------------------------

def cmd_construct(args) -> int:
    what = args.what
    if what == "kts":
        if args.t is None:
            raise UsageError("construct kts needs --t")
        if not 2 <= args.t <= designs.MAX_T:
            raise UsageError(f"--t must lie in 2..{designs.MAX_T}")
        ks = designs.kts_power_of_three(args.t)
        if args.as_coloring:
            text = colorings.dump_rounds(colorings.coloring_as_rounds(designs.kts_coloring(ks)))
        else:
            text = designs.dump_kts(ks)
    elif what == "ham":
        if args.n is None or args.n < 3 or args.n % 2 == 0:
            raise UsageError("construct ham needs an odd --n >= 3")
        text = colorings.dump_rounds(colorings.coloring_as_rounds(
            colorings.hamiltonian_decomposition_coloring(args.n)))
    elif what == "onefact":
        if args.n is None or args.n < 4 or args.n % 2:
            raise UsageError("construct onefact needs an even --n >= 4")
        text = colorings.dump_rounds(colorings.coloring_as_rounds(
            colorings.paired_one_factorization_coloring(args.n)))
    else:
        if args.n is None or args.n < 4:
            raise UsageError("construct rounds needs --n >= 4")
        if args.from_labels:
            try:
                rounds = colorings.three_color_rounds_from_labels(
                    colorings.default_labeling(args.n), args.workers)
            except colorings.LabelingPropertyError as exc:
                _emit_json(_envelope(args, {"verdict": "fail", "witness": list(exc.quadruple)}, None))
                return EXIT_FAIL
        else:
            rounds = colorings.binary_four_color_rounds(args.n)
            if args.ternary:
                rounds = colorings.encode_rounds_to_ternary(rounds)
        text = colorings.dump_rounds(rounds)
    _write(args.rounds_out or args.out, text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _load_input(text: str):
    """Either a KTS file or a rounds file, told apart by the 'class' line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) >= 2 and lines[1].split()[0] == "class":
        return designs.load_kts(text)
    return colorings.load_rounds(text)


def cmd_verify(args) -> int:
    flags = [c for c in VERIFY_CHECKS if getattr(args, "flag_" + c.replace("-", "_"))]
    checks = ([args.check] if args.check else []) + flags
    if len(set(checks)) > 1:
        raise UsageError(f"conflicting checks: {', '.join(checks)}")
    check = checks[0] if checks else "caring"
    if check in ("caring", "mono", "rainbow") and args.pattern is None:
        raise UsageError(f"verify {check} needs --pattern")
    source = args.rounds_in if args.rounds_in is not None else args.input
    try:
        obj = _load_input(_read(source))
    except (FormatError, ValueError) as exc:
        raise UsageError(f"bad input: {exc}") from None
    t0 = time.perf_counter()
    ks = obj if isinstance(obj, designs.KirkmanSystem) else None
    if check == "kts-good":
        if ks is None:
            raise UsageError("kts-good needs a KTS file")
        ok, quad = designs.is_good_kts(ks, args.workers)
        payload = {"check": "kts-good", "verdict": "pass" if ok else "fail",
                   "witness": {"subset": list(quad)} if quad else None,
                   "counts": {"points": ks.n, "classes": len(ks.classes)}, "notes": []}
    else:
        rounds = colorings.coloring_as_rounds(designs.kts_coloring(ks)) if ks else obj
        if check in ("caring", "mono", "rainbow"):
            if len(rounds) != 1:
                raise UsageError(f"verify {check} needs a single coloring, got {len(rounds)} rounds")
            kind = PatternKind.parse(args.pattern)
            fn = {"caring": verify.is_caring, "mono": verify.monochromatic_free,
                  "rainbow": verify.rainbow_everywhere}[check]
            report = fn(rounds.rounds[0], kind, workers=args.workers)
        elif check == "rounds-p4":
            if rounds.palette not in (3, 4):
                raise UsageError("rounds-p4 needs palette 3 or 4")
            report = verify.rounds_rainbow_p4(rounds, args.workers)
            report.notes.append(
                f"trivial lower bound on the number of 3-color rounds: {colorings.p_lower_bound(rounds.n)}")
        else:
            report = verify.rounds_triangle_multicolored(rounds, args.required, args.workers)
        payload = report.to_dict()
    _emit_json(_envelope(args, payload, time.perf_counter() - t0))
    return EXIT_OK if payload["verdict"] == "pass" else EXIT_FAIL


# -- search -----------------------------------------------------------------

def cmd_search(args) -> int:
    budget = extremal.SearchBudget(
        max_vertices=args.max_vertices, max_colors=args.max_colors,
        node_cap=args.node_cap, time_cap=args.time_cap or extremal._default_time_cap())
    p = args.parameter
    if args.n is None:
        raise UsageError("search needs --n")
    kind = PatternKind.parse(args.pattern) if args.pattern else None
    if p in ("b", "g", "a") and kind is None:
        raise UsageError(f"search {p} needs --pattern")
    if p == "ramsey" and args.k is None:
        raise UsageError("search ramsey needs --k")
    if p == "f" and args.q is None:
        raise UsageError("search f needs --q")
    t0 = time.perf_counter()
    try:
        if p == "b":
            res = extremal.exact_b(args.n, kind, budget)
        elif p == "g":
            res = extremal.exact_g(args.n, kind, budget)
        elif p == "a":
            res = extremal.exact_a(args.n, kind, budget)
        elif p == "f":
            res = extremal.exact_f(args.n, 4, args.q, budget)
        elif p == "p":
            res = extremal.exact_p(args.n, budget)
        else:
            ok, witness, nodes = extremal._ramsey_search(args.n, args.k, budget)
            res = extremal.SearchResult("ramsey", args.n, f"K3/k={args.k}", int(ok), nodes,
                                        time.perf_counter() - t0, witness)
    except extremal.BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seconds = f"{res.seconds:.3f}" if args.timing else ""
    if args.format == "json":
        _emit_json(_envelope(args, {
            "parameter": res.parameter, "n": res.n, "kind": res.kind,
            "value": res.value, "nodes": res.nodes}, res.seconds))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["parameter", "n", "kind", "value", "nodes", "seconds"])
        w.writerow([res.parameter, res.n, res.kind or "", res.value, res.nodes, seconds])
        sys.stdout.write(buf.getvalue())
    if args.witness_out and res.witness is not None:
        wit = res.witness
        if not isinstance(wit, colorings.ColoringRounds):
            wit = colorings.coloring_as_rounds(wit)
        Path(args.witness_out).write_text(colorings.dump_rounds(wit))
    return EXIT_OK


# -- capacity ---------------------------------------------------------------

def _certificate_text(ref: str) -> str:
    p = Path(ref)
    if p.is_file():
        return p.read_text()
    name = ref if ref.endswith(".cert") else ref + ".cert"
    data = resources.files("caring") / "data" / name
    if data.is_file():
        return data.read_text()
    raise UsageError(f"no certificate file {ref}")


def cmd_capacity(args) -> int:
    mode = args.mode or ("certify" if args.certificate and args.graph is None else "bound")
    cert = None
    if args.certificate:
        try:
            cert = shannon.load_certificate(_certificate_text(args.certificate))
        except ValueError as exc:
            raise UsageError(f"bad certificate: {exc}") from None
    t0 = time.perf_counter()
    if mode == "certify":
        if cert is None:
            raise UsageError("capacity certify needs --certificate")
        try:
            ok, pair = shannon.verify_certificate(cert)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _, t, twins = shannon.resolve_descriptor(cert.descriptor)
        payload = {"verdict": "pass" if ok else "fail", "descriptor": cert.descriptor,
                   "size": cert.size, "pairs_checked": cert.size * (cert.size - 1) // 2,
                   "witness": [shannon.format_sequence(v, twins) for v in pair] if pair else None}
        _emit_json(_envelope(args, payload, time.perf_counter() - t0))
        return EXIT_OK if ok else EXIT_FAIL
    if args.graph is None:
        raise UsageError(f"capacity {mode} needs --graph")
    try:
        G, twins = shannon.resolve_graph(args.graph)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t = args.power
    budget = extremal.SearchBudget(node_cap=args.node_cap,
                                   time_cap=args.time_cap or extremal._default_time_cap())
    if mode == "clique":
        if G.n ** t > args.cap:
            raise UsageError(f"G^{t} has {G.n ** t} vertices, above --cap {args.cap}")
        res = shannon.max_clique(shannon.or_power(G, t, args.cap), budget)
        view = shannon.PowerView(G, t)
        seqs = [view.decode(v) for v in res.vertices]
        payload = {"graph": args.graph, "t": t, "clique_size": res.size, "exact": res.exact,
                   "nodes": res.nodes, "clique": [shannon.format_sequence(s, twins, G.n) for s in seqs]}
        if args.cert_out:
            desc = f"{args.graph}^{t}"
            Path(args.cert_out).write_text(
                shannon.dump_certificate(shannon.CliqueCertificate(desc, tuple(seqs))))
        _emit_json(_envelope(args, payload, time.perf_counter() - t0))
        return EXIT_OK
    try:
        bound = shannon.capacity_lower_bound(G, t, budget, certificate=cert, cap=args.cap,
                                             search=True if args.search else None)
    except ValueError as exc:
        sys.stderr.write(f"certificate rejected: {exc}\n")
        return EXIT_FAIL
    payload = {"graph": args.graph, "t": t, "bound": bound.value, "clique_size": bound.clique_size,
               "exact": bound.exact, "lower_bound_only": not bound.exact, "source": bound.source}
    _emit_json(_envelope(args, payload, time.perf_counter() - t0))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=default_workers(),
                        help="parallel workers for subset scans (default: all CPUs)")
    common.add_argument("--timing", action="store_true", help="include wall time in the output")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)

    parser = argparse.ArgumentParser(prog="caring", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"caring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a coloring or a KTS")
    p.add_argument("what", choices=("kts", "ham", "onefact", "rounds"))
    p.add_argument("--t", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--as-coloring", action="store_true", help="kts: write the induced coloring")
    p.add_argument("--ternary", action="store_true", help="rounds: encode to 3-color rounds")
    p.add_argument("--from-labels", action="store_true",
                   help="rounds: 3-color rounds straight from the binary labels")
    p.add_argument("--out", "-o")
    p.add_argument("--rounds-out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="exhaustively verify a coloring")
    p.add_argument("check", nargs="?", choices=VERIFY_CHECKS)
    for c in VERIFY_CHECKS:
        p.add_argument("--" + c, dest="flag_" + c.replace("-", "_"), action="store_true")
    p.add_argument("--pattern")
    p.add_argument("--required", type=int, choices=(2, 3), default=3)
    p.add_argument("--input", "-i", default="-")
    p.add_argument("--rounds-in")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="brute-force an extremal parameter")
    p.add_argument("parameter", choices=SEARCH_PARAMS)
    p.add_argument("--n", type=int)
    p.add_argument("--pattern")
    p.add_argument("--k", type=int, help="ramsey: number of colors")
    p.add_argument("--q", type=int, help="f: colors required on every 4-subset")
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--max-colors", type=int, default=12)
    p.add_argument("--node-cap", type=int, default=200_000_000)
    p.add_argument("--time-cap", type=float)
    p.add_argument("--witness-out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("capacity", parents=[common], help="OR-capacity lower bounds and cliques")
    p.add_argument("mode", nargs="?", choices=("bound", "clique", "certify"))
    p.add_argument("--graph")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--certificate")
    p.add_argument("--search", action="store_true", help="bound: search even with a certificate")
    p.add_argument("--cap", type=int, default=shannon.MATERIALIZE_CAP)
    p.add_argument("--node-cap", type=int, default=200_000_000)
    p.add_argument("--time-cap", type=float)
    p.add_argument("--cert-out")
    p.set_defaults(func=cmd_capacity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.workers < 1:
        sys.stderr.write("--workers must be positive\n")
        return EXIT_USAGE
    if args.format is None:
        args.format = "csv" if args.command == "search" else "json"
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"caring: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
