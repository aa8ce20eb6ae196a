"""Command-line front end: ``parking <command> ...``.

Every command prints one JSON document (or CSV / canonical text when asked)
that embeds its full job configuration and the tool version.  Exit codes:
0 success, 1 validity or assertion failure, 2 usage or parse error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .config import resolve_cap
from .enumerators import count_pf, count_pf_first, count_pf_with_holes, enumerate_pf
from .errors import InputError, NotAParkingFunction, ResourceLimit
from .forests import (
    BfsVersion, RootedForest, forest_to_pf, forest_to_pf_knuth, inversions, pf_to_forest,
    pf_to_forest_knuth,
)
from .pfcore import (
    ParkingFunction, critical_lr_maxima, displacement, lucky_count, segment_decomposition,
    unattempted_spots,
)
from .rng import RandomSource

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _num(v: int) -> str:
    return str(v)


def _config(args, **extra) -> dict:
    skip = {"func"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    params.update(extra)
    return params


def _document(args, result: dict, passed: bool | None = None) -> dict:
    return {
        "tool": {"name": "parking", "version": __version__},
        "config": _config(args),
        "result": result,
        "passed": passed,
    }


def _emit(args, text: str):
    path = getattr(args, "output", None)
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, doc: dict):
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")


# -- check ------------------------------------------------------------------

def cmd_check(args) -> int:
    try:
        pf = ParkingFunction.parse(args.pf)
    except NotAParkingFunction as exc:
        result = {"input": args.pf.strip(), "valid": False, "failingCar": exc.car, "reason": str(exc)}
        if args.format == "text":
            _emit(args, f"invalid: car {exc.car} finds no free spot\n")
        else:
            _emit_json(args, _document(args, result, False))
        return EXIT_FAIL
    dec = segment_decomposition(pf)
    result = {
        "input": pf.to_text(),
        "valid": True,
        "outcome": list(pf.outcome().slots),
        "disp": _num(displacement(pf)),
        "cm": critical_lr_maxima(pf),
        "lucky": lucky_count(pf),
        "holes": list(unattempted_spots(pf)),
        "segments": [list(s) for s in dec.segments],
        "segmentCars": [list(c) for c in dec.cars],
    }
    if args.format == "text":
        lines = [f"valid {pf.to_text()}", "outcome " + " ".join(map(str, result["outcome"])),
                 f"disp {result['disp']}", f"cm {result['cm']}", f"lucky {result['lucky']}",
                 "holes " + " ".join(map(str, result["holes"]))]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, _document(args, result, True))
    return EXIT_OK


# -- convert ----------------------------------------------------------------

def _maps(name):
    if name == "knuth":
        return pf_to_forest_knuth, forest_to_pf_knuth
    version = BfsVersion.LEVEL_ORDER if name == "bfs1" else BfsVersion.TREE_BY_TREE
    return (lambda p: pf_to_forest(p, version)), (lambda f: forest_to_pf(f, version))


def cmd_convert(args) -> int:
    to = args.to or ("pf" if "->" in args.input else "forest")
    fwd, back = _maps(args.bijection)
    if to == "forest":
        source = ParkingFunction.parse(args.input)
        target = fwd(source)
        again = back(target)
    else:
        source = RootedForest.parse(args.input)
        target = back(source)
        again = fwd(target)
    result = {"input": source.to_text(), "output": target.to_text(), "bijection": args.bijection, "to": to}
    forest = target if to == "forest" else source
    result["inversions"] = inversions(forest)
    if args.roundtrip:
        result["roundtrip"] = again == source
    if args.dot and to == "forest":
        result["dot"] = target.to_dot()
    passed = result.get("roundtrip", True)
    if args.format == "text":
        _emit(args, (target.to_dot() if args.dot and to == "forest" else target.to_text()) + "\n")
    else:
        _emit_json(args, _document(args, result, passed))
    return EXIT_OK if passed else EXIT_FAIL


# -- count / enumerate ------------------------------------------------------

def _filter(args):
    def keep(pf):
        if args.first is not None and pf.prefs[0] != args.first:
            return False
        if args.holes is not None and unattempted_spots(pf) != tuple(args.holes):
            return False
        return True
    return keep


def cmd_count(args) -> int:
    m, n = args.m, args.n
    if args.first is not None and args.holes is not None:
        raise UsageError("--first and --holes cannot be combined")
    if args.first is not None:
        value = count_pf_first(m, n, args.first)
    elif args.holes is not None:
        value = count_pf_with_holes(m, n, args.holes)
    else:
        value = count_pf(m, n)
    result = {"m": m, "n": n, "count": _num(value)}
    passed = True
    if args.cross_check:
        brute = sum(1 for pf in enumerate_pf(m, n, resolve_cap(args.cap)) if _filter(args)(pf))
        result["bruteForce"] = _num(brute)
        passed = brute == value
    if args.format == "text":
        _emit(args, f"{value}\n")
    else:
        _emit_json(args, _document(args, result, passed))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_enumerate(args) -> int:
    keep = _filter(args)
    items = [pf.to_text() for pf in enumerate_pf(args.m, args.n, resolve_cap(args.cap)) if keep(pf)]
    if args.format == "text":
        _emit(args, "".join(t + "\n" for t in items))
    elif args.format == "csv":
        _emit(args, _csv([["pf"]] + [[t] for t in items]))
    else:
        _emit_json(args, _document(args, {"count": _num(len(items)), "items": items}, True))
    return EXIT_OK


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


# -- sample -----------------------------------------------------------------

def cmd_sample(args) -> int:
    from . import randomized as rz
    from .sampling import sample_pf_stream

    m, n, trials = args.m, args.n, args.trials
    if not 0 <= m <= n:
        raise InputError(f"need 0 <= m <= n, got m={m}, n={n}")
    if trials < 0:
        raise UsageError("--trials must be non-negative")
    rng = RandomSource(args.seed)
    if args.report == "none":
        rows = []
        for batch in sample_pf_stream(m, n, trials, rng):
            rows.extend(f"{m} {n} :" + "".join(f" {int(v)}" for v in row) for row in batch)
        if args.format == "csv":
            _emit(args, _csv([["index", "pf"]] + [[i, t] for i, t in enumerate(rows)]))
        else:
            result = {"rng": rng.describe(), "samples": rows}
            _emit_json(args, _document(args, result, None))
        return EXIT_OK
    if args.report == "chi2":
        report = rz.uniformity_check(m, n, trials, rng, cap=args.cap)
    elif args.report == "holes":
        report = rz.holes_check(m, n, rng, trials)
    elif args.report == "repeats":
        report = rz.repeats_checks(m, n, rng, trials)
    elif args.report == "lucky":
        report = rz.lucky_clt_check(m, n, rng, trials)
    elif args.report == "covariance":
        if m != n:
            raise UsageError("the covariance report needs m = n")
        report = rz.covariance_checks(n, rng, trials, exact_limit=0).report
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(args.report)
    if args.format == "csv":
        _emit(args, report.counts_csv())
    else:
        doc = _document(args, report.to_dict(), report.passed)
        _emit_json(args, doc)
    return EXIT_FAIL if report.passed is False else EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import SUITES, SuiteOptions, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    opts = SuiteOptions(max_size=args.max_size, n=args.n, seed=args.seed, tuples=args.tuples,
                        trials=args.trials, cap=args.cap)
    suites, first_failure = {}, None
    for name in names:
        results = run_suite(name, opts)
        suites[name] = {"passed": all(a.passed for a in results), "count": len(results),
                        "assertions": [a.to_dict() for a in results]}
        if first_failure is None:
            first_failure = next((dict(a.to_dict(), suite=name) for a in results if not a.passed), None)
    passed = first_failure is None
    if args.format == "text":
        lines = [f"{name}: {'pass' if s['passed'] else 'FAIL'} ({s['count']} assertions)" for name, s in suites.items()]
        if first_failure:
            lines.append(f"first failure: {first_failure['name']} {first_failure['detail']} "
                         f"{first_failure['counterexample'] or ''}".rstrip())
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, _document(args, {"suites": suites, "firstFailure": first_failure}, passed))
    return EXIT_OK if passed else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .verify import SUITES

    parser = argparse.ArgumentParser(prog="parking", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"parking {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "text")):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        p.add_argument("--cap", type=int, default=None, help="enumeration cap (default: $PARKING_CAP or 10^7)")

    p = sub.add_parser("check", help="validate a parking function and report its statistics")
    p.add_argument("pf", help='canonical text, e.g. "5 5 : 1 3 5 1 3"')
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("convert", help="map between parking functions and rooted forests")
    p.add_argument("input", help='parking function "m n : ..." or forest "s m : j->parent ..."')
    p.add_argument("--bijection", choices=["bfs1", "bfs2", "knuth"], default="bfs1")
    p.add_argument("--to", choices=["forest", "pf"], default=None, help="default: inferred from the input")
    p.add_argument("--dot", action="store_true", help="include Graphviz DOT for the forest")
    p.add_argument("--roundtrip", action="store_true", help="map back and report equality")
    common(p)
    p.set_defaults(func=cmd_convert)

    for name, func, helptext in [("count", cmd_count, "count parking functions"),
                                 ("enumerate", cmd_enumerate, "list parking functions")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("m", type=int)
        p.add_argument("n", type=int)
        p.add_argument("--first", type=int, default=None, help="restrict to pi_1 = FIRST")
        p.add_argument("--holes", type=int, nargs="*", default=None, help="restrict to these unattempted spots")
        if name == "count":
            p.add_argument("--cross-check", action="store_true", help="also count by brute force")
            common(p)
        else:
            common(p, ("json", "text", "csv"))
        p.set_defaults(func=func)

    p = sub.add_parser("sample", help="uniform samples or a Monte Carlo report")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", choices=["none", "chi2", "holes", "repeats", "lucky", "covariance"], default="none")
    common(p, ("json", "csv"))
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-size", type=int, default=6, help="largest m + s (or n) enumerated")
    p.add_argument("--n", type=int, default=4, help="size parameter for the tutte and abel suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tuples", type=int, default=200, help="random argument tuples for the abel suite")
    p.add_argument("--trials", type=int, default=100_000, help="samples for the sampler suite")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NotAParkingFunction as exc:
        print(f"error: not a parking function: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
