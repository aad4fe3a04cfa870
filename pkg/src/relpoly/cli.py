"""Command-line front end: ``relpoly <verb> [network] [options]``.

``network`` is a JSON file or ``fixture:fig1`` / ``fixture:fig2`` (default
``fixture:fig2``).  Rationals are read and printed as ``p/q``; ``--decimal d``
switches printed numbers to ``d`` decimal places.

Exit status: 0 on success, 1 on a domain error (bad network, probability out
of range, ...), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import geometry, reliability, ruling
from .netmodel import Network, NetworkError, load_network, minimal_cuts, minimal_paths
from .roots import RealRoot, real_roots
from .sqfree_poly import DensePoly, SqFreePoly, to_fraction

DEFAULT_NETWORK = "fixture:fig2"
SEED_ENV = "RELPOLY_SEED"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(x) for x in text.split(",") if x.strip()]


def _assignments(text: str) -> dict[int, Fraction]:
    """``R1=0,R2=1/2`` -> ``{1: 0, 2: 1/2}``."""
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name[1:].isdigit() or name[0] not in "Rr":
            raise argparse.ArgumentTypeError(f"expected R<i>=<value>, got {item!r}")
        out[int(name[1:])] = _rational(value)
    return out


def _line(text: str) -> ruling.AffineLine:
    """``a1,...,a6;b1,...,b6``."""
    a, sep, b = text.partition(";")
    if not sep:
        raise argparse.ArgumentTypeError("line must be 'a1,...,am;b1,...,bm'")
    try:
        return ruling.AffineLine(tuple(_rational_list(a)), tuple(_rational_list(b)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _family(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        try:
            out.append(to_fraction(item))
        except (ValueError, ZeroDivisionError):
            if not item.isidentifier():
                raise argparse.ArgumentTypeError(f"family entry {item!r} is neither rational nor a symbol")
            out.append(item)
    return out


# ---------------------------------------------------------------- output helpers

class Out:
    def __init__(self, fmt: str, decimal: int | None, stream):
        self.fmt = fmt
        self.decimal = decimal
        self.stream = stream

    def num(self, x) -> str:
        x = Fraction(x)
        if self.decimal is not None:
            return f"{float(x):.{self.decimal}f}"
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def line(self, text: str = ""):
        self.stream.write(text + "\n")

    def json(self, doc):
        self.stream.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _sets_text(sets) -> str:
    return ",".join("{" + ",".join(map(str, sorted(s))) + "}" for s in sets)


def _poly_of(net: Network) -> SqFreePoly:
    return reliability.from_min_cuts(minimal_cuts(net), net.n)


def _require(fmt: str, allowed: Sequence[str], verb: str):
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not available for '{verb}' (choose from {', '.join(allowed)})")


# ---------------------------------------------------------------- verbs

def cmd_paths(args, out: Out):
    _sets(args, out, minimal_paths(args.net), "paths")


def cmd_cuts(args, out: Out):
    _sets(args, out, minimal_cuts(args.net), "cuts")


def _sets(args, out: Out, sets, label):
    if out.fmt == "json":
        out.json({label: [sorted(s) for s in sets]})
    elif out.fmt == "csv":
        out.line("index,components")
        for k, s in enumerate(sets, 1):
            out.line(f'{k},"{" ".join(map(str, sorted(s)))}"')
    else:
        out.line(_sets_text(sets))


def cmd_poly(args, out: Out):
    _require(out.fmt, ("text", "json"), "poly")
    net = args.net
    by_cuts = reliability.from_min_cuts(minimal_cuts(net), net.n)
    by_paths = reliability.from_min_paths(minimal_paths(net), net.n)
    agree = by_cuts == by_paths
    if net.n <= reliability.BRUTE_FORCE_LIMIT:
        agree = agree and by_cuts == reliability.bruteforce_poly(net)
    if out.fmt == "json":
        out.json({"polynomial": by_cuts.to_json(), "text": by_cuts.to_text(), "constructions_agree": agree})
    else:
        out.line(by_cuts.to_text())
        out.line(f"constructions agree: {str(agree).lower()}")
    if not agree:
        raise ArithmeticError("the polynomial constructions disagree")


def cmd_eval(args, out: Out):
    _require(out.fmt, ("text", "json"), "eval")
    probs = reliability.probability_vector(_broadcast(args.at, args.net.n), args.net.n)
    value = _poly_of(args.net).evaluate(probs)
    if out.fmt == "json":
        out.json({"at": [out.num(p) for p in probs], "reliability": out.num(value)})
    else:
        out.line(out.num(value))


def _broadcast(values: list[Fraction], n: int) -> list[Fraction]:
    return values * n if len(values) == 1 and n > 1 else values


def cmd_mc(args, out: Out):
    _require(out.fmt, ("text", "json"), "mc")
    seed = args.seed
    if seed is None:
        raw = os.environ.get(SEED_ENV, "0")
        try:
            seed = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")
    probs = _broadcast(args.p, args.net.n)
    est, err = reliability.monte_carlo(args.net, probs, args.trials, seed)
    if out.fmt == "json":
        out.json({"estimate": est, "stderr": err, "trials": args.trials, "seed": seed})
    else:
        out.line(f"estimate {est:.6f} stderr {err:.6f} trials {args.trials} seed {seed}")


def cmd_diag(args, out: Out):
    _require(out.fmt, ("text", "json", "csv"), "diag")
    p = _poly_of(args.net)
    if args.pattern:
        pats = [geometry.DiagonalPattern.parse(args.pattern, p.n)]
    else:
        if args.k is None:
            raise UsageError("diag needs --k or --pattern")
        pats = geometry.diagonal_patterns(p.n, args.k)
    rows = [(str(d), d.apply(p).to_text()) for d in pats]
    if out.fmt == "json":
        out.json({"count": len(rows), "patterns": [{"pattern": a, "polynomial": b} for a, b in rows]})
    elif out.fmt == "csv":
        out.line("pattern,polynomial")
        for a, b in rows:
            out.line(f'{a},"{b}"')
    else:
        out.line(f"{len(rows)} pattern(s)")
        for a, b in rows:
            out.line(f"{a}: {b}")


def cmd_critical(args, out: Out):
    _require(out.fmt, ("text", "json"), "critical")
    p = _poly_of(args.net)
    grads = geometry.gradient(p)
    result = {"gradient": [g.to_text() for g in grads]}
    if args.verify is not None:
        result["family"] = [str(x) for x in args.verify]
        result["critical"] = geometry.verify_critical_family(p, args.verify)
    if args.extrema:
        (lo, vlo), (hi, vhi) = geometry.cube_extrema(p)
        result["cube_min"] = {"value": out.num(lo), "vertex": list(vlo)}
        result["cube_max"] = {"value": out.num(hi), "vertex": list(vhi)}
    if out.fmt == "json":
        out.json(result)
        return
    for i, g in enumerate(result["gradient"], 1):
        out.line(f"d/dR{i}: {g}")
    if "critical" in result:
        out.line(f"family ({', '.join(result['family'])}) critical: {str(result['critical']).lower()}")
    if args.extrema:
        out.line(f"cube min {result['cube_min']['value']} at {tuple(vlo)}")
        out.line(f"cube max {result['cube_max']['value']} at {tuple(vhi)}")


def cmd_hessian(args, out: Out):
    _require(out.fmt, ("text", "json"), "hessian")
    p = _poly_of(args.net)
    point = _broadcast(args.at, p.n)
    h = geometry.hessian(p, point)
    cls = geometry.hessian_class(p, point)
    if out.fmt == "json":
        out.json({"at": [out.num(x) for x in point], "hessian": [[out.num(x) for x in row] for row in h], "class": cls})
    else:
        for row in h:
            out.line(" ".join(out.num(x).rjust(6) for x in row))
        out.line(cls)


def _univariate(args) -> DensePoly:
    if args.poly:
        return DensePoly.parse(args.poly, ("x",))
    p = _poly_of(args.net)
    return geometry.DiagonalPattern((1,) * p.n).apply(p, ("x",))


def _root_text(r, out: Out) -> str:
    if r.is_exact:
        return f"{out.num(r.exact)} (mult {r.multiplicity})"
    r = r.refine()
    return f"in [{out.num(r.lo)}, {out.num(r.hi)}] ~ {float(r):.10g} (mult {r.multiplicity})"


def cmd_roots(args, out: Out):
    _require(out.fmt, ("text", "json"), "roots")
    u = _univariate(args)
    if args.level == "min" or args.level == "max":
        ref = geometry.level_profile(u, 0)
        level = ref.min_level if args.level == "min" else ref.max_level
        if level is None:
            raise ValueError(f"polynomial has no {args.level} level")
    else:
        level = RealRoot.rational(_rational(args.level))
    prof = geometry.level_profile(u, level)
    shifted = u - DensePoly.constant(u.vars, level.exact) if level.is_exact else None
    roots = real_roots(shifted) if shifted is not None else None
    if out.fmt == "json":
        doc = {"polynomial": u.to_text(), **prof.to_json()}
        if roots is not None:
            doc["roots"] = roots.to_json()["roots"]
        out.json(doc)
        return
    out.line(f"u = {u.to_text()}")
    out.line(f"level {level.describe() if level.is_exact else level.refine().describe()}")
    out.line(f"case: {prof.case}")
    out.line(f"roots (negative, zero, positive) with multiplicity: {prof.counts}")
    if roots is not None:
        for r in roots:
            out.line("  " + _root_text(r, out))
    else:
        for r in prof.double_roots:
            out.line("  multiple root " + _root_text(r, out))


def cmd_curve(args, out: Out):
    u = _univariate(args)
    rep = geometry.curve_report(u, args.samples)
    table = geometry.samples_csv(rep.samples, out.decimal)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
    if out.fmt == "csv":
        if not args.out:
            out.stream.write(table)
        return
    summary = {
        "polynomial": u.to_text(),
        "samples": len(rep.samples),
        "nondecreasing": rep.nondecreasing,
        "derivative_roots_in_open_interval": rep.derivative_roots_open,
        "inflection_points": rep.inflection_points,
        "sigmoid_like": rep.sigmoid_like,
    }
    if args.out:
        summary["csv"] = args.out
    if out.fmt == "json":
        out.json(summary)
    else:
        for k, v in summary.items():
            out.line(f"{k}: {str(v).lower() if isinstance(v, bool) else v}")
        if not args.out:
            out.stream.write(table)


def cmd_lines(args, out: Out):
    _require(out.fmt, ("text", "json"), "lines")
    p = _poly_of(args.net)
    if args.point is None:
        raise UsageError("lines needs --point b1,...,bn")
    b = _broadcast(args.point, p.n)
    pats = [ruling.ZeroPattern.parse(args.pattern)] if args.pattern else ruling.zero_patterns(p.n)
    found = []
    for pat in pats:
        for line in ruling.solve_directions(p, b, pat, limit=args.limit):
            found.append((pat.key, line))
    if out.fmt == "json":
        out.json({"point": [out.num(x) for x in b], "lines": [{"pattern": k, **l.to_json()} for k, l in found]})
        return
    out.line(f"{len(found)} line(s) through ({', '.join(out.num(x) for x in b)}, {out.num(p.evaluate(b))})")
    for key, line in found:
        a = ",".join(out.num(x) for x in line.a)
        out.line(f"{key}: a=({a})")


def cmd_branches(args, out: Out):
    _require(out.fmt, ("text", "json"), "branches")
    p = _poly_of(args.net)
    branches = ruling.enumerate_branches(p, seed=args.seed)
    report = ruling.plausibility_report(branches)
    if out.fmt == "json":
        out.json({**report, "details": [b.to_json() for b in branches]})
        return
    out.line(f"max dof {report['max_dof']}, min dof over nonempty branches {report['min_dof_nonempty']}")
    for row in report["branches"]:
        dof = "empty" if row["dof"] is None else f"dof {row['dof']}"
        mark = " *" if row["maximal"] else ""
        labels = f"  [{'; '.join(row['labels'])}]" if row["labels"] else ""
        out.line(f"{row['pattern']}: {dof}{mark}{labels}")


def cmd_window(args, out: Out):
    _require(out.fmt, ("text", "json"), "window")
    w = ruling.probability_window(args.line)
    if out.fmt == "json":
        out.json({"window": None if w is None else w.to_json()})
        return
    if w is None:
        out.line("empty")
    else:
        lo = "-inf" if w.lo is None else out.num(w.lo)
        hi = "inf" if w.hi is None else out.num(w.hi)
        out.line(f"[{lo}, {hi}]")


def cmd_levelcheck(args, out: Out):
    _require(out.fmt, ("text", "json"), "levelcheck")
    p = _poly_of(args.net)
    ok = geometry.level_contains_variety(p, args.c, args.fix)
    rest = (p - args.c).restrict(args.fix)
    if out.fmt == "json":
        out.json({"level": out.num(args.c), "fix": {f"R{i}": out.num(v) for i, v in args.fix.items()},
                  "contained": ok, "remainder": rest.to_text()})
    else:
        out.line(f"contained: {str(ok).lower()}")
        if not ok:
            out.line(f"remainder: {rest.to_text()}")


VERBS: dict[str, tuple[Callable, str]] = {
    "paths": (cmd_paths, "minimal paths"),
    "cuts": (cmd_cuts, "minimal cuts"),
    "poly": (cmd_poly, "reliability polynomial with a three-way construction check"),
    "eval": (cmd_eval, "exact reliability at given component reliabilities"),
    "mc": (cmd_mc, "Monte Carlo estimate"),
    "diag": (cmd_diag, "diagonal restrictions"),
    "critical": (cmd_critical, "gradient, critical-family check, cube extrema"),
    "hessian": (cmd_hessian, "Hessian and its exact inertia class"),
    "roots": (cmd_roots, "root profile of u(x) = a for the all-equal diagonal"),
    "curve": (cmd_curve, "samples and shape checks of the all-equal diagonal on [0, 1]"),
    "lines": (cmd_lines, "lines on the graph through a base point"),
    "branches": (cmd_branches, "branch table of the line system with dof"),
    "window": (cmd_window, "probability window of a line"),
    "levelcheck": (cmd_levelcheck, "is a coordinate variety inside a level set?"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("network", nargs="?", default=DEFAULT_NETWORK,
                        help=f"JSON file or fixture:<name> (default {DEFAULT_NETWORK})")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--decimal", type=int, metavar="D", help="print numbers with D decimal places")

    parser = argparse.ArgumentParser(prog="relpoly", description="Exact reliability polynomials and their geometry.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")
    ps = {name: sub.add_parser(name, parents=[common], help=desc) for name, (_, desc) in VERBS.items()}

    ps["eval"].add_argument("--at", type=_rational_list, required=True, help="p1,...,pn (one value is broadcast)")
    ps["mc"].add_argument("--p", type=_rational_list, required=True, help="p1,...,pn (one value is broadcast)")
    ps["mc"].add_argument("--trials", type=int, default=100_000)
    ps["mc"].add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    ps["diag"].add_argument("--k", type=int)
    ps["diag"].add_argument("--pattern", help="blocks in label order, e.g. 1|2345")
    ps["critical"].add_argument("--verify", type=_family, help="family such as 0,0,s,0,0")
    ps["critical"].add_argument("--extrema", action="store_true", help="also report cube extrema")
    ps["hessian"].add_argument("--at", type=_rational_list, required=True)
    for name in ("roots", "curve"):
        ps[name].add_argument("--poly", help="explicit univariate polynomial in x instead of the network diagonal")
    ps["roots"].add_argument("--level", required=True, help="rational level, or 'min' / 'max' for the extremal levels")
    ps["curve"].add_argument("--samples", type=int, default=11)
    ps["curve"].add_argument("--out", help="write the CSV table to this file")
    ps["lines"].add_argument("--point", type=_rational_list, help="b1,...,bn")
    ps["lines"].add_argument("--pattern", help="e.g. a1=a4=a5=0,b1=1 (default: every zero pattern)")
    ps["lines"].add_argument("--limit", type=int, default=None, help="lines per pattern")
    ps["branches"].add_argument("--seed", type=int, default=0)
    ps["window"].add_argument("--line", type=_line, required=True, help="a1,...,am;b1,...,bm")
    ps["levelcheck"].add_argument("--c", type=_rational, required=True)
    ps["levelcheck"].add_argument("--fix", type=_assignments, required=True, help="R1=0,R2=0")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        # argparse prints help and usage errors to the process streams
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Out(args.format, args.decimal, stdout)
    func = VERBS[args.verb][0]
    try:
        if args.decimal is not None and args.decimal < 0:
            raise UsageError("--decimal must be non-negative")
        args.net = load_network(args.network)
        func(args, out)
    except UsageError as exc:
        stderr.write(f"relpoly {args.verb}: usage error: {exc}\n")
        return 2
    except (NetworkError, ValueError, ArithmeticError, OSError, IndexError, KeyError) as exc:
        stderr.write(f"relpoly {args.verb}: error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
