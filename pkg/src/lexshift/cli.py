"""Command line front end for the hole-to-verdicts pipeline.

`analyze` runs hole -> pair -> normalize -> automaton -> verdicts and
prints one JSON report; the remaining subcommands are thin wrappers over
single library operations.  Output is deterministic: dict keys are
emitted in a fixed order, rationals as "p/q" strings, sequences as
"pre|per" literals, so identical inputs and configuration produce
identical bytes.  Search caps come from --cap/--nmax/--kmax flags, which
override the same keys in a key=value --config file (the file also
accepts `window` and `tol`, which have no flag).

Exit codes: 0 success, 2 domain rejection or bad input, 3 inconclusive
at the configured cap, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction

from lexshift.circle import Hole, bad_periods, hole_to_pair, s_membership
from lexshift.lexworld import InLW, LexPair, classify, normalize, staircase_sample
from lexshift.renorm import (
    Inconclusive,
    Transitive,
    Unknown,
    detect_renorm,
    sturmian_words,
    transitivity,
)
from lexshift.specprop import (
    NonStabilizedError,
    NoUniformBridgeError,
    SpecReport,
    UnknownSpecification,
    build_nospec_family,
    build_spec_family,
    spec_report,
    spec_verdict,
)
from lexshift.subshift import build_automaton, entropy, forbidden_factors, is_sft
from lexshift.words import EpSeq, seq

__all__ = ["main"]

FAMILY_SEED = ("011", "100")
FAMILY_PRIMES = [("01", "10"), ("010", "101")]
FAMILY_EXPONENTS = [(2, 2), (2, 2)]


@dataclass(frozen=True)
class Caps:
    cap: int | None = None
    kmax: int | None = None
    nmax: int | None = None
    window: int = 5
    tol: float | None = None


_CONFIG_TYPES = {"cap": int, "kmax": int, "nmax": int, "window": int, "tol": float}


def load_config(path: str) -> dict:
    values: dict = {}
    with open(path) as handle:
        for lineno, line in enumerate(handle, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            key, sep, val = body.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or not key:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _CONFIG_TYPES[key](val)
    return values


def resolve_caps(args: argparse.Namespace) -> Caps:
    values = load_config(args.config) if getattr(args, "config", None) else {}
    for key in ("cap", "kmax", "nmax"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return Caps(**values)


def _pair(alpha: str, beta: str) -> LexPair:
    return LexPair(seq(alpha), seq(beta))


def _plain(value):
    if isinstance(value, (EpSeq, Fraction)):
        return str(value)
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def _json_tagged(obj, tag: str) -> dict:
    out = {tag: type(obj).__name__}
    for f in fields(obj):
        out[f.name] = _plain(getattr(obj, f.name))
    return out


def _json_pair(p: LexPair) -> dict:
    return {"alpha": str(p.alpha), "beta": str(p.beta)}


def _json_spec(rep: SpecReport) -> dict:
    return {
        "m_values": dict(rep.m_values),
        "spec_number": rep.spec_number,
        "verdict": _json_tagged(rep.verdict, "verdict"),
        "evidence": [list(row) for row in rep.evidence],
    }


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _entropy_fields(p: LexPair, caps: Caps) -> dict:
    result = entropy(p, caps.tol) if caps.tol is not None else entropy(p)
    return {
        "h": result.h,
        "lower": result.lower,
        "upper": result.upper,
        "dim_H": result.dim_H,
    }


def analyze_hole(a: Fraction, b: Fraction, caps: Caps) -> dict:
    hole = Hole(a, b)
    raw = hole_to_pair(hole)
    pair_class = classify(raw)
    normalized = normalize(raw)
    transitive = transitivity(normalized, cap=caps.cap)
    report = {
        "hole": {"a": str(hole.a), "b": str(hole.b)},
        "raw_pair": _json_pair(raw),
        "normalized_pair": _json_pair(normalized),
        "class": _json_tagged(pair_class, "kind"),
        "sft": is_sft(normalized),
        "entropy": _entropy_fields(normalized, caps),
        "renorm": _json_tagged(detect_renorm(normalized, cap=caps.cap), "verdict"),
        "transitivity": _json_tagged(transitive, "verdict"),
    }
    if isinstance(transitive, Transitive):
        report["spec"] = _json_spec(
            spec_report(
                normalized,
                window=caps.window,
                nmax=caps.nmax or 32,
                kmax=caps.kmax,
            )
        )
    report["bad_periods"] = list(bad_periods(hole, caps.nmax or 16))
    member = s_membership(hole)
    report["s_membership"] = {"n": member.n, "m": member.m}
    return report


def cmd_analyze(args: argparse.Namespace, caps: Caps) -> int:
    if args.grid:
        return _run_grid(args, caps)
    if args.a is None or args.b is None:
        raise ValueError("analyze needs two rationals, or --grid WxH")
    report = analyze_hole(Fraction(args.a), Fraction(args.b), caps)
    _emit(report)
    return 0


def _parse_grid(text: str) -> tuple[int, int]:
    w, sep, h = text.lower().partition("x")
    if not sep or not w.isdigit() or not h.isdigit() or int(w) < 1 or int(h) < 1:
        raise ValueError(f"expected --grid WxH with positive integers, got {text!r}")
    return int(w), int(h)


def _grid_cell(job: tuple[Fraction, Fraction, Caps]) -> dict:
    a, b, caps = job
    try:
        return analyze_hole(a, b, caps)
    except ValueError as err:
        return {
            "hole": {"a": str(a), "b": str(b)},
            "error": f"{type(err).__name__}: {err}",
        }


def _run_grid(args: argparse.Namespace, caps: Caps) -> int:
    width, height = _parse_grid(args.grid)
    # interior lattice of the candidate rectangle (1/4, 1/2) x (1/2, 3/4)
    cells = sorted(
        (
            Fraction(1, 4) + Fraction(i, 4 * (width + 1)),
            Fraction(1, 2) + Fraction(j, 4 * (height + 1)),
        )
        for i in range(1, width + 1)
        for j in range(1, height + 1)
    )
    jobs = [(a, b, caps) for a, b in cells]
    with ProcessPoolExecutor() as pool:
        rows = list(pool.map(_grid_cell, jobs, chunksize=max(1, len(jobs) // 32)))
    if args.json:
        _emit(rows)
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        ["a", "b", "class", "sft", "h", "transitive", "spec_number", "error"]
    )
    for row in rows:
        base = [row["hole"]["a"], row["hole"]["b"]]
        if "error" in row:
            writer.writerow(base + ["", "", "", "", "", row["error"]])
            continue
        spec = row.get("spec")
        number = "" if spec is None or spec["spec_number"] is None else spec["spec_number"]
        writer.writerow(
            base
            + [
                row["class"]["kind"],
                "true" if row["sft"] else "false",
                repr(row["entropy"]["h"]),
                row["transitivity"]["verdict"],
                number,
                "",
            ]
        )
    return 0


def cmd_staircase(args: argparse.Namespace, caps: Caps) -> int:
    if args.samples < 2:
        raise ValueError("staircase needs at least 2 samples")
    step = Fraction(1, 2 * (args.samples - 1))
    xs = [Fraction(1, 2) + i * step for i in range(args.samples)]
    points = staircase_sample(xs)
    if args.json:
        _emit([{"x": str(x), "y": str(y)} for x, y in points])
        return 0
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["x", "y"])
        for x, y in points:
            writer.writerow([str(x), str(y)])
    finally:
        if sink is not sys.stdout:
            sink.close()
    return 0


def cmd_badperiods(args: argparse.Namespace, caps: Caps) -> int:
    hole = Hole(Fraction(args.a), Fraction(args.b))
    nmax = caps.nmax or 16
    _emit(
        {
            "hole": {"a": str(hole.a), "b": str(hole.b)},
            "nmax": nmax,
            "bad_periods": list(bad_periods(hole, nmax)),
        }
    )
    return 0


def cmd_entropy(args: argparse.Namespace, caps: Caps) -> int:
    p = _pair(args.alpha, args.beta)
    out = _entropy_fields(p, caps)
    out["sft"] = is_sft(p)
    if out["sft"] and isinstance(classify(p), InLW):
        out["states"] = len(build_automaton(p).alive)
        out["forbidden_factors"] = sorted(forbidden_factors(p))
    else:
        out["states"] = None
        out["forbidden_factors"] = None
    _emit(out)
    return 0


def cmd_transitive(args: argparse.Namespace, caps: Caps) -> int:
    verdict = transitivity(_pair(args.alpha, args.beta), cap=caps.cap)
    _emit(_json_tagged(verdict, "verdict"))
    return 3 if isinstance(verdict, Unknown) else 0


def cmd_renorm(args: argparse.Namespace, caps: Caps) -> int:
    verdict = detect_renorm(_pair(args.alpha, args.beta), cap=caps.cap)
    _emit(_json_tagged(verdict, "verdict"))
    return 3 if isinstance(verdict, Inconclusive) else 0


def cmd_sturmian(args: argparse.Namespace, caps: Caps) -> int:
    omega, nu = sturmian_words(args.ratio)
    _emit({"omega": omega, "nu": nu})
    return 0


def cmd_specnum(args: argparse.Namespace, caps: Caps) -> int:
    rep = spec_report(
        _pair(args.alpha, args.beta),
        window=caps.window,
        nmax=caps.nmax or 32,
        at_most=args.at_most,
        kmax=caps.kmax,
    )
    _emit(_json_spec(rep))
    return 3 if rep.spec_number is None and rep.m_values else 0


def cmd_specfamily(args: argparse.Namespace, caps: Caps) -> int:
    if args.mode == "spec":
        family = build_spec_family(FAMILY_SEED, FAMILY_PRIMES, args.stages)
    else:
        family = build_nospec_family(
            FAMILY_SEED, FAMILY_PRIMES, FAMILY_EXPONENTS, args.stages
        )
    reports = [
        spec_report(
            p,
            stage=i + 2,
            window=caps.window,
            nmax=caps.nmax or 32,
            kmax=caps.kmax,
        )
        for i, p in enumerate(family)
    ]
    verdict = spec_verdict(family, reports)
    _emit(
        {
            "mode": args.mode,
            "stages": [
                {"stage": i + 2, "pair": _json_pair(p), **_json_spec(rep)}
                for i, (p, rep) in enumerate(zip(family, reports))
            ],
            "verdict": _json_tagged(verdict, "verdict"),
        }
    )
    return 3 if isinstance(verdict, UnknownSpecification) else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value cap file")
    common.add_argument("--cap", type=int, help="renormalization recursion cap")
    common.add_argument("--nmax", type=int, help="orbit/stabilization depth")
    common.add_argument("--kmax", type=int, help="per-length gap budget")

    parser = argparse.ArgumentParser(
        prog="lexshift",
        description="doubling map with a hole: exact window subshift verdicts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full pipeline on one hole")
    p.add_argument("a", nargs="?", help="left endpoint p/q")
    p.add_argument("b", nargs="?", help="right endpoint p/q")
    p.add_argument("--grid", metavar="WxH", help="sweep an interior lattice instead")
    p.add_argument("--json", action="store_true", help="full reports for --grid")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("staircase", parents=[common], help="entropy staircase CSV")
    p.add_argument("--samples", type=int, required=True, help="grid points on [1/2, 1]")
    p.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_staircase)

    p = sub.add_parser("badperiods", parents=[common], help="periods whose orbits all meet the hole")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_badperiods)

    p = sub.add_parser("entropy", parents=[common], help="topological entropy of a pair")
    p.add_argument("alpha", help='sequence literal "pre|per"')
    p.add_argument("beta")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("transitive", parents=[common], help="transitivity verdict")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("renorm", parents=[common], help="renormalization verdict")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("sturmian", parents=[common], help="balanced word pair for p/q")
    p.add_argument("ratio")
    p.set_defaults(func=cmd_sturmian)

    p = sub.add_parser("specnum", parents=[common], help="uniform gap stabilization report")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--at-most", action="store_true", help="cumulative gap semantics")
    p.set_defaults(func=cmd_specnum)

    p = sub.add_parser("specfamily", parents=[common], help="staged family reports")
    p.add_argument("--mode", choices=("spec", "nospec"), required=True)
    p.add_argument("--stages", type=int, required=True)
    p.set_defaults(func=cmd_specfamily)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        caps = resolve_caps(args)
        return args.func(args, caps)
    except (NonStabilizedError, NoUniformBridgeError) as err:
        print(f"inconclusive: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
