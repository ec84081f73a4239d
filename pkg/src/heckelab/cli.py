"""Command-line front end: ``heckelab compute | verify | quotient``.

Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed input,
3 any other algebraic error (its class name is printed).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .errors import BadInput, HeckeLabError, ParseError
from .io import load_algebra, load_iwahori, read_config
from .quotient import build_quotient, load_marked, morris_datum
from .report import Report
from .suites import SUITES, Options, run_suite

SCHEMA = "heckelab.report/1"


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    cfg = read_config(args.config)
    kind = args.algebra or ("bernstein" if "th[" in args.expression else "iwahori")
    alg = load_algebra(cfg) if kind == "bernstein" else load_iwahori(cfg)
    print(alg.parse(args.expression))
    return 0


def run_report(suite: str, cfg: dict, opt: Options) -> tuple[dict, float]:
    start = time.perf_counter()
    rep = run_suite(suite, cfg, opt)
    elapsed = time.perf_counter() - start
    data = {"schema": SCHEMA, "suite": suite, "seed": opt.seed, "window": opt.window,
            "max_terms": opt.max_terms, "ok": rep.ok,
            "checks": sorted((c.to_json() for c in rep.checks), key=lambda c: c["name"])}
    return data, elapsed


def _text_summary(data: dict, elapsed: float) -> str:
    lines = [f"suite {data['suite']}: {'PASS' if data['ok'] else 'FAIL'} "
             f"({len(data['checks'])} checks, {elapsed:.2f}s)"]
    for c in data["checks"]:
        line = f"  [{c['verdict'].upper()}] {c['name']}"
        if c["detail"]:
            line += f"  ({c['detail']})"
        if c["verdict"] == "fail" and c["witness"] is not None:
            line += f"  witness: {json.dumps(c['witness'], sort_keys=True)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg = read_config(args.config)
    opt = Options.from_env(seed=args.seed, window=args.window, max_terms=args.max_terms)
    data, elapsed = run_report(args.suite, cfg, opt)
    _emit(_dump(data), args.out)
    # keep stdout pure JSON when no --out is given
    (sys.stdout if args.out else sys.stderr).write(_text_summary(data, elapsed))
    return 0 if data["ok"] else 1


def cmd_quotient(args) -> int:
    cfg = read_config(args.config)
    qs = build_quotient(load_marked(cfg), int(cfg.get("window", args.window)))
    data = {"schema": SCHEMA, "quotient": qs.to_json()}
    rep = Report("quotient", list(qs.report.checks))
    if "e" in cfg:
        md = morris_datum(qs, [Fraction(str(x)) for x in cfg["e"]])
        data["datum"] = md.to_json()
    data["ok"] = rep.ok
    data["checks"] = [c.to_json() for c in rep.checks]
    _emit(_dump(data), args.out)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heckelab", description="Exact computations in affine Hecke algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="normal form of an expression")
    c.add_argument("config")
    c.add_argument("expression")
    c.add_argument("--algebra", choices=["iwahori", "bernstein"])
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("config")
    v.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    v.add_argument("--window", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-terms", type=int, default=6)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quotient", help="build the quotient system of a marked-roots configuration")
    q.add_argument("config")
    q.add_argument("--window", type=int, default=3)
    q.add_argument("--out")
    q.set_defaults(func=cmd_quotient)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, BadInput) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except HeckeLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except KeyError as exc:
        print(f"error: missing configuration key {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
