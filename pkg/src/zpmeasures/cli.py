"""Command-line front end: `verify` runs named suites, `emit` serializes
measures, transforms, series and octagon factors.

Exit codes: 0 all checks pass, 1 an identity failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classical, magnus, octagon
from .measures import iwasawa_P, transform_F
from .padic import PrimeContext, parse_rat
from .suites import SUITES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zpmeasures",
                                 description="exact p-adic measure and octagon checks")
    sub = ap.add_subparsers(dest="command")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--p", type=int, default=3)
    v.add_argument("--nmax", type=int, default=3)
    v.add_argument("--n", type=int, default=None, help="octagon level (defaults to --nmax)")
    v.add_argument("--sigma-rep", type=int, default=None)
    v.add_argument("--degree", type=int, default=3)
    v.add_argument("--terms", type=int, default=6)
    v.add_argument("--mod-exp", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json", "csv"), default="text")
    v.add_argument("--out", default=None)
    v.add_argument("--tamper", action="store_true", help="inject one fault (test hook)")

    e = sub.add_parser("emit", help="serialize an object")
    e.add_argument("object", choices=("measure", "iwasawa", "f-series",
                                      "nc-series", "octagon-factor"))
    e.add_argument("--p", type=int, default=3)
    e.add_argument("--nmax", type=int, default=3)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--level", type=int, default=None)
    e.add_argument("--terms", type=int, default=6)
    e.add_argument("--degree", type=int, default=3)
    e.add_argument("--sigma-rep", type=int, default=1)
    e.add_argument("--measure", default="dirac",
                   choices=("dirac", "M", "E1", "N2", "D2"))
    e.add_argument("--c", default="7")
    e.add_argument("--a", default="0")
    e.add_argument("--word", default=None)
    e.add_argument("--factor", default="A", choices=list("ABCDEFGHJ"))
    e.add_argument("--format", choices=("text", "json", "csv"), default="json")
    e.add_argument("--out", default=None)
    return ap


def _write(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_measure(args, ctx: PrimeContext):
    if args.measure == "dirac":
        point = [parse_rat(x) for x in str(args.a).split(",")]
        return classical.make_dirac(point, ctx)
    if args.measure == "M":
        return classical.make_M(parse_rat(args.c), ctx)
    if args.measure == "E1":
        return classical.make_E1(parse_rat(args.c), ctx)
    if args.measure == "N2":
        return classical.make_N2(parse_rat(args.c), ctx)
    if args.measure == "D2":
        word_text = args.word or "[x,y0]"
        level = min(ctx.n_max, 2)
        wctx = PrimeContext(ctx.p, level)
        word = magnus.parse_word(word_text, wctx, level)
        if not magnus.kernel_check(word):
            raise ValueError("D2 needs a kernel word")
        alphas, gammas = magnus.coefficient_tables(word)
        return classical.make_D2(alphas, gammas, wctx)
    raise ValueError(f"unknown measure {args.measure}")


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite: {args.suite}", file=sys.stderr)
        return EXIT_USAGE
    n_max = args.n if (args.suite == "octagon" and args.n is not None) else args.nmax
    try:
        cfg = RunConfig(p=args.p, n_max=n_max, degree=args.degree,
                        mod_exp=args.mod_exp, seed=args.seed, suite=args.suite,
                        fmt=args.format, sigma_rep=args.sigma_rep,
                        terms=args.terms, tamper=args.tamper)
        cfg.ctx()  # validate p, bounds
        reports = run_suite(cfg)
    except ValueError as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2)
    elif args.format == "csv":
        text = "\n".join(r.to_csv() for r in reports)
    else:
        text = "\n".join(r.to_text() for r in reports)
    _write(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_emit(args) -> int:
    try:
        depth = max(args.nmax, args.level or 0)
        ctx = PrimeContext(args.p, depth)
        if args.object == "measure":
            mu = _build_measure(args, ctx)
            if args.format == "csv":
                text = "\n".join(mu.csv_lines())
            else:
                text = json.dumps({"dim": mu.dim, "denom_bound": mu.denom_bound,
                                   "rows": list(mu.csv_lines())[1:]},
                                  sort_keys=True, indent=2)
        elif args.object in ("iwasawa", "f-series"):
            mu = _build_measure(args, ctx)
            level = args.level if args.level is not None else mu.n_max
            fn = iwasawa_P if args.object == "iwasawa" else transform_F
            pt = fn(mu, args.terms, level)
            text = json.dumps(pt.to_json_dict(), sort_keys=True, indent=2)
        elif args.object == "nc-series":
            if not args.word:
                raise ValueError("--word is required for nc-series")
            wctx = PrimeContext(args.p, max(args.n, 1))
            word = magnus.parse_word(args.word, wctx, args.n)
            series = magnus.embed_E(word, args.degree)
            text = json.dumps(series.to_json_dict(), sort_keys=True, indent=2)
        elif args.object == "octagon-factor":
            fac = octagon.build_factor(args.factor, args.p, args.n, args.sigma_rep)
            terms = [{"mono": ".".join("X" if g == magnus.X else f"Y{g}" for g in m) or "1",
                      "poly": str(c)}
                     for m, c in sorted(fac.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))]
            text = json.dumps({"factor": args.factor,
                               "config": {"p": args.p, "n": args.n, "s": args.sigma_rep},
                               "terms": terms}, sort_keys=True, indent=2)
        else:
            raise ValueError(f"unknown object {args.object}")
    except (ValueError, ZeroDivisionError, magnus.WordSyntaxError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "emit":
        return cmd_emit(args)
    ap.print_help()
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
