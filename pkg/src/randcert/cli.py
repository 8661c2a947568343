"""Command-line front end.

Exit codes are the machine contract: 0 = all requested criteria pass,
1 = at least one criterion fails, 2 = usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import bayes, bitstream, blockstats, borel, extract, partitions, simgen
from .errors import RandcertError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _load_bits(path: str, fmt: str, n: int | None) -> bitstream.BitSequence:
    if fmt == "ascii":
        return bitstream.load_ascii(path)
    return bitstream.load_packed(path, n)


def _write_bits(seq: bitstream.BitSequence, path: str, fmt: str) -> None:
    if fmt == "ascii":
        bitstream.write_ascii(seq, path)
    else:
        bitstream.write_packed(seq, path)


def _emit_json(obj, path: str | None) -> None:
    if path is None:
        return
    if path == "-":
        json.dump(obj, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2)


def cmd_analyze(args) -> int:
    seq = _load_bits(args.input, args.format, args.bits)
    imax = blockstats.max_borel_level(seq.n)
    levels = args.max_level or imax
    borel_reports = borel.borel_test(seq, levels)
    bayes_levels = min(levels, max(i for i in range(1, levels + 1) if seq.n >= i * (1 << i)))
    bound_reports = bayes.bayes_bound_test(seq, bayes_levels)

    report = {
        "input": {"path": args.input, "format": args.format, "n": seq.n},
        "borel": borel.reports_to_json_dict(seq.n, borel_reports),
        "bayes_bound": bayes.bound_reports_to_json_dict(seq.n, bound_reports),
    }
    if args.bayes_posterior:
        posterior_levels = []
        for i in range(1, levels + 1):
            cap = args.max_blocks if (1 << i) > 8 else None
            models = list(partitions.enumerate_partitions(1 << i, cap))
            table = bayes.posterior(blockstats.count_blocks(seq, i), models)
            posterior_levels.append(table.to_json_dict())
        report["posterior"] = posterior_levels

    overall = report["borel"]["overall"] and report["bayes_bound"]["overall"]
    report["overall"] = overall
    _emit_json(report, args.json)
    if args.csv:
        rhs_by_level = {r.level: r.rhs for r in bound_reports}
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["level", "substring", "deviation", "borel_bound", "bayes_rhs_for_level"])
            for level, bits, dev, bound in borel.reports_to_csv_rows(borel_reports):
                w.writerow([level, bits, repr(dev), repr(bound), repr(rhs_by_level.get(level, ""))])

    print(f"n = {seq.n}, levels 1..{levels} (i_max = {imax})")
    for r in borel_reports:
        print(
            f"  borel level {r.level}: max |dev| = {r.max_abs_deviation:.6g} "
            f"{'<' if r.passes else '>='} bound {r.bound:.6g} -> "
            f"{'pass' if r.passes else 'FAIL'}"
        )
    for r in bound_reports:
        print(
            f"  bayes level {r.level}: lhs = {r.lhs:.6g} "
            f"{'<' if r.passes else '>='} rhs {r.rhs:.6g} -> "
            f"{'pass' if r.passes else 'FAIL'}"
        )
    print(f"overall: {'pass' if overall else 'FAIL'}")
    return EXIT_PASS if overall else EXIT_FAIL


def cmd_bounds(args) -> int:
    n = args.n
    imax = blockstats.max_borel_level(n)
    levels = args.levels or imax
    if levels > imax:
        raise ValueError(f"level {levels} exceeds i_max={imax} for n={n}")
    bb = borel.borel_bound(n)
    rows = []
    for i in range(1, levels + 1):
        rhs = bayes.bayes_bound_rhs(n, i) if n >= i * (1 << i) else None
        rows.append({"i": i, "borel_bound": bb, "bayes_rhs": rhs})
    _emit_json({"n": n, "bounds": rows}, args.json)
    print(f"n = {n}, i_max = {imax}")
    print(f"{'level':>5}  {'borel_bound':>14}  {'bayes_rhs':>14}")
    for row in rows:
        rhs = "n/a" if row["bayes_rhs"] is None else f"{row['bayes_rhs']:.6g}"
        print(f"{row['i']:>5}  {row['borel_bound']:>14.6g}  {rhs:>14}")
    return EXIT_PASS


def cmd_extract(args) -> int:
    loader = extract.load_timetags_text if args.format == "text" else extract.load_timetags_binary
    series = loader(args.input, args.kind, args.unit)
    if series.kind == extract.TIMESTAMPS:
        if len(series) < 2:
            raise RandcertError("need at least two timestamps to extract bits")
        series = extract.interarrivals(series)
    if len(series) == 0:
        raise RandcertError("no time tags in input")
    seq = extract.timetags_to_bits(series, args.divisor)
    _write_bits(seq, args.out, args.out_format)
    ones = sum(seq.to_bit_array().tolist())
    print(f"extracted n = {seq.n} bits, ones fraction = {ones / seq.n:.6f}")
    return EXIT_PASS


def cmd_generate(args) -> int:
    cfg = simgen.GeneratorConfig(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        theta=args.theta,
        stay_prob=args.stay_prob,
        mean_interarrival=args.mean,
        dead_time=args.dead_time,
        afterpulse_prob=args.afterpulse_prob,
        afterpulse_delay=args.afterpulse_delay,
    )
    if cfg.kind == simgen.DETECTOR:
        tags, seq = simgen.gen_detector(cfg)
        if args.out_format in ("timetags-text", "timetags-binary"):
            writer = (
                extract.write_timetags_text
                if args.out_format == "timetags-text"
                else extract.write_timetags_binary
            )
            writer(tags, args.out)
        else:
            _write_bits(seq, args.out, args.out_format)
    else:
        if args.out_format in ("timetags-text", "timetags-binary"):
            raise ValueError(f"{cfg.kind} generator emits bits, not time tags")
        seq = simgen.generate(cfg)
        _write_bits(seq, args.out, args.out_format)
    print(f"wrote {args.out} ({cfg.kind}, n = {cfg.n}, seed = {cfg.seed})")
    return EXIT_PASS


def cmd_posterior(args) -> int:
    seq = _load_bits(args.input, args.format, args.bits)
    i = args.level
    imax = blockstats.max_borel_level(seq.n)
    if i > imax:
        raise ValueError(f"level {i} exceeds i_max={imax} for n={seq.n}")
    cap = args.max_blocks
    if (1 << i) > 8 and cap is None:
        raise ValueError(
            f"full enumeration at level {i} has B_{1 << i} models; pass --max-blocks "
            f"(e.g. 2) to restrict the model space"
        )
    models = list(partitions.enumerate_partitions(1 << i, cap))
    table = bayes.posterior(blockstats.count_blocks(seq, i), models)
    _emit_json(table.to_json_dict(), args.json)
    best = table.models[table.best_index]
    print(f"level {i}: {len(models)} models")
    print(f"  best model: {best.rgs_string()} (posterior {table.posteriors[table.best_index]:.6g})")
    if table.symmetric_posterior is not None:
        print(f"  symmetric-model posterior: {table.symmetric_posterior:.6g}")
    return EXIT_PASS if best.is_symmetric else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randcert", description="Randomness certification toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("input", help="input file path")
        sp.add_argument("--format", choices=["ascii", "packed"], required=True)
        sp.add_argument("--bits", type=int, default=None, help="bit count for packed input")

    sp = sub.add_parser("analyze", help="run Borel and Bayesian-bound tests")
    add_input(sp)
    sp.add_argument("--max-level", type=int, default=None)
    sp.add_argument("--bayes-posterior", action="store_true", help="also compute posteriors")
    sp.add_argument("--max-blocks", type=int, default=2, help="model cap beyond level 3")
    sp.add_argument("--json", default=None, help="write JSON report here ('-' for stdout)")
    sp.add_argument("--csv", default=None, help="write per-substring CSV here")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("bounds", help="print bound values for a given n")
    sp.add_argument("n", type=int)
    sp.add_argument("--levels", type=int, default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("extract", help="time-tag parity extraction")
    sp.add_argument("input")
    sp.add_argument("--format", choices=["text", "binary"], required=True)
    sp.add_argument("--kind", choices=["timestamps", "interarrivals"], required=True)
    sp.add_argument("--unit", default="")
    sp.add_argument("--divisor", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.add_argument("--out-format", choices=["ascii", "packed"], default="packed")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("generate", help="synthetic generator output")
    sp.add_argument("--kind", choices=["bernoulli", "markov", "detector"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--theta", type=float, default=0.5)
    sp.add_argument("--stay-prob", type=float, default=0.5)
    sp.add_argument("--mean", type=float, default=1000.0)
    sp.add_argument("--dead-time", type=float, default=0.0)
    sp.add_argument("--afterpulse-prob", type=float, default=0.0)
    sp.add_argument("--afterpulse-delay", type=float, default=10.0)
    sp.add_argument("--out", required=True)
    sp.add_argument(
        "--out-format",
        choices=["ascii", "packed", "timetags-text", "timetags-binary"],
        default="packed",
    )
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("posterior", help="posterior over partition models at one level")
    add_input(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--max-blocks", type=int, default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_posterior)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (RandcertError, ValueError, OSError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
