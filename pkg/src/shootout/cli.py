"""Command line: reproduce the tables and figure data, simulate, verify.

Exit codes: 0 success, 1 verification failure (or nothing to estimate),
2 invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from . import analysis, montecarlo
from .core import Mechanism, Params, PressureModel, to_number
from .engine import regular_phase_distribution, sweep_grid, table2, total_win_probability

TABLE3_ROWS = (
    ("ABAB", Mechanism.STANDARD),
    ("ABBA", Mechanism.ALTERNATING),
    ("ABBA|BAAB", Mechanism.DOUBLE_ALTERNATING),
    ("(Adjusted) Catch-up", Mechanism.CATCH_UP),
    ("(Adjusted) Behind-first", Mechanism.BEHIND_FIRST),
)


def round_half_up(value, digits: int) -> str:
    """Decimal string of ``value`` rounded half-up; exact for Fractions."""
    with localcontext() as ctx:
        ctx.prec = 60
        if isinstance(value, Fraction):
            d = Decimal(value.numerator) / Decimal(value.denominator)
        else:
            d = Decimal(float(value))
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP))


def significant(value, digits: int = 15) -> str:
    return f"{float(value):.{digits}g}"


def plain(value) -> str:
    """Short decimal form of a grid coordinate, e.g. ``0.53``."""
    if isinstance(value, Fraction):
        with localcontext() as ctx:
            ctx.prec = 30
            d = Decimal(value.numerator) / Decimal(value.denominator)
        return format(d.normalize(), "f")
    return repr(float(value))


def _number(text: str):
    try:
        return to_number(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _model(text: str) -> PressureModel:
    try:
        return PressureModel.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown model {text!r} (use m1, m2 or m3)")


def _mechanisms(text: str) -> list[Mechanism]:
    out = []
    for part in text.split(","):
        try:
            out.append(Mechanism.parse(part))
        except ValueError:
            names = ", ".join(m.value for m in Mechanism)
            raise argparse.ArgumentTypeError(f"unknown mechanism {part!r} (choose from {names})")
    return out


def _params(parser: argparse.ArgumentParser, p, q) -> Params:
    try:
        return Params(p, q)
    except ValueError as exc:
        parser.error(str(exc))


def _emit(rows: list[list[str]], fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(rows)
        return
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        out.write("  ".join(cells).rstrip() + "\n")


def cmd_table2(args, parser, out: TextIO) -> int:
    params = _params(parser, args.p, args.q)
    if not 1 <= args.rounds_max <= 16:
        parser.error("--rounds-max must be in 1..16")
    ns = list(range(1, args.rounds_max + 1))
    values = table2(args.model, params, ns)
    rows = [["mechanism"] + [str(n) for n in ns]]
    for mech, row in values.items():
        rows.append([mech.label] + [round_half_up(v, args.digits) for v in row])
    _emit(rows, args.format, out)
    return 0


def cmd_table3(args, parser, out: TextIO) -> int:
    params = _params(parser, args.p, args.q)
    rows = [["mechanism", "M1", "M2", "M3"]]
    for label, mech in TABLE3_ROWS:
        cells = [
            round_half_up(regular_phase_distribution(mech, model, params, args.rounds).p_tie, args.digits)
            for model in PressureModel
        ]
        rows.append([label] + cells)
    _emit(rows, args.format, out)
    return 0


def _q_values(q_min: Fraction, q_max: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise ValueError("--q-step must be positive")
    qs = []
    k = 0
    while q_min + k * step <= q_max:
        qs.append(q_min + k * step)
        k += 1
    return qs


def cmd_sweep(args, parser, out: TextIO) -> int:
    p = Fraction(args.p)
    q_max = Fraction(args.q_max) if args.q_max is not None else p
    try:
        qs = _q_values(Fraction(args.q_min), q_max, Fraction(args.q_step))
    except ValueError as exc:
        parser.error(str(exc))
    if any(q > p for q in qs) or not 0 <= p <= 1 or any(q < 0 for q in qs):
        parser.error("need 0 <= q <= p <= 1 for every q in the sweep")
    multi = len(args.mechanism) > 1
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow((["mechanism"] if multi else []) + ["p", "q", "win_probability"])
    for mech in args.mechanism:
        if args.exact:
            points = sweep_grid(mech, args.model, [p], qs, args.rounds)
        else:
            points = sweep_grid(mech, args.model, [float(p)], [float(q) for q in qs], args.rounds)
        for (pp, _, value), q in zip(points, qs):
            row = [plain(p), plain(q), significant(value, args.digits)]
            writer.writerow(([mech.value] if multi else []) + row)
    return 0


def cmd_simulate(args, parser, out: TextIO) -> int:
    params = _params(parser, args.p, args.q)
    try:
        cfg = montecarlo.SimConfig(
            args.mechanism[0], args.model, params, args.rounds, args.trials, args.seed, args.max_sd_rounds
        )
    except ValueError as exc:
        parser.error(str(exc))
    try:
        result = montecarlo.estimate_win_probability(cfg, workers=args.workers)
    except montecarlo.AllUnresolved as exc:
        print(f"error: AllUnresolved: {exc}", file=sys.stderr)
        return 1
    fields = [
        ("estimate", significant(result.estimate)),
        ("std_error", significant(result.std_error)),
        ("a_wins", str(result.a_wins)),
        ("b_wins", str(result.b_wins)),
        ("unresolved", str(result.unresolved)),
        ("trials", str(result.trials)),
    ]
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([k for k, _ in fields])
        writer.writerow([v for _, v in fields])
    else:
        for k, v in fields:
            out.write(f"{k}: {v}\n")
    return 0


def monte_carlo_report(trials: int, seed: int) -> analysis.PropositionReport:
    """Every Table 2 cell at five rounds against simulation, within four standard errors."""
    params = Params(Fraction(3, 4), Fraction(2, 3))
    worst = 0.0
    witness = None
    grid = []
    cells = [(model, mech) for model in PressureModel for mech in Mechanism]
    for i, (model, mech) in enumerate(cells):
        exact = float(total_win_probability(mech, model, params, 5).p_a_wins_total)
        res = montecarlo.estimate_win_probability(montecarlo.SimConfig(mech, model, params, 5, trials, seed + i))
        z = abs(res.estimate - exact) / res.std_error
        worst = max(worst, z)
        grid.append((params.p, params.q, 5))
        if witness is None and z > 4:
            witness = {"mechanism": mech.value, "model": model.value, "exact": exact,
                       "estimate": res.estimate, "std_error": res.std_error}
    report = analysis.PropositionReport("MonteCarlo", grid, worst, witness is None, witness)
    report.notes.append("max discrepancy in standard errors")
    return report


def cmd_verify(args, parser, out: TextIO) -> int:
    start = time.perf_counter()
    grid = analysis.default_grid() if args.grid == "default" else analysis.fast_grid()
    trials = args.trials or (1_000_000 if args.grid == "default" else 200_000)
    reports = analysis.run_all(grid)
    reports.append(monte_carlo_report(trials, args.seed))
    failed = [r for r in reports if not r.holds]
    for r in reports:
        out.write(r.summary() + "\n")
        for note in r.notes:
            out.write(f"    {note}\n")
    info = analysis.adjusted_variant_scan(grid)
    out.write(f"(informational) {info.summary()}\n")
    out.write(f"{len(reports) - len(failed)}/{len(reports)} hold; {time.perf_counter() - start:.1f} s\n")
    if failed:
        out.write("FAILED: " + ", ".join(r.proposition_id for r in failed) + "\n")
        return 1
    return 0


def _add_params(sub: argparse.ArgumentParser, p_default="3/4", q_default="2/3") -> None:
    sub.add_argument("--p", type=_number, default=p_default, help="advantaged scoring probability (e.g. 0.75 or 3/4)")
    sub.add_argument("--q", type=_number, default=q_default, help="disadvantaged scoring probability (e.g. 2/3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shootout", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    t2 = subs.add_parser("table2", help="winning probability of A, mechanisms x regular rounds")
    t2.add_argument("--model", type=_model, default=PressureModel.M1)
    _add_params(t2)
    t2.add_argument("--rounds-max", type=int, default=8)
    t2.add_argument("--digits", type=int, default=3)
    t2.add_argument("--format", choices=("pretty", "csv"), default="pretty")
    t2.set_defaults(func=cmd_table2)

    t3 = subs.add_parser("table3", help="probability of reaching sudden death")
    _add_params(t3)
    t3.add_argument("--rounds", type=int, default=5)
    t3.add_argument("--digits", type=int, default=3)
    t3.add_argument("--format", choices=("pretty", "csv"), default="pretty")
    t3.set_defaults(func=cmd_table3)

    sw = subs.add_parser("sweep", help="figure data: winning probability of A as q varies")
    sw.add_argument("--model", type=_model, default=PressureModel.M1)
    sw.add_argument("--mechanism", type=_mechanisms, default=[Mechanism.ALTERNATING],
                    help="one mechanism or a comma-separated list")
    sw.add_argument("--p", type=_number, default="0.65")
    sw.add_argument("--q-min", type=_number, default="0.5")
    sw.add_argument("--q-max", type=_number, default=None, help="defaults to p")
    sw.add_argument("--q-step", type=_number, default="0.01")
    sw.add_argument("--rounds", type=int, default=5)
    sw.add_argument("--digits", type=int, default=15)
    sw.add_argument("--exact", action="store_true", help="rational arithmetic instead of floats")
    sw.set_defaults(func=cmd_sweep)

    sim = subs.add_parser("simulate", help="Monte Carlo estimate of A's winning probability")
    sim.add_argument("--mechanism", type=_mechanisms, default=[Mechanism.STANDARD])
    sim.add_argument("--model", type=_model, default=PressureModel.M1)
    _add_params(sim)
    sim.add_argument("--rounds", type=int, default=5)
    sim.add_argument("--trials", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-sd-rounds", type=int, default=1000)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--format", choices=("text", "csv"), default="text")
    sim.set_defaults(func=cmd_simulate)

    ver = subs.add_parser("verify", help="check the propositions and the Monte Carlo agreement")
    ver.add_argument("--grid", choices=("default", "fast"), default="default")
    ver.add_argument("--trials", type=int, default=None)
    ver.add_argument("--seed", type=int, default=20200)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser, out or sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
