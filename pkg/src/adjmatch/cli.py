"""Command-line driver: ``adjmatch {exact,compare,simulate,check}``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid arguments,
3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .combinatorics import DeckSpec, count_permutations, factorial
from .exact import (
    CEILING_ENV,
    ExactDistribution,
    InconsistencyError,
    ResourceGuardError,
    exact_distribution,
)
from .moments import (
    ApproxDistribution,
    binomial_pmfs,
    expected_matches,
    poisson_distribution,
    rendered_distribution,
    soon_bound,
    total_variation,
    total_variation_exact,
    variance_matches,
)
from .oracle import DEFAULT_CAP, OracleTooLargeError, brute_force_alpha
from .render import format_fixed, format_fraction
from .simulation import SimulationResult, simulate, write_histogram_csv

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adjmatch",
        description="Adjacent same-rank matches in a shuffled k-suit, n-rank deck.",
        epilog=f"Set {CEILING_ENV} to change the summation-term ceiling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def deck_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--suits", type=_positive, required=True)
        p.add_argument("--ranks", type=_positive, required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)

    p = sub.add_parser("exact", help="exact distribution of the match count")
    deck_args(p)
    p.add_argument("--precision", type=_non_negative, default=5)
    common(p)

    p = sub.add_parser("compare", help="exact vs binomial vs Poisson, with distances")
    deck_args(p)
    p.add_argument("--precision", type=_non_negative, default=5)
    common(p)

    p = sub.add_parser("simulate", help="Monte Carlo histogram of match counts")
    deck_args(p)
    p.add_argument("--trials", type=_positive, default=100_000)
    p.add_argument("--seed", type=_non_negative, default=0)
    common(p)

    p = sub.add_parser("check", help="compare exact counts with brute force")
    p.add_argument("--max-cards", type=_positive, default=12)
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows: list[list[object]], footer: list[list[object]] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    if footer:
        buf.write("\n")
        writer.writerows(footer)
    return buf.getvalue()


def _summary_moments(dist: ExactDistribution, places: int) -> dict[str, str]:
    deck = dist.deck
    variance = variance_matches(deck) if deck.cards >= 2 else Fraction(0)
    return {
        "total": str(dist.total),
        "mean": format_fraction(expected_matches(deck)),
        "variance": format_fraction(variance),
        "mean_decimal": format_fixed(expected_matches(deck), places),
        "variance_decimal": format_fixed(variance, places),
    }


def cmd_exact(args: argparse.Namespace) -> int:
    deck = DeckSpec(args.suits, args.ranks)
    dist = exact_distribution(deck, workers=args.threads)
    places = args.precision
    summary = _summary_moments(dist, places)
    if args.format == "json":
        payload = {
            "deck": {"suits": deck.suits, "ranks": deck.ranks},
            "rows": [
                {"r": r, "alpha": str(a), "p_exact": dist.render(r, places)}
                for r, a in enumerate(dist.alpha)
            ],
            "summary": summary,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return EXIT_OK
    rows: list[list[object]] = [["r", "alpha", "probability"]]
    rows += [[r, a, dist.render(r, places)] for r, a in enumerate(dist.alpha)]
    footer: list[list[object]] = [
        ["quantity", "exact", "decimal"],
        ["total", summary["total"], summary["total"]],
        ["mean", summary["mean"], summary["mean_decimal"]],
        ["variance", summary["variance"], summary["variance_decimal"]],
    ]
    _emit(_csv_text(rows, footer), args.out)
    return EXIT_OK


def _poisson_for(deck: DeckSpec) -> ApproxDistribution:
    lam = deck.suits - 1
    if lam == 0:
        return ApproxDistribution("poisson", (1.0,))
    return poisson_distribution(float(lam), deck.max_matches)


def comparison(deck: DeckSpec, workers: int = 1) -> dict[str, object]:
    """All numbers behind ``compare``: exact, binomial and Poisson columns plus distances."""
    dist = exact_distribution(deck, workers=workers)
    binom = binomial_pmfs(deck)
    poisson = _poisson_for(deck)
    dtv_binomial = total_variation_exact(dist.probabilities(), binom)
    dtv_poisson = total_variation(rendered_distribution(dist), poisson)
    result: dict[str, object] = {
        "dist": dist,
        "binomial": binom,
        "poisson": poisson,
        "dtv_binomial": float(dtv_binomial),
        "dtv_binomial_exact": dtv_binomial,
        "dtv_poisson": dtv_poisson,
        "soon": None,
    }
    if deck.suits >= 2 and deck.ranks >= 2 and deck.cards >= 4:
        result["soon"] = soon_bound(deck)
    return result


def cmd_compare(args: argparse.Namespace) -> int:
    deck = DeckSpec(args.suits, args.ranks)
    data = comparison(deck, args.threads)
    dist: ExactDistribution = data["dist"]  # type: ignore[assignment]
    binom: list[Fraction] = data["binomial"]  # type: ignore[assignment]
    poisson: ApproxDistribution = data["poisson"]  # type: ignore[assignment]
    places = args.precision
    table = [
        {
            "r": r,
            "alpha": str(dist.alpha[r]),
            "p_exact": dist.render(r, places),
            "p_binomial": format_fixed(binom[r], places),
            "p_poisson": format_fixed(Fraction(poisson[r]), places),
        }
        for r in range(deck.max_matches + 1)
    ]
    summary: dict[str, object] = dict(_summary_moments(dist, places))
    summary["dtv_binomial"] = data["dtv_binomial"]
    summary["dtv_poisson"] = data["dtv_poisson"]
    soon = data["soon"]
    if soon is not None:
        summary["soon_bound"] = soon.soon_bound
        summary["sum_abs_cov"] = float(soon.sum_abs_cov)
        summary["soon_constant"] = soon.soon_constant
    if args.format == "json":
        payload = {"deck": {"suits": deck.suits, "ranks": deck.ranks}, "rows": table, "summary": summary}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return EXIT_OK
    rows: list[list[object]] = [["r", "p_exact", "p_binomial", "p_poisson"]]
    rows += [[t["r"], t["p_exact"], t["p_binomial"], t["p_poisson"]] for t in table]
    footer: list[list[object]] = [["quantity", "value"]]
    for key, value in summary.items():
        footer.append([key, repr(value) if isinstance(value, float) else value])
    _emit(_csv_text(rows, footer), args.out)
    return EXIT_OK


def _simulation_json(result: SimulationResult) -> str:
    payload = {
        "deck": {"suits": result.deck.suits, "ranks": result.deck.ranks},
        "trials": result.trials,
        "seed": result.seed,
        "histogram": [
            {"matches": r, "count": c, "frequency": format_fixed(Fraction(c, result.trials), 6)}
            for r, c in enumerate(result.histogram)
        ],
        "empirical_mean": result.empirical_mean,
    }
    return json.dumps(payload, indent=2) + "\n"


def cmd_simulate(args: argparse.Namespace) -> int:
    deck = DeckSpec(args.suits, args.ranks)
    if args.seed >= 2**64:
        raise UsageError("--seed must fit in 64 bits")
    result = simulate(deck, args.trials, args.seed, workers=args.threads)
    if args.format == "json":
        text = _simulation_json(result)
    else:
        buf = io.StringIO()
        write_histogram_csv(result, buf)
        text = buf.getvalue()
    _emit(text, args.out)
    summary = f"trials={result.trials} seed={result.seed} mean={result.empirical_mean:.6f}\n"
    (sys.stdout if args.out else sys.stderr).write(summary)
    return EXIT_OK


def check_deck(deck: DeckSpec) -> list[str]:
    """Problems found comparing the exact route with brute force; empty when clean."""
    problems = []
    dist = exact_distribution(deck)
    truth = brute_force_alpha(deck, cap=max(DEFAULT_CAP, deck.cards))
    for r, (a, b) in enumerate(zip(dist.alpha, truth.alpha)):
        if a != b:
            problems.append(f"k={deck.suits} n={deck.ranks} r={r}: exact {a} != oracle {b}")
    if dist.total != count_permutations(deck):
        problems.append(f"k={deck.suits} n={deck.ranks}: total {dist.total} is wrong")
    if dist.alpha[-1] != factorial(deck.ranks):
        problems.append(f"k={deck.suits} n={deck.ranks}: top count is not n!")
    if dist.mean() != expected_matches(deck):
        problems.append(f"k={deck.suits} n={deck.ranks}: mean {dist.mean()} != k-1")
    if deck.cards >= 2 and dist.variance() != variance_matches(deck):
        problems.append(f"k={deck.suits} n={deck.ranks}: variance {dist.variance()} is wrong")
    return problems


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    if args.max_cards > DEFAULT_CAP:
        raise UsageError(f"--max-cards must be at most {DEFAULT_CAP}")
    failed = 0
    for k in range(1, args.max_cards + 1):
        for n in range(1, args.max_cards // k + 1):
            deck = DeckSpec(k, n)
            try:
                problems = check_deck(deck)
            except InconsistencyError as exc:
                problems = [f"k={k} n={n}: {exc}"]
            if problems:
                failed += 1
                for line in problems:
                    out.write(f"FAIL {line}\n")
            else:
                out.write(f"PASS k={k} n={n} cards={deck.cards}\n")
    out.write("all decks agree\n" if not failed else f"{failed} deck(s) disagree\n")
    return EXIT_MISMATCH if failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "exact":
            return cmd_exact(args)
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        return cmd_check(args, sys.stdout)
    except ResourceGuardError as exc:
        print(f"adjmatch: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, OracleTooLargeError, ValueError) as exc:
        print(f"adjmatch: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
