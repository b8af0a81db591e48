"""Command-line front end.

Exit codes: 0 success, 2 bad input or usage, 3 a mathematical invariant
failed (a bug, since every checked statement is a theorem).
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click

from .arith import build_sieve, is_prime
from .errors import InvariantViolation, NotOddSquarefree, SieveTooLarge
from .fourrank import four_rank
from .survey import (
    FAMILY_KINDS,
    Family,
    OutputRecord,
    default_threads,
    density_experiment,
    records,
    tally,
)
from .verify import SUITES, run_suite

EXIT_INPUT = 2
EXIT_INVARIANT = 3


def _fail(msg: str, code: int):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """4-ranks of tame kernels of quadratic fields Q(sqrt d), d odd squarefree."""


@main.command()
@click.option("--d", "d", type=int, required=True, help="odd squarefree d, |d| > 1")
def rank4(d: int):
    """Print the 4-rank record for a single d as JSON."""
    try:
        report = four_rank(d)
    except NotOddSquarefree:
        _fail(f"{d} is not odd squarefree", EXIT_INPUT)
    except InvariantViolation as exc:
        _fail(str(exc), EXIT_INVARIANT)
    click.echo(json.dumps(OutputRecord.from_report(report).to_json_dict()))


@main.command()
@click.option("--family", type=click.Choice(sorted(FAMILY_KINDS)), required=True)
@click.option("--min", "min_abs", type=int, default=None, help="smallest |d| (default: family minimum)")
@click.option("--max", "max_abs", type=int, default=999_999, show_default=True, help="largest |d|")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True,
              help="json: tally object; csv: one record per d")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--threads", type=int, default=None, help="worker processes (env K2_THREADS)")
def survey(family: str, min_abs: Optional[int], max_abs: int, fmt: str, out: Optional[str], threads: Optional[int]):
    """Tally 4-ranks over a family of fields."""
    if min_abs is None:
        min_abs = FAMILY_KINDS[family][2]
    try:
        fam = Family(family, min_abs, max_abs)
        sieve = build_sieve(max(max_abs, 16))
    except (ValueError, SieveTooLarge) as exc:
        _fail(str(exc), EXIT_INPUT)
    threads = threads if threads is not None else default_threads()
    if threads < 1:
        _fail("--threads must be positive", EXIT_INPUT)
    try:
        if fmt == "json":
            text = json.dumps(tally(fam, sieve, threads=threads).to_json_dict()) + "\n"
        else:
            rows = [OutputRecord.CSV_HEADER] + [r.to_csv_row() for r in records(fam, sieve)]
            text = "\n".join(rows) + "\n"
    except InvariantViolation as exc:
        _fail(str(exc), EXIT_INVARIANT)
    _emit(text, out)


@main.command()
@click.option("--p", "p", type=int, required=True, help="fixed prime p = 1 (mod 8)")
@click.option("--family", type=click.Choice(["A", "B"]), required=True)
@click.option("--lmax", type=int, default=1_000_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def density(p: int, family: str, lmax: int, out: Optional[str]):
    """Observed vs theoretical 4-rank densities over primes l."""
    if p % 8 != 1 or not is_prime(p):
        _fail(f"p={p} is not a prime = 1 (mod 8)", EXIT_INPUT)
    try:
        sieve = build_sieve(max(lmax, 16))
        report = density_experiment(p, family, lmax, sieve)
    except (ValueError, SieveTooLarge) as exc:
        _fail(str(exc), EXIT_INPUT)
    _emit(json.dumps(report.to_json_dict()) + "\n", out)


@main.command()
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--max", "max_value", type=int, default=100_000, show_default=True)
def verify(suite: str, max_value: int):
    """Run a property suite; nonzero exit lists counterexamples."""
    try:
        sieve = build_sieve(max(max_value, 16))
    except SieveTooLarge as exc:
        _fail(str(exc), EXIT_INPUT)
    try:
        res = run_suite(suite, max_value, sieve)
    except InvariantViolation as exc:
        _fail(str(exc), EXIT_INVARIANT)
    status = "PASS" if res.passed else "FAIL"
    click.echo(f"{status} {res.name}: {res.checked} checks, {res.n_failures} failures")
    for k, v in res.notes.items():
        if k != "split_proportions":
            click.echo(f"  {k}: {v}")
    for line in res.failures:
        click.echo(f"  counterexample: {line}")
    if not res.passed:
        sys.exit(EXIT_INVARIANT)


if __name__ == "__main__":
    main()
