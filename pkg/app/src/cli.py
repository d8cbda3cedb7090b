"""
Command line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

import sys

import click
from pydantic import BaseModel

from bimod import graded_hom_series
from calculus import negative_controls, relation_suite, verify_catalog
from complexes import expected_shape, matches_shape, parse_word, reduce_power
from errors import CheckFailedResponse, SoergelError, UsageErrorResponse
from grothendieck import FormValue, check_against_hom, evaluate
from models import HomReport, K0Report, ReduceReport, VerifyReport
from threestrand import obstruction_report
from utils.config import DEFAULT_MAX_DEGREE, get_logger

logger = get_logger("cli")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


def _emit(model: BaseModel, as_json: bool, text: str):
    click.echo(model.model_dump_json(indent=2) if as_json else text)


def _usage(e: Exception, as_json: bool):
    if as_json:
        click.echo(UsageErrorResponse(detail=str(e)).model_dump_json(indent=2))
        sys.exit(EXIT_USAGE)
    raise click.UsageError(str(e))


def _finish(passed: bool, as_json: bool, what: str):
    if passed:
        sys.exit(EXIT_OK)
    if as_json:
        click.echo(CheckFailedResponse(detail=what).model_dump_json(), err=True)
    else:
        click.echo(f"FAILED: {what}", err=True)
    sys.exit(EXIT_CHECK_FAILED)


@click.group()
def cli():
    """Exact computations with two-strand odd Soergel bimodules."""


@cli.command()
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def verify(as_json: bool):
    """Check every catalogued map and relation, and that the negative controls fail."""
    catalog = verify_catalog()
    relations = relation_suite()
    controls = negative_controls()
    passed = all(r.passed for r in catalog + relations) and not any(r.passed for r in controls)
    report = VerifyReport(passed=passed, catalog=catalog, relations=relations, negative_controls=controls)
    lines = [f"{'pass' if r.passed else 'FAIL'}  map {r.name} {r.reason}".rstrip() for r in catalog]
    lines += [f"{r.status}  {r.name}: {r.lhs} = {r.rhs}" for r in relations]
    lines += [f"{'fails as expected' if not r.passed else 'UNEXPECTED PASS'}  {r.name}" for r in controls]
    total = len(catalog) + len(relations)
    lines.append(f"{sum(r.passed for r in catalog + relations)}/{total} checks passed")
    _emit(report, as_json, "\n".join(lines))
    _finish(passed, as_json, "relation suite")


@cli.command()
@click.option("--power", "n", type=click.IntRange(min=1), required=True, help="Tensor power of the Rouquier complex.")
@click.option("--inverse", is_flag=True, help="Use the inverse complex R{1} -> Bbar.")
@click.option("--json", "as_json", is_flag=True)
def reduce(n: int, inverse: bool, as_json: bool):
    """Print the minimal complex of the n-th power of the (inverse) Rouquier complex."""
    try:
        C, trace = reduce_power(n, inverse)
    except SoergelError as e:
        logger.error("power %d did not reduce: %s", n, e)
        _finish(False, as_json, str(e))
    logger.info("power %d%s reduced in %d steps", n, " (inverse)" if inverse else "", len(trace.steps))
    shape = matches_shape(C, expected_shape(n, inverse))
    report = ReduceReport(power=n, inverse=inverse, text=str(C), complex=C.to_document(), shape=shape, trace=trace)
    text = f"{C}\n{len(trace.steps)} eliminations, shape {'matches' if shape.passed else 'differs: ' + shape.reason}"
    _emit(report, as_json, text)
    _finish(shape.passed, as_json, shape.reason)


@cli.command()
@click.option("--source", required=True, help="Word such as B*U{1}.")
@click.option("--target", required=True)
@click.option("--max-degree", "d_max", type=int, default=DEFAULT_MAX_DEGREE, show_default=True)
@click.option("--check", is_flag=True, help="Compare with the pairing on the Grothendieck ring.")
@click.option("--json", "as_json", is_flag=True)
def hom(source: str, target: str, d_max: int, check: bool, as_json: bool):
    """Graded dimensions of the bimodule maps SOURCE -> TARGET."""
    try:
        s, t = parse_word(source), parse_word(target)
    except SoergelError as e:
        _usage(e, as_json)
    series = graded_hom_series(s.obj, t.obj, d_max)
    report = HomReport(source=source, target=target, series=series)
    text = series.text()
    if check:
        report.check = check_against_hom(source, target, d_max)
        text += f"\npairing: {'agrees' if report.check.passed else 'DISAGREES'}"
    _emit(report, as_json, text)
    _finish(report.check is None or report.check.passed, as_json, "Hom dimensions disagree with the pairing")


@cli.command()
@click.option("--expr", required=True, help="e.g. 'b*b', 'tau(q*b)', 'form(b, 1)', 'trace(b*c)'.")
@click.option("--series", "cutoff", type=int, default=None, help="Expand a pairing value up to this degree.")
@click.option("--json", "as_json", is_flag=True)
def k0(expr: str, cutoff: int | None, as_json: bool):
    """Evaluate an expression in the Grothendieck ring."""
    try:
        value = evaluate(expr)
    except SoergelError as e:
        _usage(e, as_json)
    report = K0Report(expr=expr, value=str(value))
    text = str(value)
    if cutoff is not None:
        if not isinstance(value, FormValue):
            _usage(click.BadParameter("--series needs form(...) or trace(...)"), as_json)
        report.series = value.series(cutoff)
        text += "\n" + (", ".join(f"{n}@{d}" for d, n in report.series.items()) or "0")
    _emit(report, as_json, text)
    _finish(True, as_json, "k0")


@cli.command()
@click.option("--max-degree", "d_max", type=int, default=DEFAULT_MAX_DEGREE, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def obstruct(d_max: int, as_json: bool):
    """Check that B_121hat -> B1*B2*B1 -> Bbar1 is exact and does not split."""
    report = obstruction_report(d_max)
    lines = [
        f"inclusion maps:      {report.inclusion_dim}",
        f"injective up to:     {report.injective_upto}",
        f"cokernel is Bbar1:   {report.cokernel_match}",
        f"sections:            {report.section_dim}",
    ]
    if report.insufficient_degree:
        lines.append(f"max degree {d_max} is too small to constrain R^[2]")
    _emit(report, as_json, "\n".join(lines))
    _finish(report.passed, as_json, "three-strand obstruction")


def run(argv: list[str] | None = None) -> int:
    """Run the command line and return its exit code instead of exiting."""
    try:
        cli.main(args=argv, prog_name="soergel")
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
