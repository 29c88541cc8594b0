"""Command-line front end.

Reads one system file, runs the delayed or classic analysis, prints the report
to stdout, and optionally dumps every pipeline stage as DOT text and/or a
rendered figure.

Exit codes: 0 ok, 2 structurally singular, 3 unreadable or unparsable input,
4 step budget exceeded, 5 usage error, 6 verification disagreement.
"""

from __future__ import annotations

import os
import sys as _sys
from typing import Optional

import click

from . import driver
from .bigraph import build_graph, full_view, prune_to_highest, to_dot
from .dsl import ParseError, parse, render_report
from .model import RelationKind
from .oracle import TooLarge, brute_singular

_EXIT_BY_STATUS = {
    driver.STATUS_OK: 0,
    driver.STATUS_SINGULAR: 2,
    driver.STATUS_BUDGET: 4,
}


def _stage_view(stage: driver.StageDump):
    graph = build_graph(stage.system, stage.relation)
    if stage.prune_mode is None:
        return full_view(graph)
    return prune_to_highest(graph, stage.prune_mode)


def _emit_stages(result: driver.AnalysisResult, dot_dir: Optional[str],
                 fig_dir: Optional[str]) -> None:
    for stage in result.stages:
        view = _stage_view(stage)
        if dot_dir is not None:
            os.makedirs(dot_dir, exist_ok=True)
            with open(os.path.join(dot_dir, f"{stage.label}.dot"), "w",
                      encoding="utf-8") as handle:
                handle.write(to_dot(view, stage.matching, title=stage.label))
        if fig_dir is not None:
            from .plotting import render_figure

            os.makedirs(fig_dir, exist_ok=True)
            render_figure(view, os.path.join(fig_dir, f"{stage.label}.png"),
                          stage.matching, title=stage.label)


@click.command(name="ddae-analyze")
@click.argument("input_path")
@click.option("--mode", type=click.Choice(["dae", "ddae"]), default="ddae",
              show_default=True, help="Analysis to run.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True, help="Report format.")
@click.option("--oracle-verify", is_flag=True,
              help="Cross-check the singularity precheck against brute-force "
                   "subset enumeration (small systems only).")
@click.option("--emit-dot", "dot_dir", metavar="DIR", default=None,
              help="Write per-stage DOT graphs into DIR.")
@click.option("--emit-figures", "fig_dir", metavar="DIR", default=None,
              help="Render per-stage graph figures (PNG) into DIR.")
@click.option("--max-steps", type=int, default=None, metavar="N",
              help="Update budget for the matching loops.")
def _command(input_path, mode, fmt, oracle_verify, dot_dir, fig_dir,
             max_steps) -> int:
    """Decide how often each equation of a delay DAE must be shifted and
    differentiated so that every equation matches a highest variable."""
    try:
        with open(input_path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        click.echo(f"error: cannot read {input_path}: {exc.strerror}", err=True)
        return 3
    try:
        system = parse(text)
    except ParseError as exc:
        click.echo(f"error: {input_path}:{exc}", err=True)
        return 3

    if mode == "dae":
        try:
            result = driver.analyze_dae(system, max_steps)
        except driver.DelayedOccurrencePresent as exc:
            click.echo(f"error: {exc}", err=True)
            return 5
        oracle_rel = RelationKind.EQUAL_DAE
    else:
        result = driver.analyze_ddae(system, max_steps)
        oracle_rel = RelationKind.EQUAL_DDAE

    click.echo(render_report(result, fmt), nl=False)
    _emit_stages(result, dot_dir, fig_dir)

    if oracle_verify:
        try:
            witness = brute_singular(system, oracle_rel)
        except TooLarge as exc:
            click.echo(f"error: --oracle-verify: {exc}", err=True)
            return 5
        singular = result.status == driver.STATUS_SINGULAR
        if singular != (witness is not None):
            click.echo("error: precheck disagrees with brute-force oracle",
                       err=True)
            return 6

    return _EXIT_BY_STATUS[result.status]


def main(argv: Optional[list[str]] = None) -> int:
    try:
        code = _command.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 5
    except click.exceptions.Abort:
        return 5
    return int(code or 0)


def run() -> None:
    _sys.exit(main())
