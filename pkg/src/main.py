"""
Metaconflict Partitioner CLI Application.

Provides a command-line interface for partitioning corpora of evidences
into events by minimizing the metaconflict.
"""

import logging
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from src.belief import CombinationError, Evidence, precombine_specific
from src.config import Settings, get_settings
from src.corpus import (
    BUNDLED_CORPORA,
    CorpusDocument,
    CorpusLoader,
    CorpusParseError,
    CorpusParser,
    CorpusValidationError,
    CorpusValidator,
    bundled_corpus_text,
    corpus_hash,
)
from src.criterion import PartitionError, score_partition
from src.models import Corpus, PartitionReport
from src.optimizer import MetaconflictSolver, is_local_optimum
from src.oracle import OracleTooLargeError, brute_force_min_mcf, enumerated_subset_conflicts
from src.output import ReportBuilder, ReportFormat, ReportGenerator, compare_with_oracle

# Create Typer app
app = typer.Typer(
    name="metaconflict",
    help="Partition Dempster-Shafer evidences into events by minimizing metaconflict",
    add_completion=False,
)

console = Console()
err_console = Console(stderr=True)


@app.command()
def run(
    corpus_file: Annotated[
        Path,
        typer.Argument(help="Corpus file, or the name of a bundled corpus"),
    ],
    output: Annotated[
        Optional[Path],
        typer.Option("--output", "-o", help="Output file path for the report"),
    ] = None,
    format: Annotated[
        ReportFormat,
        typer.Option("--format", "-f", help="Output format"),
    ] = ReportFormat.TEXT,
    trace: Annotated[
        bool,
        typer.Option("--trace/--no-trace", help="Include the step-by-step solver trace"),
    ] = False,
    oracle: Annotated[
        bool,
        typer.Option("--oracle", help="Compare with an exhaustive search (small corpora only)"),
    ] = False,
    subsets: Annotated[
        Optional[int],
        typer.Option("--subsets", "-r", min=1, help="Solve for exactly this number of subsets"),
    ] = None,
    tolerance: Annotated[
        Optional[float],
        typer.Option("--tolerance", help="Tolerance for mass sums"),
    ] = None,
    precombine: Annotated[
        Optional[bool],
        typer.Option(
            "--precombine/--no-precombine",
            help="Combine evidences specific to the same event before solving",
        ),
    ] = None,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Show detailed output and debug logs"),
    ] = False,
) -> None:
    """
    Partition the evidences of a corpus.

    Writes a report with the chosen number of subsets, the partition, its
    conflicts, metaconflict, plausibility and stability. The report goes to
    standard output unless --output is given.
    """
    settings = get_settings()
    _configure_logging("DEBUG" if verbose else settings.log_level)

    try:
        limit = tolerance if tolerance is not None else settings.mass_tolerance
        if not 0.0 < limit <= 1e-3:
            err_console.print(f"[red]Error:[/red] Tolerance must be in (0, 0.001], got {limit}")
            raise typer.Exit(1)

        corpus = _load(corpus_file, limit)
        report = _solve(
            corpus,
            settings,
            tolerance=limit,
            subsets=subsets,
            include_trace=trace,
            with_oracle=oracle,
            precombine=settings.precombine_specific if precombine is None else precombine,
        )

        if verbose:
            _display_summary(report)

        generator = ReportGenerator()
        if output:
            saved_path = generator.save(report, output, format)
            err_console.print(f"[green]Report saved to:[/green] {saved_path}")
        else:
            typer.echo(generator.generate(report, format), nl=False)

    except CorpusParseError as e:
        err_console.print(f"[red]Corpus Parse Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)
    except CorpusValidationError as e:
        err_console.print(f"[red]Corpus Validation Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)
    except CombinationError as e:
        err_console.print(f"[red]Combination Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)
    except PartitionError as e:
        err_console.print(f"[red]Partition Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)
    except OracleTooLargeError as e:
        err_console.print(f"[red]Oracle Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)


@app.command()
def validate(
    corpus_file: Annotated[
        Path,
        typer.Argument(help="Corpus file, or the name of a bundled corpus"),
    ],
    tolerance: Annotated[
        Optional[float],
        typer.Option("--tolerance", help="Tolerance for mass sums"),
    ] = None,
    precombine: Annotated[
        Optional[bool],
        typer.Option(
            "--precombine/--no-precombine",
            help="Also check the corpus once evidences specific to one event are merged",
        ),
    ] = None,
) -> None:
    """
    Validate a corpus without solving it.

    Lists the evidences and every validation issue found.
    """
    settings = get_settings()
    limit = tolerance if tolerance is not None else settings.mass_tolerance
    try:
        text = _read(corpus_file, limit)
        document = CorpusParser().parse(text)
    except CorpusParseError as e:
        err_console.print(f"[red]Error:[/red] {escape(str(e))}")
        raise typer.Exit(1)

    is_valid, issues = CorpusValidator(limit).validate(document)
    if is_valid and (settings.precombine_specific if precombine is None else precombine):
        issues = _merge_issues(document, limit)
        is_valid = not issues

    console.print(Panel(f"[bold]{document.title or corpus_file.name}[/bold]", title="Corpus"))
    console.print(f"Actions: {', '.join(document.actions) or '-'}")
    console.print(f"Events: {', '.join(document.events) or '-'}")

    table = Table(title="Evidences")
    table.add_column("Id", style="cyan")
    table.add_column("Line", justify="right")
    table.add_column("Focal elements")
    for section in document.evidences:
        focals = "; ".join(
            f"{', '.join(f.actions)} @ {', '.join(f.events)} = {f.mass}" for f in section.focals
        )
        table.add_row(escape(section.evidence_id), str(section.line_number), escape(focals))
    console.print(table)

    if is_valid:
        console.print("\n[green]✓ Corpus is valid[/green]")
    else:
        console.print("\n[yellow]⚠ Validation issues found:[/yellow]")
        for issue in issues:
            console.print(f"  • {escape(issue)}")
        raise typer.Exit(1)


@app.command()
def corpora() -> None:
    """List the bundled example corpora."""
    loader = CorpusLoader()
    table = Table(title="Bundled Corpora")
    table.add_column("Name", style="cyan")
    table.add_column("Title")
    table.add_column("Evidences", justify="right")
    table.add_column("Events", justify="right")
    for name in BUNDLED_CORPORA:
        corpus = loader.loads(bundled_corpus_text(name))
        table.add_row(
            name,
            corpus.title,
            str(len(corpus.evidences)),
            ", ".join(str(count) for count in corpus.distribution.support),
        )
    console.print(table)


# ==============================================================================
# Helpers
# ==============================================================================


def _configure_logging(level: str) -> None:
    """Send library logs to stderr through rich."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _read(corpus_file: Path, tolerance: float) -> str:
    if not corpus_file.exists() and str(corpus_file) in BUNDLED_CORPORA:
        return bundled_corpus_text(str(corpus_file))
    return CorpusLoader(tolerance).read_text(corpus_file)


def _load(corpus_file: Path, tolerance: float) -> Corpus:
    return CorpusLoader(tolerance).loads(_read(corpus_file, tolerance))


def _merge_issues(document: CorpusDocument, tolerance: float) -> list[str]:
    """Issues that only appear once same-event evidences are merged."""
    try:
        corpus = CorpusLoader(tolerance).build(document)
        return CorpusValidator(tolerance).validate_merged(
            corpus, precombine_specific(corpus.evidences)
        )
    except CorpusValidationError as e:
        return e.errors
    except CombinationError as e:
        return [str(e)]


def _evidences(corpus: Corpus, precombine: bool) -> list[Evidence]:
    """Corpus evidences, merged per specific event when asked."""
    if not precombine:
        return list(corpus.evidences)
    evidences = precombine_specific(corpus.evidences)
    issues = CorpusValidator().validate_merged(corpus, evidences)
    if issues:
        raise CorpusValidationError([*issues, "Run with --no-precombine to keep them separate"])
    return evidences


def _solve(
    corpus: Corpus,
    settings: Settings,
    tolerance: float,
    subsets: int | None,
    include_trace: bool,
    with_oracle: bool,
    precombine: bool,
) -> PartitionReport:
    """Solve a corpus and build its report."""
    evidences = _evidences(corpus, precombine)
    solver = MetaconflictSolver(settings)
    if subsets is None:
        result = solver.solve(evidences, corpus.distribution)
    else:
        result = solver.solve_fixed(evidences, corpus.distribution, subsets)

    comparison = None
    if with_oracle:
        optimum = brute_force_min_mcf(
            evidences,
            corpus.distribution,
            r=subsets,
            max_evidences=settings.oracle_max_evidences,
        )
        comparison = compare_with_oracle(
            result,
            optimum,
            tolerance=tolerance,
            local_optimum=is_local_optimum(
                result.partition, evidences, settings.improvement_threshold
            ),
            subset_conflicts=score_partition(
                result.partition, evidences, corpus.distribution
            ).subset_conflicts,
            enumerated_conflicts=enumerated_subset_conflicts(
                result.partition, evidences, settings.oracle_max_selections
            ),
        )

    return ReportBuilder().build(
        corpus,
        evidences,
        result,
        corpus_hash=corpus_hash(corpus),
        include_trace=include_trace,
        oracle=comparison,
    )


def _display_summary(report: PartitionReport) -> None:
    """Show the per-count runs in a formatted table."""
    color = "green" if report.stable else "yellow"
    err_console.print(
        Panel(
            f"[{color}][bold]r = {report.subset_count}[/bold]  "
            f"Mcf {report.metaconflict:.6f}  Pls {report.plausibility:.6f}[/{color}]",
            title=report.title or "Result",
        )
    )

    table = Table(title="Subset Counts Visited")
    table.add_column("r", justify="right", style="cyan")
    table.add_column("Mcf", justify="right")
    table.add_column("Transfers", justify="right")
    table.add_column("Partition")
    for run in report.runs:
        blocks = " ".join("{" + ", ".join(block) + "}" for block in run.blocks)
        table.add_row(str(run.subset_count), f"{run.metaconflict:.6f}", str(run.transfers), blocks)
    err_console.print(table)


if __name__ == "__main__":
    app()
