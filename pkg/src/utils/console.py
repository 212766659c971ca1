"""Colored console output helpers, result tables and progress bars using Rich."""

from typing import Any, Iterable, Mapping, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

# Shared console instance, stdout so print() and Rich output stay on the same stream
console = Console(stderr=False)


def print_error(msg: str) -> None:
    """Print an error message in red."""
    console.print(msg, style="bold red")


def print_warn(msg: str) -> None:
    """Print a warning message in yellow."""
    console.print(msg, style="yellow")


def print_success(msg: str) -> None:
    """Print a success message in green."""
    console.print(msg, style="bold green")


def print_status(msg: str) -> None:
    """Print an informational status message."""
    console.print(msg)


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.4g}"
    if isinstance(value, Mapping):
        return ", ".join(f"{k}={_format_value(v)}" for k, v in value.items())
    return str(value)


def print_report_table(
    title: str,
    rows: Mapping[str, Any],
    keys: Optional[Iterable[str]] = None,
) -> None:
    """Print a two-column key/value table.

    Args:
        title: Table title.
        rows: Mapping of names to values; floats are shown with 4 significant digits.
        keys: Optional subset and order of keys to show.
    """
    table = Table(title=title, show_header=True, header_style="bold blue")
    table.add_column("Quantity", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")
    for key in keys if keys is not None else rows.keys():
        if key in rows:
            table.add_row(key, _format_value(rows[key]))
    console.print(table)


def create_progress(disable: bool = False) -> Progress:
    """Create a Rich Progress bar that stays pinned at the bottom.

    With ``disable`` the bar renders nothing. Use as a context manager::

        with create_progress() as progress:
            task = progress.add_task("bits", total=len(sample))
            for bit in sample:
                ...
                progress.update(task, advance=1)
    """
    from rich.table import Column

    return Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}", table_column=Column(min_width=30)),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=False,
        disable=disable,
    )


def get_rich_logging_handler() -> RichHandler:
    """Return a RichHandler that coexists with Rich progress bars."""
    return RichHandler(
        console=console,
        show_path=False,
        show_time=True,
        show_level=True,
        rich_tracebacks=True,
        tracebacks_show_locals=False,
        omit_repeated_times=False,
    )
