"""
CLI Components Module.

This module provides the small output helpers shared by all commands. Data goes
to stdout; messages and summaries go to stderr.
"""
import logging
from typing import Sequence

import click

logger = logging.getLogger(__name__)


def show_result(text: str) -> None:
    """
    Print a result line on stdout.

    Args:
        text: The line to print
    """
    click.echo(text)


def show_info(message: str) -> None:
    click.echo(message, err=True)


def show_error(message: str) -> None:
    """
    Print an error message on stderr.

    Args:
        message: Human-readable description of the failure
    """
    click.echo(f"error: {message}", err=True)


def show_failure_summary(failures: Sequence) -> None:
    """
    Print one stderr line per failed recording.

    Args:
        failures: EntryFailure records from an extraction run
    """
    if not failures:
        return
    click.echo(f"{len(failures)} recording(s) failed:", err=True)
    for failure in failures:
        click.echo(f"  {failure.subject_id}/{failure.task.value}: {failure.error}", err=True)
