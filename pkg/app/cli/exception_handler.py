"""
Global Exception Handling for the CLI

Maps service-layer exceptions to process exit codes and prints a one-line
error to stderr. Tracebacks are appended when DEBUG_MODE is on.

Exit codes:
- 0 success
- 1 usage error (bad flags, inconsistent arguments, invalid configuration values)
- 2 data error (malformed, missing or insufficient input)
- 3 numeric failure (divergence, inconsistent Q/D pairing)
- 4 unexpected internal error
"""

import functools
import logging
import traceback
from typing import Any, Callable, TypeVar

import click
import typer
from pydantic import ValidationError

from app.core.exceptions import (
    DuplicateResourceException,
    InvalidInputException,
    NumericFailureException,
    ResourceNotFoundException,
    UsageException,
)
from app.utils.config import settings

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3
EXIT_INTERNAL = 4

# Exception mapping dictionary; subclasses resolve through their MRO
EXCEPTION_MAP: dict[type[BaseException], tuple[int, str]] = {
    UsageException: (EXIT_USAGE, "Usage Error"),
    ValidationError: (EXIT_USAGE, "Validation Error"),
    ResourceNotFoundException: (EXIT_DATA, "Resource Not Found"),
    DuplicateResourceException: (EXIT_DATA, "Duplicate Resource"),
    InvalidInputException: (EXIT_DATA, "Invalid Input"),
    NumericFailureException: (EXIT_NUMERIC, "Numeric Failure"),
}

F = TypeVar("F", bound=Callable[..., Any])


def click_exception_classes(name: str) -> tuple[type[BaseException], ...]:
    """
    The named click exception class from the click package and from the click build
    typer raises through, when typer bundles its own copy.
    """
    classes = {getattr(click.exceptions, name)}
    for exported in (typer.BadParameter, typer.Abort, typer.Exit):
        classes.update(base for base in exported.__mro__ if base.__name__ == name)
    return tuple(classes)


CLICK_USAGE_ERRORS = click_exception_classes("UsageError")
CLICK_ABORTS = click_exception_classes("Abort")
CLICK_PASSTHROUGH = (
    *click_exception_classes("Exit"),
    *CLICK_ABORTS,
    *click_exception_classes("ClickException"),
)


def resolve_exit_code(exc: BaseException) -> tuple[int, str]:
    for cls in type(exc).__mro__:
        if cls in EXCEPTION_MAP:
            return EXCEPTION_MAP[cls]
    return EXIT_INTERNAL, "Internal Error"


def global_exception_handler(exc: Exception) -> int:
    """
    Handles all defined and unexpected exceptions and returns the exit code.
    Includes traceback in debug mode for easier debugging during development.

    Args:
        exc (Exception): The raised exception.

    Returns:
        int: The process exit code.
    """
    # If its a Validation Error, print a human-readable message
    if isinstance(exc, ValidationError):
        return return_human_readable_validation_error(exc)

    exit_code, error_message = resolve_exit_code(exc)

    # Include traceback in debug mode
    include_traceback = settings.DEBUG_MODE
    traceback_details = traceback.format_exc() if include_traceback else None

    log_level = logging.WARNING if exit_code < EXIT_NUMERIC else logging.ERROR
    logger.log(
        log_level,
        "%s: %s\nTraceback:\n%s",
        error_message,
        str(exc),
        traceback_details or "No traceback available.",
    )

    details = str(exc) if exit_code != EXIT_INTERNAL else "An unexpected error occurred."
    typer.echo(f"Error [{exit_code}] {error_message}: {details}", err=True)
    if include_traceback and traceback_details:
        typer.echo(traceback_details, err=True)
    return exit_code


def return_human_readable_validation_error(exc: ValidationError) -> int:
    typer.echo(f"Error [{EXIT_USAGE}] Validation Error:", err=True)
    for error in exc.errors():
        field = error["loc"][-1] if error["loc"] else exc.title
        typer.echo(f"  {field}: {error['msg']}", err=True)
    return EXIT_USAGE


def handle_errors(func: F) -> F:
    """Wraps a command so that domain exceptions end the process with their mapped exit code."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except CLICK_PASSTHROUGH:
            raise
        except Exception as exc:  # pylint: disable=broad-exception-caught
            raise typer.Exit(code=global_exception_handler(exc)) from exc

    return wrapper  # type: ignore[return-value]
