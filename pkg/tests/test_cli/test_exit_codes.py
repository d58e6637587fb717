# mypy: ignore-errors
import sys

import click
import pytest
import typer

from app.cli.exception_handler import (
    CLICK_ABORTS,
    CLICK_PASSTHROUGH,
    CLICK_USAGE_ERRORS,
    EXIT_DATA,
    EXIT_INTERNAL,
    EXIT_NUMERIC,
    EXIT_USAGE,
)
from app.main import app, cli
from app.utils.config import settings

pytestmark = pytest.mark.integration


def invoke(runner, *args):
    return runner.invoke(app, [str(arg) for arg in args])


def test_data_errors(runner, tmp_path):
    malformed = tmp_path / "malformed.edges"
    malformed.write_text("a b\nc\n")
    empty = tmp_path / "empty.edges"
    empty.write_text("# nothing here\n")

    test_cases = [
        ["sample", tmp_path / "missing.edges"],
        ["sample", malformed],
        ["sample", empty],
        ["embed", tmp_path / "missing.txt", "--identity-features"],
    ]
    for args in test_cases:
        result = invoke(runner, *args, "-o", tmp_path / "out")
        assert result.exit_code == EXIT_DATA, result.output
        assert "Error [2]" in result.output


def test_usage_errors(runner, clique_files, tmp_path):
    edges, features, _ = clique_files

    test_cases = [
        ["sample", edges, "--label-context", 5],
        ["sample", edges, "--walk-length", 5, "--window", 5],
        ["embed", tmp_path / "cooc.txt"],
        ["embed", tmp_path / "cooc.txt", features, "--identity-features"],
    ]
    for args in test_cases:
        result = invoke(runner, *args, "-o", tmp_path / "out")
        assert result.exit_code == EXIT_USAGE, result.output


def test_divergence_is_a_numeric_failure(runner, clique_files, tmp_path):
    edges, _, _ = clique_files
    sampled = tmp_path / "sampled"
    assert invoke(runner, "sample", edges, "--walk-length", 10, "--walks-per-node", 5, "-o", sampled).exit_code == 0

    result = invoke(
        runner, "embed", sampled / "cooccurrence.txt", "--identity-features", "--dim", 4, "--iters", 20, "--step", 10,
        "-o", tmp_path / "embedded",
    )

    assert result.exit_code == EXIT_NUMERIC
    assert "lower --step" in result.output


def test_unexpected_error_is_internal(runner, clique_files, tmp_path, mocker):
    edges, _, _ = clique_files
    mocker.patch(
        "app.cli.commands.sample_command.CooccurrenceService.sample_walks", side_effect=Exception("Unexpected error")
    )

    result = invoke(runner, "sample", edges, "-o", tmp_path / "out")

    assert result.exit_code == EXIT_INTERNAL
    assert "An unexpected error occurred." in result.output


def test_debug_mode_appends_traceback(runner, clique_files, tmp_path, mocker):
    edges, _, _ = clique_files
    mocker.patch.object(settings, "DEBUG_MODE", True)
    mocker.patch(
        "app.cli.commands.sample_command.CooccurrenceService.sample_walks", side_effect=Exception("Unexpected error")
    )

    result = invoke(runner, "sample", edges, "-o", tmp_path / "out")

    assert result.exit_code == EXIT_INTERNAL
    assert "Traceback" in result.output


def test_console_entry_maps_click_usage_errors(monkeypatch):
    test_cases = [
        ["netfactor", "sample"],
        ["netfactor", "embed", "cooc.txt", "--no-such-flag"],
        ["netfactor", "verify", "edges.txt", "--order", "0"],
    ]
    for argv in test_cases:
        monkeypatch.setattr(sys, "argv", argv)
        with pytest.raises(SystemExit) as excinfo:
            cli()
        assert excinfo.value.code == EXIT_USAGE


def test_console_entry_keeps_command_exit_codes(monkeypatch, tmp_path):
    monkeypatch.setattr(sys, "argv", ["netfactor", "verify", str(tmp_path / "missing.edges")])

    with pytest.raises(SystemExit) as excinfo:
        cli()

    assert excinfo.value.code == EXIT_DATA


def test_click_classes_cover_the_build_typer_raises():
    assert issubclass(typer.BadParameter, CLICK_USAGE_ERRORS)
    assert issubclass(click.UsageError, CLICK_USAGE_ERRORS)
    assert issubclass(typer.Abort, CLICK_ABORTS)
    assert issubclass(click.Abort, CLICK_ABORTS)
    for exported in (typer.Exit, typer.Abort, typer.BadParameter):
        assert issubclass(exported, CLICK_PASSTHROUGH)
