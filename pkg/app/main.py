import logging
import sys
from typing import Annotated, Optional

import typer

from app.cli.commands.embed_command import embed
from app.cli.commands.eval_command import eval_app
from app.cli.commands.sample_command import sample
from app.cli.commands.split_command import split
from app.cli.commands.verify_command import verify
from app.cli.exception_handler import CLICK_ABORTS, CLICK_USAGE_ERRORS, EXIT_USAGE
from app.utils.config import settings
from app.utils.debugger import start_debugger

logger = logging.getLogger(__name__)

# Initialize Typer app
app = typer.Typer(
    name=settings.PROJECT_NAME,
    help=settings.DESCRIPTION,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)


@app.callback()
def main(
    threads: Annotated[
        Optional[int], typer.Option("--threads", min=1, help="Worker threads per stage (default: all cores).")
    ] = None,
) -> None:
    # Initialize logging
    logging.basicConfig(level=settings.LOG_LEVEL)
    if threads is not None:
        settings.THREADS = threads
    logger.info(f"{settings.PROJECT_NAME} {settings.VERSION} running with {settings.WORKERS} worker threads")

    # Start debugger if enabled
    start_debugger()


# Register commands
app.command("sample")(sample)
app.command("embed")(embed)
app.command("verify")(verify)
app.command("split")(split)
app.add_typer(eval_app, name="eval")


def cli() -> None:
    """
    Console entry point. Click reports its own usage errors with status 2, which
    collides with the data-error code, so they are remapped to the usage code here.
    """
    command = typer.main.get_command(app)
    try:
        result = command.main(standalone_mode=False)
    except CLICK_USAGE_ERRORS as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except CLICK_ABORTS:
        typer.echo("Aborted.", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(result if isinstance(result, int) else 0)


if __name__ == "__main__":
    cli()
