import logging

from app.utils.config import settings

logger = logging.getLogger(__name__)


def start_debugger() -> bool:
    """
    Attaches debugpy when RUN_MAIN is set. A CLI stage can finish before an IDE
    connects, so DEBUG_WAIT_FOR_CLIENT blocks until one does.

    Returns:
        bool: Whether the debugger is listening.
    """
    if not settings.RUN_MAIN:
        return False
    try:
        import debugpy  # pylint: disable=import-outside-toplevel

        debugpy.listen(("127.0.0.1", settings.DEBUG_PORT))
        logger.info("Debugger is listening on port %s", settings.DEBUG_PORT)
        if settings.DEBUG_WAIT_FOR_CLIENT:
            logger.info("Waiting for a debugger client before running the command")
            debugpy.wait_for_client()
        return True
    except Exception as e:  # pylint: disable=broad-exception-caught
        logger.error("Failed to start debugger: %s", e)
        return False
