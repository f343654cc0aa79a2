"""Maps the exception hierarchy to structured error output and exit codes."""

import sys
from typing import Callable, Optional, TextIO

from pydantic import ValidationError as PydanticValidationError

from cgnn.exceptions import CGNNError
from cgnn.logging_config import setup_logger
from cgnn.schemas.common import ErrorResponse

logger = setup_logger(__name__)

INTERNAL_ERROR_EXIT_CODE = 1
INVALID_CONFIG_EXIT_CODE = 2


def _emit(body: ErrorResponse, stream: TextIO) -> None:
    stream.write(body.model_dump_json() + "\n")
    stream.flush()


def handle_errors(command: Callable[[], int], stream: Optional[TextIO] = None) -> int:
    """Run ``command`` and turn failures into an ``ErrorResponse`` plus exit code."""
    if stream is None:
        stream = sys.stdout
    try:
        return command()
    except CGNNError as exc:
        logger.warning(f"Command failed: {exc.error_code} - {exc.message} (exit_code={exc.exit_code})")
        _emit(
            ErrorResponse(error_code=exc.error_code, message=exc.message, details=exc.details),
            stream,
        )
        return exc.exit_code
    except PydanticValidationError as exc:
        logger.warning(f"Invalid configuration: {exc.error_count()} error(s)")
        _emit(
            ErrorResponse(
                error_code="INVALID_CONFIG",
                message="Configuration values failed validation",
                details={"errors": [
                    {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
                    for err in exc.errors()
                ]},
            ),
            stream,
        )
        return INVALID_CONFIG_EXIT_CODE
    except Exception:
        logger.exception("Unexpected error while running command")
        _emit(
            ErrorResponse(
                error_code="INTERNAL_ERROR",
                message="An unexpected error occurred",
            ),
            stream,
        )
        return INTERNAL_ERROR_EXIT_CODE
