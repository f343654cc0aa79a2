"""Unit tests for the CLI error handler."""

import io
import json

from cgnn.cli.error_handler import handle_errors
from cgnn.exceptions import NumericalError, UnknownMethodError
from cgnn.schemas.data import SplitConfig


class TestHandleErrors:
    """Tests for handle_errors."""

    def test_passes_through_exit_code(self):
        """Should return the command's own exit code without output."""
        stream = io.StringIO()

        assert handle_errors(lambda: 0, stream) == 0
        assert stream.getvalue() == ""

    def test_library_error(self):
        """Should emit the error body and use the error's exit code."""
        stream = io.StringIO()

        def command():
            raise UnknownMethodError("c-foo", ["lp"])

        code = handle_errors(command, stream)
        body = json.loads(stream.getvalue())

        assert code == 2
        assert body["error_code"] == "UNKNOWN_METHOD"
        assert body["details"]["allowed_methods"] == ["lp"]

    def test_numerical_error_exit_code(self):
        """Should exit with 3 on numerical failures."""
        stream = io.StringIO()

        def command():
            raise NumericalError(details={"where": "cg"})

        assert handle_errors(command, stream) == 3
        assert json.loads(stream.getvalue())["error_code"] == "NON_FINITE_VALUE"

    def test_pydantic_error_becomes_invalid_config(self):
        """Should map schema validation failures to INVALID_CONFIG."""
        stream = io.StringIO()

        code = handle_errors(lambda: SplitConfig(train=2.0) and 0, stream)
        body = json.loads(stream.getvalue())

        assert code == 2
        assert body["error_code"] == "INVALID_CONFIG"
        assert body["details"]["errors"]

    def test_unexpected_error(self):
        """Should hide unexpected failures behind INTERNAL_ERROR."""
        stream = io.StringIO()

        def command():
            raise RuntimeError("boom")

        code = handle_errors(command, stream)
        body = json.loads(stream.getvalue())

        assert code == 1
        assert body == {"error_code": "INTERNAL_ERROR", "message": "An unexpected error occurred", "details": {}}
