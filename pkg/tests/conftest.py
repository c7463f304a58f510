import io
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from gzlab.hp import PrecisionConfig


@pytest.fixture(scope="session")
def cfg256():
    return PrecisionConfig(256)


@pytest.fixture(scope="session")
def cfg128():
    return PrecisionConfig(128)


@pytest.fixture(scope="session")
def cfg64():
    return PrecisionConfig(64)


def run_cli(argv):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    from gzlab.cli import main

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()
