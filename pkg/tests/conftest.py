import io

import pytest

from cotsum import cli


@pytest.fixture
def run_cli():
    def _run(*argv):
        buf = io.StringIO()
        code = cli.main(list(argv), out=buf)
        return code, buf.getvalue()

    return _run
