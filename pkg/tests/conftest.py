import pytest
from click.testing import CliRunner

from main import cli


@pytest.fixture
def invoke(tmp_path):
    """Runs the CLI single-threaded with outputs under tmp_path."""
    runner = CliRunner()

    def _invoke(*args, env=None):
        return runner.invoke(cli, ["--output-dir", str(tmp_path), "--threads", "1", *args], env=env)

    return _invoke
