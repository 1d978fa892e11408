import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))


@pytest.fixture(autouse=True)
def _repo_root(monkeypatch):
    # corpus paths in scripts and CLI calls are relative to the checkout
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("DAL_SEED", raising=False)
    monkeypatch.delenv("DAL_ORACLE_POLICY", raising=False)


@pytest.fixture
def corpus():
    return ROOT / "corpus"


# acceptance criteria report one line each at the end of the run
_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """criterion(n, text) -> context manager recording PASS or FAIL for n."""
    results = request.config.stash[_CRITERIA]

    class _Record:
        def __init__(self, n, text):
            self.n, self.text, self.details = n, text, []

        def note(self, msg):
            self.details.append(msg)

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            line = f"{'PASS' if exc_type is None else 'FAIL'} criterion {self.n}: {self.text}"
            if self.details:
                line += " (" + "; ".join(self.details) + ")"
            if exc_type is not None:
                line += f" [{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}]"
            results[self.n] = line
            print(line)
            return False

    return _Record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_CRITERIA]
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
