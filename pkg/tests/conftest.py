import pytest

from xrank.algebra import poly
from xrank.algebra.fields import prime_field
from xrank.curves.model import HyperCurve

SPLIT_F = "x^5-5*x^3+4*x"


@pytest.fixture(scope="session")
def F101():
    return prime_field(101)


@pytest.fixture(scope="session")
def C101(F101):
    return HyperCurve(poly.parse(SPLIT_F, F101), F101)


@pytest.fixture(scope="session")
def C61():
    F = prime_field(61)
    return HyperCurve(poly.parse(SPLIT_F, F), F)


def _cli(argv):
    import contextlib
    import io

    from xrank.cli import run

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cli():
    return _cli


SUITE_ARGS = ["verify", "all", "--samples", "3", "--trials", "3"]


@pytest.fixture(scope="session")
def suite_runs(tmp_path_factory):
    """The full verifier suite run twice into separate directories."""
    runs = []
    for k in range(2):
        d = tmp_path_factory.mktemp(f"suite{k}")
        code, out, _ = _cli(SUITE_ARGS + ["--out", str(d)])
        runs.append((code, out, d))
    return runs


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, secs, detail in sorted(ACCEPTANCE):
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{tag}] criterion {num:2d}: {name} ({secs:.1f} s){' - ' + detail if detail else ''}")
