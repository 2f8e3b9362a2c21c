import numpy as np
import pytest

from xycrit.tensor_core import BipartiteShape

_acceptance_results = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "_acceptance", None)
    if marker is not None:
        _acceptance_results.append((marker, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep._acceptance = (m.args[0], m.args[1], item.name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title, name), outcome in sorted(_acceptance_results, key=lambda r: (r[0][0], r[0][2])):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"AC{num:<2} {status}  {title}  [{name}]")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=[(2, 2), (2, 3), (3, 3), (2, 5), (3, 4)], ids=lambda s: f"{s[0]}x{s[1]}")
def shape(request):
    return BipartiteShape(*request.param)


def random_unitary(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
