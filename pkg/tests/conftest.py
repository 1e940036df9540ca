import pytest

from opmassey import construct
from opmassey.graded import build_contraction

_acceptance: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("acceptance")
    if marker is None:
        return
    num, title = marker
    entry = _acceptance.setdefault(num, {"title": title, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["ok"] = False


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            item.user_properties.append(("acceptance", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance):
        e = _acceptance[num]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {e['title']}")


@pytest.fixture(scope="session")
def ce():
    return construct.heisenberg_ce()


@pytest.fixture(scope="session")
def gerst():
    return construct.heisenberg_gerstenhaber()


@pytest.fixture(scope="session")
def hyper():
    return construct.heisenberg_hypercom()


@pytest.fixture(scope="session")
def ce_k(ce):
    return build_contraction(ce.complex)


@pytest.fixture(scope="session")
def gerst_k(gerst):
    return build_contraction(gerst.complex)


@pytest.fixture(scope="session")
def hyper_k(hyper):
    return build_contraction(hyper.complex)
