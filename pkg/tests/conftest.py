import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from axial.algebra import certify_axis, frobenius_form  # noqa: E402
from axial.matsuo import build_matsuo, catalog_load  # noqa: E402
from axial.scalars import PrimeField, Rationals, field_from_spec  # noqa: E402


@functools.lru_cache(maxsize=None)
def matsuo(name, field="Q"):
    """(algebra, axis records, Frobenius form) for a catalog group, cached per session."""
    F = field_from_spec(field)
    A = build_matsuo(catalog_load(name), F)
    recs = [certify_axis(A, a) for a in A.axes]
    return A, recs, frobenius_form(A, recs)


@pytest.fixture
def QQ():
    return Rationals()


@pytest.fixture
def F5():
    return PrimeField(5)


@pytest.fixture
def F7():
    return PrimeField(7)


# -- acceptance summary --------------------------------------------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        _CRITERIA[name] = _CRITERIA.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        num, _, title = name[len("test_criterion_"):].partition("_")
        status = "PASS" if _CRITERIA[name] else "FAIL"
        terminalreporter.write_line(f"criterion {int(num):2d}: {status}  {title.replace('_', ' ')}")
