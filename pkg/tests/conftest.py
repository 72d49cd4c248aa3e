import pytest

from pllhopf.hopf import nearest_point, trace_curves
from pllhopf.model import ModelParams

ACCEPTANCE = []

REFERENCE_POINTS = {"A": (0.3, 6.34), "B": (0.3, 11.0), "C": (0.4, 8.204)}


def record(label, ok, detail=""):
    ACCEPTANCE.append((label, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture(scope="session")
def params_template():
    return ModelParams(K=1.05, mu=1.0)


@pytest.fixture(scope="session")
def curves():
    return trace_curves(1.05, 0.05, 1.0, 500, 2)


@pytest.fixture(scope="session")
def reference_points(curves):
    return {name: nearest_point(curves, *mt) for name, mt in REFERENCE_POINTS.items()}
