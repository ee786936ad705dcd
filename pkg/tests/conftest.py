import numpy as np
import pytest
from hypothesis import settings

from harmonic_aaa import conformal, geometry, laplace

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

L_CENTER = 0.5 + 0.5j
TEST_POINT = 0.99 + 0.99j
EXACT_TEST_VALUE = 1.0267919261073

_CRITERIA = []


def record_criterion(label, ok, detail):
    """Collect a pass/fail line for the acceptance summary."""
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    _CRITERIA.append(line)
    print(line)
    return ok


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


def x_squared(z):
    return np.real(z) ** 2


@pytest.fixture(scope="session")
def l_samples():
    s, poly = geometry.l_shape_boundary(0.01)
    return s.with_values(x_squared), poly


@pytest.fixture(scope="session")
def l_interior(l_samples):
    s, poly = l_samples
    return laplace.solve_interior(s, poly, L_CENTER)


@pytest.fixture(scope="session")
def l_interior_stage(l_samples):
    s, poly = l_samples
    return laplace._solve(s, [poly], L_CENTER, laplace.INTERIOR, laplace.SolverConfig())


@pytest.fixture(scope="session")
def l_clustered(l_samples):
    s, poly = l_samples
    return laplace.solve_interior(s, poly, L_CENTER, laplace.SolverConfig(cluster=(50, -6)))


@pytest.fixture(scope="session")
def l_exterior(l_samples):
    s, poly = l_samples
    return laplace.solve_exterior(s, poly, L_CENTER)


@pytest.fixture(scope="session")
def blade_solution():
    s, poly = geometry.blade_boundary(500)
    return laplace.solve_interior(s.with_values(x_squared), poly, 0.0)


@pytest.fixture(scope="session")
def l_disk_map():
    s, poly = geometry.l_shape_boundary(0.01)
    return s, conformal.map_interior(s, poly, L_CENTER)


@pytest.fixture(scope="session")
def l_exterior_map():
    s, poly = geometry.l_shape_boundary(0.01)
    return s, conformal.map_exterior(s, poly, L_CENTER)


@pytest.fixture(scope="session")
def annulus_map():
    outer, inner = geometry.double_boundary(0.01)
    return outer, inner, conformal.map_doubly_connected(outer, inner, -0.25 - 0.25j)
