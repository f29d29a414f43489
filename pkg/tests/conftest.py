import numpy as np
import pytest

ACCEPTANCE_LINES = []


def jform(n):
    return np.diag([-1.0] + [1.0] * n)


def form_residual(M):
    J = jform(M.shape[0] - 1)
    return np.linalg.norm(M.T @ J @ M - J)


def assert_isometry(M, tol=1e-9):
    M = getattr(M, "matrix", M)
    assert form_residual(M) <= tol
    assert M[0, 0] > 0


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
