import numpy as np
import pytest


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.normal(size=(m, m)))
    return Q * np.sign(np.diag(R))


def random_spd(rng, m, max_cond=1e4, scale=1.0):
    """SPD matrix with condition number at most ``max_cond``."""
    half = np.log10(max_cond) / 2
    w = scale * 10.0 ** rng.uniform(-half, half, size=m)
    U = random_orthogonal(rng, m)
    A = (U * w) @ U.T
    return 0.5 * (A + A.T)


def random_sym(rng, m, scale=1.0):
    A = rng.normal(scale=scale, size=(m, m))
    return 0.5 * (A + A.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def commuting_demo(U, n_samples=201, duration=2.0):
    """Demonstration ``U diag(d(t)) U^T`` with a fixed eigenbasis.

    Returns ``(times, points, eigenvalues)``.
    """
    m = U.shape[0]
    t = np.linspace(0.0, duration, n_samples)
    s = t / duration
    mj = s**3 * (10 - 15 * s + 6 * s * s)
    base = np.linspace(0.0, 1.0, m)
    slope = np.linspace(1.0, -0.7, m)
    wiggle = 0.2 * np.sin(3 * np.outer(t, np.arange(1, m + 1)))
    D = np.exp(base + np.outer(mj, slope) + wiggle)
    points = np.array([(U * d) @ U.T for d in D])
    return t, 0.5 * (points + points.transpose(0, 2, 1)), D
