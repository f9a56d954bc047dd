import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ease.graph import Graph

settings.register_profile("ease", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ease")


def random_graph(rng, n=None, m=None, self_loops=True):
    n = int(rng.integers(2, 60)) if n is None else n
    m = int(rng.integers(1, 4 * n)) if m is None else m
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    if not self_loops:
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if src.size == 0:
            src, dst = np.array([0]), np.array([1])
    return Graph(n, src, dst)


@st.composite
def graphs(draw, max_vertices=40, max_edges=200):
    n = draw(st.integers(2, max_vertices))
    m = draw(st.integers(1, max_edges))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(np.random.default_rng(seed), n, m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_rmat():
    from ease.graph import RmatConfig, generate_rmat

    return generate_rmat(RmatConfig(0.57, 0.19, 0.19, 0.05, 512, 4000, seed=7))


# criterion number -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict = {}


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n in ACCEPTANCE:
            ok, detail = ACCEPTANCE[n]
            terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n:>2}: NOT RUN")
