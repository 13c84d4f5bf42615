import numpy as np
import pytest

from stratincon import matchgen
from stratincon.telemetry import compute_normalization


@pytest.fixture(scope="session")
def small_match():
    """One structured 150-frame match; shared read-only across tests."""
    log, truth = matchgen.generate_match(matchgen.GenConfig(seed=3, n_frames=150))
    return log, truth


@pytest.fixture(scope="session")
def small_stats(small_match):
    log, _ = small_match
    return compute_normalization([log])


def det_schedule():
    """A fixed phase/role schedule for the prior-independent policy."""
    return {
        (role, phase): matchgen._ROLE_CYCLES[role][i % 3]
        for role in matchgen.ROLE_ORDER
        for i, phase in enumerate(matchgen.PHASES)
    }


@pytest.fixture(scope="session")
def det_match():
    """A deterministic-policy match: behaviors are a pure function of
    (role, phase), so the oracle predictor is exact."""
    config = matchgen.GenConfig(
        seed=5,
        n_frames=150,
        behavior_policy=matchgen.deterministic_policy(det_schedule()),
    )
    return matchgen.generate_match(config)


def assert_close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} within {tol}"


@pytest.fixture(autouse=True)
def _no_global_seed_leak():
    state = np.random.get_state()
    yield
    np.random.set_state(state)
