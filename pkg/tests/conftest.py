import pytest

from triseg.gamma import SweepConfig, run_sweep

PENALTY_EPS = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]


@pytest.fixture(scope="session")
def penalty_sweep_records():
    """One shared penalty-decay sweep (criteria 2, 3 and 11 read from it)."""
    import time

    t0 = time.perf_counter()
    records = run_sweep("penalty_decay", PENALTY_EPS, SweepConfig())
    elapsed = time.perf_counter() - t0
    return records, elapsed
