import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("suite", deadline=None, derandomize=True,
                          suppress_health_check=list(HealthCheck))
settings.load_profile("suite")

# Frozen reference values per tone index: (ratio, entropy, epsilon for the
# single packet, epsilon for the magnetic double packet), at the reference
# parameters delta=1.1, k0=1.7, delta0=16.1, delta1=2.
REFERENCE_TABLE = {
    1: ("1/2", 1.6165, 0.52894, 0.59545),
    2: ("2/3", 1.7398, 0.53166, 0.62478),
    3: ("3/5", 1.7458, 0.53199, 0.63184),
    4: ("5/8", 1.9051, 0.53173, 0.62695),
    5: ("8/13", 1.9434, 0.53173, 0.62695),
}


@pytest.fixture(scope="session")
def table1_run():
    """Rows of the headline table computed once, with wall time."""
    from wignoise.cli import DEFAULTS, cmd_table1

    start = time.perf_counter()
    _, rows = cmd_table1(dict(DEFAULTS))
    elapsed = time.perf_counter() - start
    return rows, elapsed
