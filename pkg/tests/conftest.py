import time

import pytest

from cavityarray.bath_oracle import BathSpec, run_decay_experiment
from cavityarray.core import ArrayParams

REF_Q = 1.1e6
REF_XI = 6.47e-4

_ACCEPTANCE = []


def record_criterion(label, passed, detail):
    _ACCEPTANCE.append((label, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_ACCEPTANCE, key=lambda item: item[0]):
        terminalreporter.write_line(
            "%s  %-34s %s" % ("PASS" if passed else "FAIL", label, detail))


@pytest.fixture
def ref_params():
    return ArrayParams.from_xi(60, REF_XI, REF_Q)


@pytest.fixture(scope="session")
def flat_decay():
    """Flat bath, W = 200 gamma, M = 4000, gamma at the reference Q. One dense eigh."""
    gamma = 2.0 / REF_Q
    spec = BathSpec.flat_for_gamma(gamma, 200 * gamma)
    start = time.perf_counter()
    report = run_decay_experiment(spec, 4000)
    return report, time.perf_counter() - start
