import cmath

import pytest

from niep.spectra import Spectrum

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def double_pairs():
    """(4, i, -i, i, -i)"""
    return Spectrum(4.0, (1j, -1j, 1j, -1j))


@pytest.fixture
def mixed4():
    """(3, 2i, -2i, -1)"""
    return Spectrum(3.0, (2j, -2j, -1.0))


@pytest.fixture
def cube_roots():
    w = cmath.exp(2j * cmath.pi / 3)
    return Spectrum(1.0, (w, w.conjugate()))
