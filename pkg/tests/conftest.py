import shutil
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from execdoc.chem.molecule import parse_cml
from execdoc.forcefield import parse_forcefield

ROOT = Path(__file__).resolve().parent.parent
CASE = ROOT / "casestudy"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def molecule(name):
    return parse_cml((CASE / "molecules" / f"{name}.xml").read_bytes())


@pytest.fixture(scope="session")
def forcefield():
    return parse_forcefield((CASE / "forcefield.xml").read_bytes())


@pytest.fixture
def case_dir(tmp_path):
    """A private copy of the worked example, so runs never write into the repo."""
    dest = tmp_path / "casestudy"
    shutil.copytree(CASE, dest)
    return dest


# acceptance criteria report: number -> (passed, label)
ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is not None and call.when == "call":
        number, label = marker.args
        ACCEPTANCE[number] = (call.excinfo is None, label)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, label = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {label}")
