import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from conepoint.presets import preset  # noqa: E402


@pytest.fixture
def scoreboard(capsys):
    """Prints acceptance PASS lines through pytest's output capture."""

    def emit(num: int, text: str):
        with capsys.disabled():
            print(f"ACCEPTANCE {num:2d}: PASS - {text}", flush=True)

    return emit


@pytest.fixture(scope="session")
def aztec():
    return preset("aztec")


@pytest.fixture(scope="session")
def cube_grove():
    return preset("cube_grove")


@pytest.fixture(scope="session")
def fls():
    return preset("fls")


@pytest.fixture(scope="session")
def superballot_core():
    return preset("superballot-core")


@pytest.fixture(scope="session")
def superballot_full():
    return preset("superballot")


@pytest.fixture(scope="session")
def qrw():
    return preset("qrw2d")
