from pathlib import Path

import pytest

from pgl2neumann import invospec

DATA = Path(__file__).parent / "data"


@pytest.fixture
def binf():
    return invospec.assemble([invospec.BINF])


@pytest.fixture
def sbb():
    return invospec.assemble([invospec.B2, invospec.B3, invospec.BINF])


@pytest.fixture
def data_dir():
    return DATA
