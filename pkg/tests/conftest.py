from pathlib import Path

import pytest

from app.config import get_settings
from app.frames.window import make_bspline, make_polynomial_window

SAMPLES = Path(__file__).parent.parent / "samples"


@pytest.fixture
def example_window():
    """alpha = 9/10, g = (81/100 - x^2)(1/5 - x); Frame at a = 1, b = 3/5."""
    return make_polynomial_window("9/10", "(81/100 - x**2)*(1/5 - x)")


@pytest.fixture
def zero_pair_window():
    """Adds a simple zero at -2/15; condition (ii) fails at a = 1, b = 3/5."""
    return make_polynomial_window("9/10", "(81/100 - x**2)*(1/5 - x)*(x + 2/15)")


@pytest.fixture
def bspline():
    return make_bspline


@pytest.fixture
def example_path():
    return SAMPLES / "cubic_window.json"


@pytest.fixture
def zero_pair_path():
    return SAMPLES / "zero_pair.json"


@pytest.fixture
def fresh_settings(monkeypatch):
    """Yields monkeypatch; settings are re-read from the environment on next access."""
    get_settings.cache_clear()
    yield monkeypatch
    monkeypatch.undo()
    get_settings.cache_clear()
