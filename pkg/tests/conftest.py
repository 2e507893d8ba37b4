import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from salad.providers import mock_provider_set
from salad.store import Store


@pytest.fixture
def providers():
    return mock_provider_set()


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "data")
