import os
import sys
import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.dirname(HERE))
sys.path.insert(0, HERE)

from tnslice.presets import MAPPING
from tnslice.scenario import _mapping


def pytest_configure(config):
	config.addinivalue_line('markers', 'slow: experiment replays of a few seconds of traffic '
							'(deselect with -m "not slow")')


@pytest.fixture
def table():
	return _mapping(MAPPING)
