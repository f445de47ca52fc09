"""
Shared fixtures for the rsld-lab test suite
"""
import os
import sys
import tempfile
from pathlib import Path

# Keep the user's configuration out of the tests; must run before src.utils.config is imported
os.environ['RSLD_CONFIG_DIR'] = tempfile.mkdtemp(prefix='rsld-test-')
os.environ.pop('RSLD_SEED', None)

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from src.engine.scheduling import policy_from_name, selection_from_name
from src.lab.catalogue import get_example
from src.parsers.program_parser import parse_atom, parse_goal, parse_program


@pytest.fixture
def program():
    """Parse program text"""
    return parse_program


@pytest.fixture
def goal():
    return parse_goal


@pytest.fixture
def atom():
    return parse_atom


@pytest.fixture
def stack():
    return policy_from_name('stack')


@pytest.fixture
def center():
    return policy_from_name('center')


@pytest.fixture
def leftmost():
    return selection_from_name('leftmost')


@pytest.fixture
def example():
    return get_example


@pytest.fixture
def programs_dir():
    return Path(__file__).parent.parent / 'programs'
