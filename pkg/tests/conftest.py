import os
import sys
from pathlib import Path

import pytest
from dotenv import load_dotenv

load_dotenv()
sys.path.insert(0, str(Path(__file__).parent.parent))

from theorems import AutomatonStore, StoreConfig, TheoremContext


@pytest.fixture(scope="session")
def store(tmp_path_factory) -> AutomatonStore:
    """Verified automata shared by the whole session; RTM_TEST_AUTOMATA reuses a directory between runs."""
    directory = os.getenv("RTM_TEST_AUTOMATA")
    path = Path(directory) if directory else tmp_path_factory.mktemp("automata")
    return AutomatonStore(StoreConfig(directory=path))


@pytest.fixture(scope="session")
def theorem_ctx(store) -> TheoremContext:
    return TheoremContext(store=store)
