import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from corpus import model_corpus

# Smaller than the acceptance corpora; unit tests want breadth, not bulk.
UNIT_COUNT = 120
UNIT_SEED = 11


@pytest.fixture(scope="session")
def base_corpus():
    return model_corpus("RBB", UNIT_COUNT, seed=UNIT_SEED)


@pytest.fixture(scope="session")
def sigma_corpus():
    return model_corpus("RBBs", UNIT_COUNT, seed=UNIT_SEED)


@pytest.fixture(scope="session")
def sigma_plus_corpus():
    return model_corpus("RBBs+", UNIT_COUNT, seed=UNIT_SEED)
