import random

import pytest
from hypothesis import settings

from hvdc.corpus import corpus_categories, chain, walking_arrow
from hvdc.fincore import terminal_category


@pytest.fixture(scope="session")
def cats():
    return corpus_categories()


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def one():
    return terminal_category()


@pytest.fixture(scope="session")
def two():
    return walking_arrow()


@pytest.fixture(scope="session")
def three():
    return chain(3)


# fixed example sequences keep suite timings reproducible
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")
