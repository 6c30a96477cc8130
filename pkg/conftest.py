"""Shared fixtures: the fixture algebras and the seeded random source for property tests."""
import os
import random

import pytest

from presentation import AlgebraHandle
from presentation_file import load_presentation
from scalars import Domain
import zoo

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", type=int, default=20240601,
                     help="Seed for randomized property-test sampling")


@pytest.fixture
def rng(request):
    return random.Random(request.config.getoption("--seed"))


@pytest.fixture
def fixture_path():
    def path(name: str) -> str:
        return os.path.join(FIXTURES, name)
    return path


@pytest.fixture
def load_fixture(fixture_path):
    def load(name: str):
        return load_presentation(fixture_path(name))
    return load


@pytest.fixture(scope="session")
def q3():
    return Domain.cyclotomic(3)


@pytest.fixture(scope="session")
def weyl():
    return AlgebraHandle(zoo.weyl_algebra())


@pytest.fixture(scope="session")
def polynomial():
    return AlgebraHandle(zoo.polynomial_ring(["x", "y"]))


@pytest.fixture(scope="session")
def quantum_weyl_q3():
    return AlgebraHandle(zoo.gl2_family("quantum_weyl", q="zeta(3)"))
