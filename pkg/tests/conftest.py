"""Shared fixtures for the test suite."""
import pytest

from app.config.settings import settings
from app.models.instances import GeneratorSpec
from app.instances.generator import generate
from app.models.set_systems import SetSystem


@pytest.fixture(autouse=True)
def check_invariants(monkeypatch):
    """Walk invariants are asserted after every block during tests."""
    monkeypatch.setattr(settings, "CHECK_INVARIANTS", True)


@pytest.fixture
def triangle() -> SetSystem:
    return SetSystem(n=3, sets=((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def singletons16() -> SetSystem:
    return SetSystem(n=16, sets=tuple((i,) for i in range(16)))


@pytest.fixture
def bernoulli12():
    def make(seed: int) -> SetSystem:
        return generate(GeneratorSpec(kind="bernoulli", n=12, m=12, param=0.5, seed=seed))
    return make


@pytest.fixture
def triangle_file(tmp_path, triangle):
    from app.instances.loader import save_set_system

    path = tmp_path / "triangle.txt"
    save_set_system(triangle, path)
    return path
