"""
共享测试夹具
Small algebras and contexts reused across the test modules.
"""

from pathlib import Path
from typing import Sequence, Tuple

import pytest

from src.core.exactla import Field
from src.core.fdalg import Arrow, FDAlgebra, Presentation, Quiver, build_path_algebra
from src.core.morita import delta_context, from_pierce

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

ArrowTriple = Tuple[str, str, str]


def quiver_algebra(
    vertices: Sequence[str],
    arrows: Sequence[ArrowTriple] = (),
    relations: Sequence[Sequence[str]] = (),
    L: int = 2,
    field: Field = Field.rational(),
    name: str = "",
) -> FDAlgebra:
    """以单项式关系构造箭图代数；路径从左到右读"""
    quiver = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    rels = tuple(((1, tuple(r)),) for r in relations)
    return build_path_algebra(Presentation(quiver, rels, L, field), name=name)


def rad2_zero(vertices: Sequence[str], arrows: Sequence[ArrowTriple], field: Field = Field.rational(), name: str = "") -> FDAlgebra:
    """rad² = 0 的箭图代数"""
    relations = [
        (x[0], y[0]) for x in arrows for y in arrows if x[2] == y[1]
    ]
    return quiver_algebra(vertices, arrows, relations, 2, field, name)


@pytest.fixture
def field() -> Field:
    return Field.rational()


@pytest.fixture
def gf7() -> Field:
    return Field.prime(7)


@pytest.fixture
def kx2() -> FDAlgebra:
    """K[x]/(x²)"""
    return quiver_algebra(["v"], [("x", "v", "v")], [("x", "x")], name="kx2")


@pytest.fixture
def semisimple() -> FDAlgebra:
    return quiver_algebra(["v"], name="K")


@pytest.fixture
def a2() -> FDAlgebra:
    """v1 → v2 的路径代数"""
    return quiver_algebra(["v1", "v2"], [("a", "v1", "v2")], name="A2")


@pytest.fixture
def a3_rad2() -> FDAlgebra:
    """v1 → v2 → v3，rad² = 0"""
    return rad2_zero(["v1", "v2", "v3"], [("a", "v1", "v2"), ("b", "v2", "v3")], name="A3/rad2")


@pytest.fixture
def two_cycle() -> FDAlgebra:
    """v ⇄ w，rad² = 0"""
    return rad2_zero(["v", "w"], [("a", "v", "w"), ("b", "w", "v")], name="two_cycle")


@pytest.fixture
def two_cycle_context(two_cycle):
    return from_pierce(two_cycle, [["v"], ["w"]], name="two_cycle")


@pytest.fixture
def a3_context(a3_rad2):
    """A = K(v1) × K(v3)，B = K(v2)；φ = ψ = 0"""
    return from_pierce(a3_rad2, [["v1", "v3"], ["v2"]], name="a3")


@pytest.fixture
def delta_kx2(kx2):
    return delta_context(kx2, name="delta_kx2")


@pytest.fixture
def delta_a2(a2):
    return delta_context(a2, name="delta_a2")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
