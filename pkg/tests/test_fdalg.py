"""
有限维代数单元测试
Unit tests for quiver algebras, opposites, trivial extensions and isomorphisms
"""

import pytest

from src.core import exactla as la
from src.core.exactla import Field
from src.core.exceptions import AdmissibilityError, CompositionError, IsoSearchError
from src.core.fdalg import (
    Arrow,
    Presentation,
    Quiver,
    build_path_algebra,
    cartan_matrix,
    find_algebra_iso,
    loewy_length,
    trivial_extension,
)
from src.core.fdmod import regular_bimodule

from tests.conftest import quiver_algebra, rad2_zero


@pytest.fixture
def loop_pair():
    """K⟨x,y⟩/(xy, yx, x²+y²) 与 K⟨x,y⟩/(x², y², xy−yx)"""
    quiver = Quiver(("v",), (Arrow("x", "v", "v"), Arrow("y", "v", "v")))
    first = build_path_algebra(Presentation(quiver, (
        ((1, ("x", "y")),),
        ((1, ("y", "x")),),
        ((1, ("x", "x")), (1, ("y", "y"))),
    ), 3, Field.rational()), name="sum_of_squares")
    second = build_path_algebra(Presentation(quiver, (
        ((1, ("x", "x")),),
        ((1, ("y", "y")),),
        ((1, ("x", "y")), (-1, ("y", "x"))),
    ), 3, Field.rational()), name="exterior")
    return first, second


class TestPathAlgebra:
    """箭图代数构造测试"""

    def test_dimensions(self, kx2, a2, a3_rad2, semisimple):
        """测试基本维数"""
        assert kx2.dim == 2
        assert a2.dim == 3
        assert a3_rad2.dim == 5
        assert semisimple.dim == 1
        assert a3_rad2.n_idempotents == 3

    def test_commutative_relation(self):
        """K[x,y]/(x², y², xy − yx)，L = 3"""
        quiver = Quiver(("v",), (Arrow("x", "v", "v"), Arrow("y", "v", "v")))
        relations = (
            ((1, ("x", "x")),),
            ((1, ("y", "y")),),
            ((1, ("x", "y")), (-1, ("y", "x"))),
        )
        a = build_path_algebra(Presentation(quiver, relations, 3, Field.rational()), name="exterior")
        assert a.dim == 4
        assert loewy_length(a) == 3

    def test_truncation_must_kill_long_paths(self):
        """长度为 L 的路径必须在理想中"""
        with pytest.raises(AdmissibilityError):
            quiver_algebra(["v"], [("x", "v", "v")], [], L=2)

    def test_relation_length_bounds(self):
        """关系路径长度必须在 [2, L] 内"""
        with pytest.raises(CompositionError):
            quiver_algebra(["v1", "v2"], [("a", "v1", "v2")], [("a",)], L=2)

    def test_relation_must_compose(self):
        with pytest.raises(CompositionError):
            quiver_algebra(["v1", "v2"], [("a", "v1", "v2")], [("a", "a")], L=2)

    def test_unknown_arrow(self):
        with pytest.raises(CompositionError):
            quiver_algebra(["v"], [("x", "v", "v")], [("x", "z")], L=2)

    def test_cartan_and_loewy(self, a2, kx2, semisimple):
        """Cartan 矩阵记录 e_i A e_j 的维数"""
        assert cartan_matrix(a2) == [[1, 1], [0, 1]]
        assert cartan_matrix(kx2) == [[2]]
        assert loewy_length(a2) == 2
        assert loewy_length(semisimple) == 1

    def test_prime_field(self, gf7):
        a = quiver_algebra(["v"], [("x", "v", "v")], [("x", "x")], field=gf7)
        assert a.dim == 2
        assert a.field.label == "GF(7)"


class TestOpposite:
    """对侧代数测试"""

    def test_opposite_is_cached(self, a2):
        assert a2.opposite is a2.opposite
        assert a2.opposite.dim == a2.dim

    def test_opposite_transposes_cartan(self, a2):
        c = cartan_matrix(a2)
        assert cartan_matrix(a2.opposite) == [list(r) for r in zip(*c)]

    def test_opposite_reverses_products(self, a2):
        op = a2.opposite
        for i in range(a2.dim):
            for j in range(a2.dim):
                assert op.product_vector(i, j) == a2.product_vector(j, i)


class TestTrivialExtension:
    """平凡扩张测试"""

    def test_regular_bimodule(self, kx2):
        """K[x]/(x²) ⋉ K[x]/(x²) 的维数与 Loewy 长度"""
        t = trivial_extension(kx2, regular_bimodule(kx2))
        assert t.dim == 4
        assert loewy_length(t) == 3
        assert t.n_idempotents == 1


class TestAlgebraIso:
    """代数同构测试"""

    def test_self_iso(self, a3_rad2):
        iso = find_algebra_iso(a3_rad2, a3_rad2)
        assert iso is not None
        assert iso.verify()
        assert iso.inverse().verify()

    def test_relabelled_quiver(self, a2):
        """顶点改名后的同一箭图"""
        b = quiver_algebra(["w1", "w2"], [("z", "w1", "w2")])
        iso = find_algebra_iso(a2, b)
        assert iso is not None and iso.verify()

    def test_non_isomorphic(self, a3_rad2):
        """v1 → v2 ← v3 与 v1 → v2 → v3 不同构"""
        other = rad2_zero(["v1", "v2", "v3"], [("a", "v1", "v2"), ("b", "v3", "v2")])
        assert find_algebra_iso(a3_rad2, other) is None

    def test_dimension_mismatch(self, a2, kx2):
        assert find_algebra_iso(a2, kx2) is None

    def test_iso_matrix_is_invertible(self, kx2):
        iso = find_algebra_iso(kx2, kx2.opposite)
        assert iso is not None
        assert la.is_invertible(iso.matrix)

    def test_iso_needs_mixed_generator_images(self, loop_pair):
        """x ↦ x+y, y ↦ x−y 不是 ±生成元的排列"""
        first, second = loop_pair
        assert first.dim == second.dim == 4
        iso = find_algebra_iso(first, second)
        assert iso is not None
        assert iso.verify()
        assert iso.inverse().verify()

    def test_search_limit_is_undecided(self, loop_pair):
        with pytest.raises(IsoSearchError):
            find_algebra_iso(*loop_pair, limit=1)
