"""
有限维模单元测试
Unit tests for modules, resolutions and homological dimensions
"""

import gc
import weakref

import pytest

from src.core import exactla as la
from src.core.exceptions import AlgebraMismatchError, InvalidModuleError, PreconditionError
from src.core.fdmod import (
    DimResult,
    add_approximation,
    dim_max,
    dim_shift,
    dim_sum,
    dual,
    ext_dim,
    ext_dims,
    ext_dim_via_injectives,
    factor_through,
    gldim,
    hom_module,
    hom_space,
    identity_map,
    injdim,
    injective,
    is_injective,
    is_projective,
    iso_test,
    left_module,
    make_module,
    minimal_resolution,
    module_from_generators,
    pd,
    projective,
    projective_cover,
    regular_bimodule,
    regular_module,
    simple,
    simples,
    syzygy,
    tensor,
    tor_dim,
)

from tests.conftest import quiver_algebra


class TestDimResult:
    """维数结论测试"""

    def test_rendering(self):
        assert str(DimResult.finite(3)) == "3"
        assert str(DimResult.infinite(None)) == "inf"
        assert str(DimResult.at_least(8)) == ">=8"

    def test_max_prefers_infinite(self):
        assert dim_max([DimResult.finite(2), DimResult.infinite(None)]).is_infinite
        assert str(dim_max([DimResult.finite(5), DimResult.at_least(3)])) == ">=5"
        assert str(dim_max([])) == "0"

    def test_shift_and_sum(self):
        assert str(dim_shift(DimResult.finite(2), 1)) == "3"
        assert dim_shift(DimResult.infinite(None), 4).is_infinite
        assert str(dim_sum(DimResult.finite(1), DimResult.at_least(4))) == ">=5"
        assert not dim_sum(DimResult.finite(1), DimResult.at_least(4)).is_decided


class TestModules:
    """模构造测试"""

    def test_indecomposables(self, a2):
        """A2 上投射、内射与单模的维数"""
        assert [projective(a2, i).dim for i in range(2)] == [1, 2]
        assert [injective(a2, i).dim for i in range(2)] == [2, 1]
        assert [s.dim for s in simples(a2)] == [1, 1]
        assert regular_module(a2).dim == 3

    def test_projective_and_injective_flags(self, a2, kx2):
        assert is_projective(projective(a2, 1))
        assert is_injective(injective(a2, 0))
        assert not is_projective(simple(a2, 1))
        assert is_projective(regular_module(kx2)) and is_injective(regular_module(kx2))

    def test_dual_is_over_opposite(self, a2):
        x = projective(a2, 1)
        assert dual(x).algebra is a2.opposite
        assert dual(dual(x)).algebra is a2

    def test_invalid_action(self, kx2):
        """作用矩阵不满足乘法表"""
        one = la.identity(1, kx2.domain)
        with pytest.raises(InvalidModuleError):
            make_module(kx2, [one, one])

    def test_generators(self, a2):
        """由箭头矩阵构造的模"""
        f = a2.field
        x = module_from_generators(a2, {
            "v1": la.matrix([[1, 0], [0, 0]], f),
            "v2": la.matrix([[0, 0], [0, 1]], f),
            "a": la.matrix([[0, 0], [1, 0]], f),
        }, name="X")
        assert x.dim == 2
        assert iso_test(x, projective(a2, 1)) is not None

    def test_missing_generator(self, a2):
        f = a2.field
        with pytest.raises(InvalidModuleError):
            module_from_generators(a2, {"v1": la.matrix([[1]], f)})

    def test_mixed_algebras(self, a2, kx2):
        with pytest.raises(AlgebraMismatchError):
            hom_space(simple(a2, 0), simple(kx2, 0))

    def test_standard_modules_released_with_algebra(self):
        """正则模、投射模与单模缓存在代数上，代数回收后一并释放"""
        a = quiver_algebra(["v1", "v2"], [("a", "v1", "v2")], name="transient")
        assert regular_module(a) is regular_module(a)
        assert projective(a, 1) is projective(a, 1)
        assert simple(a, 0) is simple(a, 0)
        bimodule = regular_bimodule(a)
        assert left_module(bimodule) is left_module(bimodule)
        algebra_ref, module_ref = weakref.ref(a), weakref.ref(projective(a, 1))
        del a, bimodule
        gc.collect()
        assert algebra_ref() is None
        assert module_ref() is None


class TestHomTensor:
    """Hom 与张量测试"""

    def test_hom_from_projective(self, a2):
        """dim Hom(P_i, X) = dim e_i X"""
        assert hom_space(projective(a2, 1), simple(a2, 1)).dim == 1
        assert hom_space(projective(a2, 0), simple(a2, 1)).dim == 0
        assert hom_space(projective(a2, 0), projective(a2, 1)).dim == 1

    def test_regular_bimodule_is_unit(self, a3_rad2):
        """A⊗X ≅ X 且 Hom(A, X) ≅ X"""
        x = projective(a3_rad2, 2)
        assert tensor(regular_bimodule(a3_rad2), x).dim == x.dim
        assert hom_module(regular_bimodule(a3_rad2), x).result.dim == x.dim

    def test_tor_of_regular(self, kx2):
        s = simple(kx2, 0)
        assert tor_dim(regular_bimodule(kx2), s, 0) == 1
        assert tor_dim(regular_bimodule(kx2), s, 1) == 0


class TestResolutions:
    """极小投射分解测试"""

    def test_terminating(self, a3_rad2):
        res = minimal_resolution(simple(a3_rad2, 2), 10)
        assert res.status == "terminated"
        assert res.length == 2
        assert [p.dim for p in res.terms] == [2, 2, 1]
        assert res.is_exact() and res.is_minimal()

    def test_periodic(self, kx2):
        """K[x]/(x²) 上单模的合冲周期为 1"""
        res = minimal_resolution(simple(kx2, 0), 10)
        assert res.status == "periodic"
        assert (res.witness.start, res.witness.period) == (0, 1)
        assert res.witness.iso.is_iso()

    def test_two_cycle_period(self, two_cycle):
        res = minimal_resolution(simple(two_cycle, 0), 10)
        assert res.status == "periodic"
        assert res.witness.period == 2

    def test_truncated(self, kx2):
        res = minimal_resolution(simple(kx2, 0), 3, detect_period=False)
        assert res.status == "truncated"
        assert len(res.terms) == 4

    def test_negative_depth(self, kx2):
        with pytest.raises(PreconditionError):
            minimal_resolution(simple(kx2, 0), -1)

    def test_projective_cover(self, a2):
        cover = projective_cover(simple(a2, 1))
        assert cover.module.dim == 2
        assert cover.epi.is_surjective()

    def test_syzygy(self, a2):
        assert syzygy(simple(a2, 1), 1).dim == 1
        assert syzygy(simple(a2, 0), 1).dim == 0


class TestDimensions:
    """投射、内射与整体维数测试"""

    def test_pd(self, a2):
        assert str(pd(simple(a2, 0))) == "0"
        assert str(pd(simple(a2, 1))) == "1"

    def test_pd_of_zero_module_is_zero(self, a2):
        from src.core.fdmod import zero_module

        assert str(pd(zero_module(a2))) == "0"

    def test_gldim(self, semisimple, a2, a3_rad2, kx2, two_cycle):
        assert str(gldim(semisimple)) == "0"
        assert str(gldim(a2)) == "1"
        assert str(gldim(a3_rad2)) == "2"
        assert gldim(kx2).is_infinite
        assert gldim(two_cycle).is_infinite

    def test_gldim_witnesses(self, kx2, a2):
        """命名模的周期合冲直接判定整体维数为无穷"""
        result = gldim(kx2, 4, [regular_module(kx2), simple(kx2, 0)])
        assert result.is_infinite
        assert result.witness.period == 1
        assert str(gldim(a2, 4, [regular_module(a2)])) == "1"
        with pytest.raises(AlgebraMismatchError):
            gldim(kx2, 4, [simple(a2, 0)])

    def test_injdim(self, a2, kx2):
        assert str(injdim(simple(a2, 0))) == "1"
        assert str(injdim(regular_module(kx2))) == "0"

    def test_cutoff_validation(self, a2):
        with pytest.raises(PreconditionError):
            pd(simple(a2, 1), 0)


class TestExt:
    """Ext 维数测试"""

    def test_ext_over_a2(self, a2):
        s0, s1 = simple(a2, 0), simple(a2, 1)
        assert ext_dim(s1, s0, 0) == 0
        assert ext_dim(s1, s0, 1) == 1
        assert ext_dim(s0, s1, 1) == 0
        assert ext_dim(s1, s0, 2) == 0

    def test_ext_agrees_with_injective_side(self, a3_rad2):
        """投射分解与内射（对偶）两条路径给出相同的 Ext"""
        xs = simples(a3_rad2)
        for x in xs:
            for y in xs:
                for n in range(3):
                    assert ext_dim(x, y, n) == ext_dim_via_injectives(x, y, n)

    def test_ext_beyond_cutoff(self, kx2):
        s = simple(kx2, 0)
        assert ext_dim(s, s, 5, cutoff=3) is None

    def test_ext_dims_share_one_resolution(self, a3_rad2):
        """逐次计算与一次性计算给出相同的 Ext"""
        xs = simples(a3_rad2)
        for x in xs:
            for y in xs:
                assert ext_dims(x, y, 3) == [ext_dim(x, y, n) for n in range(4)]

    def test_ext_dims_reuse_given_resolution(self, kx2):
        s = simple(kx2, 0)
        res = minimal_resolution(s, 4, detect_period=False)
        assert ext_dims(s, s, 3, res=res) == [1, 1, 1, 1]
        assert ext_dims(s, s, 3, cutoff=2) == [1, 1, None, None]


class TestApproximations:
    """逼近与分解测试"""

    def test_right_add_approximation(self, a2):
        approx = add_approximation([projective(a2, 1)], simple(a2, 1), "right")
        assert approx.is_surjective()

    def test_factor_through_identity(self, a2):
        x = projective(a2, 1)
        h = hom_space(x, simple(a2, 1)).maps()[0]
        k = factor_through(h, identity_map(x), "right")
        assert k is not None
        assert la.equal(k.matrix, h.matrix)
