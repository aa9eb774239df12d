"""
子范畴服务测试
"""

import pytest

from src.core.exceptions import PreconditionError
from src.core.fdmod import regular_module, simple
from src.core.morita import flat_to_tuple, functor_T, functor_Z
from src.services.subcat_service import PAIRS, TARGETS, SubcategoryService


@pytest.fixture
def service():
    return SubcategoryService()


@pytest.fixture
def regular_tuple(two_cycle_context):
    return flat_to_tuple(two_cycle_context, regular_module(two_cycle_context.algebra), "Lambda")


class TestClassFlags:
    """六个类的成员判定测试"""

    def test_tensor_image(self, service, two_cycle_context):
        c = two_cycle_context
        flags = service.class_flags(functor_T(c, "A", simple(c.A, 0)))
        assert flags.in_X
        assert not flags.in_Y
        assert flags.consistent

    def test_concentrated_in_b(self, service, two_cycle_context):
        c = two_cycle_context
        flags = service.class_flags(functor_Z(c, "B", simple(c.B, 0)))
        assert flags.in_Y
        assert not flags.in_X and not flags.in_Yp

    def test_requires_zero_context(self, service, delta_kx2):
        with pytest.raises(PreconditionError):
            service.class_flags(functor_T(delta_kx2, "A", simple(delta_kx2.A, 0)))


class TestTorsion:
    """挠对分解测试"""

    @pytest.mark.parametrize("pair", list(PAIRS))
    def test_decomposition(self, service, regular_tuple, pair):
        dec = service.torsion_decompose(regular_tuple, pair)
        assert dec.exact
        assert dec.verified
        assert dec.sub.dim + dec.quot.dim == regular_tuple.dim

    def test_unknown_pair(self, service, regular_tuple):
        with pytest.raises(PreconditionError):
            service.torsion_decompose(regular_tuple, "XZ")

    def test_hom_vanishing(self, service, two_cycle_context):
        samples = service.default_samples(two_cycle_context)
        for pair in PAIRS:
            report = service.hom_vanishing_check(pair, samples)
            assert report.verdict in ("satisfied", "vacuous")

    def test_torsion_report(self, service, regular_tuple):
        report = service.torsion_report(regular_tuple)
        assert len(report.entries) == len(PAIRS)
        assert report.verdict == "satisfied"
        assert "flags" in report.summary


class TestApproximations:
    """逼近测试"""

    @pytest.mark.parametrize("target", TARGETS)
    @pytest.mark.parametrize("side", ["left", "right"])
    def test_bireflective(self, service, regular_tuple, target, side):
        approx = service.bireflective_approx(regular_tuple, target, side)
        assert approx.in_class
        assert approx.verified, approx.failures

    def test_unknown_target(self, service, regular_tuple):
        with pytest.raises(PreconditionError):
            service.bireflective_approx(regular_tuple, "diagonal")

    def test_w_left_with_trivial_generators(self, service, regular_tuple):
        approx = service.w_left_approximation([], [], regular_tuple)
        assert approx.verified
        assert approx.summary()["target_dims"] == [0, 0]

    def test_w_left_precondition(self, service, two_cycle_context, regular_tuple):
        """Hom_A(N, U) ≠ 0 时拒绝构造"""
        with pytest.raises(PreconditionError):
            service.w_left_approximation([simple(two_cycle_context.A, 0)], [], regular_tuple)
