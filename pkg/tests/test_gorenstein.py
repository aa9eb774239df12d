"""
Gorenstein 服务测试
"""

import pytest

from src.core.exceptions import PreconditionError
from src.core.fdmod import projective, regular_module, simple
from src.core.morita import classify_simples, functor_T
from src.services.gorenstein_service import GorensteinService


@pytest.fixture
def service():
    return GorensteinService(cutoff=16)


class TestGorensteinTest:
    """Gorenstein 判定测试"""

    def test_selfinjective(self, service, kx2):
        report = service.gorenstein_test(kx2)
        assert report.verdict == "gorenstein"
        assert report.id_left.render() == "0"

    def test_finite_global_dimension(self, service, a2, a3_rad2):
        assert service.gorenstein_test(a2).verdict == "gorenstein"
        assert service.gorenstein_test(a3_rad2).id_left.render() == "2"


class TestGproj:
    """Gorenstein 投射测试"""

    def test_selfinjective_algebra(self, service, kx2):
        report = service.gproj_test(simple(kx2, 0))
        assert report.member
        assert report.certified
        assert report.certificate == "injective_dimension"

    def test_nonvanishing_ext(self, service, a2):
        """Ext¹(S1, A) ≠ 0"""
        report = service.gproj_test(simple(a2, 1), window=2)
        assert not report.member
        assert report.certificate == "nonvanishing"
        assert report.ext_vanishing["1"] == 1

    def test_projective(self, service, a2):
        assert service.gproj_test(projective(a2, 1), window=2).member


class TestDeltaChecks:
    """Δ(l) 上的检查"""

    def test_thm_6_2(self, service, delta_kx2):
        report = service.thm_6_2_sufficient(delta_kx2)
        assert report.summary["premise_holds"] is True
        assert report.verdict == "satisfied"

    def test_cor_6_4(self, service, kx2, a2):
        assert service.cor_6_4_check(kx2).verdict == "satisfied"
        assert service.cor_6_4_check(a2).verdict == "satisfied"

    def test_lemma_6_5(self, service, kx2):
        report = service.lemma_6_5_check(kx2)
        assert report.verdict == "satisfied"

    def test_canonical_isos_need_delta(self, service, a3_context):
        with pytest.raises(PreconditionError):
            service.canonical_isos(a3_context, simple(a3_context.A, 0))

    def test_cor_6_6(self, service, kx2, delta_kx2):
        t = functor_T(delta_kx2, "A", simple(kx2, 0))
        assert service.cor_6_6_check(kx2, t).verdict == "satisfied"

    def test_cor_6_6_over_hereditary_base(self, service, a2, delta_a2):
        """A2 上 S1 不是 Gorenstein 投射，T_A(S1) 也不是；P0 一侧两者都是"""
        outside = service.cor_6_6_check(a2, functor_T(delta_a2, "A", simple(a2, 1)))
        assert outside.verdict == "satisfied"
        assert outside.summary["X"]["member"] is False
        assert outside.summary["flat"]["member"] is False

        inside = service.cor_6_6_check(a2, functor_T(delta_a2, "B", projective(a2, 0)))
        assert inside.verdict == "satisfied"
        assert inside.summary["flat"]["member"] is True

    def test_cor_6_6_on_simple_tuples(self, service, a2, delta_a2):
        members = []
        for t in classify_simples(delta_a2).tuples:
            report = service.cor_6_6_check(a2, t)
            assert report.verdict == "satisfied"
            members.append(report.summary["flat"]["member"])
        assert sorted(members) == [False, True]

    def test_cor_6_7_with_negative_controls(self, service, a2):
        report = service.cor_6_7_check(a2)
        assert report.verdict == "satisfied"
        assert report.summary["negative_controls"] >= 1

    def test_cor_6_7(self, service, kx2):
        report = service.cor_6_7_check(kx2)
        assert report.verdict == "satisfied"
        assert report.summary["negative_controls"] == 0

    def test_lemma_6_1(self, service, delta_kx2):
        c = delta_kx2
        report = service.lemma_6_1_check(c, regular_module(c.A), 2)
        assert report.verdict == "satisfied"
        assert report.summary["tor_vanishes"] is True

    def test_lemma_6_1_negative_degree(self, service, delta_kx2):
        with pytest.raises(PreconditionError):
            service.lemma_6_1_check(delta_kx2, simple(delta_kx2.A, 0), -1)
