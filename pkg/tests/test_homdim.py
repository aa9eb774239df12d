"""
同调维数服务测试
Tightness, pd identities and the global-dimension bounds
"""

import pytest

from src.core.exceptions import PreconditionError
from src.core.fdmod import gldim, left_module, regular_bimodule, simple, simples
from src.services.homdim_service import (
    VARIANTS,
    HomologicalDimensionService,
    compare_eq,
    compare_le,
)
from src.core.fdmod import DimResult


@pytest.fixture
def service():
    return HomologicalDimensionService(cutoff=16)


class TestComparisons:
    """维数比较测试"""

    def test_le(self):
        assert compare_le(DimResult.finite(2), DimResult.finite(3)) == "satisfied"
        assert compare_le(DimResult.finite(4), DimResult.finite(3)) == "violated"
        assert compare_le(DimResult.infinite(None), DimResult.infinite(None)) == "vacuous"
        assert compare_le(DimResult.infinite(None), DimResult.finite(3)) == "violated"
        assert compare_le(DimResult.at_least(5), DimResult.finite(3)) == "violated"
        assert compare_le(DimResult.at_least(2), DimResult.finite(3)) == "undecided"

    def test_eq(self):
        assert compare_eq(DimResult.finite(1), DimResult.finite(1)) == "satisfied"
        assert compare_eq(DimResult.finite(1), DimResult.infinite(None)) == "violated"
        assert compare_eq(DimResult.at_least(1), DimResult.finite(1)) == "undecided"


class TestTightness:
    """紧分解测试"""

    def test_tight_and_not(self, service, a3_context):
        """N 在 A 侧紧（M⊗N = 0），M 在 B 侧不紧"""
        c = a3_context
        n_rep = service.tightness(c, left_module(c.N), "A")
        m_rep = service.tightness(c, left_module(c.M), "B")
        assert n_rep.tight is True
        assert m_rep.tight is False
        assert m_rep.witness_degree == 0

    def test_oracle_agrees(self, service, a3_context):
        c = a3_context
        assert service.tightness_oracle(c, left_module(c.N), "A") is True
        assert service.tightness_oracle(c, left_module(c.M), "B") is False

    def test_requires_zero_context(self, service, delta_kx2):
        with pytest.raises(PreconditionError):
            service.tightness(delta_kx2, simple(delta_kx2.A, 0))

    def test_pd_identities(self, service, a3_context):
        c = a3_context
        for side, alg in (("A", c.A), ("B", c.B)):
            for s in simples(alg):
                report = service.pd_identity_checks(c, s, side)
                assert report.verdict != "violated"
                assert {"Lemma 5.4", "Lemma 5.6", "Cor 5.7", "Prop 5.8"} <= {e.name for e in report.entries}


class TestBounds:
    """整体维数界测试"""

    def test_thm_5_9_vacuous_without_tightness(self, service, a3_context):
        report = service.bound_thm_5_9(a3_context)
        assert report.theorem_tag == "5.9"
        assert report.verdict == "vacuous"
        assert report.lhs.render() == "2"
        assert report.rhs.render() == "1"

    def test_lower_bound(self, service, a3_context):
        report = service.lower_bound_5_17(a3_context)
        assert report.verdict == "satisfied"
        assert report.lhs.render() == "0"

    def test_words(self, service, a3_context):
        assert service.word_dims(a3_context, 3) == {"N": [1, 1, 0], "M": [1, 0, 0]}
        assert service.nilpotency_class(a3_context) == 2
        with pytest.raises(PreconditionError):
            service.alternating_word(a3_context, "N", 0)

    def test_bel_bound(self, service, a3_context):
        report = service.nilpotency_and_bel_bound(a3_context)
        assert report.extras["c_H"] == 2
        assert report.verdict == "vacuous"

    def test_variant_validation(self, service, a3_context):
        with pytest.raises(PreconditionError):
            service.bound_thm_5_14(a3_context, 1, 7)
        with pytest.raises(PreconditionError):
            service.bound_thm_5_14(a3_context, 0, 1)

    def test_scan_covers_all_variants(self, service, a3_context):
        reports = service.scan_thm_5_14(a3_context, 1)
        assert {r.extras["variant"] for r in reports} == set(VARIANTS)
        assert all(r.verdict != "violated" for r in reports)

    def test_trivext(self, service, a2):
        report = service.trivext_bounds(a2, regular_bimodule(a2))
        assert report.theorem_tag == "5.19"
        assert report.verdict != "violated"
        assert any(e.name == "Cor 5.20" for e in report.entries)
        assert all(e.verdict != "violated" for e in report.entries)

    def test_gldim_matches_core(self, service, a3_context):
        report = service.bound_thm_5_9(a3_context)
        assert report.lhs.render() == str(gldim(a3_context.algebra))
