"""
Morita 上下文单元测试
Unit tests for contexts, the Morita ring and tuple modules
"""

import random

import pytest

from src.core import exactla as la
from src.core.exactla import Field
from src.core.exceptions import AlgebraMismatchError, InvalidContextError, PreconditionError
from src.core.fdmod import (
    iso_test,
    projective,
    radical_submodule,
    regular_bimodule,
    regular_module,
    simple,
    simples,
    top,
)
from src.core.morita import (
    adjunction_checks,
    classify_injectives,
    classify_projectives,
    classify_simples,
    delta_context,
    dual_tuple,
    exactness_check,
    flat_identification,
    flat_to_tuple,
    functor_C,
    functor_H,
    functor_T,
    functor_U,
    functor_Z,
    loewy_bound_cor_3_10,
    make_context,
    opposite_iso,
    pierce_data,
    prop37_premise,
    random_delta_context,
    random_module,
    random_zero_context,
    selfinjective_check,
    transport_module,
    trivial_extension_iso,
    tuple_violations,
    validate_context,
)


class TestContexts:
    """上下文构造与校验测试"""

    def test_pierce_dimensions(self, two_cycle_context):
        c = two_cycle_context
        assert (c.A.dim, c.N.dim, c.M.dim, c.B.dim) == (1, 1, 1, 1)
        assert c.algebra.dim == 4
        assert c.is_zero_context

    def test_pierce_iso(self, two_cycle):
        data = pierce_data(two_cycle, [["v"], ["w"]])
        assert data.iso().verify()

    def test_delta_is_valid(self, delta_kx2):
        assert validate_context(delta_kx2) == []
        assert not delta_kx2.is_zero_context
        assert delta_kx2.algebra.dim == 8

    def test_unbalanced_pairing_rejected(self, kx2):
        """φ 为乘法而 ψ = 0 时结合恒等式失败"""
        mult = la.from_rows(
            [kx2.product_vector(p, q) for p in range(kx2.dim) for q in range(kx2.dim)], kx2.dim, kx2.domain
        )
        zero = la.zeros(kx2.dim * kx2.dim, kx2.dim, kx2.domain)
        with pytest.raises(InvalidContextError) as exc_info:
            make_context(kx2, kx2, regular_bimodule(kx2), regular_bimodule(kx2), mult, zero, name="bad")
        assert exc_info.value.violations

    def test_bimodule_sides(self, a2, kx2):
        mult = la.zeros(9, 3, a2.domain)
        with pytest.raises(AlgebraMismatchError):
            make_context(a2, kx2, regular_bimodule(a2), regular_bimodule(a2), mult, mult)

    def test_opposite_iso(self, delta_kx2, a3_context):
        assert opposite_iso(delta_kx2).verify()
        assert opposite_iso(a3_context).verify()

    def test_trivial_extension_iso(self, a3_context, delta_kx2):
        assert trivial_extension_iso(a3_context).verify()
        with pytest.raises(PreconditionError):
            trivial_extension_iso(delta_kx2)

    def test_loewy_bound(self, delta_kx2):
        bound = loewy_bound_cor_3_10(delta_kx2)
        assert bound["loewy_A"] == 2
        assert bound["twice_loewy_Lambda"] == 2 * bound["loewy_Lambda"]
        assert bound["loewy_A"] <= bound["twice_loewy_Lambda"]


class TestFunctors:
    """函子与元组模测试"""

    def test_tensor_and_hom_functors(self, two_cycle_context):
        c = two_cycle_context
        x = simple(c.A, 0)
        for t in (functor_T(c, "A", x), functor_H(c, "A", x)):
            assert tuple_violations(t) == []
            assert functor_U(t, "A") is x

    def test_b_side(self, delta_kx2):
        c = delta_kx2
        y = projective(c.B, 0)
        t = functor_T(c, "B", y)
        assert tuple_violations(t) == []
        assert t.X.dim == 2 and t.Y is y

    def test_zero_functor_requires_zero_context(self, delta_kx2, a3_context):
        assert functor_Z(a3_context, "A", simple(a3_context.A, 0)).Y.dim == 0
        with pytest.raises(PreconditionError):
            functor_Z(delta_kx2, "A", simple(delta_kx2.A, 0))

    def test_unknown_side(self, delta_kx2):
        with pytest.raises(PreconditionError):
            functor_T(delta_kx2, "C", simple(delta_kx2.A, 0))

    def test_flat_round_trip(self, a3_context):
        t = functor_T(a3_context, "B", simple(a3_context.B, 0))
        back = flat_to_tuple(a3_context, t.flat)
        assert (back.X.dim, back.Y.dim) == (t.X.dim, t.Y.dim)
        assert tuple_violations(back) == []

    def test_image_functor_is_simple(self, two_cycle_context):
        """C_A(S) 是 Λ 的单模"""
        c = two_cycle_context
        t = functor_C(c, "A", simple(c.A, 0))
        assert any(iso_test(t.flat, s) is not None for s in simples(c.algebra))

    def test_adjunctions(self, two_cycle_context):
        c = two_cycle_context
        checks = adjunction_checks(c, simple(c.A, 0), simple(c.B, 0), regular_module(c.algebra))
        for lhs, rhs in checks.values():
            assert lhs == rhs

    def test_exactness(self, delta_kx2):
        lam = regular_module(delta_kx2.algebra)
        _, inclusion = radical_submodule(lam)
        _, projection = top(lam)
        assert exactness_check(delta_kx2, inclusion, projection)

    def test_dual_tuple(self, a3_context):
        t = functor_T(a3_context, "A", projective(a3_context.A, 0))
        d = dual_tuple(t)
        assert d.dim == t.dim
        assert d.context is a3_context.opposite

    def test_transport(self, two_cycle):
        data = pierce_data(two_cycle, [["v"], ["w"]])
        pulled = transport_module(data.iso(), regular_module(two_cycle))
        assert iso_test(pulled, regular_module(data.context.algebra)) is not None


class TestClassification:
    """投射、内射与单模分类测试"""

    def test_projectives_and_injectives(self, two_cycle_context):
        projectives = classify_projectives(two_cycle_context)
        injectives = classify_injectives(two_cycle_context)
        assert len(projectives) == 2 and projectives.all_checked
        assert len(injectives) == 2 and injectives.all_checked

    def test_simples_of_zero_context(self, a3_context):
        result = classify_simples(a3_context)
        assert len(result) == 3
        assert result.all_checked

    def test_simples_of_delta(self, delta_kx2):
        """Φ ≠ 0 时 B 侧单模不单独出现"""
        result = classify_simples(delta_kx2)
        assert result.labels == ("C_A(S0)",)
        assert result.all_checked

    def test_simples_of_delta_over_field(self, semisimple):
        """Δ(K) 只有一个单模：Φ 在 S′0 上不为零，不出现 (0, S′0, 0, 0)"""
        c = delta_context(semisimple)
        result = classify_simples(c)
        assert result.labels == ("C_A(S0)",)
        assert result.all_checked
        assert len(classify_projectives(c).tuples) == 2

    def test_selfinjective(self, delta_kx2, a3_context):
        assert selfinjective_check(delta_kx2)["selfinjective"]
        assert not selfinjective_check(a3_context)["selfinjective"]

    def test_premise(self, delta_kx2):
        premise = prop37_premise(delta_kx2)
        assert premise["holds"]
        assert premise["consistent"]


@pytest.mark.slow
class TestRandomContexts:
    """F_7 上随机上下文的性质测试"""

    @pytest.mark.parametrize("seed", range(6))
    def test_zero_context_classification(self, seed):
        rng = random.Random(seed)
        c = random_zero_context(Field.prime(7), rng)
        assert validate_context(c) == []
        assert classify_projectives(c).all_checked
        assert classify_injectives(c).all_checked
        assert classify_simples(c).all_checked
        assert trivial_extension_iso(c).verify()

    @pytest.mark.parametrize("seed", range(4))
    def test_delta_context(self, seed):
        c = random_delta_context(Field.prime(7), random.Random(seed))
        assert validate_context(c) == []
        assert classify_projectives(c).all_checked
        assert opposite_iso(c).verify()


RANDOM_CASES = [("zero", seed) for seed in range(100)] + [("delta", seed) for seed in range(100, 200)]


def _random_context(kind: str, seed: int):
    rng = random.Random(seed)
    field = Field.prime(7)
    c = random_zero_context(field, rng) if kind == "zero" else random_delta_context(field, rng)
    return c, rng


@pytest.mark.slow
class TestRandomFunctorIdentities:
    """F_7 上随机上下文的伴随、正合与元组往返"""

    @pytest.mark.parametrize("kind,seed", RANDOM_CASES)
    def test_functor_identities(self, kind, seed):
        c, rng = _random_context(kind, seed)
        x = random_module(c.A, rng)
        y = random_module(c.B, rng)
        w = random_module(c.algebra, rng)
        where = (
            f"{kind} seed={seed}: dim A={c.A.dim} B={c.B.dim} M={c.M.dim} N={c.N.dim}, "
            f"X={x.dim} Y={y.dim} W={w.dim}"
        )

        for name, (lhs, rhs) in adjunction_checks(c, x, y, w).items():
            assert lhs == rhs, f"{name}: {lhs} != {rhs} ({where})"

        _, inclusion = radical_submodule(w)
        _, projection = top(w)
        assert exactness_check(c, inclusion, projection), f"0 → rad W → W → top W → 0 ({where})"

        t = flat_to_tuple(c, w)
        assert tuple_violations(t) == [], where
        identification = flat_identification(c, w)
        assert identification.is_valid() and identification.is_iso(), where

        for side, module in (("A", x), ("B", y)):
            image = functor_T(c, side, module)
            back = flat_to_tuple(c, image.flat)
            assert (back.X.dim, back.Y.dim) == (image.X.dim, image.Y.dim), f"T_{side} ({where})"
            assert tuple_violations(back) == [], f"T_{side} ({where})"
