"""
精确线性代数单元测试
Unit tests for the exact linear algebra layer
"""

import pytest

from src.core import exactla as la
from src.core.exactla import Field, Subspace
from src.core.exceptions import DimensionMismatchError, FieldMismatchError


class TestField:
    """基域测试"""

    def test_rational_convert(self, field):
        """测试有理数转换"""
        half = field.convert("1/2")
        assert field.render(half + half) == "1"
        assert field.render(field.convert(-3)) == "-3"
        assert field.label == "QQ"

    def test_prime_convert(self, gf7):
        """测试素域转换与规范化输出"""
        assert gf7.render(gf7.convert(-1)) == "6"
        assert gf7.render(gf7.convert("1/2")) == "4"
        assert gf7.label == "GF(7)"
        assert gf7.characteristic == 7

    def test_prime_zero_denominator(self, gf7):
        """测试分母为零"""
        with pytest.raises(FieldMismatchError):
            gf7.convert("1/7")

    def test_invalid_fields(self):
        """测试非法的域"""
        with pytest.raises(FieldMismatchError):
            Field.prime(6)
        with pytest.raises(FieldMismatchError):
            Field("complex")

    def test_bool_is_not_scalar(self, field):
        with pytest.raises(FieldMismatchError):
            field.convert(True)


class TestMatrixOps:
    """矩阵运算测试"""

    def test_rank_and_kernel(self, field):
        """测试秩与左核"""
        m = la.matrix([[1, 2], [2, 4], [0, 1]], field)
        assert la.rank(m) == 2
        k = la.kernel(m)
        assert k.dim == 1
        assert la.is_zero(la.mul(k.basis, m))

    def test_rank_depends_on_field(self, field, gf7):
        """同一整数矩阵在 F_7 上可能降秩"""
        rows = [[1, 2], [3, 13]]
        assert la.rank(la.matrix(rows, field)) == 2
        assert la.rank(la.matrix(rows, gf7)) == 1

    def test_solve(self, field):
        """测试 x·a = b"""
        a = la.matrix([[1, 0], [1, 1]], field)
        b = la.matrix([[3, 2]], field)
        x = la.solve(a, b)
        assert x is not None
        assert la.equal(la.mul(x, a), b)

    def test_solve_without_solution(self, field):
        a = la.matrix([[1, 0]], field)
        b = la.matrix([[0, 1]], field)
        assert la.solve(a, b) is None

    def test_inverse_and_determinant(self, field):
        m = la.matrix([[2, 1], [1, 1]], field)
        inv = la.inverse(m)
        assert la.equal(la.mul(m, inv), la.identity(2, m.domain))
        assert field.render(la.determinant(m)) == "1"
        assert la.inverse(la.matrix([[1, 1], [1, 1]], field)) is None

    def test_dimension_mismatch(self, field):
        """测试维数不符"""
        with pytest.raises(DimensionMismatchError):
            la.matrix([[1, 2], [3]], field)

    def test_field_mismatch(self, field, gf7):
        """测试不同域的矩阵不能相乘"""
        with pytest.raises(FieldMismatchError):
            la.mul(la.matrix([[1]], field), la.matrix([[1]], gf7))

    def test_kron(self, field):
        a = la.matrix([[1, 2]], field)
        b = la.identity(2, a.domain)
        k = la.kron(a, b)
        assert k.shape == (2, 4)
        assert la.rank(k) == 2


class TestSubspace:
    """子空间测试"""

    def test_span_is_canonical(self, field):
        """同一子空间的不同生成组给出相同的约化基"""
        s1 = Subspace.span(la.matrix([[1, 1, 0], [0, 1, 1]], field))
        s2 = Subspace.span(la.matrix([[1, 2, 1], [1, 0, -1]], field))
        assert s1.dim == 2
        assert s1.equals(s2)

    def test_sum_and_intersection(self, field):
        x = Subspace.span(la.matrix([[1, 0, 0], [0, 1, 0]], field))
        y = Subspace.span(la.matrix([[0, 1, 0], [0, 0, 1]], field))
        assert (x + y).dim == 3
        meet = x.intersection(y)
        assert meet.dim == 1
        assert meet.contains(la.matrix([[0, 5, 0]], field))

    def test_quotient(self, field):
        """商空间的投影把子空间打到零"""
        s = Subspace.span(la.matrix([[1, 1, 0]], field))
        projection, section = la.quotient(3, s)
        assert projection.shape == (3, 2)
        assert la.is_zero(la.mul(s.basis, projection))
        assert la.equal(la.mul(section, projection), la.identity(2, s.domain))

    def test_zero_subspace(self, field):
        z = Subspace.zero(4, field.domain)
        assert z.is_zero()
        assert z.contains(la.zeros(0, 4, field.domain))
