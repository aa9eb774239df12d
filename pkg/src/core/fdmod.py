"""
有限维模
Modules over an FDAlgebra: Hom, tensor, duality, projective covers, minimal
resolutions, Ext/Tor and exact isomorphism testing.

A module x stores one matrix per algebra basis element with a·v = v·ρ(a),
so ρ(ab) = ρ(b)ρ(a). Maps are dim(source) × dim(target) matrices and compose
left to right.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from sympy import symbols
from sympy.polys.matrices import DomainMatrix

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exactla import Matrix, Row, Subspace
from src.core.exceptions import (
    AlgebraMismatchError,
    DimensionMismatchError,
    InvalidModuleError,
    IsoSearchError,
    PreconditionError,
)
from src.core.fdalg import FDAlgebra
from src.utils.performance import memoize_on_instance, monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True)
class Adapted:
    """幂等元适配基：T 的行依次是 e_0 X, e_1 X, … 的基"""

    change: Matrix
    inverse: Matrix
    dims: Tuple[int, ...]
    offsets: Tuple[int, ...]
    blocks: Tuple[Subspace, ...]

    def block_of(self, k: int) -> int:
        for i in range(len(self.dims) - 1, -1, -1):
            if k >= self.offsets[i]:
                return i
        return 0


@dataclass(frozen=True, eq=False)
class FDModule:
    """左模：每个代数基元素对应一个 dim×dim 作用矩阵"""

    algebra: FDAlgebra
    dim: int
    action: Tuple[Matrix, ...]
    name: str = ""

    @property
    def domain(self) -> Any:
        return self.algebra.domain

    def __repr__(self) -> str:
        return f"FDModule({self.name or 'anonymous'}, dim={self.dim}, over={self.algebra.name})"

    def act(self, vec: Sequence[Any]) -> Matrix:
        """代数元素（坐标向量）的作用矩阵"""
        return la.linear_combination(list(vec), self.action, (self.dim, self.dim), self.domain)

    @cached_property
    def idempotent_actions(self) -> Tuple[Matrix, ...]:
        return tuple(self.act(e) for e in self.algebra.idempotents)

    @cached_property
    def adapted(self) -> Adapted:
        blocks = tuple(la.image(m) if self.dim else Subspace.zero(0, self.domain) for m in self.idempotent_actions)
        dims = tuple(b.dim for b in blocks)
        offsets = tuple(sum(dims[:i]) for i in range(len(dims)))
        change = la.vstack([b.basis for b in blocks], self.dim, self.domain)
        inverse = la.inverse(change)
        if inverse is None:
            raise InvalidModuleError("幂等元作用的像不构成直和分解")
        return Adapted(change, inverse, dims, offsets, blocks)

    @property
    def block_dims(self) -> Tuple[int, ...]:
        return self.adapted.dims

    @cached_property
    def adapted_generators(self) -> Tuple[List[Row], ...]:
        """适配基下各生成元的作用矩阵（按行）"""
        a = self.adapted
        return tuple(
            la.to_rows(la.chain(a.change, self.action[g], a.inverse)) for g in self.algebra.generators
        )


def _same_algebra(*modules: FDModule) -> None:
    algebras = {id(m.algebra) for m in modules}
    if len(algebras) > 1:
        raise AlgebraMismatchError("模不在同一代数上: " + ", ".join(repr(m) for m in modules))


def make_module(algebra: FDAlgebra, action: Sequence[Matrix], name: str = "", check: bool = True) -> FDModule:
    """由作用矩阵构造模，校验单位与乘法表"""
    if len(action) != algebra.dim:
        raise InvalidModuleError(f"作用矩阵个数 {len(action)} 与代数维数 {algebra.dim} 不符")
    dim = action[0].shape[0] if action else 0
    for m in action:
        if m.shape != (dim, dim):
            raise InvalidModuleError(f"作用矩阵形状 {m.shape} 不是 {dim}×{dim}")
        la.ensure_field(m, algebra.field)
    module = FDModule(algebra, dim, tuple(action), name)
    if check:
        validate_module(module)
    return module


def validate_module(x: FDModule) -> None:
    a = x.algebra
    if not la.equal(x.act(a.unit), la.identity(x.dim, x.domain)):
        raise InvalidModuleError(f"单位元在模 {x.name} 上不作用为恒等")
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = x.act(a.product_vector(i, j))
            rhs = la.mul(x.action[j], x.action[i])
            if not la.equal(lhs, rhs):
                raise InvalidModuleError(
                    f"模 {x.name} 不满足乘法表: ({a.labels[i]}, {a.labels[j]})",
                    pair=f"{a.labels[i]},{a.labels[j]}",
                )


def zero_module(a: FDAlgebra) -> FDModule:
    return FDModule(a, 0, tuple(la.zeros(0, 0, a.domain) for _ in range(a.dim)), "0")


def module_from_generators(a: FDAlgebra, matrices: Dict[str, Matrix], name: str = "") -> FDModule:
    """由顶点与箭头的矩阵构造箭图代数上的模：ρ(a1…ak) = ρ(ak)…ρ(a1)"""
    if a.paths is None or a.quiver is None:
        raise PreconditionError(f"代数 {a.name} 不是箭图代数，无法由生成元构造模")
    required = list(a.quiver.vertices) + [arrow.label for arrow in a.quiver.arrows]
    missing = [label for label in required if label not in matrices]
    if missing:
        raise InvalidModuleError(f"缺少生成元矩阵: {', '.join(missing)}")
    dim = matrices[required[0]].shape[0]
    action = []
    for vertex, labels in a.paths:
        if not labels:
            action.append(matrices[a.quiver.vertices[vertex]])
            continue
        m = la.identity(dim, a.domain)
        for label in reversed(labels):
            m = la.mul(m, matrices[label])
        action.append(m)
    return make_module(a, action, name)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """模同态：x ↦ x·matrix"""

    source: FDModule
    target: FDModule
    matrix: Matrix

    def is_valid(self) -> bool:
        if self.matrix.shape != (self.source.dim, self.target.dim):
            return False
        for k in range(self.source.algebra.dim):
            lhs = la.mul(self.source.action[k], self.matrix)
            rhs = la.mul(self.matrix, self.target.action[k])
            if not la.equal(lhs, rhs):
                return False
        return True

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """先 self 后 other"""
        if other.source.dim != self.target.dim:
            raise DimensionMismatchError("映射不可合成")
        return ModuleMap(self.source, other.target, la.mul(self.matrix, other.matrix))

    @property
    def rank(self) -> int:
        return la.rank(self.matrix)

    def is_zero(self) -> bool:
        return la.is_zero(self.matrix)

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, la.add(self.matrix, other.matrix))

    def scaled(self, c: Any) -> "ModuleMap":
        return ModuleMap(self.source, self.target, la.scale(self.matrix, c))


def module_map(source: FDModule, target: FDModule, matrix: Matrix, check: bool = True) -> ModuleMap:
    _same_algebra(source, target)
    f = ModuleMap(source, target, matrix)
    if check and not f.is_valid():
        raise InvalidModuleError(f"矩阵不是模同态: {source.name} → {target.name}")
    return f


def identity_map(x: FDModule) -> ModuleMap:
    return ModuleMap(x, x, la.identity(x.dim, x.domain))


def zero_map(x: FDModule, y: FDModule) -> ModuleMap:
    return ModuleMap(x, y, la.zeros(x.dim, y.dim, x.domain))


# ---------------------------------------------------------------------------
# Bimodules


@dataclass(frozen=True, eq=False)
class Bimodule:
    """(B, A)-双模：左作用 b·m = m·ρL(b)，右作用 m·a = m·ρR(a)"""

    left_algebra: FDAlgebra
    right_algebra: FDAlgebra
    dim: int
    left_action: Tuple[Matrix, ...]
    right_action: Tuple[Matrix, ...]
    name: str = ""

    @property
    def domain(self) -> Any:
        return self.left_algebra.domain

    def __repr__(self) -> str:
        return f"Bimodule({self.name or 'anonymous'}, dim={self.dim})"

    def act_left(self, vec: Sequence[Any]) -> Matrix:
        return la.linear_combination(list(vec), self.left_action, (self.dim, self.dim), self.domain)

    def act_right(self, vec: Sequence[Any]) -> Matrix:
        return la.linear_combination(list(vec), self.right_action, (self.dim, self.dim), self.domain)


def make_bimodule(
    left_algebra: FDAlgebra,
    right_algebra: FDAlgebra,
    left_action: Sequence[Matrix],
    right_action: Sequence[Matrix],
    name: str = "",
    check: bool = True,
) -> Bimodule:
    if left_algebra.field != right_algebra.field:
        raise AlgebraMismatchError("双模两侧代数的域不同")
    dim = left_action[0].shape[0] if left_action else 0
    bim = Bimodule(left_algebra, right_algebra, dim, tuple(left_action), tuple(right_action), name)
    if check:
        validate_bimodule(bim)
    return bim


def validate_bimodule(m: Bimodule) -> None:
    validate_module(left_module(m))
    validate_module(right_module(m))
    for lb in m.left_action:
        for ra in m.right_action:
            if not la.equal(la.mul(lb, ra), la.mul(ra, lb)):
                raise InvalidModuleError(f"双模 {m.name} 的左右作用不交换")


@memoize_on_instance
def left_module(m: Bimodule) -> FDModule:
    return FDModule(m.left_algebra, m.dim, m.left_action, f"{m.name}|left")


@memoize_on_instance
def right_module(m: Bimodule) -> FDModule:
    """右 A-结构视为 A^op 上的左模"""
    return FDModule(m.right_algebra.opposite, m.dim, m.right_action, f"{m.name}|right")


def regular_bimodule(a: FDAlgebra) -> Bimodule:
    return Bimodule(a, a, a.dim, a.left_regular, a.right_regular, f"{a.name}")


def zero_bimodule(b: FDAlgebra, a: FDAlgebra) -> Bimodule:
    return Bimodule(
        b, a, 0,
        tuple(la.zeros(0, 0, b.domain) for _ in range(b.dim)),
        tuple(la.zeros(0, 0, a.domain) for _ in range(a.dim)),
        "0",
    )


def bimodule_direct_sum(m1: Bimodule, m2: Bimodule) -> Bimodule:
    if m1.left_algebra is not m2.left_algebra or m1.right_algebra is not m2.right_algebra:
        raise AlgebraMismatchError("双模直和需要相同的两侧代数")
    domain = m1.domain
    left = tuple(la.block_diagonal([x, y], domain) for x, y in zip(m1.left_action, m2.left_action))
    right = tuple(la.block_diagonal([x, y], domain) for x, y in zip(m1.right_action, m2.right_action))
    return Bimodule(m1.left_algebra, m1.right_algebra, m1.dim + m2.dim, left, right, f"{m1.name}⊕{m2.name}")


def bimodule_swap(m: Bimodule) -> Bimodule:
    """同一空间视为 (A^op, B^op)-双模"""
    return Bimodule(
        m.right_algebra.opposite, m.left_algebra.opposite, m.dim, m.right_action, m.left_action, f"{m.name}^sw"
    )


# ---------------------------------------------------------------------------
# Standard modules


@memoize_on_instance
def regular_module(a: FDAlgebra) -> FDModule:
    return FDModule(a, a.dim, a.left_regular, f"{a.name}")


def submodule(x: FDModule, s: Subspace, check: bool = False) -> Tuple[FDModule, ModuleMap]:
    """子模及其包含映射；作用取主元列坐标"""
    if s.ambient_dim != x.dim:
        raise DimensionMismatchError(f"子空间环境维数 {s.ambient_dim} 与模维数 {x.dim} 不符")
    if check:
        for m in x.action:
            if not s.contains(la.mul(s.basis, m)):
                raise InvalidModuleError("子空间在作用下不封闭")
    action = tuple(s.coordinates(la.mul(s.basis, m)) for m in x.action)
    sub = FDModule(x.algebra, s.dim, action, f"sub({x.name})")
    return sub, ModuleMap(sub, x, s.basis)


def quotient_module(x: FDModule, s: Subspace) -> Tuple[FDModule, ModuleMap]:
    projection, section = la.quotient(x.dim, s)
    action = tuple(la.chain(section, m, projection) for m in x.action)
    q = FDModule(x.algebra, x.dim - s.dim, action, f"{x.name}/sub")
    return q, ModuleMap(x, q, projection)


def direct_sum(xs: Sequence[FDModule], name: str = "") -> Tuple[FDModule, List[ModuleMap], List[ModuleMap]]:
    """直和及其嵌入与投影"""
    if not xs:
        raise PreconditionError("直和需要至少一个模")
    _same_algebra(*xs)
    a = xs[0].algebra
    domain = a.domain
    action = tuple(la.block_diagonal([x.action[k] for x in xs], domain) for k in range(a.dim))
    total = sum(x.dim for x in xs)
    s = FDModule(a, total, action, name or "⊕".join(x.name or "?" for x in xs))
    inclusions, projections = [], []
    offset = 0
    for x in xs:
        inc = la.hstack(
            [la.zeros(x.dim, offset, domain), la.identity(x.dim, domain), la.zeros(x.dim, total - offset - x.dim, domain)],
            x.dim,
            domain,
        )
        inclusions.append(ModuleMap(x, s, inc))
        projections.append(ModuleMap(s, x, la.transpose(inc)))
        offset += x.dim
    return s, inclusions, projections


def kernel_map(f: ModuleMap) -> Tuple[FDModule, ModuleMap]:
    return submodule(f.source, la.kernel(f.matrix))


def image_submodule(f: ModuleMap) -> Tuple[FDModule, ModuleMap]:
    return submodule(f.target, la.image(f.matrix))


def cokernel(f: ModuleMap) -> Tuple[FDModule, ModuleMap]:
    return quotient_module(f.target, la.image(f.matrix))


def radical_subspace(x: FDModule) -> Subspace:
    rows: List[Row] = []
    for r in x.algebra.radical.rows:
        rows.extend(la.to_rows(x.act(r)))
    return Subspace.span_rows(rows, x.dim, x.domain)


def radical_submodule(x: FDModule) -> Tuple[FDModule, ModuleMap]:
    return submodule(x, radical_subspace(x))


def top(x: FDModule) -> Tuple[FDModule, ModuleMap]:
    return quotient_module(x, radical_subspace(x))


@memoize_on_instance
def projective(a: FDAlgebra, i: int) -> FDModule:
    """不可分解投射模 A·e_i"""
    if not 0 <= i < a.n_idempotents:
        raise PreconditionError(f"幂等元下标越界: {i}")
    ei = list(a.idempotents[i])
    rows = [a.multiply(a.basis_vector(k), ei) for k in range(a.dim)]
    p, _ = submodule(regular_module(a), Subspace.span_rows(rows, a.dim, a.domain))
    return FDModule(a, p.dim, p.action, f"P{i}")


def projective_basis(a: FDAlgebra, i: int) -> Subspace:
    ei = list(a.idempotents[i])
    return Subspace.span_rows([a.multiply(a.basis_vector(k), ei) for k in range(a.dim)], a.dim, a.domain)


@memoize_on_instance
def injective(a: FDAlgebra, i: int) -> FDModule:
    """D(e_i A)：经对偶得到的不可分解内射模"""
    inj = dual(projective(a.opposite, i))
    return FDModule(a, inj.dim, inj.action, f"I{i}")


@memoize_on_instance
def simple(a: FDAlgebra, i: int) -> FDModule:
    s, _ = top(projective(a, i))
    return FDModule(a, s.dim, s.action, f"S{i}")


def simples(a: FDAlgebra) -> List[FDModule]:
    """每个同构类一个单模（非基本代数中同构的幂等元只保留第一个）"""
    result: List[FDModule] = []
    for i in range(a.n_idempotents):
        s = simple(a, i)
        if not any(iso_test(s, t) is not None for t in result):
            result.append(s)
    return result


def simple_indices(a: FDAlgebra) -> List[int]:
    """simples 中每个单模对应的幂等元下标"""
    chosen: List[int] = []
    for i in range(a.n_idempotents):
        if not any(iso_test(simple(a, i), simple(a, j)) is not None for j in chosen):
            chosen.append(i)
    return chosen


def dual(x: FDModule) -> FDModule:
    """D = Hom_K(−, K)：作用矩阵转置，得到对侧代数上的模"""
    return FDModule(x.algebra.opposite, x.dim, tuple(la.transpose(m) for m in x.action), f"D({x.name})")


def dual_map(f: ModuleMap, source: Optional[FDModule] = None, target: Optional[FDModule] = None) -> ModuleMap:
    """D(f): D(target) → D(source)"""
    return ModuleMap(target or dual(f.target), source or dual(f.source), la.transpose(f.matrix))


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass(frozen=True, eq=False)
class HomSpace:
    """Hom_A(x, y)：基为展平后约化行阶梯形的同态矩阵"""

    source: FDModule
    target: FDModule
    flat: Subspace

    @property
    def dim(self) -> int:
        return self.flat.dim

    @cached_property
    def basis(self) -> Tuple[Matrix, ...]:
        shape = (self.source.dim, self.target.dim)
        return tuple(la.unflatten(row, shape, self.source.domain) for row in self.flat.rows)

    def element(self, coeffs: Sequence[Any]) -> Matrix:
        shape = (self.source.dim, self.target.dim)
        return la.linear_combination(list(coeffs), self.basis, shape, self.source.domain)

    def coordinates(self, h: Matrix) -> Row:
        flat = la.from_rows([la.flatten(h)], self.flat.ambient_dim, self.source.domain)
        if not self.flat.contains(flat):
            raise InvalidModuleError("矩阵不在 Hom 空间中")
        return la.to_rows(self.flat.coordinates(flat))[0] if self.dim else []

    def maps(self) -> List[ModuleMap]:
        return [ModuleMap(self.source, self.target, h) for h in self.basis]


@lru_cache(maxsize=4096)
def hom_space(x: FDModule, y: FDModule) -> HomSpace:
    """分块求解 G^X_{ts} H'_s = H'_t G^Y_{ts}，再变回原基"""
    _same_algebra(x, y)
    domain = x.domain
    ax, ay = x.adapted, y.adapted
    var: Dict[Tuple[int, int], int] = {}
    for i in range(len(ax.dims)):
        for r in range(ax.dims[i]):
            for c in range(ay.dims[i]):
                var[(ax.offsets[i] + r, ay.offsets[i] + c)] = len(var)
    if not var:
        return HomSpace(x, y, Subspace.zero(x.dim * y.dim, domain))
    equations: Dict[int, Dict[int, Any]] = {}
    for gx, gy in zip(x.adapted_generators, y.adapted_generators):
        gx_sparse = [la.sparse_vector(row) for row in gx]
        gy_cols: Dict[int, Dict[int, Any]] = {}
        for k, row in enumerate(gy):
            for c, val in la.iter_nonzero(row):
                gy_cols.setdefault(c, {})[k] = val
        for r in range(x.dim):
            for c in range(y.dim):
                eq: Dict[int, Any] = {}
                for k, val in gx_sparse[r].items():
                    v = var.get((k, c))
                    if v is not None:
                        eq[v] = eq.get(v, domain.zero) + val
                for k, val in gy_cols.get(c, {}).items():
                    v = var.get((r, k))
                    if v is not None:
                        eq[v] = eq.get(v, domain.zero) - val
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    equations[len(equations)] = eq
    solutions = la.right_nullspace_sparse(equations, len(var), domain)
    inverse_var = {v: key for key, v in var.items()}
    rows = []
    for sol in solutions:
        h = [[domain.zero] * y.dim for _ in range(x.dim)]
        for v, val in sol.items():
            r, c = inverse_var[v]
            h[r][c] = val
        original = la.chain(ax.inverse, la.from_rows(h, y.dim, domain), ay.change)
        rows.append(la.flatten(original))
    return HomSpace(x, y, Subspace.span_rows(rows, x.dim * y.dim, domain))


# ---------------------------------------------------------------------------
# Tensor products


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """M ⊗_A X：平面空间 ⊕ M e_i ⊗ e_i X 对平衡关系的商"""

    bimodule: Bimodule
    module: FDModule
    m_blocks: Tuple[Subspace, ...]
    x_blocks: Tuple[Subspace, ...]
    offsets: Tuple[int, ...]
    plain_dim: int
    projection: Matrix
    section: Matrix
    result: FDModule

    @property
    def dim(self) -> int:
        return self.result.dim

    @cached_property
    def _m_idempotents(self) -> Tuple[Matrix, ...]:
        return tuple(self.bimodule.act_right(e) for e in self.module.algebra.idempotents)

    def plain(self, m_row: Row, x_row: Row) -> Row:
        domain = self.module.domain
        w = [domain.zero] * self.plain_dim
        m_mat = la.from_rows([list(m_row)], self.bimodule.dim, domain)
        x_mat = la.from_rows([list(x_row)], self.module.dim, domain)
        for i, (mb, xb) in enumerate(zip(self.m_blocks, self.x_blocks)):
            if mb.is_zero() or xb.is_zero():
                continue
            mi = la.to_rows(mb.coordinates(la.mul(m_mat, self._m_idempotents[i])))[0]
            xi = la.to_rows(xb.coordinates(la.mul(x_mat, self.module.idempotent_actions[i])))[0]
            base, width = self.offsets[i], xb.dim
            for p, mv in la.iter_nonzero(mi):
                for q, xv in la.iter_nonzero(xi):
                    w[base + p * width + q] += mv * xv
        return w

    def pure(self, m_row: Row, x_row: Row) -> Row:
        """m ⊗ x 在商空间中的坐标"""
        if self.dim == 0:
            return []
        w = la.from_rows([self.plain(m_row, x_row)], self.plain_dim, self.module.domain)
        return la.to_rows(la.mul(w, self.projection))[0]

    def induced(self, bilinear: Callable[[Row, Row], Row], target_dim: int) -> Matrix:
        """平衡双线性映射诱导的线性映射 M⊗X → V"""
        domain = self.module.domain
        rows: List[Row] = []
        for mb, xb in zip(self.m_blocks, self.x_blocks):
            for m_row in mb.rows:
                for x_row in xb.rows:
                    rows.append(list(bilinear(m_row, x_row)))
        plain = la.from_rows(rows, target_dim, domain)
        return la.mul(self.section, plain)


@lru_cache(maxsize=4096)
def tensor(m: Bimodule, x: FDModule) -> TensorProduct:
    if m.right_algebra is not x.algebra:
        raise AlgebraMismatchError(f"无法作张量积: {m!r} ⊗ {x!r}")
    a = x.algebra
    domain = x.domain
    m_blocks = tuple(la.image(m.act_right(e)) if m.dim else Subspace.zero(0, domain) for e in a.idempotents)
    x_blocks = x.adapted.blocks
    offsets, total = [], 0
    for mb, xb in zip(m_blocks, x_blocks):
        offsets.append(total)
        total += mb.dim * xb.dim
    relations: List[Row] = []
    blocks = a.blocks
    for g in a.generators:
        pairs = (
            [blocks[g]]
            if blocks is not None
            else [(s, t) for s in range(a.n_idempotents) for t in range(a.n_idempotents)]
        )
        for s, t in pairs:
            piece = a.multiply(a.multiply(list(a.idempotents[s]), a.basis_vector(g)), list(a.idempotents[t]))
            if not any(piece):
                continue
            rho_m, rho_x = m.act_right(piece), x.act(piece)
            ms, xt = m_blocks[s], x_blocks[t]
            if ms.is_zero() or xt.is_zero():
                continue
            mg = la.to_rows(m_blocks[t].coordinates(la.mul(ms.basis, rho_m))) if m_blocks[t].dim else None
            gx = la.to_rows(x_blocks[s].coordinates(la.mul(xt.basis, rho_x))) if x_blocks[s].dim else None
            for p in range(ms.dim):
                for q in range(xt.dim):
                    w = [domain.zero] * total
                    if mg is not None:
                        base, width = offsets[t], xt.dim
                        for p2, val in la.iter_nonzero(mg[p]):
                            w[base + p2 * width + q] += val
                    if gx is not None:
                        base, width = offsets[s], x_blocks[s].dim
                        for q2, val in la.iter_nonzero(gx[q]):
                            w[base + p * width + q2] -= val
                    if any(w):
                        relations.append(w)
    rel = Subspace.span_rows(relations, total, domain) if relations else Subspace.zero(total, domain)
    projection, section = la.quotient(total, rel)
    b = m.left_algebra
    action = []
    for k in range(b.dim):
        diag = []
        for mb, xb in zip(m_blocks, x_blocks):
            if mb.is_zero() or xb.is_zero():
                diag.append(la.zeros(mb.dim * xb.dim, mb.dim * xb.dim, domain))
                continue
            local = mb.coordinates(la.mul(mb.basis, m.left_action[k]))
            diag.append(la.kron(local, la.identity(xb.dim, domain)))
        action.append(la.chain(section, la.block_diagonal(diag, domain), projection))
    result = FDModule(b, projection.shape[1], tuple(action), f"{m.name}⊗{x.name}")
    return TensorProduct(m, x, m_blocks, x_blocks, tuple(offsets), total, projection, section, result)


def tensor_map(m: Bimodule, h: ModuleMap) -> ModuleMap:
    """M ⊗ h : M⊗X → M⊗X'"""
    tp, tp2 = tensor(m, h.source), tensor(m, h.target)
    domain = h.source.domain
    diag = []
    for mb, xb, xb2 in zip(tp.m_blocks, tp.x_blocks, tp2.x_blocks):
        local = xb2.coordinates(la.mul(xb.basis, h.matrix)) if xb.dim and xb2.dim else la.zeros(xb.dim, xb2.dim, domain)
        diag.append(la.kron(la.identity(mb.dim, domain), local))
    plain = la.block_diagonal(diag, domain)
    return ModuleMap(tp.result, tp2.result, la.chain(tp.section, plain, tp2.projection))


def tensor_bimodules(m: Bimodule, n: Bimodule) -> Tuple[Bimodule, TensorProduct]:
    """M ⊗_A N 作为 (B, C)-双模"""
    if m.right_algebra is not n.left_algebra:
        raise AlgebraMismatchError(f"无法作张量积: {m!r} ⊗ {n!r}")
    n_left = left_module(n)
    tp = tensor(m, n_left)
    right = tuple(tensor_map(m, ModuleMap(n_left, n_left, r)).matrix for r in n.right_action)
    bim = Bimodule(m.left_algebra, n.right_algebra, tp.dim, tp.result.action, right, f"{m.name}⊗{n.name}")
    return bim, tp


# ---------------------------------------------------------------------------
# Hom modules and adjunction


@dataclass(frozen=True, eq=False)
class HomModule:
    """Hom_B(M, Y) 带右 A-作用诱导的左 A-结构"""

    bimodule: Bimodule
    module: FDModule
    space: HomSpace
    result: FDModule

    def element(self, row: Row) -> Matrix:
        return self.space.element(row)

    def coordinates(self, h: Matrix) -> Row:
        return self.space.coordinates(h)


@lru_cache(maxsize=4096)
def hom_module(m: Bimodule, y: FDModule) -> HomModule:
    if m.left_algebra is not y.algebra:
        raise AlgebraMismatchError(f"无法构造 Hom: {m!r}, {y!r}")
    space = hom_space(left_module(m), y)
    a = m.right_algebra
    domain = y.domain
    action = []
    for k in range(a.dim):
        rows = [space.coordinates(la.mul(m.right_action[k], h)) for h in space.basis]
        action.append(la.from_rows(rows, space.dim, domain))
    result = FDModule(a, space.dim, tuple(action), f"Hom({m.name},{y.name})")
    return HomModule(m, y, space, result)


def hom_map(m: Bimodule, h: ModuleMap) -> ModuleMap:
    """Hom_B(M, h) : Hom_B(M,Y) → Hom_B(M,Y')"""
    hm, hm2 = hom_module(m, h.source), hom_module(m, h.target)
    rows = [hm2.coordinates(la.mul(basis, h.matrix)) for basis in hm.space.basis]
    return ModuleMap(hm.result, hm2.result, la.from_rows(rows, hm2.result.dim, h.source.domain))


def unit_map(m: Bimodule, x: FDModule) -> ModuleMap:
    """X → Hom_B(M, M⊗X)，x ↦ (m ↦ m⊗x)"""
    tp = tensor(m, x)
    hm = hom_module(m, tp.result)
    domain = x.domain
    rows = []
    for q in range(x.dim):
        xq = la.dense_vector({q: domain.one}, x.dim, domain)
        h = la.from_rows([tp.pure(la.dense_vector({p: domain.one}, m.dim, domain), xq) for p in range(m.dim)], tp.dim, domain)
        rows.append(hm.coordinates(h))
    return ModuleMap(x, hm.result, la.from_rows(rows, hm.result.dim, domain))


def counit_map(m: Bimodule, y: FDModule) -> ModuleMap:
    """M ⊗ Hom_B(M, Y) → Y，m⊗h ↦ h(m)"""
    hm = hom_module(m, y)
    tp = tensor(m, hm.result)
    domain = y.domain

    def evaluate(m_row: Row, h_row: Row) -> Row:
        return la.to_rows(la.mul(la.from_rows([m_row], m.dim, domain), hm.element(h_row)))[0]

    return ModuleMap(tp.result, y, tp.induced(evaluate, y.dim))


def hom_adjunct(m: Bimodule, x: FDModule, g: ModuleMap) -> ModuleMap:
    """g: M⊗X → Y 对应的 X → Hom_B(M, Y)"""
    tp = tensor(m, x)
    if g.source.dim != tp.dim:
        raise DimensionMismatchError(f"映射的源不是 {m.name}⊗{x.name}")
    hm = hom_module(m, g.target)
    domain = g.target.domain
    rows = []
    for q in range(tp.module.dim):
        xq = la.dense_vector({q: domain.one}, tp.module.dim, domain)
        pure_rows = [tp.pure(la.dense_vector({p: domain.one}, m.dim, domain), xq) for p in range(m.dim)]
        h = la.mul(la.from_rows(pure_rows, tp.dim, domain), g.matrix)
        rows.append(hm.coordinates(h))
    return ModuleMap(tp.module, hm.result, la.from_rows(rows, hm.result.dim, domain))


def tensor_adjunct(m: Bimodule, f: ModuleMap, y: FDModule) -> ModuleMap:
    """f: X → Hom_B(M, Y) 对应的 M⊗X → Y"""
    hm = hom_module(m, y)
    tp = tensor(m, f.source)
    domain = y.domain

    def apply(m_row: Row, x_row: Row) -> Row:
        coeffs = la.to_rows(la.mul(la.from_rows([x_row], f.source.dim, domain), f.matrix))[0]
        return la.to_rows(la.mul(la.from_rows([m_row], m.dim, domain), hm.element(coeffs)))[0]

    return ModuleMap(tp.result, y, tp.induced(apply, y.dim))


# ---------------------------------------------------------------------------
# Projective covers and resolutions


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    module: FDModule
    epi: ModuleMap
    summands: Tuple[int, ...]


@lru_cache(maxsize=4096)
def projective_cover(x: FDModule) -> ProjectiveCover:
    """贪心地在每个 e_i X 中选取模 rad X 线性无关的生成元"""
    a = x.algebra
    domain = x.domain
    if x.dim == 0:
        return ProjectiveCover(zero_module(a), ModuleMap(zero_module(a), x, la.zeros(0, 0, domain)), ())
    covered = radical_subspace(x)
    chosen: List[Tuple[int, Row]] = []
    for i, block in enumerate(x.adapted.blocks):
        for v in block.rows:
            if covered.contains_row(v):
                continue
            chosen.append((i, v))
            orbit = [la.to_rows(la.mul(la.from_rows([v], x.dim, domain), m))[0] for m in x.action]
            covered = covered + Subspace.span_rows(orbit, x.dim, domain)
            if covered.dim == x.dim:
                break
    pieces = []
    blocks = []
    for i, v in chosen:
        p = projective(a, i)
        basis = projective_basis(a, i)
        images = la.from_rows(
            [la.to_rows(la.mul(la.from_rows([v], x.dim, domain), x.action[k]))[0] for k in range(a.dim)],
            x.dim,
            domain,
        )
        pieces.append(p)
        blocks.append(la.mul(basis.basis, images))
    cover, _, _ = direct_sum(pieces, name="⊕".join(f"P{i}" for i, _ in chosen))
    epi = ModuleMap(cover, x, la.vstack(blocks, x.dim, domain))
    return ProjectiveCover(cover, epi, tuple(i for i, _ in chosen))


@dataclass(frozen=True)
class PeriodicityWitness:
    """Ω^start ≅ Ω^(start+period) 及其显式同构"""

    start: int
    period: int
    iso: Optional[ModuleMap] = None


@dataclass(frozen=True)
class DimResult:
    kind: str
    value: Optional[int] = None
    witness: Optional[PeriodicityWitness] = None

    @classmethod
    def finite(cls, n: int) -> "DimResult":
        return cls("finite", n)

    @classmethod
    def infinite(cls, witness: Optional[PeriodicityWitness]) -> "DimResult":
        return cls("infinite", None, witness)

    @classmethod
    def at_least(cls, n: int) -> "DimResult":
        return cls("at_least", n)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def is_decided(self) -> bool:
        return self.kind != "at_least"

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return "inf"
        return f">={self.value}"


def dim_max(results: Sequence[DimResult]) -> DimResult:
    if not results:
        return DimResult.finite(0)
    for r in results:
        if r.is_infinite:
            return r
    undecided = [r.value or 0 for r in results if r.kind == "at_least"]
    finite = [r.value or 0 for r in results if r.is_finite]
    if undecided:
        return DimResult.at_least(max(undecided + finite))
    return DimResult.finite(max(finite))


def dim_shift(d: DimResult, k: int) -> DimResult:
    if d.is_infinite:
        return d
    return DimResult(d.kind, (d.value or 0) + k)


def dim_sum(a: DimResult, b: DimResult) -> DimResult:
    for r in (a, b):
        if r.is_infinite:
            return r
    total = (a.value or 0) + (b.value or 0)
    if a.is_finite and b.is_finite:
        return DimResult.finite(total)
    return DimResult.at_least(total)


@dataclass(eq=False)
class Resolution:
    """极小投射分解 … → P_1 → P_0 → x"""

    module: FDModule
    terms: List[FDModule] = field(default_factory=list)
    differentials: List[ModuleMap] = field(default_factory=list)
    augmentation: Optional[ModuleMap] = None
    syzygies: List[FDModule] = field(default_factory=list)
    inclusions: List[ModuleMap] = field(default_factory=list)
    summands: List[Tuple[int, ...]] = field(default_factory=list)
    status: str = "truncated"
    witness: Optional[PeriodicityWitness] = None
    depth: int = 0

    @property
    def length(self) -> int:
        return max(len(self.terms) - 1, 0)

    def term(self, n: int) -> FDModule:
        if 0 <= n < len(self.terms):
            return self.terms[n]
        return zero_module(self.module.algebra)

    def differential(self, n: int) -> ModuleMap:
        """d_n : P_n → P_(n−1)，超出范围为零映射"""
        if 1 <= n <= len(self.differentials):
            return self.differentials[n - 1]
        return zero_map(self.term(n), self.term(n - 1))

    def is_exact(self) -> bool:
        if self.augmentation is not None and not self.augmentation.is_surjective():
            return False
        ranks = [self.augmentation.rank if self.augmentation else 0] + [d.rank for d in self.differentials]
        for n, p in enumerate(self.terms[: len(self.differentials)]):
            if ranks[n] + ranks[n + 1] != p.dim:
                return False
        if self.status == "terminated" and self.terms:
            return ranks[len(self.terms) - 1] == self.terms[-1].dim
        return True

    def is_minimal(self) -> bool:
        for n, d in enumerate(self.differentials, start=1):
            rad = radical_subspace(self.terms[n - 1])
            if not rad.contains(d.matrix):
                return False
        return True


def _fingerprint(x: FDModule) -> Tuple[Any, ...]:
    t, _ = top(x)
    return (x.dim, x.block_dims, t.block_dims)


@monitor_performance("minimal_resolution")
def minimal_resolution(x: FDModule, depth: Optional[int] = None, detect_period: bool = True) -> Resolution:
    depth = settings.effective_depth if depth is None else depth
    if depth < 0:
        raise PreconditionError(f"分解深度不能为负: {depth}")
    res = Resolution(module=x, syzygies=[x], depth=depth)
    prints: List[Tuple[Any, ...]] = []
    n = 0
    while True:
        omega = res.syzygies[n]
        if omega.dim == 0:
            res.status = "terminated"
            break
        if n > depth:
            res.status = "truncated"
            break
        cover = projective_cover(omega)
        res.terms.append(cover.module)
        res.summands.append(cover.summands)
        if n == 0:
            res.augmentation = cover.epi
        else:
            res.differentials.append(cover.epi.then(res.inclusions[n - 1]))
        kernel, inclusion = kernel_map(cover.epi)
        kernel = FDModule(kernel.algebra, kernel.dim, kernel.action, f"Ω{n + 1}({x.name})")
        inclusion = ModuleMap(kernel, cover.module, inclusion.matrix)
        res.syzygies.append(kernel)
        res.inclusions.append(inclusion)
        logger.debug(f"合冲模 Ω^{n + 1}({x.name}) 维数 {kernel.dim}")
        if detect_period and kernel.dim > 0:
            prints.append(_fingerprint(omega))
            current = _fingerprint(kernel)
            for k in range(n + 1):
                if prints[k] != current:
                    continue
                iso = iso_test(res.syzygies[k], kernel)
                if iso is not None:
                    res.status = "periodic"
                    res.witness = PeriodicityWitness(k, n + 1 - k, iso)
                    logger.debug(f"{x.name} 的合冲模周期: 起点 {k}, 周期 {n + 1 - k}")
                    return res
        n += 1
    return res


def syzygy(x: FDModule, n: int) -> FDModule:
    res = minimal_resolution(x, n, detect_period=False)
    return res.syzygies[n] if n < len(res.syzygies) else zero_module(x.algebra)


def pd(x: FDModule, cutoff: Optional[int] = None) -> DimResult:
    cutoff = settings.default_cutoff if cutoff is None else cutoff
    if cutoff < 1:
        raise PreconditionError(f"截断值至少为 1: {cutoff}")
    res = minimal_resolution(x, cutoff)
    if res.status == "terminated":
        return DimResult.finite(res.length)
    if res.status == "periodic":
        return DimResult.infinite(res.witness)
    return DimResult.at_least(cutoff)


def injdim(x: FDModule, cutoff: Optional[int] = None) -> DimResult:
    """id x = pd D(x)（对侧代数上）"""
    return pd(dual(x), cutoff)


@monitor_performance("gldim")
def gldim(a: FDAlgebra, cutoff: Optional[int] = None, witnesses: Sequence[FDModule] = ()) -> DimResult:
    """gl.dim a = max pd S

    witnesses 中任一模的合冲周期一旦被证实，即判定整体维数为无穷，
    不再逐个分解单模。
    """
    for x in witnesses:
        if x.algebra is not a:
            raise AlgebraMismatchError(f"{x.name} 不是 {a.name}-模")
        d = pd(x, cutoff)
        if d.is_infinite:
            logger.debug(f"{a.name} 的整体维数由 {x.name} 判定为无穷")
            return d
    return dim_max([pd(s, cutoff) for s in simples(a)])


def is_projective(x: FDModule) -> bool:
    return projective_cover(x).module.dim == x.dim


def is_injective(x: FDModule) -> bool:
    return is_projective(dual(x))


def _rank_of_maps(matrices: Sequence[Matrix], ncols: int, domain: Any) -> int:
    if not matrices or ncols == 0:
        return 0
    return la.rank(la.from_rows([la.flatten(m) for m in matrices], ncols, domain))


def ext_dim(x: FDModule, y: FDModule, n: int, cutoff: Optional[int] = None) -> Optional[int]:
    """Ext^n(x, y) = Hom(P•, y) 的上同调；分解不够深时返回 None"""
    _same_algebra(x, y)
    cutoff = settings.default_cutoff if cutoff is None else cutoff
    if n < 0:
        raise PreconditionError(f"Ext 次数不能为负: {n}")
    if n + 1 > cutoff:
        return None
    res = minimal_resolution(x, n + 1, detect_period=False)
    return _ext_from(res, y, n, {})


def _ext_from(res: Resolution, y: FDModule, n: int, ranks: Dict[int, int]) -> int:
    """Hom(P•, y) 在 n 处的上同调；ranks 缓存各次上边缘映射的秩"""
    domain = y.domain

    def delta_rank(k: int) -> int:
        if k < 0:
            return 0
        if k not in ranks:
            source = hom_space(res.term(k), y)
            d = res.differential(k + 1)
            ranks[k] = _rank_of_maps([la.mul(d.matrix, h) for h in source.basis], d.source.dim * y.dim, domain)
        return ranks[k]

    return hom_space(res.term(n), y).dim - delta_rank(n) - delta_rank(n - 1)


def ext_dims(
    x: FDModule,
    y: FDModule,
    n_max: int,
    cutoff: Optional[int] = None,
    res: Optional[Resolution] = None,
) -> List[Optional[int]]:
    """Ext^0 … Ext^{n_max}(x, y)，共用同一个极小分解

    res 可传入 x 已有的分解；项数不够时重新分解。超出截断的次数为 None。
    """
    _same_algebra(x, y)
    cutoff = settings.default_cutoff if cutoff is None else cutoff
    if n_max < 0:
        raise PreconditionError(f"Ext 次数不能为负: {n_max}")
    top_degree = min(n_max, cutoff - 1)
    if top_degree < 0:
        return [None] * (n_max + 1)
    usable = res is not None and res.module is x and (
        res.status == "terminated" or len(res.terms) >= top_degree + 2
    )
    if not usable:
        res = minimal_resolution(x, top_degree + 1, detect_period=False)
    ranks: Dict[int, int] = {}
    return [_ext_from(res, y, n, ranks) if n <= top_degree else None for n in range(n_max + 1)]


def ext_dim_via_injectives(x: FDModule, y: FDModule, n: int, cutoff: Optional[int] = None) -> Optional[int]:
    """对偶路径：Ext^n_A(x, y) = Ext^n_{A^op}(Dy, Dx)"""
    return ext_dim(dual(y), dual(x), n, cutoff)


def tor_dim(m: Bimodule, x: FDModule, n: int, cutoff: Optional[int] = None) -> Optional[int]:
    """Tor_n(M, x) = M⊗P• 的同调"""
    if m.right_algebra is not x.algebra:
        raise AlgebraMismatchError(f"无法计算 Tor: {m!r}, {x!r}")
    cutoff = settings.default_cutoff if cutoff is None else cutoff
    if n < 0:
        raise PreconditionError(f"Tor 次数不能为负: {n}")
    if n + 1 > cutoff:
        return None
    res = minimal_resolution(x, n + 1, detect_period=False)

    def rank_at(k: int) -> int:
        if k < 1:
            return 0
        return tensor_map(m, res.differential(k)).rank

    return tensor(m, res.term(n)).dim - rank_at(n) - rank_at(n + 1)


# ---------------------------------------------------------------------------
# Isomorphism testing


def _adapted_blocks(x: FDModule, y: FDModule, h: Matrix) -> List[List[Row]]:
    ax, ay = x.adapted, y.adapted
    rows = la.to_rows(la.chain(ax.change, h, ay.inverse))
    blocks = []
    for i in range(len(ax.dims)):
        r0, c0 = ax.offsets[i], ay.offsets[i]
        blocks.append([row[c0 : c0 + ay.dims[i]] for row in rows[r0 : r0 + ax.dims[i]]])
    return blocks


def _determinant_polynomial(x: FDModule, y: FDModule, basis: Sequence[Matrix]) -> Tuple[Any, Tuple[Any, ...]]:
    """∏_i det(Σ t_j H'_j)_i 作为 K[t_1..t_r] 中的多项式"""
    domain = x.domain
    gens_symbols = symbols(f"t0:{len(basis)}")
    ring = domain.poly_ring(*gens_symbols)
    gens = ring.gens
    adapted = [_adapted_blocks(x, y, h) for h in basis]
    product = ring.one
    for i, size in enumerate(x.block_dims):
        if size == 0:
            continue
        entries = []
        for r in range(size):
            row = []
            for c in range(size):
                val = ring.zero
                for j, blocks in enumerate(adapted):
                    coeff = blocks[i][r][c]
                    if coeff:
                        val += ring.convert(coeff, domain) * gens[j]
                row.append(val)
            entries.append(row)
        product *= DomainMatrix(entries, (size, size), ring).det()
        if not product:
            break
    return product, gens


def _nonvanishing_point(poly: Any, gens: Sequence[Any], x: FDModule) -> Optional[List[int]]:
    field = x.algebra.field
    domain = x.domain
    if not poly:
        return None
    if field.kind == "prime" and field.p ** len(gens) <= settings.iso_search_limit:
        for point in itertools.product(range(field.p), repeat=len(gens)):
            if poly(*[domain(v) for v in point]):
                return list(point)
        return None
    values: List[int] = []
    current = poly
    for g in gens:
        bound = current.degree(g) + 1
        candidates = range(field.p) if field.kind == "prime" else range(max(bound, 1) + 1)
        for v in candidates:
            trial = current.subs(g, domain(v))
            if trial:
                current = trial
                values.append(v)
                break
        else:
            raise IsoSearchError(f"无法在 {field.label} 上确定可逆组合: {x.name}")
    return values


@monitor_performance("iso_test")
def iso_test(x: FDModule, y: FDModule) -> Optional[ModuleMap]:
    """精确同构判定：返回显式可逆同态或 None"""
    _same_algebra(x, y)
    domain = x.domain
    if x.dim != y.dim or x.block_dims != y.block_dims:
        return None
    if x.dim == 0:
        return ModuleMap(x, y, la.zeros(0, 0, domain))
    forward = hom_space(x, y)
    if forward.dim == 0 or hom_space(y, x).dim != forward.dim:
        return None
    basis = forward.basis
    for h in basis:
        if la.is_invertible(h):
            return ModuleMap(x, y, h)
    r = len(basis)
    trials = [[1] * r, list(range(1, r + 1))]
    trials.extend([[(j + 1) ** 2 for j in range(r)], [2**j for j in range(r)]])
    for coeffs in trials:
        h = forward.element([domain(c) for c in coeffs])
        if la.is_invertible(h):
            return ModuleMap(x, y, h)
    poly, gens = _determinant_polynomial(x, y, basis)
    point = _nonvanishing_point(poly, gens, x)
    if point is None:
        logger.debug(f"同构检验: {x.name} 与 {y.name} 不同构")
        return None
    h = forward.element([domain(v) for v in point])
    if not la.is_invertible(h):
        raise IsoSearchError(f"行列式多项式的非零点未给出可逆映射: {x.name}")
    return ModuleMap(x, y, h)


# ---------------------------------------------------------------------------
# Approximations, pushouts and factorization


def add_approximation(gens: Sequence[FDModule], x: FDModule, side: str = "right") -> ModuleMap:
    """add(G)-逼近：右侧为求值映射 G^{Hom(G,x)} → x，左侧为 x → G^{Hom(x,G)}"""
    if not gens:
        raise PreconditionError("逼近需要非空的生成模集合")
    _same_algebra(x, *gens)
    domain = x.domain
    g, _, _ = direct_sum(list(gens), name="G")
    if side == "right":
        basis = hom_space(g, x).basis
        if not basis:
            return ModuleMap(zero_module(x.algebra), x, la.zeros(0, x.dim, domain))
        source, _, _ = direct_sum([g] * len(basis), name=f"G^{len(basis)}")
        return ModuleMap(source, x, la.vstack(list(basis), x.dim, domain))
    if side == "left":
        basis = hom_space(x, g).basis
        if not basis:
            return ModuleMap(x, zero_module(x.algebra), la.zeros(x.dim, 0, domain))
        target, _, _ = direct_sum([g] * len(basis), name=f"G^{len(basis)}")
        return ModuleMap(x, target, la.hstack(list(basis), x.dim, domain))
    raise PreconditionError(f"未知的逼近方向: {side}")


@dataclass(frozen=True, eq=False)
class Pushout:
    module: FDModule
    first: ModuleMap
    second: ModuleMap


def pushout(f1: ModuleMap, f2: ModuleMap) -> Pushout:
    """(B1 ⊕ C)/{(z f1, −z f2)}"""
    if f1.source is not f2.source:
        raise AlgebraMismatchError("推出需要共同的源模")
    domain = f1.source.domain
    total, incs, _ = direct_sum([f1.target, f2.target])
    relation = la.hstack([f1.matrix, la.scale(f2.matrix, -1)], f1.source.dim, domain)
    quotient, proj = quotient_module(total, la.image(relation))
    return Pushout(quotient, incs[0].then(proj), incs[1].then(proj))


def factor_through(h: ModuleMap, through: ModuleMap, side: str = "right") -> Optional[ModuleMap]:
    """右侧：求 k 使 h = through·k；左侧：求 k 使 h = k·through"""
    domain = h.source.domain
    if side == "right":
        space = hom_space(through.target, h.target)
        candidates = [la.mul(through.matrix, k) for k in space.basis]
    elif side == "left":
        space = hom_space(h.source, through.source)
        candidates = [la.mul(k, through.matrix) for k in space.basis]
    else:
        raise PreconditionError(f"未知的分解方向: {side}")
    target = la.from_rows([la.flatten(h.matrix)], h.source.dim * h.target.dim, domain)
    if not candidates:
        return ModuleMap(space.source, space.target, la.zeros(space.source.dim, space.target.dim, domain)) if la.is_zero(h.matrix) else None
    stacked = la.from_rows([la.flatten(c) for c in candidates], h.source.dim * h.target.dim, domain)
    coeffs = la.solve(stacked, target)
    if coeffs is None:
        return None
    return ModuleMap(space.source, space.target, space.element(la.to_rows(coeffs)[0]))
