"""
Morita 上下文与 Morita 环
Morita contexts (A, B, M, N, φ, ψ), the ring Λ(φ,ψ) = (A N; M B), the tuple
category of quadruples (X, Y, f, g), the functors T/U/H/Z/C between them and
the classification of projective, injective and simple objects.

Basis order of Λ is A, N, M, B; products follow
(a n; m b)(a' n'; m' b') = (aa' + ψ(n⊗m'), an' + nb'; ma' + bm', φ(m⊗n') + bb').
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exactla import Field, Matrix, Row, Subspace
from src.core.exceptions import (
    AlgebraMismatchError,
    InvalidAlgebraError,
    InvalidContextError,
    InvalidTupleError,
    PreconditionError,
)
from src.core.fdalg import (
    AlgebraIso,
    Arrow,
    FDAlgebra,
    Presentation,
    Quiver,
    build_path_algebra,
    loewy_length,
    make_algebra,
    permutation_iso,
    pierce_corner,
    product_algebra,
    trivial_extension,
)
from src.core.fdmod import (
    Bimodule,
    FDModule,
    ModuleMap,
    TensorProduct,
    bimodule_direct_sum,
    bimodule_swap,
    counit_map,
    direct_sum,
    dual,
    hom_map,
    hom_module,
    hom_space,
    image_submodule,
    injective,
    is_injective,
    iso_test,
    make_bimodule,
    projective,
    regular_bimodule,
    simple,
    simple_indices,
    simples,
    tensor,
    tensor_map,
    unit_map,
    zero_bimodule,
    zero_module,
)
from src.utils.performance import monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True, eq=False)
class MoritaContext:
    """Morita 上下文：M 为 (B,A)-双模，N 为 (A,B)-双模，φ: M⊗N → B，ψ: N⊗M → A

    phi_plain 的第 p·dim N + q 行是 φ(m_p ⊗ n_q) 在 B 中的坐标，psi_plain 同理。
    """

    A: FDAlgebra
    B: FDAlgebra
    M: Bimodule
    N: Bimodule
    phi_plain: Matrix
    psi_plain: Matrix
    name: str = ""

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def domain(self) -> Any:
        return self.A.domain

    @cached_property
    def _phi_rows(self) -> List[Row]:
        return la.to_rows(self.phi_plain)

    @cached_property
    def _psi_rows(self) -> List[Row]:
        return la.to_rows(self.psi_plain)

    def phi(self, m_row: Sequence[Any], n_row: Sequence[Any]) -> Row:
        return _bilinear(self._phi_rows, m_row, n_row, self.N.dim, self.B.dim, self.domain)

    def psi(self, n_row: Sequence[Any], m_row: Sequence[Any]) -> Row:
        return _bilinear(self._psi_rows, n_row, m_row, self.M.dim, self.A.dim, self.domain)

    @property
    def is_zero_context(self) -> bool:
        return la.is_zero(self.phi_plain) and la.is_zero(self.psi_plain)

    @cached_property
    def offsets(self) -> Tuple[int, int, int, int]:
        da, dn, dm = self.A.dim, self.N.dim, self.M.dim
        return (0, da, da + dn, da + dn + dm)

    @cached_property
    def algebra(self) -> FDAlgebra:
        return build_morita_algebra(self)

    @cached_property
    def opposite(self) -> "MoritaContext":
        return opposite_context(self)

    def embed(self, part: str, row: Sequence[Any]) -> Row:
        """A/N/M/B 中的向量嵌入 Λ"""
        index = "ANMB".index(part)
        out = [self.domain.zero] * self.algebra.dim
        start = self.offsets[index]
        for j, x in enumerate(row):
            out[start + j] = x
        return out


def _bilinear(rows: List[Row], u: Sequence[Any], v: Sequence[Any], width: int, out_dim: int, domain: Any) -> Row:
    out = [domain.zero] * out_dim
    for p, x in la.iter_nonzero(u):
        for q, y in la.iter_nonzero(v):
            coeff = x * y
            for k, c in la.iter_nonzero(rows[p * width + q]):
                out[k] += coeff * c
    return out


def _unit(n: int, k: int, domain: Any) -> Row:
    return la.dense_vector({k: domain.one}, n, domain)


def make_context(
    A: FDAlgebra,
    B: FDAlgebra,
    M: Bimodule,
    N: Bimodule,
    phi_plain: Matrix,
    psi_plain: Matrix,
    name: str = "",
    check: bool = True,
) -> MoritaContext:
    if M.left_algebra is not B or M.right_algebra is not A:
        raise AlgebraMismatchError("M 必须是 (B, A)-双模")
    if N.left_algebra is not A or N.right_algebra is not B:
        raise AlgebraMismatchError("N 必须是 (A, B)-双模")
    if phi_plain.shape != (M.dim * N.dim, B.dim) or psi_plain.shape != (N.dim * M.dim, A.dim):
        raise InvalidContextError("φ 或 ψ 的矩阵形状不符", violations=["shape"])
    c = MoritaContext(A, B, M, N, phi_plain, psi_plain, name)
    if check:
        violations = validate_context(c)
        if violations:
            raise InvalidContextError(f"上下文 {name} 不合法: {violations[0]['identity']}", violations=violations)
    return c


def validate_context(c: MoritaContext) -> List[Dict[str, str]]:
    """列出所有失败的双模或结合恒等式及见证基元素"""
    A, B, M, N = c.A, c.B, c.M, c.N
    domain = c.domain
    violations: List[Dict[str, str]] = []

    def record(identity: str, *witness: str) -> None:
        violations.append({"identity": identity, "witness": ",".join(witness)})

    def vec_times(row: Row, m: Matrix) -> Row:
        return la.to_rows(la.mul(la.from_rows([row], m.shape[0], domain), m))[0] if m.shape[0] else []

    m_basis = [_unit(M.dim, p, domain) for p in range(M.dim)]
    n_basis = [_unit(N.dim, q, domain) for q in range(N.dim)]
    for p, m in enumerate(m_basis):
        for q, n in enumerate(n_basis):
            for k in range(A.dim):
                if c.phi(vec_times(m, M.right_action[k]), n) != c.phi(m, vec_times(n, N.left_action[k])):
                    record("phi balanced", f"m{p}", A.labels[k], f"n{q}")
            for k in range(B.dim):
                if c.psi(vec_times(n, N.right_action[k]), m) != c.psi(n, vec_times(m, M.left_action[k])):
                    record("psi balanced", f"n{q}", B.labels[k], f"m{p}")
                bk = B.basis_vector(k)
                if c.phi(vec_times(m, M.left_action[k]), n) != B.multiply(bk, c.phi(m, n)):
                    record("phi left B-linear", B.labels[k], f"m{p}", f"n{q}")
                if c.phi(m, vec_times(n, N.right_action[k])) != B.multiply(c.phi(m, n), bk):
                    record("phi right B-linear", f"m{p}", f"n{q}", B.labels[k])
            for k in range(A.dim):
                ak = A.basis_vector(k)
                if c.psi(vec_times(n, N.left_action[k]), m) != A.multiply(ak, c.psi(n, m)):
                    record("psi left A-linear", A.labels[k], f"n{q}", f"m{p}")
                if c.psi(n, vec_times(m, M.right_action[k])) != A.multiply(c.psi(n, m), ak):
                    record("psi right A-linear", f"n{q}", f"m{p}", A.labels[k])
    for p, m in enumerate(m_basis):
        for q, n in enumerate(n_basis):
            phi_mn = c.phi(m, n)
            for p2, m2 in enumerate(m_basis):
                lhs = vec_times(m2, M.act_left(phi_mn))
                rhs = vec_times(m, M.act_right(c.psi(n, m2)))
                if lhs != rhs:
                    record("phi(m⊗n)m' = mpsi(n⊗m')", f"m{p}", f"n{q}", f"m{p2}")
            for q2, n2 in enumerate(n_basis):
                lhs = vec_times(n2, N.act_right(c.phi(m, n)))
                rhs = vec_times(n, N.act_left(c.psi(n2, m)))
                if lhs != rhs:
                    record("n'phi(m⊗n) = psi(n'⊗m)n", f"n{q2}", f"m{p}", f"n{q}")
    if violations:
        logger.debug(f"上下文 {c.name} 有 {len(violations)} 处违例")
    return violations


def _annihilator_part(c: MoritaContext, side: str) -> Subspace:
    """N₀ = {n : ψ(n⊗M) ⊆ rad A}，M₀ = {m : φ(m⊗N) ⊆ rad B}"""
    domain = c.domain
    if side == "N":
        source, other, target, pairing = c.N, c.M, c.A, c.psi
    else:
        source, other, target, pairing = c.M, c.N, c.B, c.phi
    if source.dim == 0:
        return Subspace.zero(0, domain)
    projection, _ = la.quotient(target.dim, target.radical)
    width = projection.shape[1]
    if width == 0 or other.dim == 0:
        return Subspace.full(source.dim, domain)
    rows = []
    for i in range(source.dim):
        row: Row = []
        u = _unit(source.dim, i, domain)
        for j in range(other.dim):
            value = la.from_rows([pairing(u, _unit(other.dim, j, domain))], target.dim, domain)
            row.extend(la.to_rows(la.mul(value, projection))[0])
        rows.append(row)
    return la.kernel(la.from_rows(rows, width * other.dim, domain))


def build_morita_algebra(c: MoritaContext) -> FDAlgebra:
    """Λ(φ,ψ)，根候选为 (rad A, N₀; M₀, rad B)"""
    A, B, M, N = c.A, c.B, c.M, c.N
    domain = c.domain
    oa, on, om, ob = 0, A.dim, A.dim + N.dim, A.dim + N.dim + M.dim
    total = ob + B.dim
    table: List[List[Dict[int, Any]]] = [[{} for _ in range(total)] for _ in range(total)]

    def shifted(row: Row, offset: int) -> Dict[int, Any]:
        return {offset + k: v for k, v in la.iter_nonzero(row)}

    nl = [la.to_rows(x) for x in N.left_action]
    nr = [la.to_rows(x) for x in N.right_action]
    ml = [la.to_rows(x) for x in M.left_action]
    mr = [la.to_rows(x) for x in M.right_action]
    for i in range(A.dim):
        for j in range(A.dim):
            table[oa + i][oa + j] = dict(A.table[i][j])
        for j in range(N.dim):
            table[oa + i][on + j] = shifted(nl[i][j], on)
        for j in range(M.dim):
            table[om + j][oa + i] = shifted(mr[i][j], om)
    for i in range(B.dim):
        for j in range(B.dim):
            table[ob + i][ob + j] = {ob + k: v for k, v in B.table[i][j].items()}
        for j in range(M.dim):
            table[ob + i][om + j] = shifted(ml[i][j], om)
        for j in range(N.dim):
            table[on + j][ob + i] = shifted(nr[i][j], on)
    for i in range(N.dim):
        for j in range(M.dim):
            table[on + i][om + j] = shifted(c.psi(_unit(N.dim, i, domain), _unit(M.dim, j, domain)), oa)
    for i in range(M.dim):
        for j in range(N.dim):
            table[om + i][on + j] = shifted(c.phi(_unit(M.dim, i, domain), _unit(N.dim, j, domain)), ob)

    def padded(row: Sequence[Any], offset: int) -> Row:
        out = [domain.zero] * total
        out[offset : offset + len(row)] = list(row)
        return out

    n0, m0 = _annihilator_part(c, "N"), _annihilator_part(c, "M")
    radical_rows = (
        [padded(r, oa) for r in A.radical.rows]
        + [padded(r, on) for r in n0.rows]
        + [padded(r, om) for r in m0.rows]
        + [padded(r, ob) for r in B.radical.rows]
    )
    labels = (
        [f"A.{x}" for x in A.labels]
        + [f"N{j}" for j in range(N.dim)]
        + [f"M{j}" for j in range(M.dim)]
        + [f"B.{x}" for x in B.labels]
    )
    algebra = make_algebra(
        c.field,
        labels,
        table,
        padded(A.unit, oa)[:ob] + list(B.unit),
        [padded(e, oa) for e in A.idempotents] + [padded(e, ob) for e in B.idempotents],
        [f"A.{x}" for x in A.idempotent_labels] + [f"B.{x}" for x in B.idempotent_labels],
        Subspace.span_rows(radical_rows, total, domain),
        name=f"Λ({c.name})" if c.name else "Λ",
    )
    logger.debug(f"Morita 环 {algebra.name}: 维数 {algebra.dim}")
    return algebra


# ---------------------------------------------------------------------------
# Context constructors


def _split_idempotents(a: FDAlgebra, split: Sequence[Sequence[Any]]) -> Tuple[List[int], List[int]]:
    if len(split) != 2:
        raise PreconditionError("分割必须恰好有两部分")
    parts = []
    for part in split:
        indices = []
        for item in part:
            if isinstance(item, int):
                indices.append(item)
            elif item in a.idempotent_labels:
                indices.append(a.idempotent_labels.index(item))
            else:
                raise PreconditionError(f"未知的幂等元: {item}")
        parts.append(indices)
    first, second = parts
    if not first or not second:
        raise PreconditionError("分割的两部分都必须非空", witness=[list(first), list(second)])
    if sorted(first + second) != list(range(a.n_idempotents)):
        raise PreconditionError("分割必须恰好覆盖所有本原幂等元", witness=[list(first), list(second)])
    return first, second


def _idempotent_sum(a: FDAlgebra, indices: Sequence[int]) -> Row:
    total = [a.domain.zero] * a.dim
    for i in indices:
        total = [x + y for x, y in zip(total, a.idempotents[i])]
    return total


@dataclass(frozen=True, eq=False)
class PierceData:
    context: MoritaContext
    ambient: FDAlgebra
    bases: Tuple[Matrix, Matrix, Matrix, Matrix]

    def iso(self) -> AlgebraIso:
        """Λ(context) → ambient：各块基向量映到原向量"""
        a = self.ambient
        rows: List[Row] = []
        for basis in self.bases:
            rows.extend(la.to_rows(basis))
        iso = AlgebraIso(self.context.algebra, a, la.from_rows(rows, a.dim, a.domain))
        if not iso.verify():
            raise InvalidAlgebraError("Pierce 分解的重排不是代数同构")
        return iso


def from_pierce(a: FDAlgebra, split: Sequence[Sequence[Any]], name: str = "") -> MoritaContext:
    return pierce_data(a, split, name).context


def pierce_data(a: FDAlgebra, split: Sequence[Sequence[Any]], name: str = "") -> PierceData:
    """(e₁Λe₁, e₁Λe₂; e₂Λe₁, e₂Λe₂)，φ、ψ 由乘法给出"""
    first, second = _split_idempotents(a, split)
    domain = a.domain
    e1, e2 = _idempotent_sum(a, first), _idempotent_sum(a, second)
    A = pierce_corner(a, e1, name=f"e1{a.name}e1")
    B = pierce_corner(a, e2, name=f"e2{a.name}e2")

    def corner_space(left: Row, right: Row) -> Subspace:
        rows = [a.multiply(a.multiply(left, a.basis_vector(k)), right) for k in range(a.dim)]
        return Subspace.span_rows(rows, a.dim, domain)

    n_space, m_space = corner_space(e1, e2), corner_space(e2, e1)
    a_rows, b_rows = la.to_rows(A.embedding), la.to_rows(B.embedding)

    def coords(space: Subspace, vec: Row) -> Row:
        return [vec[p] for p in space.pivots]

    def left_actions(alg_rows: List[Row], space: Subspace) -> Tuple[Matrix, ...]:
        return tuple(
            la.from_rows([coords(space, a.multiply(x, v)) for v in space.rows], space.dim, domain) for x in alg_rows
        )

    def right_actions(alg_rows: List[Row], space: Subspace) -> Tuple[Matrix, ...]:
        return tuple(
            la.from_rows([coords(space, a.multiply(v, x)) for v in space.rows], space.dim, domain) for x in alg_rows
        )

    N = Bimodule(A, B, n_space.dim, left_actions(a_rows, n_space), right_actions(b_rows, n_space), "e1Λe2")
    M = Bimodule(B, A, m_space.dim, left_actions(b_rows, m_space), right_actions(a_rows, m_space), "e2Λe1")
    a_space = Subspace(a.dim, A.embedding, tuple(_pivots_of(a_rows)))
    b_space = Subspace(a.dim, B.embedding, tuple(_pivots_of(b_rows)))
    phi = [coords(b_space, a.multiply(m, n)) for m in m_space.rows for n in n_space.rows]
    psi = [coords(a_space, a.multiply(n, m)) for n in n_space.rows for m in m_space.rows]
    context = make_context(
        A, B, M, N,
        la.from_rows(phi, B.dim, domain),
        la.from_rows(psi, A.dim, domain),
        name=name or f"pierce({a.name})",
    )
    return PierceData(context, a, (A.embedding, n_space.basis, m_space.basis, B.embedding))


def _pivots_of(rows: List[Row]) -> List[int]:
    return [next(j for j, x in enumerate(row) if x) for row in rows]


def pierce_iso(a: FDAlgebra, split: Sequence[Sequence[Any]]) -> AlgebraIso:
    """Λ(from_pierce(a)) → a；每次调用构造新的上下文"""
    return pierce_data(a, split).iso()


def delta_context(l: FDAlgebra, name: str = "") -> MoritaContext:
    """A = B = M = N = l，φ = ψ = 乘法"""
    mult = la.from_rows([l.product_vector(p, q) for p in range(l.dim) for q in range(l.dim)], l.dim, l.domain)
    M, N = regular_bimodule(l), regular_bimodule(l)
    return make_context(l, l, M, N, mult, mult, name=name or f"Δ({l.name})")


def _as_list(x: Union[FDModule, Sequence[FDModule]]) -> List[FDModule]:
    return [x] if isinstance(x, FDModule) else list(x)


@dataclass(frozen=True, eq=False)
class _BlockHom:
    """⊕Hom(u_i, v_j) 嵌入 Hom(⊕u, ⊕v) 的齐次基"""

    flat: Subspace
    shape: Tuple[int, int]
    blocks: Tuple[Tuple[int, int], ...]

    @cached_property
    def basis(self) -> List[Matrix]:
        return [la.unflatten(r, self.shape, self.flat.domain) for r in self.flat.rows]

    def coordinates(self, h: Matrix) -> Row:
        vec = la.from_rows([la.flatten(h)], self.flat.ambient_dim, self.flat.domain)
        return la.to_rows(self.flat.coordinates(vec))[0] if self.flat.dim else []


def _block_hom(us: List[FDModule], vs: List[FDModule]) -> _BlockHom:
    domain = us[0].domain
    du, dv = sum(u.dim for u in us), sum(v.dim for v in vs)
    rows: List[Row] = []
    ro = 0
    for i, u in enumerate(us):
        co = 0
        for j, v in enumerate(vs):
            for h in hom_space(u, v).basis:
                full = [[domain.zero] * dv for _ in range(du)]
                for r, row in enumerate(la.to_rows(h)):
                    full[ro + r][co : co + v.dim] = row
                rows.append([x for row in full for x in row])
            co += v.dim
        ro += u.dim
    flat = Subspace.span_rows(rows, du * dv, domain) if rows else Subspace.zero(du * dv, domain)
    ordered = []
    for row in flat.rows:
        pivot = next(j for j, x in enumerate(row) if x)
        r, col = divmod(pivot, dv)
        ordered.append((_which(us, r), _which(vs, col)))
    return _BlockHom(flat, (du, dv), tuple(ordered))


def _which(parts: List[FDModule], k: int) -> int:
    acc = 0
    for i, p in enumerate(parts):
        acc += p.dim
        if k < acc:
            return i
    return len(parts) - 1


def _local_eigenvalue(f: Matrix, field: Field) -> Optional[Any]:
    """局部自同态的唯一特征值"""
    n = f.shape[0]
    domain = field.domain
    if n == 0:
        return None
    rows = la.to_rows(f)
    trace = sum((rows[i][i] for i in range(n)), domain.zero)
    if field.characteristic == 0 or n % field.characteristic:
        return trace / domain(n)
    for v in range(field.characteristic):
        if not la.is_invertible(la.sub(f, la.scale(la.identity(n, domain), domain(v)))):
            return domain(v)
    return None


def _end_algebra(us: List[FDModule], name: str) -> Tuple[FDAlgebra, _BlockHom]:
    """End(⊕u_i)，乘法为图序合成，幂等元为到各直和项的投影"""
    field = us[0].algebra.field
    domain = field.domain
    hom = _block_hom(us, us)
    basis = hom.basis
    n = len(basis)
    table = [[la.sparse_vector(hom.coordinates(la.mul(x, y))) for y in basis] for x in basis]
    total = hom.shape[0]
    idempotents, offset = [], 0
    for u in us:
        proj = [[domain.zero] * total for _ in range(total)]
        for r in range(u.dim):
            proj[offset + r][offset + r] = domain.one
        idempotents.append(hom.coordinates(la.from_rows(proj, total, domain)))
        offset += u.dim
    unit = hom.coordinates(la.identity(total, domain))
    radical_rows: List[Row] = []
    isos: Dict[Tuple[int, int], Optional[ModuleMap]] = {}
    for k, h in enumerate(basis):
        i, j = hom.blocks[k]
        if (i, j) not in isos:
            isos[(i, j)] = iso_test(us[i], us[j]) if i != j else None
        local = _restrict(h, us, i, j)
        if i == j:
            theta_inv = None
            endo = local
        else:
            theta = isos[(i, j)]
            if theta is None:
                radical_rows.append(la.dense_vector({k: domain.one}, n, domain))
                continue
            theta_inv = la.inverse(theta.matrix)
            endo = la.mul(local, theta_inv)
        lam = _local_eigenvalue(endo, field)
        if lam is None:
            continue
        nil = la.sub(endo, la.scale(la.identity(endo.shape[0], domain), lam))
        if theta_inv is not None:
            nil = la.mul(nil, isos[(i, j)].matrix)
        radical_rows.append(hom.coordinates(_embed(nil, us, i, j, hom.shape, domain)))
    radical = Subspace.span_rows(radical_rows, n, domain) if radical_rows else Subspace.zero(n, domain)
    algebra = make_algebra(
        field,
        [f"h{k}[{hom.blocks[k][0]},{hom.blocks[k][1]}]" for k in range(n)],
        table,
        unit,
        idempotents,
        [u.name or f"u{i}" for i, u in enumerate(us)],
        radical,
        name=name,
    )
    return algebra, hom


def _restrict(h: Matrix, us: List[FDModule], i: int, j: int) -> Matrix:
    ro = sum(u.dim for u in us[:i])
    co = sum(u.dim for u in us[:j])
    return la.select(h, rows=range(ro, ro + us[i].dim), cols=range(co, co + us[j].dim))


def _embed(local: Matrix, us: List[FDModule], i: int, j: int, shape: Tuple[int, int], domain: Any) -> Matrix:
    ro = sum(u.dim for u in us[:i])
    co = sum(u.dim for u in us[:j])
    full = [[domain.zero] * shape[1] for _ in range(shape[0])]
    for r, row in enumerate(la.to_rows(local)):
        full[ro + r][co : co + len(row)] = row
    return la.from_rows(full, shape[1], domain)


def end_context(
    l: FDAlgebra,
    u: Union[FDModule, Sequence[FDModule]],
    v: Union[FDModule, Sequence[FDModule]],
    name: str = "",
) -> MoritaContext:
    """(End U, Hom(U,V); Hom(V,U), End V)，φ、ψ 为合成"""
    us, vs = _as_list(u), _as_list(v)
    if any(x.algebra is not l for x in us + vs):
        raise AlgebraMismatchError("U 与 V 必须是同一代数上的模")
    domain = l.domain
    A, hom_uu = _end_algebra(us, "End(U)")
    B, hom_vv = _end_algebra(vs, "End(V)")
    hom_uv, hom_vu = _block_hom(us, vs), _block_hom(vs, us)

    def actions(hom: _BlockHom, alg: List[Matrix], left: bool) -> Tuple[Matrix, ...]:
        result = []
        for x in alg:
            rows = [hom.coordinates(la.mul(x, h) if left else la.mul(h, x)) for h in hom.basis]
            result.append(la.from_rows(rows, hom.flat.dim, domain))
        return tuple(result)

    N = Bimodule(A, B, hom_uv.flat.dim, actions(hom_uv, hom_uu.basis, True), actions(hom_uv, hom_vv.basis, False), "Hom(U,V)")
    M = Bimodule(B, A, hom_vu.flat.dim, actions(hom_vu, hom_vv.basis, True), actions(hom_vu, hom_uu.basis, False), "Hom(V,U)")
    phi = [hom_vv.coordinates(la.mul(m, n)) for m in hom_vu.basis for n in hom_uv.basis]
    psi = [hom_uu.coordinates(la.mul(n, m)) for n in hom_uv.basis for m in hom_vu.basis]
    return make_context(
        A, B, M, N,
        la.from_rows(phi, B.dim, domain),
        la.from_rows(psi, A.dim, domain),
        name=name or f"End({l.name})",
    )


def zero_context(A: FDAlgebra, B: FDAlgebra, M: Bimodule, N: Bimodule, name: str = "") -> MoritaContext:
    """φ = ψ = 0 的上下文"""
    domain = A.domain
    return make_context(
        A, B, M, N,
        la.zeros(M.dim * N.dim, B.dim, domain),
        la.zeros(N.dim * M.dim, A.dim, domain),
        name=name,
    )


def opposite_context(c: MoritaContext) -> MoritaContext:
    """(B^op, A^op, M^sw, N^sw, ψ∘swap, φ∘swap)，对应 Λ^op"""
    domain = c.domain
    M2, N2 = bimodule_swap(c.M), bimodule_swap(c.N)
    phi = [c.psi(_unit(c.N.dim, q, domain), _unit(c.M.dim, p, domain)) for p in range(c.M.dim) for q in range(c.N.dim)]
    psi = [c.phi(_unit(c.M.dim, p, domain), _unit(c.N.dim, q, domain)) for q in range(c.N.dim) for p in range(c.M.dim)]
    return make_context(
        c.B.opposite, c.A.opposite, M2, N2,
        la.from_rows(phi, c.A.dim, domain),
        la.from_rows(psi, c.B.dim, domain),
        name=f"{c.name}^op",
        check=False,
    )


def opposite_iso(c: MoritaContext) -> AlgebraIso:
    """Λ^op → Λ(opposite_context)：A 块进入 B' 位置，B 块进入 A' 位置"""
    op = c.opposite
    da, dn, dm, db = c.A.dim, c.N.dim, c.M.dim, c.B.dim
    perm = (
        [db + dn + dm + k for k in range(da)]
        + [db + k for k in range(dn)]
        + [db + dn + k for k in range(dm)]
        + list(range(db))
    )
    iso = permutation_iso(c.algebra.opposite, op.algebra, perm)
    return iso


# ---------------------------------------------------------------------------
# Tuple modules


@dataclass(frozen=True, eq=False)
class TupleModule:
    """(X, Y, f, g)：f: M⊗X → Y，g: N⊗Y → X"""

    context: MoritaContext
    X: FDModule
    Y: FDModule
    f: ModuleMap
    g: ModuleMap
    name: str = ""

    @property
    def dim(self) -> int:
        return self.X.dim + self.Y.dim

    @cached_property
    def flat(self) -> FDModule:
        return tuple_to_flat(self)

    def __repr__(self) -> str:
        return f"TupleModule({self.name or 'anonymous'}, dims=({self.X.dim},{self.Y.dim}))"


@dataclass(frozen=True, eq=False)
class TupleMap:
    """(a, b)：a: X → X'，b: Y → Y'"""

    source: TupleModule
    target: TupleModule
    a: ModuleMap
    b: ModuleMap

    @property
    def flat_matrix(self) -> Matrix:
        return la.block_diagonal([self.a.matrix, self.b.matrix], self.a.source.domain)

    def flat_map(self) -> ModuleMap:
        return ModuleMap(self.source.flat, self.target.flat, self.flat_matrix)


def big_psi(c: MoritaContext, x: FDModule) -> ModuleMap:
    """Ψ_X : N⊗(M⊗X) → X，n⊗(m⊗x) ↦ ψ(n⊗m)x"""
    inner = tensor(c.M, x)
    outer = tensor(c.N, inner.result)
    domain = c.domain
    per_n = []
    for k in range(c.N.dim):
        n_row = _unit(c.N.dim, k, domain)

        def act(m_row: Row, x_row: Row, n_row: Row = n_row) -> Row:
            a = x.act(c.psi(n_row, m_row))
            return la.to_rows(la.mul(la.from_rows([x_row], x.dim, domain), a))[0]

        per_n.append(inner.induced(act, x.dim))

    def evaluate(n_row: Row, t_row: Row) -> Row:
        m = la.linear_combination(n_row, per_n, (inner.dim, x.dim), domain)
        return la.to_rows(la.mul(la.from_rows([t_row], inner.dim, domain), m))[0]

    return ModuleMap(outer.result, x, outer.induced(evaluate, x.dim))


def big_phi(c: MoritaContext, y: FDModule) -> ModuleMap:
    """Φ_Y : M⊗(N⊗Y) → Y，m⊗(n⊗y) ↦ φ(m⊗n)y"""
    inner = tensor(c.N, y)
    outer = tensor(c.M, inner.result)
    domain = c.domain
    per_m = []
    for k in range(c.M.dim):
        m_row = _unit(c.M.dim, k, domain)

        def act(n_row: Row, y_row: Row, m_row: Row = m_row) -> Row:
            b = y.act(c.phi(m_row, n_row))
            return la.to_rows(la.mul(la.from_rows([y_row], y.dim, domain), b))[0]

        per_m.append(inner.induced(act, y.dim))

    def evaluate(m_row: Row, t_row: Row) -> Row:
        m = la.linear_combination(m_row, per_m, (inner.dim, y.dim), domain)
        return la.to_rows(la.mul(la.from_rows([t_row], inner.dim, domain), m))[0]

    return ModuleMap(outer.result, y, outer.induced(evaluate, y.dim))


def _first_difference(lhs: Matrix, rhs: Matrix) -> Optional[Tuple[int, int]]:
    for r, (u, v) in enumerate(zip(la.to_rows(lhs), la.to_rows(rhs))):
        for col, (x, y) in enumerate(zip(u, v)):
            if x != y:
                return (r, col)
    return None


def tuple_violations(t: TupleModule) -> List[Dict[str, str]]:
    """交换方块 (N⊗f)g = Ψ_X 与 (M⊗g)f = Φ_Y 以及 f、g 的线性性"""
    c = t.context
    problems: List[Dict[str, str]] = []
    if not t.f.is_valid():
        problems.append({"identity": "f is B-linear", "witness": ""})
    if not t.g.is_valid():
        problems.append({"identity": "g is A-linear", "witness": ""})
    if problems:
        return problems
    lhs = la.mul(tensor_map(c.N, t.f).matrix, t.g.matrix)
    diff = _first_difference(lhs, big_psi(c, t.X).matrix)
    if diff is not None:
        problems.append({"identity": "(N⊗f)g = Psi_X", "witness": f"{diff[0]},{diff[1]}"})
    lhs = la.mul(tensor_map(c.M, t.g).matrix, t.f.matrix)
    diff = _first_difference(lhs, big_phi(c, t.Y).matrix)
    if diff is not None:
        problems.append({"identity": "(M⊗g)f = Phi_Y", "witness": f"{diff[0]},{diff[1]}"})
    return problems


def make_tuple(
    c: MoritaContext,
    X: FDModule,
    Y: FDModule,
    f: ModuleMap,
    g: ModuleMap,
    name: str = "",
    check: bool = True,
) -> TupleModule:
    if X.algebra is not c.A or Y.algebra is not c.B:
        raise AlgebraMismatchError("X 必须是 A-模，Y 必须是 B-模")
    t = TupleModule(c, X, Y, f, g, name)
    if check:
        problems = tuple_violations(t)
        if problems:
            raise InvalidTupleError(
                f"元组 {name} 不合法: {problems[0]['identity']}", pair=problems[0]["witness"]
            )
    return t


def tuple_map_is_valid(m: TupleMap) -> bool:
    """f∘b = (M⊗a)∘f′ 且 g∘a = (N⊗b)∘g′（图序）"""
    c = m.source.context
    s, t = m.source, m.target
    lhs = la.mul(s.f.matrix, m.b.matrix)
    rhs = la.mul(tensor_map(c.M, m.a).matrix, t.f.matrix)
    if not la.equal(lhs, rhs):
        return False
    lhs = la.mul(s.g.matrix, m.a.matrix)
    rhs = la.mul(tensor_map(c.N, m.b).matrix, t.g.matrix)
    return la.equal(lhs, rhs)


def tuple_to_flat(t: TupleModule) -> FDModule:
    """(X, Y, f, g) ↦ X ⊕ Y 上的 Λ-模"""
    c = t.context
    lam = c.algebra
    domain = c.domain
    X, Y = t.X, t.Y
    dx, dy = X.dim, Y.dim
    total = dx + dy
    tp_mx, tp_ny = tensor(c.M, X), tensor(c.N, Y)
    actions: List[Matrix] = []
    for k in range(c.A.dim):
        actions.append(la.block_diagonal([X.action[k], la.zeros(dy, dy, domain)], domain))
    for j in range(c.N.dim):
        n_row = _unit(c.N.dim, j, domain)
        rows = [[domain.zero] * total for _ in range(dx)]
        if dy and tp_ny.dim:
            images = la.from_rows([tp_ny.pure(n_row, _unit(dy, q, domain)) for q in range(dy)], tp_ny.dim, domain)
            block = la.to_rows(la.mul(images, t.g.matrix))
        else:
            block = [[domain.zero] * dx for _ in range(dy)]
        rows.extend(row + [domain.zero] * dy for row in block)
        actions.append(la.from_rows(rows, total, domain))
    for j in range(c.M.dim):
        m_row = _unit(c.M.dim, j, domain)
        if dx and tp_mx.dim:
            images = la.from_rows([tp_mx.pure(m_row, _unit(dx, q, domain)) for q in range(dx)], tp_mx.dim, domain)
            block = la.to_rows(la.mul(images, t.f.matrix))
        else:
            block = [[domain.zero] * dy for _ in range(dx)]
        rows = [[domain.zero] * dx + row for row in block]
        rows.extend([domain.zero] * total for _ in range(dy))
        actions.append(la.from_rows(rows, total, domain))
    for k in range(c.B.dim):
        actions.append(la.block_diagonal([la.zeros(dx, dx, domain), Y.action[k]], domain))
    return FDModule(lam, total, tuple(actions), t.name or "flat")


def flat_to_tuple(c: MoritaContext, w: FDModule, name: str = "") -> TupleModule:
    """由 e₁、e₂ 的像恢复 (X, Y, f, g)"""
    lam = c.algebra
    if w.algebra is not lam:
        raise AlgebraMismatchError(f"{w!r} 不是 Λ({c.name}) 上的模")
    domain = c.domain
    e1 = c.embed("A", c.A.unit)
    e2 = c.embed("B", c.B.unit)
    s1 = la.image(w.act(e1)) if w.dim else Subspace.zero(0, domain)
    s2 = la.image(w.act(e2)) if w.dim else Subspace.zero(0, domain)
    oa, on, om, ob = c.offsets

    def restricted(space: Subspace, m: Matrix) -> Matrix:
        if space.dim == 0:
            return la.zeros(0, 0, domain)
        return space.coordinates(la.mul(space.basis, m))

    X = FDModule(c.A, s1.dim, tuple(restricted(s1, w.action[oa + k]) for k in range(c.A.dim)), f"U_A({w.name})")
    Y = FDModule(c.B, s2.dim, tuple(restricted(s2, w.action[ob + k]) for k in range(c.B.dim)), f"U_B({w.name})")
    tp_mx, tp_ny = tensor(c.M, X), tensor(c.N, Y)

    def cross(source: Subspace, target: Subspace, offset: int, size: int) -> Any:
        def bilinear(u_row: Row, v_row: Row) -> Row:
            act = la.linear_combination(u_row, [w.action[offset + p] for p in range(size)], (w.dim, w.dim), domain)
            vec = la.mul(la.from_rows([v_row], source.dim, domain), la.mul(source.basis, act))
            return la.to_rows(target.coordinates(vec))[0] if target.dim else []

        return bilinear

    f = ModuleMap(tp_mx.result, Y, tp_mx.induced(cross(s1, s2, om, c.M.dim), Y.dim))
    g = ModuleMap(tp_ny.result, X, tp_ny.induced(cross(s2, s1, on, c.N.dim), X.dim))
    return TupleModule(c, X, Y, f, g, name or w.name)


def flat_identification(c: MoritaContext, w: FDModule) -> ModuleMap:
    """w → tuple_to_flat(flat_to_tuple(w)) 的典范同构"""
    t = flat_to_tuple(c, w)
    domain = c.domain
    s1 = la.image(w.act(c.embed("A", c.A.unit)))
    s2 = la.image(w.act(c.embed("B", c.B.unit)))
    change = la.vstack([s1.basis, s2.basis], w.dim, domain)
    inverse = la.inverse(change)
    if inverse is None:
        raise InvalidTupleError("e₁、e₂ 的像不构成直和")
    return ModuleMap(w, t.flat, inverse)


def tuple_map_from_flat(
    c: MoritaContext,
    h: ModuleMap,
    source: Optional[TupleModule] = None,
    target: Optional[TupleModule] = None,
) -> TupleMap:
    """Λ-同态 h 的分量 (a, b)；给出 source/target 时要求其平坦模就是 h 的源/靶"""
    domain = c.domain

    def side(w: FDModule, given: Optional[TupleModule]) -> Tuple[TupleModule, Matrix]:
        if given is not None:
            if given.flat is not w:
                raise AlgebraMismatchError(f"{given!r} 的平坦模不是 {w!r}")
            return given, la.identity(w.dim, domain)
        return flat_to_tuple(c, w), flat_identification(c, w).matrix

    s, p = side(h.source, source)
    t, q = side(h.target, target)
    p_inv = la.inverse(p)
    m = la.chain(p_inv, h.matrix, q)
    a = la.select(m, rows=range(s.X.dim), cols=range(t.X.dim))
    b = la.select(m, rows=range(s.X.dim, s.dim), cols=range(t.X.dim, t.dim))
    return TupleMap(s, t, ModuleMap(s.X, t.X, a), ModuleMap(s.Y, t.Y, b))


def transport_module(iso: AlgebraIso, w: FDModule, name: str = "") -> FDModule:
    """沿代数同构 iso: R → S 把 S-模拉回为 R-模"""
    if w.algebra is not iso.target:
        raise AlgebraMismatchError(f"{w!r} 不在同构的靶代数上")
    action = tuple(w.act(row) for row in la.to_rows(iso.matrix))
    return FDModule(iso.source, w.dim, action, name or w.name)


# ---------------------------------------------------------------------------
# Functors


def _check_side(side: str) -> str:
    if side not in ("A", "B"):
        raise PreconditionError(f"未知的一侧: {side}")
    return side


def functor_T(c: MoritaContext, side: str, x: FDModule) -> TupleModule:
    """T_A(X) = (X, M⊗X, Id, Ψ_X)；T_B(Y) = (N⊗Y, Y, Φ_Y, Id)"""
    if _check_side(side) == "A":
        mx = tensor(c.M, x).result
        f = ModuleMap(mx, mx, la.identity(mx.dim, c.domain))
        return TupleModule(c, x, mx, f, big_psi(c, x), f"T_A({x.name})")
    ny = tensor(c.N, x).result
    g = ModuleMap(ny, ny, la.identity(ny.dim, c.domain))
    return TupleModule(c, ny, x, big_phi(c, x), g, f"T_B({x.name})")


def functor_U(t: TupleModule, side: str) -> FDModule:
    return t.X if _check_side(side) == "A" else t.Y


def _mu(c: MoritaContext, x: FDModule) -> ModuleMap:
    """μ_X : M⊗X → Hom_A(N, X)，m⊗x ↦ (n ↦ ψ(n⊗m)x)"""
    hm = hom_module(c.N, x)
    tp = tensor(c.M, x)
    domain = c.domain

    def bilinear(m_row: Row, x_row: Row) -> Row:
        xv = la.from_rows([x_row], x.dim, domain)
        rows = [la.to_rows(la.mul(xv, x.act(c.psi(_unit(c.N.dim, k, domain), m_row))))[0] for k in range(c.N.dim)]
        return hm.coordinates(la.from_rows(rows, x.dim, domain))

    return ModuleMap(tp.result, hm.result, tp.induced(bilinear, hm.result.dim))


def _nu(c: MoritaContext, y: FDModule) -> ModuleMap:
    """ν_Y : N⊗Y → Hom_B(M, Y)，n⊗y ↦ (m ↦ φ(m⊗n)y)"""
    hm = hom_module(c.M, y)
    tp = tensor(c.N, y)
    domain = c.domain

    def bilinear(n_row: Row, y_row: Row) -> Row:
        yv = la.from_rows([y_row], y.dim, domain)
        rows = [la.to_rows(la.mul(yv, y.act(c.phi(_unit(c.M.dim, k, domain), n_row))))[0] for k in range(c.M.dim)]
        return hm.coordinates(la.from_rows(rows, y.dim, domain))

    return ModuleMap(tp.result, hm.result, tp.induced(bilinear, hm.result.dim))


def functor_H(c: MoritaContext, side: str, x: FDModule) -> TupleModule:
    """H_A(X) = (X, Hom_A(N,X), μ, ε′)；H_B(Y) = (Hom_B(M,Y), Y, ε, ν)"""
    if _check_side(side) == "A":
        hm = hom_module(c.N, x)
        return TupleModule(c, x, hm.result, _mu(c, x), counit_map(c.N, x), f"H_A({x.name})")
    hm = hom_module(c.M, x)
    return TupleModule(c, hm.result, x, counit_map(c.M, x), _nu(c, x), f"H_B({x.name})")


def functor_Z(c: MoritaContext, side: str, x: FDModule) -> TupleModule:
    """Z_A(X) = (X, 0, 0, 0)，仅当 φ = ψ = 0"""
    if not c.is_zero_context:
        raise PreconditionError(f"Z 函子要求 φ = ψ = 0: {c.name}")
    return _concentrated(c, _check_side(side), x, f"Z_{side}({x.name})")


def _concentrated(c: MoritaContext, side: str, x: FDModule, name: str) -> TupleModule:
    domain = c.domain
    if side == "A":
        zero = zero_module(c.B)
        mx, nz = tensor(c.M, x).result, tensor(c.N, zero).result
        return TupleModule(c, x, zero, ModuleMap(mx, zero, la.zeros(mx.dim, 0, domain)), ModuleMap(nz, x, la.zeros(nz.dim, x.dim, domain)), name)
    zero = zero_module(c.A)
    mz, ny = tensor(c.M, zero).result, tensor(c.N, x).result
    return TupleModule(c, zero, x, ModuleMap(mz, x, la.zeros(mz.dim, x.dim, domain)), ModuleMap(ny, zero, la.zeros(ny.dim, 0, domain)), name)


def canonical_map(c: MoritaContext, side: str, x: FDModule) -> TupleMap:
    """T_A(X) → H_A(X) 为 (Id, μ)；T_B(Y) → H_B(Y) 为 (ν, Id)"""
    source, target = functor_T(c, side, x), functor_H(c, side, x)
    if side == "A":
        return TupleMap(source, target, ModuleMap(x, x, la.identity(x.dim, c.domain)), _mu(c, x))
    return TupleMap(source, target, _nu(c, x), ModuleMap(x, x, la.identity(x.dim, c.domain)))


def functor_C(c: MoritaContext, side: str, x: FDModule) -> TupleModule:
    """C_A(X) = Image(Id_X, μ_X)，在平坦模中计算像"""
    arrow = canonical_map(c, _check_side(side), x)
    image, _ = image_submodule(arrow.flat_map())
    return flat_to_tuple(c, FDModule(c.algebra, image.dim, image.action, f"C_{side}({x.name})"))


def functor_T_map(c: MoritaContext, side: str, h: ModuleMap) -> TupleMap:
    source, target = functor_T(c, side, h.source), functor_T(c, side, h.target)
    if side == "A":
        return TupleMap(source, target, h, tensor_map(c.M, h))
    return TupleMap(source, target, tensor_map(c.N, h), h)


def functor_H_map(c: MoritaContext, side: str, h: ModuleMap) -> TupleMap:
    source, target = functor_H(c, side, h.source), functor_H(c, side, h.target)
    if side == "A":
        return TupleMap(source, target, h, hom_map(c.N, h))
    return TupleMap(source, target, hom_map(c.M, h), h)


def functor_U_map(m: TupleMap, side: str) -> ModuleMap:
    return m.a if _check_side(side) == "A" else m.b


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True, eq=False)
class Classified:
    """分类列表：元组、其来源标签以及与平坦代数的交叉核对"""

    tuples: Tuple[TupleModule, ...]
    labels: Tuple[str, ...]
    cross_checked: Tuple[bool, ...]

    @property
    def all_checked(self) -> bool:
        return all(self.cross_checked)

    def __len__(self) -> int:
        return len(self.tuples)


@monitor_performance("classify_projectives")
def classify_projectives(c: MoritaContext) -> Classified:
    lam = c.algebra
    tuples, labels, checks = [], [], []
    for i in range(c.A.n_idempotents):
        t = functor_T(c, "A", projective(c.A, i))
        tuples.append(t)
        labels.append(f"T_A(P{i})")
        checks.append(iso_test(t.flat, projective(lam, i)) is not None)
    for j in range(c.B.n_idempotents):
        t = functor_T(c, "B", projective(c.B, j))
        tuples.append(t)
        labels.append(f"T_B(Q{j})")
        checks.append(iso_test(t.flat, projective(lam, c.A.n_idempotents + j)) is not None)
    return Classified(tuple(tuples), tuple(labels), tuple(checks))


@monitor_performance("classify_injectives")
def classify_injectives(c: MoritaContext) -> Classified:
    lam = c.algebra
    tuples, labels, checks = [], [], []
    for i in range(c.A.n_idempotents):
        t = functor_H(c, "A", injective(c.A, i))
        tuples.append(t)
        labels.append(f"H_A(I{i})")
        checks.append(iso_test(t.flat, injective(lam, i)) is not None)
    for j in range(c.B.n_idempotents):
        t = functor_H(c, "B", injective(c.B, j))
        tuples.append(t)
        labels.append(f"H_B(J{j})")
        checks.append(iso_test(t.flat, injective(lam, c.A.n_idempotents + j)) is not None)
    return Classified(tuple(tuples), tuple(labels), tuple(checks))


@monitor_performance("classify_simples")
def classify_simples(c: MoritaContext) -> Classified:
    """{C_A(S_i)} ∪ {(0, S′_j, 0, 0) : Φ_{S′_j} = 0}"""
    lam_simples = simples(c.algebra)
    tuples, labels = [], []
    for i in simple_indices(c.A):
        tuples.append(functor_C(c, "A", simple(c.A, i)))
        labels.append(f"C_A(S{i})")
    for j in simple_indices(c.B):
        s = simple(c.B, j)
        if big_phi(c, s).is_zero():
            tuples.append(_concentrated(c, "B", s, f"Z_B(S'{j})"))
            labels.append(f"Z_B(S'{j})")
    checks = []
    for k, t in enumerate(tuples):
        matches = [s for s in lam_simples if iso_test(t.flat, s) is not None]
        distinct = all(iso_test(t.flat, other.flat) is None for other in tuples[:k])
        checks.append(bool(matches) and distinct)
    if len(tuples) != len(lam_simples):
        checks = [False] * len(tuples)
        logger.warning(f"单模分类数目 {len(tuples)} 与 Λ 的单模数 {len(lam_simples)} 不符")
    return Classified(tuple(tuples), tuple(labels), tuple(checks))


def dual_tuple(t: TupleModule) -> TupleModule:
    """D(X, Y, f, g)，经 Λ^op ≅ Λ(opposite_context) 搬运"""
    c = t.context
    op = c.opposite
    d = dual(t.flat)
    iso = opposite_iso(c)
    perm = [next(j for j, x in enumerate(row) if x) for row in la.to_rows(iso.matrix)]
    action: List[Optional[Matrix]] = [None] * op.algebra.dim
    for k, m in enumerate(d.action):
        action[perm[k]] = m
    transported = FDModule(op.algebra, d.dim, tuple(a for a in action if a is not None), f"D({t.name})")
    return flat_to_tuple(op, transported, f"D({t.name})")


def selfinjective_check(c: MoritaContext) -> Dict[str, Any]:
    """每个分类的投射元组是否同构于某个分类的内射元组"""
    projectives, injectives = classify_projectives(c), classify_injectives(c)
    pairing: Dict[str, Optional[str]] = {}
    for label, p in zip(projectives.labels, projectives.tuples):
        match = None
        for ilabel, q in zip(injectives.labels, injectives.tuples):
            if iso_test(p.flat, q.flat) is not None:
                match = ilabel
                break
        pairing[label] = match
    return {"selfinjective": all(v is not None for v in pairing.values()), "pairing": pairing}


def prop37_premise(c: MoritaContext) -> Dict[str, Any]:
    """(M⊗−, Hom_B(M,−)) 是否给出 proj A 与 inj B 之间的等价（N 侧对称）

    前提成立时同时断言 Λ 自内射；断言失败记入 consistent。
    """
    checks: Dict[str, bool] = {}
    for side, alg, other, bim in (("A", c.A, c.B, c.M), ("B", c.B, c.A, c.N)):
        images = []
        for i in range(alg.n_idempotents):
            p = projective(alg, i)
            image = tensor(bim, p).result
            images.append(image)
            checks[f"{side}:P{i} image injective"] = image.dim > 0 and is_injective(image)
            checks[f"{side}:P{i} unit invertible"] = unit_map(bim, p).is_iso()
        for j in range(other.n_idempotents):
            inj = injective(other, j)
            checks[f"{side}:I{j} reached"] = any(iso_test(inj, im) is not None for im in images)
    holds = all(checks.values())
    consistent = True
    if holds:
        consistent = selfinjective_check(c)["selfinjective"]
        if not consistent:
            logger.error(f"上下文 {c.name} 满足自内射前提但 Λ 不是自内射的")
    return {"holds": holds, "checks": checks, "consistent": consistent}


def trivial_extension_iso(c: MoritaContext) -> AlgebraIso:
    """φ = ψ = 0 时 Λ ≅ (A×B) ⋉ (M⊕N)"""
    if not c.is_zero_context:
        raise PreconditionError(f"平凡扩张同构要求 φ = ψ = 0: {c.name}")
    A, B, M, N = c.A, c.B, c.M, c.N
    domain = c.domain
    prod = product_algebra(A, B, name=f"{A.name}×{B.name}")
    zm, zn = la.zeros(M.dim, M.dim, domain), la.zeros(N.dim, N.dim, domain)
    left = [la.block_diagonal([zm, N.left_action[k]], domain) for k in range(A.dim)]
    left += [la.block_diagonal([M.left_action[k], zn], domain) for k in range(B.dim)]
    right = [la.block_diagonal([M.right_action[k], zn], domain) for k in range(A.dim)]
    right += [la.block_diagonal([zm, N.right_action[k]], domain) for k in range(B.dim)]
    bim = make_bimodule(prod, prod, left, right, name="M⊕N")
    target = trivial_extension(prod, bim, name=f"({prod.name})⋉(M⊕N)")
    da, db, dm = A.dim, B.dim, M.dim
    perm = (
        list(range(da))
        + [da + db + dm + j for j in range(N.dim)]
        + [da + db + j for j in range(dm)]
        + [da + j for j in range(db)]
    )
    iso = permutation_iso(c.algebra, target, perm)
    if not iso.verify():
        raise InvalidAlgebraError("平凡扩张的重排不是代数同构")
    return iso


def loewy_bound_cor_3_10(c: MoritaContext) -> Dict[str, int]:
    ll = loewy_length(c.algebra)
    return {
        "loewy_A": loewy_length(c.A),
        "loewy_B": loewy_length(c.B),
        "loewy_Lambda": ll,
        "twice_loewy_Lambda": 2 * ll,
    }


def adjunction_checks(c: MoritaContext, x: FDModule, y: FDModule, w: FDModule) -> Dict[str, Tuple[int, int]]:
    """四对伴随的维数恒等式；x 为 A-模，y 为 B-模，w 为 Λ-模"""
    t = flat_to_tuple(c, w)
    return {
        "T_A -| U_A": (hom_space(functor_T(c, "A", x).flat, w).dim, hom_space(x, t.X).dim),
        "U_A -| H_A": (hom_space(t.X, x).dim, hom_space(w, functor_H(c, "A", x).flat).dim),
        "T_B -| U_B": (hom_space(functor_T(c, "B", y).flat, w).dim, hom_space(y, t.Y).dim),
        "U_B -| H_B": (hom_space(t.Y, y).dim, hom_space(w, functor_H(c, "B", y).flat).dim),
    }


def exactness_check(c: MoritaContext, first: ModuleMap, second: ModuleMap) -> bool:
    """0 → w1 → w2 → w3 → 0 正合时 U_A、U_B 的分量序列也正合"""
    domain = c.domain
    mods = (first.source, first.target, second.target)
    for part, unit in (("A", c.A.unit), ("B", c.B.unit)):
        e = c.embed(part, unit)
        spaces = [la.image(m.act(e)) if m.dim else Subspace.zero(0, domain) for m in mods]

        def component(h: ModuleMap, s: Subspace, t: Subspace) -> Matrix:
            if s.dim == 0 or t.dim == 0:
                return la.zeros(s.dim, t.dim, domain)
            return t.coordinates(la.mul(s.basis, h.matrix))

        f_e = component(first, spaces[0], spaces[1])
        g_e = component(second, spaces[1], spaces[2])
        if la.rank(f_e) != spaces[0].dim or la.rank(g_e) != spaces[2].dim:
            return False
        if la.rank(f_e) + la.rank(g_e) != spaces[1].dim:
            return False
    return True


# ---------------------------------------------------------------------------
# Random contexts


def random_radical_square_zero_algebra(field: Field, rng: random.Random, name: str = "") -> FDAlgebra:
    """1–2 个顶点、至多 2 个箭头、rad² = 0 的箭图代数"""
    n_vertices = rng.randint(1, 2)
    vertices = tuple(f"v{i}" for i in range(n_vertices))
    arrows = []
    for k in range(rng.randint(0, 2)):
        arrows.append(Arrow(f"x{k}", rng.choice(vertices), rng.choice(vertices)))
    quiver = Quiver(vertices, tuple(arrows))
    relations = []
    for a in arrows:
        for b in arrows:
            if a.target == b.source:
                relations.append(((1, (a.label, b.label)),))
    return build_path_algebra(Presentation(quiver, tuple(relations), 2, field), name=name or "rand")


def random_bimodule(b: FDAlgebra, a: FDAlgebra, rng: random.Random, max_dim: int) -> Bimodule:
    """若干 X ⊗_K Z 的直和，X 为 B 的投射或单模，Z 为 A^op 的投射或单模"""
    domain = a.domain
    pieces: List[Bimodule] = []
    size = 0
    for _ in range(rng.randint(0, 2)):
        i, j = rng.randrange(b.n_idempotents), rng.randrange(a.n_idempotents)
        x = projective(b, i) if rng.random() < 0.5 else simple(b, i)
        z = projective(a.opposite, j) if rng.random() < 0.5 else simple(a.opposite, j)
        if size + x.dim * z.dim > max_dim:
            continue
        size += x.dim * z.dim
        left = tuple(la.kron(m, la.identity(z.dim, domain)) for m in x.action)
        right = tuple(la.kron(la.identity(x.dim, domain), m) for m in z.action)
        pieces.append(Bimodule(b, a, x.dim * z.dim, left, right, f"{x.name}⊗{z.name}"))
    if not pieces:
        return zero_bimodule(b, a)
    result = pieces[0]
    for p in pieces[1:]:
        result = bimodule_direct_sum(result, p)
    return result


def random_zero_context(field: Field, rng: random.Random, max_dim: int = 4) -> MoritaContext:
    A = random_radical_square_zero_algebra(field, rng, "A")
    B = random_radical_square_zero_algebra(field, rng, "B")
    M = random_bimodule(B, A, rng, max_dim)
    N = random_bimodule(A, B, rng, max_dim)
    return zero_context(A, B, M, N, name="random-zero")


def random_delta_context(field: Field, rng: random.Random) -> MoritaContext:
    return delta_context(random_radical_square_zero_algebra(field, rng, "l"), name="random-delta")


def random_module(a: FDAlgebra, rng: random.Random) -> FDModule:
    """投射、单或内射模的直和"""
    parts = []
    for _ in range(rng.randint(1, 2)):
        i = rng.randrange(a.n_idempotents)
        parts.append(rng.choice([projective, simple, injective])(a, i))
    module, _, _ = direct_sum(parts)
    return module
