"""
有限维代数的构造与校验
Finite-dimensional algebras by structure constants: quiver path algebras with
relations, opposites, corners, products and trivial extensions.

Paths compose diagrammatically: the relation ``ab`` means "a then b".
"""

import itertools
import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import TYPE_CHECKING, Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exactla import Field, Matrix, Subspace
from src.core.exceptions import (
    AdmissibilityError,
    AlgebraMismatchError,
    CompositionError,
    FieldMismatchError,
    InvalidAlgebraError,
    IsoSearchError,
    PreconditionError,
    UnsupportedConstructionError,
)

if TYPE_CHECKING:
    from src.core.fdmod import Bimodule

logger = logging.getLogger(__name__)
settings = get_settings()

SparseVec = Dict[int, Any]


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """箭图：顶点与箭头"""

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        labels = list(self.vertices) + [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise CompositionError("顶点与箭头标签必须唯一")
        for arrow in self.arrows:
            if arrow.source not in self.vertices or arrow.target not in self.vertices:
                raise CompositionError(f"箭头 {arrow.label} 的端点未声明")

    def vertex_index(self, label: str) -> int:
        return self.vertices.index(label)

    @cached_property
    def arrow_index(self) -> Dict[str, int]:
        return {a.label: i for i, a in enumerate(self.arrows)}


Term = Tuple[Any, Tuple[str, ...]]


@dataclass(frozen=True)
class Presentation:
    """箭图、关系（路径的线性组合）与截断长度 L"""

    quiver: Quiver
    relations: Tuple[Tuple[Term, ...], ...]
    truncation_length: int
    field: Field = Field()


@dataclass(frozen=True, eq=False)
class FDAlgebra:
    """结构常数给出的有限维结合代数"""

    field: Field
    labels: Tuple[str, ...]
    table: Tuple[Tuple[SparseVec, ...], ...]
    unit: Tuple[Any, ...]
    idempotents: Tuple[Tuple[Any, ...], ...]
    radical: Subspace
    idempotent_labels: Tuple[str, ...]
    paths: Optional[Tuple[Tuple[int, Tuple[str, ...]], ...]] = None
    quiver: Optional[Quiver] = None
    embedding: Optional[Matrix] = None
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def domain(self) -> Any:
        return self.field.domain

    @property
    def n_idempotents(self) -> int:
        return len(self.idempotents)

    def __repr__(self) -> str:
        return f"FDAlgebra({self.name or 'anonymous'}, dim={self.dim}, field={self.field.label})"

    def basis_vector(self, k: int) -> List[Any]:
        row = [self.domain.zero] * self.dim
        row[k] = self.domain.one
        return row

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def multiply(self, u: Sequence[Any], v: Sequence[Any]) -> List[Any]:
        return la.dense_vector(
            _mul_sparse(self.table, la.sparse_vector(list(u)), la.sparse_vector(list(v))),
            self.dim,
            self.domain,
        )

    def product_vector(self, i: int, j: int) -> List[Any]:
        return la.dense_vector(self.table[i][j], self.dim, self.domain)

    @cached_property
    def left_regular(self) -> Tuple[Matrix, ...]:
        """L_i：第 k 行是 b_i·b_k 的坐标"""
        return tuple(
            la.from_rows([self.product_vector(i, k) for k in range(self.dim)], self.dim, self.domain)
            for i in range(self.dim)
        )

    @cached_property
    def right_regular(self) -> Tuple[Matrix, ...]:
        """R_j：第 k 行是 b_k·b_j 的坐标"""
        return tuple(
            la.from_rows([self.product_vector(k, j) for k in range(self.dim)], self.dim, self.domain)
            for j in range(self.dim)
        )

    def right_multiplication(self, vec: Sequence[Any]) -> Matrix:
        return la.linear_combination(list(vec), self.right_regular, (self.dim, self.dim), self.domain)

    def left_multiplication(self, vec: Sequence[Any]) -> Matrix:
        return la.linear_combination(list(vec), self.left_regular, (self.dim, self.dim), self.domain)

    @cached_property
    def blocks(self) -> Optional[Tuple[Tuple[int, int], ...]]:
        """每个基元素所在的 (e_s, e_t) 块；基不齐次时为 None"""
        result = []
        for k in range(self.dim):
            target = {k: self.domain.one}
            left = [
                s
                for s, e in enumerate(self.idempotents)
                if _mul_sparse(self.table, la.sparse_vector(list(e)), target) == target
            ]
            right = [
                t
                for t, e in enumerate(self.idempotents)
                if _mul_sparse(self.table, target, la.sparse_vector(list(e))) == target
            ]
            if len(left) != 1 or len(right) != 1:
                return None
            result.append((left[0], right[0]))
        return tuple(result)

    @cached_property
    def radical_powers(self) -> Tuple[Subspace, ...]:
        """rad, rad², … 直到零"""
        powers = [self.radical]
        rad_rows = [la.sparse_vector(r) for r in self.radical.rows]
        while not powers[-1].is_zero() and len(powers) <= self.dim + 1:
            current = [la.sparse_vector(r) for r in powers[-1].rows]
            products = [
                la.dense_vector(_mul_sparse(self.table, u, v), self.dim, self.domain)
                for u in current
                for v in rad_rows
            ]
            powers.append(Subspace.span_rows(products, self.dim, self.domain))
        return tuple(powers)

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """代数生成元（基元素下标）：幂等元之外，每块中不在 rad²+span(e) 内的基元素"""
        idempotent_set = {tuple(e) for e in self.idempotents}
        blocks = self.blocks
        if blocks is None:
            return tuple(k for k in range(self.dim) if tuple(self.basis_vector(k)) not in idempotent_set)
        rad2 = self.radical_powers[1] if len(self.radical_powers) > 1 else Subspace.zero(self.dim, self.domain)
        span = rad2 + Subspace.span_rows([list(e) for e in self.idempotents], self.dim, self.domain)
        chosen: List[int] = []
        for k in range(self.dim):
            row = self.basis_vector(k)
            if span.contains_row(row):
                continue
            chosen.append(k)
            span = span + Subspace.span_rows([row], self.dim, self.domain)
        return tuple(chosen)

    @cached_property
    def generator_vectors(self) -> Tuple[Tuple[Any, ...], ...]:
        """幂等元与生成元的坐标向量"""
        vectors = [tuple(e) for e in self.idempotents]
        vectors.extend(tuple(self.basis_vector(k)) for k in self.generators)
        return tuple(vectors)

    @cached_property
    def opposite(self) -> "FDAlgebra":
        table = tuple(tuple(dict(self.table[j][i]) for j in range(self.dim)) for i in range(self.dim))
        paths = None
        if self.paths is not None:
            paths = tuple((v, tuple(reversed(p))) for v, p in self.paths)
        quiver = None
        if self.quiver is not None:
            quiver = Quiver(
                self.quiver.vertices,
                tuple(Arrow(a.label, a.target, a.source) for a in self.quiver.arrows),
            )
        op = FDAlgebra(
            field=self.field,
            labels=self.labels,
            table=table,
            unit=self.unit,
            idempotents=self.idempotents,
            radical=self.radical,
            idempotent_labels=self.idempotent_labels,
            paths=paths,
            quiver=quiver,
            name=f"{self.name}^op" if self.name else "",
        )
        op.__dict__["opposite"] = self
        return op

    @cached_property
    def idempotent_subspaces(self) -> Tuple[Subspace, ...]:
        """e_i A e_j 的子空间，按 (i, j) 展平"""
        spaces = []
        for ei in self.idempotents:
            for ej in self.idempotents:
                rows = [
                    self.multiply(self.multiply(ei, self.basis_vector(k)), ej) for k in range(self.dim)
                ]
                spaces.append(Subspace.span_rows(rows, self.dim, self.domain))
        return tuple(spaces)

    def corner_space(self, i: int, j: int) -> Subspace:
        return self.idempotent_subspaces[i * self.n_idempotents + j]


def _mul_sparse(table: Sequence[Sequence[SparseVec]], u: SparseVec, v: SparseVec) -> SparseVec:
    out: SparseVec = {}
    for i, x in u.items():
        row = table[i]
        for j, y in v.items():
            for k, c in row[j].items():
                val = out.get(k)
                val = x * y * c if val is None else val + x * y * c
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
    return out


def make_algebra(
    field: Field,
    labels: Sequence[str],
    table: Sequence[Sequence[SparseVec]],
    unit: Sequence[Any],
    idempotents: Sequence[Sequence[Any]],
    idempotent_labels: Sequence[str],
    radical_candidate: Optional[Subspace],
    name: str = "",
    paths: Optional[Sequence[Tuple[int, Tuple[str, ...]]]] = None,
    quiver: Optional[Quiver] = None,
    embedding: Optional[Matrix] = None,
    check: bool = True,
) -> FDAlgebra:
    """构造代数：校验结合律、单位、幂等元，并确定根"""
    dim = len(labels)
    domain = field.domain
    clean_table = tuple(tuple({k: c for k, c in table[i][j].items() if c} for j in range(dim)) for i in range(dim))
    candidate = radical_candidate if radical_candidate is not None else Subspace.zero(dim, domain)
    algebra = FDAlgebra(
        field=field,
        labels=tuple(labels),
        table=clean_table,
        unit=tuple(unit),
        idempotents=tuple(tuple(e) for e in idempotents),
        radical=candidate,
        idempotent_labels=tuple(idempotent_labels),
        paths=tuple(paths) if paths is not None else None,
        quiver=quiver,
        embedding=embedding,
        name=name,
    )
    if not check:
        return algebra
    check_algebra(algebra)
    if radical_candidate is not None and verify_radical(algebra, radical_candidate):
        return algebra
    logger.debug(f"代数 {name} 的根候选未通过校验，尝试迹形式")
    if field.kind != "rational":
        raise UnsupportedConstructionError(f"无法在 {field.label} 上确定代数 {name or dim} 的根")
    radical = trace_radical(algebra)
    fallback = replace(algebra, radical=radical)
    if not verify_radical(fallback, radical):
        raise UnsupportedConstructionError(f"代数 {name or dim} 的根不满足半单商检验")
    return fallback


def check_algebra(a: FDAlgebra) -> None:
    """穷举检验单位、幂等元与结合律"""
    dim, domain = a.dim, a.domain
    unit = la.sparse_vector(list(a.unit))
    for k in range(dim):
        bk = {k: domain.one}
        if _mul_sparse(a.table, unit, bk) != bk or _mul_sparse(a.table, bk, unit) != bk:
            raise InvalidAlgebraError(f"单位元不作用为恒等: 基元素 {a.labels[k]}")
    total: SparseVec = {}
    for i, e in enumerate(a.idempotents):
        ev = la.sparse_vector(list(e))
        for j, f in enumerate(a.idempotents):
            prod = _mul_sparse(a.table, ev, la.sparse_vector(list(f)))
            expected = ev if i == j else {}
            if prod != expected:
                raise InvalidAlgebraError(f"幂等元 {a.idempotent_labels[i]}, {a.idempotent_labels[j]} 不正交")
        for k, c in ev.items():
            total[k] = total.get(k, domain.zero) + c
    if {k: c for k, c in total.items() if c} != unit:
        raise InvalidAlgebraError("幂等元之和不等于单位元")
    blocks = a.blocks
    if blocks is None:
        triples = itertools.product(range(dim), repeat=3)
    else:
        for i in range(dim):
            for j in range(dim):
                prod = a.table[i][j]
                if blocks[i][1] != blocks[j][0]:
                    if prod:
                        raise InvalidAlgebraError(f"不可合成的乘积非零: {a.labels[i]}·{a.labels[j]}")
                    continue
                expected = (blocks[i][0], blocks[j][1])
                if any(blocks[k] != expected for k in prod):
                    raise InvalidAlgebraError(f"乘积不齐次: {a.labels[i]}·{a.labels[j]}")
        triples = (
            (i, j, k)
            for i in range(dim)
            for j in range(dim)
            if blocks[i][1] == blocks[j][0]
            for k in range(dim)
            if blocks[j][1] == blocks[k][0]
        )
    for i, j, k in triples:
        left = _mul_sparse(a.table, a.table[i][j], {k: domain.one})
        right = _mul_sparse(a.table, {i: domain.one}, a.table[j][k])
        if left != right:
            raise InvalidAlgebraError(
                f"结合律失败: ({a.labels[i]}·{a.labels[j]})·{a.labels[k]}",
            )


def verify_radical(a: FDAlgebra, candidate: Subspace) -> bool:
    """候选根是否为幂零双边理想且商代数半单（角 1 维、配对非退化）"""
    dim, domain = a.dim, a.domain
    rows = [la.sparse_vector(r) for r in candidate.rows]
    for r in rows:
        for k in range(dim):
            bk = {k: domain.one}
            for prod in (_mul_sparse(a.table, bk, r), _mul_sparse(a.table, r, bk)):
                if prod and not candidate.contains_row(la.dense_vector(prod, dim, domain)):
                    return False
    power = candidate
    for _ in range(dim + 1):
        if power.is_zero():
            break
        products = [
            la.dense_vector(_mul_sparse(a.table, la.sparse_vector(u), v), dim, domain)
            for u in power.rows
            for v in rows
        ]
        power = Subspace.span_rows(products, dim, domain)
    if not power.is_zero():
        return False
    projection, section = la.quotient(dim, candidate)
    n = a.n_idempotents
    reps: Dict[Tuple[int, int], List[List[Any]]] = {}
    for i in range(n):
        for j in range(n):
            corner = a.corner_space(i, j)
            image = Subspace.span(la.mul(corner.basis, projection), projection.shape[1])
            reps[(i, j)] = la.to_rows(la.mul(image.basis, section))
            if i == j and image.dim != 1:
                return False
    for i in range(n):
        ei_bar = la.mul(la.from_rows([list(a.idempotents[i])], dim, domain), projection)
        for j in range(n):
            if j == i:
                continue
            xs, ys = reps[(i, j)], reps[(j, i)]
            if len(xs) != len(ys):
                return False
            if not xs:
                continue
            pairing = []
            for x in xs:
                row = []
                for y in ys:
                    prod = la.mul(la.from_rows([a.multiply(x, y)], dim, domain), projection)
                    coeff = la.solve(ei_bar, prod)
                    if coeff is None:
                        return False
                    row.append(la.to_rows(coeff)[0][0])
                pairing.append(row)
            if not la.is_invertible(la.from_rows(pairing, len(ys), domain)):
                return False
    return True


def trace_radical(a: FDAlgebra) -> Subspace:
    """特征零下的迹形式根：{x : Tr(L_x L_y) = 0 ∀ y}"""
    dim, domain = a.dim, a.domain
    gram = []
    for i in range(dim):
        row = []
        for j in range(dim):
            product = la.mul(a.left_regular[i], a.left_regular[j])
            data = la.to_rows(product)
            row.append(sum((data[k][k] for k in range(dim)), domain.zero))
        gram.append(row)
    return la.kernel(la.from_rows(gram, dim, domain))


def build_path_algebra(p: Presentation, name: str = "") -> FDAlgebra:
    """箭图代数 KQ/I，I 由关系生成且包含全部长度 L 的路径"""
    quiver, field, L = p.quiver, p.field, p.truncation_length
    domain = field.domain
    if L < 2:
        raise AdmissibilityError(f"截断长度必须至少为 2: {L}")
    arrows = quiver.arrows
    src = [quiver.vertex_index(a.source) for a in arrows]
    tgt = [quiver.vertex_index(a.target) for a in arrows]

    paths: List[Tuple[int, Tuple[int, ...]]] = [(v, ()) for v in range(len(quiver.vertices))]
    frontier = [(src[i], (i,)) for i in range(len(arrows))]
    for _ in range(1, L + 1):
        paths.extend(frontier)
        frontier = [
            (s, seq + (i,)) for s, seq in frontier for i in range(len(arrows)) if tgt[seq[-1]] == src[i]
        ]
    paths.sort(key=lambda pth: (len(pth[1]), pth[0], pth[1]))
    index = {pth: k for k, pth in enumerate(paths)}

    def end(pth: Tuple[int, Tuple[int, ...]]) -> int:
        return tgt[pth[1][-1]] if pth[1] else pth[0]

    def concat(u: Tuple[int, Tuple[int, ...]], v: Tuple[int, Tuple[int, ...]]) -> Optional[Tuple[int, Tuple[int, ...]]]:
        if end(u) != v[0]:
            return None
        return (u[0], u[1] + v[1])

    relations: List[List[Tuple[Any, Tuple[int, Tuple[int, ...]]]]] = []
    for r_index, relation in enumerate(p.relations):
        terms = []
        endpoints = set()
        for coeff, labels in relation:
            seq = []
            for label in labels:
                if label not in quiver.arrow_index:
                    raise CompositionError(f"关系 #{r_index} 引用了未知箭头 {label}", relation=r_index)
                seq.append(quiver.arrow_index[label])
            for x, y in zip(seq, seq[1:]):
                if tgt[x] != src[y]:
                    raise CompositionError(f"关系 #{r_index} 中的路径 {''.join(labels)} 不可合成", relation=r_index)
            if not 2 <= len(seq) <= L:
                raise CompositionError(
                    f"关系 #{r_index} 的路径长度 {len(seq)} 不在 [2, {L}] 内", relation=r_index
                )
            path = (src[seq[0]], tuple(seq))
            endpoints.add((path[0], end(path)))
            terms.append((field.convert(coeff), path))
        if len(endpoints) > 1:
            raise CompositionError(f"关系 #{r_index} 的各项端点不一致", relation=r_index)
        if terms:
            relations.append(terms)

    n_all = len(paths)
    ideal_rows: List[List[Any]] = []
    for terms in relations:
        start, finish = terms[0][1][0], end(terms[0][1])
        shortest = min(len(t[1][1]) for t in terms)
        lefts = [u for u in paths if end(u) == start and len(u[1]) + shortest <= L]
        rights = [v for v in paths if v[0] == finish and len(v[1]) + shortest <= L]
        for u in lefts:
            for v in rights:
                row = [domain.zero] * n_all
                nonzero = False
                for coeff, path in terms:
                    if len(u[1]) + len(path[1]) + len(v[1]) > L:
                        continue
                    mid = concat(u, path)
                    full = concat(mid, v) if mid is not None else None
                    if full is None:
                        continue
                    row[index[full]] += coeff
                    nonzero = True
                if nonzero:
                    ideal_rows.append(row)
    ideal = Subspace.span_rows(ideal_rows, n_all, domain)
    for pth in paths:
        if len(pth[1]) == L and not ideal.contains_row(la.dense_vector({index[pth]: domain.one}, n_all, domain)):
            labels = [arrows[i].label for i in pth[1]]
            raise AdmissibilityError(f"长度为 {L} 的路径 {''.join(labels)} 不在理想中", path=labels)

    short = [k for k, pth in enumerate(paths) if len(pth[1]) < L]
    order = list(reversed(short))
    reduced_rows = [[row[k] for k in order] for row in ideal.rows]
    leading = Subspace.span_rows(reduced_rows, len(order), domain)
    pivot_paths = {order[c] for c in leading.pivots}
    survivors = [k for k in short if k not in pivot_paths]
    position = {k: i for i, k in enumerate(survivors)}
    rewrite: Dict[int, SparseVec] = {}
    for row, pivot in zip(leading.rows, leading.pivots):
        target = order[pivot]
        rewrite[target] = {
            position[order[c]]: -x for c, x in enumerate(row) if x and order[c] in position
        }

    def reduce(pth: Tuple[int, Tuple[int, ...]]) -> SparseVec:
        if len(pth[1]) >= L:
            return {}
        k = index[pth]
        if k in position:
            return {position[k]: domain.one}
        return dict(rewrite[k])

    basis = [paths[k] for k in survivors]
    table = [[{} for _ in basis] for _ in basis]
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            joined = concat(u, v)
            if joined is not None:
                table[i][j] = reduce(joined)

    def label(pth: Tuple[int, Tuple[int, ...]]) -> str:
        return "".join(arrows[i].label for i in pth[1]) if pth[1] else quiver.vertices[pth[0]]

    labels = [label(pth) for pth in basis]
    nv = len(quiver.vertices)
    idempotents = [la.dense_vector({position[index[(v, ())]]: domain.one}, len(basis), domain) for v in range(nv)]
    unit = [sum(col, domain.zero) for col in zip(*idempotents)] if idempotents else []
    radical = Subspace.span_rows(
        [la.dense_vector({i: domain.one}, len(basis), domain) for i, pth in enumerate(basis) if pth[1]],
        len(basis),
        domain,
    )
    algebra = make_algebra(
        field,
        labels,
        table,
        unit,
        idempotents,
        list(quiver.vertices),
        radical,
        name=name,
        paths=[(pth[0], tuple(arrows[i].label for i in pth[1])) for pth in basis],
        quiver=quiver,
    )
    logger.debug(f"构建箭图代数 {name}: 维数 {algebra.dim}")
    return algebra


def opposite(a: FDAlgebra) -> FDAlgebra:
    return a.opposite


def _is_idempotent(a: FDAlgebra, e: Sequence[Any]) -> bool:
    return a.multiply(e, e) == list(e)


def pierce_corner(a: FDAlgebra, e: Sequence[Any], name: str = "") -> FDAlgebra:
    """角代数 eAe，单位为 e，幂等元为被 e 吸收的本原幂等元"""
    e = [a.field.convert(x) for x in e]
    if len(e) != a.dim:
        raise PreconditionError(f"幂等元向量长度 {len(e)} 与代数维数 {a.dim} 不符")
    if not _is_idempotent(a, e):
        raise PreconditionError("输入不是幂等元", witness=[a.field.render(x) for x in e])
    absorbed = [
        i for i, ei in enumerate(a.idempotents) if a.multiply(a.multiply(e, ei), e) == list(ei)
    ]
    total = [a.domain.zero] * a.dim
    for i in absorbed:
        total = [x + y for x, y in zip(total, a.idempotents[i])]
    if total != e:
        raise PreconditionError("角幂等元必须是本原幂等元之和")
    domain = a.domain
    rows = [a.multiply(a.multiply(e, a.basis_vector(k)), e) for k in range(a.dim)]
    space = Subspace.span_rows(rows, a.dim, domain)
    basis_rows = space.rows
    labels = []
    for k, row in enumerate(basis_rows):
        nonzero = [j for j, x in enumerate(row) if x]
        labels.append(a.labels[nonzero[0]] if len(nonzero) == 1 and row[nonzero[0]] == domain.one else f"c{k}")

    def coords(vec: Sequence[Any]) -> List[Any]:
        return [vec[p] for p in space.pivots]

    n = space.dim
    table = [[la.sparse_vector(coords(a.multiply(x, y))) for y in basis_rows] for x in basis_rows]
    idempotents = [coords(list(a.idempotents[i])) for i in absorbed]
    rad_rows = [a.multiply(a.multiply(e, r), e) for r in a.radical.rows]
    radical = Subspace.span_rows([coords(r) for r in rad_rows], n, domain)
    paths = None
    if a.paths is not None and all(lbl in a.labels for lbl in labels):
        paths = [a.paths[a.labels.index(lbl)] for lbl in labels]
    return make_algebra(
        a.field,
        labels,
        table,
        coords(e),
        idempotents,
        [a.idempotent_labels[i] for i in absorbed],
        radical,
        name=name or f"corner({a.name})",
        paths=paths,
        embedding=space.basis,
    )


def loewy_length(a: FDAlgebra) -> int:
    """最小的 n 使 rad^n = 0"""
    powers = a.radical_powers
    for n, power in enumerate(powers, start=1):
        if power.is_zero():
            return n
    raise InvalidAlgebraError("根不是幂零的")


def product_algebra(a: FDAlgebra, b: FDAlgebra, name: str = "") -> FDAlgebra:
    if a.field != b.field:
        raise FieldMismatchError(f"无法对 {a.field.label} 与 {b.field.label} 上的代数作积")
    domain = a.domain
    da, db = a.dim, b.dim
    table: List[List[SparseVec]] = [[{} for _ in range(da + db)] for _ in range(da + db)]
    for i in range(da):
        for j in range(da):
            table[i][j] = dict(a.table[i][j])
    for i in range(db):
        for j in range(db):
            table[da + i][da + j] = {da + k: c for k, c in b.table[i][j].items()}
    zero_a, zero_b = [domain.zero] * da, [domain.zero] * db
    idempotents = [list(e) + zero_b for e in a.idempotents] + [zero_a + list(e) for e in b.idempotents]
    radical = Subspace.span_rows(
        [r + zero_b for r in a.radical.rows] + [zero_a + r for r in b.radical.rows], da + db, domain
    )
    return make_algebra(
        a.field,
        [f"1.{x}" for x in a.labels] + [f"2.{x}" for x in b.labels],
        table,
        list(a.unit) + list(b.unit),
        idempotents,
        [f"1.{x}" for x in a.idempotent_labels] + [f"2.{x}" for x in b.idempotent_labels],
        radical,
        name=name or f"{a.name}×{b.name}",
    )


def trivial_extension(a: FDAlgebra, n: "Bimodule", name: str = "") -> FDAlgebra:
    """平凡扩张 A⋉N：(a, n)(a', n') = (aa', an' + na')"""
    if n.left_algebra is not a or n.right_algebra is not a:
        raise AlgebraMismatchError("平凡扩张需要 (A, A)-双模")
    domain = a.domain
    da, dn = a.dim, n.dim
    total = da + dn
    table: List[List[SparseVec]] = [[{} for _ in range(total)] for _ in range(total)]
    for i in range(da):
        for j in range(da):
            table[i][j] = dict(a.table[i][j])
    left_rows = [la.to_rows(m) for m in n.left_action]
    right_rows = [la.to_rows(m) for m in n.right_action]
    for i in range(da):
        for j in range(dn):
            table[i][da + j] = {da + k: c for k, c in enumerate(left_rows[i][j]) if c}
            table[da + j][i] = {da + k: c for k, c in enumerate(right_rows[i][j]) if c}
    zero_n = [domain.zero] * dn
    radical = Subspace.span_rows(
        [r + zero_n for r in a.radical.rows]
        + [la.dense_vector({da + j: domain.one}, total, domain) for j in range(dn)],
        total,
        domain,
    )
    return make_algebra(
        a.field,
        list(a.labels) + [f"n{j}" for j in range(dn)],
        table,
        list(a.unit) + zero_n,
        [list(e) + zero_n for e in a.idempotents],
        a.idempotent_labels,
        radical,
        name=name or f"{a.name}⋉N",
    )


def cartan_matrix(a: FDAlgebra) -> List[List[int]]:
    n = a.n_idempotents
    return [[a.corner_space(i, j).dim for j in range(n)] for i in range(n)]


@dataclass(frozen=True, eq=False)
class AlgebraIso:
    """代数同构：第 k 行是源基元素 k 在目标中的坐标"""

    source: FDAlgebra
    target: FDAlgebra
    matrix: Matrix

    def image(self, vec: Sequence[Any]) -> List[Any]:
        return la.to_rows(la.mul(la.from_rows([list(vec)], self.source.dim, self.source.domain), self.matrix))[0]

    def verify(self) -> bool:
        src, tgt = self.source, self.target
        if src.dim != tgt.dim or not la.is_invertible(self.matrix):
            return False
        if self.image(src.unit) != list(tgt.unit):
            return False
        rows = la.to_rows(self.matrix)
        for i in range(src.dim):
            for j in range(src.dim):
                if self.image(src.product_vector(i, j)) != tgt.multiply(rows[i], rows[j]):
                    return False
        return True

    def inverse(self) -> "AlgebraIso":
        inv = la.inverse(self.matrix)
        if inv is None:
            raise InvalidAlgebraError("同构矩阵不可逆")
        return AlgebraIso(self.target, self.source, inv)


def permutation_iso(source: FDAlgebra, target: FDAlgebra, perm: Sequence[int]) -> AlgebraIso:
    """基的置换给出的同构：源基元素 k ↦ 目标基元素 perm[k]"""
    rows = [target.basis_vector(perm[k]) for k in range(source.dim)]
    return AlgebraIso(source, target, la.from_rows(rows, target.dim, target.domain))


def _word_basis(a: FDAlgebra) -> List[Tuple[Tuple[int, ...], List[Any]]]:
    """用生成元的词张成代数：返回 (词, 向量) 列表；词中 -i-1 表示第 i 个幂等元"""
    dim, domain = a.dim, a.domain
    words: List[Tuple[Tuple[int, ...], List[Any]]] = []
    span = Subspace.zero(dim, domain)
    frontier: List[Tuple[Tuple[int, ...], List[Any]]] = []
    for i, e in enumerate(a.idempotents):
        frontier.append(((-i - 1,), list(e)))
    for g in a.generators:
        frontier.append(((g,), a.basis_vector(g)))
    while frontier and span.dim < dim:
        next_frontier = []
        for word, vec in frontier:
            if not any(vec) or span.contains_row(vec):
                continue
            words.append((word, vec))
            span = span + Subspace.span_rows([vec], dim, domain)
            for g in a.generators:
                next_frontier.append((word + (g,), a.multiply(vec, a.basis_vector(g))))
        frontier = next_frontier
    return words


BlockGroup = Tuple[List[int], List[int]]


def _block_matchings(a: FDAlgebra, b: FDAlgebra) -> Iterator[Tuple[Tuple[int, ...], List[BlockGroup]]]:
    """Cartan 矩阵与各块生成元个数都相符的幂等元排列 σ"""
    n = a.n_idempotents
    cart_a, cart_b = cartan_matrix(a), cartan_matrix(b)
    groups: Dict[Tuple[int, int], List[int]] = {}
    for g in a.generators:
        groups.setdefault(a.blocks[g], []).append(g)
    for sigma in itertools.permutations(range(n)):
        if any(cart_a[i][j] != cart_b[sigma[i]][sigma[j]] for i in range(n) for j in range(n)):
            continue
        matched: List[BlockGroup] = []
        for (s, t), gens in sorted(groups.items()):
            targets = [h for h in b.generators if b.blocks[h] == (sigma[s], sigma[t])]
            if len(targets) != len(gens):
                break
            matched.append((gens, targets))
        else:
            if sum(len(gens) for gens, _ in matched) == len(b.generators):
                yield tuple(sigma), matched


def _coefficient_grid(field: Field) -> Tuple[int, ...]:
    if field.kind == "prime":
        return tuple(range(field.p))
    return (0, 1, -1, 2, -2)


def _combine(b: FDAlgebra, coeffs: Sequence[Any], targets: Sequence[int]) -> List[Any]:
    vec = [b.domain.zero] * b.dim
    for c, h in zip(coeffs, targets):
        if c:
            vec = [v + b.domain(c) * w for v, w in zip(vec, b.basis_vector(h))]
    return vec


def _image_options(b: FDAlgebra, group: BlockGroup, phase: str) -> Callable[[], Iterator[List[List[Any]]]]:
    """一个块内生成元像的候选；signed 只取 ±目标生成元，coefficients 取网格上的可逆系数矩阵"""
    gens, targets = group
    k = len(gens)

    def signed() -> Iterator[List[List[Any]]]:
        for perm in itertools.permutations(targets):
            for signs in itertools.product((1, -1), repeat=k):
                yield [[b.domain(s) * x for x in b.basis_vector(h)] for h, s in zip(perm, signs)]

    def coefficients() -> Iterator[List[List[Any]]]:
        grid = _coefficient_grid(b.field)
        for entries in itertools.product(grid, repeat=k * k):
            rows = [entries[i * k:(i + 1) * k] for i in range(k)]
            square = la.from_rows([[b.domain(c) for c in r] for r in rows], k, b.domain)
            if la.is_invertible(square):
                yield [_combine(b, r, targets) for r in rows]

    return signed if phase == "signed" else coefficients


def _lazy_product(factories: Sequence[Callable[[], Iterator[Any]]]) -> Iterator[Tuple[Any, ...]]:
    """itertools.product 的惰性版本：各因子按需重新生成，不预先展开"""
    if not factories:
        yield ()
        return
    for item in factories[0]():
        for rest in _lazy_product(factories[1:]):
            yield (item,) + rest


def find_algebra_iso(a: FDAlgebra, b: FDAlgebra, limit: Optional[int] = None) -> Optional[AlgebraIso]:
    """构造性同构搜索：匹配幂等元与各块生成元，再由词扩张并验证

    先试 ±生成元的排列，再试各块内系数取自网格的可逆组合（GF(p) 取全部元素，
    QQ 取 0, ±1, ±2）。维数、幂等元个数、Cartan 矩阵或各块生成元个数不符时返回
    None；候选用尽或尝试次数超过 limit 时抛出 IsoSearchError，结论未定。
    """
    if a.field != b.field or a.dim != b.dim or a.n_idempotents != b.n_idempotents:
        return None
    if a.blocks is None or b.blocks is None:
        raise IsoSearchError(f"基元素不落在幂等元块中，无法按块搜索: {a.name} → {b.name}")
    matchings = list(_block_matchings(a, b))
    if not matchings:
        return None
    limit = limit or settings.iso_search_limit
    words = _word_basis(a)
    word_inverse = None
    if len(words) == a.dim:
        word_inverse = la.inverse(la.from_rows([v for _, v in words], a.dim, a.domain))
    if word_inverse is None:
        raise IsoSearchError(f"生成元的词未张成 {a.name}")

    attempts = 0
    for phase in ("signed", "coefficients"):
        for sigma, groups in matchings:
            for combo in _lazy_product([_image_options(b, group, phase) for group in groups]):
                attempts += 1
                if attempts > limit:
                    raise IsoSearchError(f"代数同构搜索超过上限 {limit}: {a.name} → {b.name}", attempts=attempts)
                images: Dict[int, List[Any]] = {}
                for (gens, _), vecs in zip(groups, combo):
                    images.update(zip(gens, vecs))
                rows = []
                for word, _ in words:
                    vec: Optional[List[Any]] = None
                    for letter in word:
                        img = list(b.idempotents[sigma[-letter - 1]]) if letter < 0 else images[letter]
                        vec = img if vec is None else b.multiply(vec, img)
                    rows.append(vec)
                iso = AlgebraIso(a, b, la.mul(word_inverse, la.from_rows(rows, b.dim, b.domain)))
                if iso.verify():
                    logger.debug(f"代数同构 {a.name} → {b.name}: 第 {attempts} 次尝试（{phase}）")
                    return iso
    raise IsoSearchError(
        f"系数网格上未找到同构: {a.name} → {b.name}（{a.field.label}）", attempts=attempts
    )
