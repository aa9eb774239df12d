"""
精确线性代数内核
Exact linear algebra over Q and F_p built on sympy's DomainMatrix.

Row-vector convention throughout: a vector is a 1×n matrix, a linear map
V → W is a dim V × dim W matrix and ``v·m`` applies it.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Rational, isprime
from sympy.polys.domains import QQ, FiniteField
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from src.core.exceptions import DimensionMismatchError, FieldMismatchError

logger = logging.getLogger(__name__)

Matrix = DomainMatrix
Row = List[Any]


@dataclass(frozen=True)
class Field:
    """基域：有理数域或素域"""

    kind: str = "rational"
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("rational", "prime"):
            raise FieldMismatchError(f"未知的域类型: {self.kind}")
        if self.kind == "prime" and (self.p is None or not isprime(self.p)):
            raise FieldMismatchError(f"素域的特征必须是素数: {self.p}")

    @classmethod
    def rational(cls) -> "Field":
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls("prime", p)

    @cached_property
    def domain(self) -> Domain:
        if self.kind == "rational":
            return QQ
        return FiniteField(self.p, symmetric=False)

    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def convert(self, value: Any) -> Any:
        """把整数、分数字符串或域元素转换为本域元素"""
        domain = self.domain
        if isinstance(value, bool):
            raise FieldMismatchError(f"布尔值不是标量: {value!r}")
        if isinstance(value, int):
            return domain(value)
        if isinstance(value, (str, Fraction, Rational)):
            q = Rational(str(value)) if isinstance(value, str) else Rational(value)
            if self.kind == "rational":
                return domain.from_sympy(q)
            num, den = domain(int(q.p)), domain(int(q.q))
            if not den:
                raise FieldMismatchError(f"分母在 F_{self.p} 中为零: {value}")
            return num / den
        if domain.of_type(value):
            return value
        raise FieldMismatchError(f"标量 {value!r} 不属于域 {self.label}")

    def render(self, value: Any) -> str:
        """规范化输出：有理数写作 p/q，剩余类写作 [0, p) 中的整数"""
        if self.kind == "rational":
            return str(self.domain.to_sympy(value))
        return str(int(self.domain.to_sympy(value)) % self.p)

    @property
    def label(self) -> str:
        return "QQ" if self.kind == "rational" else f"GF({self.p})"

    def of_domain(self, domain: Domain) -> bool:
        return domain == self.domain


def field_of(m: Matrix) -> Domain:
    return m.domain


def _check_same(*ms: Matrix) -> None:
    domains = {m.domain for m in ms}
    if len(domains) > 1:
        raise FieldMismatchError(
            "矩阵来自不同的域", domains=", ".join(str(d) for d in domains)
        )


def matrix(rows: Sequence[Sequence[Any]], field: Field, ncols: Optional[int] = None) -> Matrix:
    """由嵌套序列构造稠密矩阵，逐项转换到域中"""
    converted = [[field.convert(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(converted[0]) if converted else 0
    for row in converted:
        if len(row) != ncols:
            raise DimensionMismatchError(f"行长度 {len(row)} 与列数 {ncols} 不一致")
    return DomainMatrix(converted, (len(converted), ncols), field.domain)


def from_rows(rows: Sequence[Sequence[Any]], ncols: int, domain: Domain) -> Matrix:
    """由已是域元素的行构造矩阵（不做转换）"""
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), domain)


def zeros(nrows: int, ncols: int, domain: Domain) -> Matrix:
    return DomainMatrix([[domain.zero] * ncols for _ in range(nrows)], (nrows, ncols), domain)


def identity(n: int, domain: Domain) -> Matrix:
    rows = [[domain.one if i == j else domain.zero for j in range(n)] for i in range(n)]
    return DomainMatrix(rows, (n, n), domain)


def to_rows(m: Matrix) -> List[Row]:
    nrows, ncols = m.shape
    if nrows == 0:
        return []
    if ncols == 0:
        return [[] for _ in range(nrows)]
    return [list(r) for r in m.to_dense().to_list()]


def entry(m: Matrix, i: int, j: int) -> Any:
    return to_rows(m)[i][j]


def is_zero(m: Matrix) -> bool:
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return True
    return bool(m.is_zero_matrix)


def equal(a: Matrix, b: Matrix) -> bool:
    if a.shape != b.shape:
        return False
    _check_same(a, b)
    return to_rows(a) == to_rows(b)


def mul(a: Matrix, b: Matrix) -> Matrix:
    """矩阵乘法，允许任意维数为零"""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"无法相乘: {a.shape} · {b.shape}")
    _check_same(a, b)
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1], a.domain)
    return a.to_dense() * b.to_dense()


def chain(*ms: Matrix) -> Matrix:
    result = ms[0]
    for m in ms[1:]:
        result = mul(result, m)
    return result


def add(a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"无法相加: {a.shape} + {b.shape}")
    _check_same(a, b)
    if 0 in a.shape:
        return a
    return a.to_dense() + b.to_dense()


def sub(a: Matrix, b: Matrix) -> Matrix:
    return add(a, scale(b, -1))


def scale(m: Matrix, c: Any) -> Matrix:
    domain = m.domain
    c = domain(c) if isinstance(c, int) else c
    return from_rows([[c * x for x in row] for row in to_rows(m)], m.shape[1], domain)


def linear_combination(coeffs: Sequence[Any], ms: Sequence[Matrix], shape: Tuple[int, int], domain: Domain) -> Matrix:
    total = [[domain.zero] * shape[1] for _ in range(shape[0])]
    for c, m in zip(coeffs, ms):
        if not c:
            continue
        for i, row in enumerate(to_rows(m)):
            acc = total[i]
            for j, x in enumerate(row):
                if x:
                    acc[j] += c * x
    return from_rows(total, shape[1], domain)


def transpose(m: Matrix) -> Matrix:
    nrows, ncols = m.shape
    if 0 in m.shape:
        return zeros(ncols, nrows, m.domain)
    return m.to_dense().transpose()


def hstack(blocks: Sequence[Matrix], nrows: int, domain: Domain) -> Matrix:
    rows: List[Row] = [[] for _ in range(nrows)]
    ncols = 0
    for b in blocks:
        if b.shape[0] != nrows:
            raise DimensionMismatchError(f"水平拼接行数不一致: {b.shape[0]} != {nrows}")
        if b.domain != domain:
            raise FieldMismatchError("拼接的矩阵来自不同的域")
        for i, r in enumerate(to_rows(b)):
            rows[i].extend(r)
        ncols += b.shape[1]
    return from_rows(rows, ncols, domain)


def vstack(blocks: Sequence[Matrix], ncols: int, domain: Domain) -> Matrix:
    rows: List[Row] = []
    for b in blocks:
        if b.shape[1] != ncols:
            raise DimensionMismatchError(f"垂直拼接列数不一致: {b.shape[1]} != {ncols}")
        if b.domain != domain:
            raise FieldMismatchError("拼接的矩阵来自不同的域")
        rows.extend(to_rows(b))
    return from_rows(rows, ncols, domain)


def block_diagonal(blocks: Sequence[Matrix], domain: Domain) -> Matrix:
    total_cols = sum(b.shape[1] for b in blocks)
    rows: List[Row] = []
    offset = 0
    for b in blocks:
        for r in to_rows(b):
            row = [domain.zero] * total_cols
            row[offset : offset + len(r)] = r
            rows.append(row)
        offset += b.shape[1]
    return from_rows(rows, total_cols, domain)


def select(m: Matrix, rows: Optional[Sequence[int]] = None, cols: Optional[Sequence[int]] = None) -> Matrix:
    data = to_rows(m)
    rows = range(m.shape[0]) if rows is None else rows
    cols = range(m.shape[1]) if cols is None else cols
    return from_rows([[data[i][j] for j in cols] for i in rows], len(cols), m.domain)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker 积，行索引 (i, k) ↦ i·rows(b)+k"""
    _check_same(a, b)
    ra, rb = to_rows(a), to_rows(b)
    ncols = a.shape[1] * b.shape[1]
    out: List[Row] = []
    for arow in ra:
        for brow in rb:
            out.append([x * y for x in arow for y in brow])
    return from_rows(out, ncols, a.domain)


def unit_vector(n: int, i: int, domain: Domain) -> Matrix:
    row = [domain.zero] * n
    row[i] = domain.one
    return from_rows([row], n, domain)


def rref(m: Matrix) -> Tuple[Matrix, List[int], int]:
    """约化行阶梯形：返回 (矩阵, 主元列, 秩)"""
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return zeros(nrows, ncols, m.domain), [], 0
    reduced, pivots = m.to_dense().rref()
    return reduced, list(pivots), len(pivots)


def rank(m: Matrix) -> int:
    if 0 in m.shape:
        return 0
    if m.is_zero_matrix:
        return 0
    return rref(m)[2]


def sparse_rank(rows: Dict[int, Dict[int, Any]], shape: Tuple[int, int], domain: Domain) -> int:
    if not rows or 0 in shape:
        return 0
    _, pivots = DomainMatrix(rows, shape, domain).rref()
    return len(pivots)


def right_nullspace_sparse(
    rows: Dict[int, Dict[int, Any]], nvars: int, domain: Domain
) -> List[Dict[int, Any]]:
    """稀疏方程组 E·h = 0 的解空间基（每个解为 {变量: 值}）"""
    if nvars == 0:
        return []
    if not rows:
        return [{j: domain.one} for j in range(nvars)]
    neq = max(rows) + 1
    reduced, pivots = DomainMatrix(rows, (neq, nvars), domain).rref()
    dod = reduced.to_dod()
    pivot_set = set(pivots)
    pivot_rows = {p: dod.get(k, {}) for k, p in enumerate(pivots)}
    basis: List[Dict[int, Any]] = []
    for free in range(nvars):
        if free in pivot_set:
            continue
        vec: Dict[int, Any] = {free: domain.one}
        for p, prow in pivot_rows.items():
            c = prow.get(free)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


@dataclass(frozen=True, eq=False)
class Subspace:
    """环境空间中的子空间，基为约化行阶梯形"""

    ambient_dim: int
    basis: Matrix
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, m: Matrix, ambient_dim: Optional[int] = None) -> "Subspace":
        ambient = m.shape[1] if ambient_dim is None else ambient_dim
        if m.shape[1] != ambient:
            raise DimensionMismatchError(f"生成向量长度 {m.shape[1]} 与环境维数 {ambient} 不符")
        reduced, pivots, r = rref(m)
        basis = select(reduced, rows=range(r)) if r else zeros(0, ambient, m.domain)
        return cls(ambient, basis, tuple(pivots))

    @classmethod
    def span_rows(cls, rows: Sequence[Row], ambient_dim: int, domain: Domain) -> "Subspace":
        return cls.span(from_rows(rows, ambient_dim, domain), ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int, domain: Domain) -> "Subspace":
        return cls(ambient_dim, zeros(0, ambient_dim, domain), ())

    @classmethod
    def full(cls, ambient_dim: int, domain: Domain) -> "Subspace":
        return cls(ambient_dim, identity(ambient_dim, domain), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def domain(self) -> Domain:
        return self.basis.domain

    @cached_property
    def rows(self) -> List[Row]:
        return to_rows(self.basis)

    def is_zero(self) -> bool:
        return self.dim == 0

    def coordinates(self, vectors: Matrix) -> Matrix:
        """子空间中向量在基下的坐标（只读取主元列）"""
        return select(vectors, cols=self.pivots)

    def contains(self, vectors: Matrix) -> bool:
        if vectors.shape[0] == 0:
            return True
        residue = sub(vectors, mul(self.coordinates(vectors), self.basis))
        return is_zero(residue)

    def contains_row(self, row: Row) -> bool:
        return self.contains(from_rows([row], self.ambient_dim, self.domain))

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("子空间环境维数不同")
        return Subspace.span(vstack([self.basis, other.basis], self.ambient_dim, self.domain))

    def intersection(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("子空间环境维数不同")
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim, self.domain)
        stacked = vstack([self.basis, other.basis], self.ambient_dim, self.domain)
        relations = kernel(stacked)
        if relations.is_zero():
            return Subspace.zero(self.ambient_dim, self.domain)
        alpha = select(relations.basis, cols=range(self.dim))
        return Subspace.span(mul(alpha, self.basis), self.ambient_dim)

    def equals(self, other: "Subspace") -> bool:
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and equal(self.basis, other.basis)
        )

    def image_under(self, m: Matrix) -> "Subspace":
        return Subspace.span(mul(self.basis, m), m.shape[1])


def kernel(m: Matrix) -> Subspace:
    """左核 {v : v·m = 0}"""
    nrows, ncols = m.shape
    domain = m.domain
    if nrows == 0:
        return Subspace.zero(0, domain)
    if ncols == 0 or is_zero(m):
        return Subspace.full(nrows, domain)
    reduced, pivots, _ = rref(transpose(m))
    data = to_rows(reduced)
    pivot_set = set(pivots)
    vectors: List[Row] = []
    for free in range(nrows):
        if free in pivot_set:
            continue
        vec = [domain.zero] * nrows
        vec[free] = domain.one
        for k, p in enumerate(pivots):
            c = data[k][free]
            if c:
                vec[p] = -c
        vectors.append(vec)
    return Subspace.span_rows(vectors, nrows, domain)


def image(m: Matrix) -> Subspace:
    return Subspace.span(m, m.shape[1])


def quotient(ambient_dim: int, s: Subspace) -> Tuple[Matrix, Matrix]:
    """商空间：投影到非主元坐标构成的补空间，截面为对应的单位向量"""
    if s.ambient_dim != ambient_dim:
        raise DimensionMismatchError(f"子空间环境维数 {s.ambient_dim} 与 {ambient_dim} 不符")
    domain = s.domain
    pivot_index = {p: k for k, p in enumerate(s.pivots)}
    free = [j for j in range(ambient_dim) if j not in pivot_index]
    basis_rows = s.rows
    projection: List[Row] = []
    for i in range(ambient_dim):
        if i in pivot_index:
            srow = basis_rows[pivot_index[i]]
            projection.append([-srow[j] for j in free])
        else:
            row = [domain.zero] * len(free)
            row[free.index(i)] = domain.one
            projection.append(row)
    section = [[domain.one if j == f else domain.zero for j in range(ambient_dim)] for f in free]
    return from_rows(projection, len(free), domain), from_rows(section, ambient_dim, domain)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """求 x 使 x·a = b；无解时返回 None"""
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(f"列数不一致: {a.shape} 与 {b.shape}")
    _check_same(a, b)
    domain = a.domain
    r, k = a.shape[0], b.shape[0]
    if k == 0:
        return zeros(0, r, domain)
    if r == 0:
        return zeros(k, 0, domain) if is_zero(b) else None
    augmented = hstack([transpose(a), transpose(b)], a.shape[1], domain)
    reduced, pivots, _ = rref(augmented)
    if any(p >= r for p in pivots):
        return None
    data = to_rows(reduced)
    solution = [[domain.zero] * r for _ in range(k)]
    for row_index, p in enumerate(pivots):
        for j in range(k):
            solution[j][p] = data[row_index][r + j]
    return from_rows(solution, r, domain)


def inverse(m: Matrix) -> Optional[Matrix]:
    n = m.shape[0]
    if m.shape[1] != n:
        return None
    if n == 0:
        return zeros(0, 0, m.domain)
    return solve(m, identity(n, m.domain))


def is_invertible(m: Matrix) -> bool:
    return m.shape[0] == m.shape[1] and rank(m) == m.shape[0]


def determinant(m: Matrix) -> Any:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"非方阵没有行列式: {m.shape}")
    if m.shape[0] == 0:
        return m.domain.one
    return m.to_dense().det()


def flatten(m: Matrix) -> Row:
    return [x for row in to_rows(m) for x in row]


def unflatten(vec: Sequence[Any], shape: Tuple[int, int], domain: Domain) -> Matrix:
    nrows, ncols = shape
    return from_rows([list(vec[i * ncols : (i + 1) * ncols]) for i in range(nrows)], ncols, domain)


def sparse_vector(row: Row) -> Dict[int, Any]:
    return {j: x for j, x in enumerate(row) if x}


def dense_vector(vec: Dict[int, Any], n: int, domain: Domain) -> Row:
    row = [domain.zero] * n
    for j, x in vec.items():
        row[j] = x
    return row


def render_matrix(m: Matrix, field: Field) -> List[List[str]]:
    return [[field.render(x) for x in row] for row in to_rows(m)]


def ensure_field(m: Matrix, field: Field) -> None:
    if not field.of_domain(m.domain):
        raise FieldMismatchError(f"矩阵的域 {m.domain} 与期望的 {field.label} 不符")


def iter_nonzero(row: Iterable[Any]) -> Iterable[Tuple[int, Any]]:
    return ((j, x) for j, x in enumerate(row) if x)


__all__ = [
    "Field",
    "Matrix",
    "Subspace",
    "add",
    "block_diagonal",
    "chain",
    "determinant",
    "equal",
    "from_rows",
    "hstack",
    "identity",
    "image",
    "inverse",
    "is_invertible",
    "is_zero",
    "kernel",
    "kron",
    "matrix",
    "mul",
    "quotient",
    "rank",
    "rref",
    "select",
    "solve",
    "sub",
    "to_rows",
    "transpose",
    "vstack",
    "zeros",
]
