"""
文档处理服务
Parses description documents and builds the algebras, contexts and modules
they name.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field as dataclass_field
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exactla import Field
from src.core.exceptions import DocumentError, MoritaKitError
from src.core.fdalg import (
    Arrow,
    FDAlgebra,
    Presentation,
    Quiver,
    build_path_algebra,
    trivial_extension,
)
from src.core.fdmod import (
    Bimodule,
    FDModule,
    ModuleMap,
    injective,
    make_bimodule,
    make_module,
    module_from_generators,
    projective,
    regular_bimodule,
    simple,
    tensor,
    zero_bimodule,
)
from src.core.morita import (
    MoritaContext,
    PierceData,
    TupleModule,
    delta_context,
    end_context,
    make_tuple,
    pierce_data,
    transport_module,
    zero_context,
)
from src.models.document import (
    BimoduleSpec,
    Document,
    EndomorphismContextSpec,
    GeneratorModuleSpec,
    QuiverAlgebraSpec,
    TrivialExtensionSpec,
    TupleModuleSpec,
)

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass
class LoadedDocument:
    """由文档构造出的对象"""

    document: Document
    field: Field
    digest: str
    algebra: Optional[FDAlgebra] = None
    context: Optional[MoritaContext] = None
    pierce: Optional[PierceData] = None
    trivext: Optional[Tuple[FDAlgebra, Bimodule]] = None
    modules: Dict[str, FDModule] = dataclass_field(default_factory=dict)
    tuples: Dict[str, TupleModule] = dataclass_field(default_factory=dict)

    def require_algebra(self) -> FDAlgebra:
        if self.algebra is not None:
            return self.algebra
        if self.context is not None:
            return self.context.algebra
        raise DocumentError("文档没有代数", location="algebra")

    def require_context(self) -> MoritaContext:
        if self.context is None:
            raise DocumentError("该命令需要 context", location="context")
        return self.context

    def module(self, name: str) -> FDModule:
        if name in self.modules:
            return self.modules[name]
        if name in self.tuples:
            return self.tuples[name].flat
        raise DocumentError(f"未知的模: {name}", location=f"modules.{name}")

    def lambda_module(self, name: str) -> FDModule:
        """命名模作为 Λ-模；Pierce 上下文中原代数上的模沿同构搬运"""
        c = self.require_context()
        if name in self.tuples:
            return self.tuples[name].flat
        w = self.module(name)
        if w.algebra is c.algebra:
            return w
        if self.pierce is not None and w.algebra is self.pierce.ambient:
            return transport_module(self.pierce.iso(), w, name)
        raise DocumentError(f"模 {name} 不是 Λ-模", location=f"modules.{name}")

    def modules_over(self, a: FDAlgebra) -> List[Tuple[str, FDModule]]:
        return [(name, w) for name, w in sorted(self.modules.items()) if w.algebra is a]

    def witnesses_for(self, a: FDAlgebra) -> List[FDModule]:
        """a 上的全部命名模；a 为 Λ 时还包括元组模和沿 Pierce 同构搬运过来的模"""
        if self.context is None or a is not self.context.algebra:
            return [w for _, w in self.modules_over(a)]
        found = []
        for name in sorted(set(self.modules) | set(self.tuples)):
            try:
                found.append(self.lambda_module(name))
            except DocumentError:
                continue
        return found


def _path_action(a: FDAlgebra, gens: Dict[str, Any], reverse: bool, location: str) -> List[Any]:
    """生成元矩阵沿路径相乘；左作用按行向量约定反序"""
    if a.paths is None or a.quiver is None:
        raise DocumentError(f"代数 {a.name} 不是箭图代数", location=location)
    required = list(a.quiver.vertices) + [arrow.label for arrow in a.quiver.arrows]
    missing = [label for label in required if label not in gens]
    if missing:
        raise DocumentError(f"缺少生成元矩阵: {missing[0]}", location=f"{location}.{missing[0]}")
    dim = gens[required[0]].shape[0]
    action = []
    for vertex, labels in a.paths:
        if not labels:
            action.append(gens[a.quiver.vertices[vertex]])
            continue
        m = la.identity(dim, a.domain)
        for label in (reversed(labels) if reverse else labels):
            m = la.mul(m, gens[label])
        action.append(m)
    return action


class DocumentService:
    """文档解析与对象构造服务"""

    def parse_text(self, text: str, source: str = "<string>") -> Document:
        """解析 JSON 文本并做模式校验"""
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"{source}: JSON 语法错误: {e.msg}", location=f"line {e.lineno}, column {e.colno}")
        try:
            return Document.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(p) for p in first["loc"])
            logger.error(f"文档校验失败 {source}: {location}: {first['msg']}")
            raise DocumentError(f"{source}: {location}: {first['msg']}", location=location)

    def parse_document(self, path: Union[str, Path]) -> Document:
        """读取并校验文档文件"""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DocumentError(f"无法读取文档 {path}: {e.strerror}", location=str(path))
        return self.parse_text(text, source=path.name)

    def digest(self, document: Document) -> str:
        canonical = json.dumps(document.model_dump(mode="json"), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def resolve_field(self, document: Document, override: Optional[Field] = None) -> Field:
        if override is not None:
            return override
        kind = document.field.kind if "field" in document.model_fields_set else settings.field_kind
        if kind == "prime":
            return Field.prime(document.field.p or settings.field_prime)
        return Field.rational()

    def load(self, document: Document, field: Optional[Field] = None) -> LoadedDocument:
        """构造代数、上下文与全部命名模"""
        f = self.resolve_field(document, field)
        loaded = LoadedDocument(document=document, field=f, digest=self.digest(document))
        try:
            if isinstance(document.algebra, TrivialExtensionSpec):
                loaded.trivext = self.build_trivext_parts(document.algebra, f, "algebra")
                base, n = loaded.trivext
                loaded.algebra = trivial_extension(base, n, name=document.algebra.name or f"{base.name}⋉{n.name}")
            elif document.algebra is not None:
                loaded.algebra = self.build_quiver_algebra(document.algebra, f, "algebra")
            base_specs = {
                name: spec for name, spec in document.modules.items()
                if not isinstance(spec, TupleModuleSpec) and spec.over == "algebra"
            }
            for name, spec in base_specs.items():
                loaded.modules[name] = self.build_module(loaded, name, spec)
            if document.context is not None:
                self._build_context(loaded)
            for name, spec in document.modules.items():
                if name in base_specs or isinstance(spec, TupleModuleSpec):
                    continue
                loaded.modules[name] = self.build_module(loaded, name, spec)
            for name, spec in document.modules.items():
                if isinstance(spec, TupleModuleSpec):
                    loaded.tuples[name] = self.build_tuple(loaded, name, spec)
            logger.info(
                f"文档已加载: 代数维数 {loaded.require_algebra().dim}, "
                f"模 {len(loaded.modules)} 个, 元组 {len(loaded.tuples)} 个"
            )
            return loaded
        except MoritaKitError:
            raise
        except Exception as e:
            logger.error(f"文档构造失败: {str(e)}")
            raise

    def build_quiver_algebra(self, spec: QuiverAlgebraSpec, f: Field, location: str) -> FDAlgebra:
        quiver = Quiver(tuple(spec.vertices), tuple(Arrow(a.label, a.source, a.target) for a in spec.arrows))
        relations = [tuple((t.coeff, tuple(t.path)) for t in relation) for relation in spec.relations]
        if spec.zero_paths_of_length is not None:
            relations.extend(((1, path),) for path in self.paths_of_length(quiver, spec.zero_paths_of_length))
        presentation = Presentation(quiver, tuple(relations), spec.truncation_length or 2, f)
        return build_path_algebra(presentation, name=spec.name or location)

    def paths_of_length(self, quiver: Quiver, k: int) -> List[Tuple[str, ...]]:
        """箭图中长度为 k 的全部路径（从左到右合成）"""
        paths = []
        for seq in product(quiver.arrows, repeat=k):
            if all(x.target == y.source for x, y in zip(seq, seq[1:])):
                paths.append(tuple(a.label for a in seq))
        return paths

    def build_trivext_parts(self, spec: TrivialExtensionSpec, f: Field, location: str) -> Tuple[FDAlgebra, Bimodule]:
        """平凡扩张的底代数与双模"""
        base = self.build_quiver_algebra(spec.base, f, f"{location}.base")
        n = self.build_bimodule(spec.bimodule, base, base, f, f"{location}.bimodule")
        return base, n

    def _matrices(self, gens: Dict[str, Any], f: Field, dim: int, location: str) -> Dict[str, Any]:
        out = {}
        for label, rows in gens.items():
            try:
                out[label] = la.matrix(rows, f, dim) if rows else la.zeros(dim, dim, f.domain)
            except MoritaKitError as e:
                raise DocumentError(f"{location}.{label}: {e.message}", location=f"{location}.{label}") from e
        return out

    def build_bimodule(
        self, spec: BimoduleSpec, left: FDAlgebra, right: FDAlgebra, f: Field, location: str
    ) -> Bimodule:
        """(left, right)-双模"""
        if spec.kind == "zero":
            return zero_bimodule(left, right)
        if spec.kind in ("regular", "dual"):
            if left is not right:
                raise DocumentError(f"{spec.kind} 双模要求两侧为同一代数", location=location)
            if spec.kind == "regular":
                return regular_bimodule(left)
            return make_bimodule(
                left, left,
                [la.transpose(m) for m in left.right_regular],
                [la.transpose(m) for m in left.left_regular],
                name=f"D({left.name})",
            )
        dim = spec.dim or 0
        left_action = _path_action(left, self._matrices(spec.left, f, dim, f"{location}.left"), True, f"{location}.left")
        right_action = _path_action(right, self._matrices(spec.right, f, dim, f"{location}.right"), False, f"{location}.right")
        try:
            return make_bimodule(left, right, left_action, right_action, name=location.split(".")[-1])
        except MoritaKitError as e:
            raise DocumentError(f"{location}: {e.message}", location=location) from e

    def _build_context(self, loaded: LoadedDocument) -> None:
        spec = loaded.document.context
        f = loaded.field
        if spec.kind == "zero":
            A = self.build_quiver_algebra(spec.A, f, "context.A")
            B = A if spec.B is None else self.build_quiver_algebra(spec.B, f, "context.B")
            M = self.build_bimodule(spec.M, B, A, f, "context.M")
            N = self.build_bimodule(spec.N, A, B, f, "context.N")
            loaded.context = zero_context(A, B, M, N, name=spec.name or "zero")
            return
        a = loaded.require_algebra()
        if spec.kind == "pierce":
            loaded.pierce = pierce_data(a, spec.split, name=spec.name)
            loaded.context = loaded.pierce.context
        elif spec.kind == "delta":
            loaded.context = delta_context(a, name=spec.name)
        elif isinstance(spec, EndomorphismContextSpec):
            u = [loaded.module(name) for name in spec.U]
            v = [loaded.module(name) for name in spec.V]
            loaded.context = end_context(a, u, v, name=spec.name)
        logger.debug(f"构造上下文 {loaded.context.name}: Λ 维数 {loaded.context.algebra.dim}")

    def _target_algebra(self, loaded: LoadedDocument, over: str, location: str) -> FDAlgebra:
        if over == "algebra":
            if loaded.algebra is None:
                raise DocumentError("没有顶层 algebra", location=location)
            return loaded.algebra
        c = loaded.require_context()
        return {"A": c.A, "B": c.B, "Lambda": c.algebra}[over]

    def build_module(self, loaded: LoadedDocument, name: str, spec: Any) -> FDModule:
        location = f"modules.{name}"
        f = loaded.field
        try:
            if isinstance(spec, GeneratorModuleSpec) and spec.over == "Lambda" and loaded.pierce is not None:
                ambient = loaded.pierce.ambient
                dim = self._generator_dim(spec, location)
                w = module_from_generators(ambient, self._matrices(spec.matrices, f, dim, location), name)
                return transport_module(loaded.pierce.iso(), w, name)
            a = self._target_algebra(loaded, spec.over, location)
            if spec.kind in ("simple", "projective", "injective"):
                if spec.index >= a.n_idempotents:
                    raise DocumentError(f"下标 {spec.index} 超出顶点数 {a.n_idempotents}", location=f"{location}.index")
                builder = {"simple": simple, "projective": projective, "injective": injective}[spec.kind]
                return builder(a, spec.index)
            if spec.kind == "explicit":
                if len(spec.action) != a.dim:
                    raise DocumentError(f"需要 {a.dim} 个作用矩阵", location=f"{location}.action")
                action = [la.matrix(m, f, spec.dim) if m else la.zeros(spec.dim, spec.dim, f.domain) for m in spec.action]
                return make_module(a, action, name)
            dim = self._generator_dim(spec, location)
            return module_from_generators(a, self._matrices(spec.matrices, f, dim, location), name)
        except DocumentError:
            raise
        except MoritaKitError as e:
            raise DocumentError(f"{location}: {e.message}", location=location) from e

    def _generator_dim(self, spec: GeneratorModuleSpec, location: str) -> int:
        for rows in spec.matrices.values():
            if rows:
                return len(rows)
        raise DocumentError("无法从全零生成元推断维数", location=location)

    def build_tuple(self, loaded: LoadedDocument, name: str, spec: TupleModuleSpec) -> TupleModule:
        location = f"modules.{name}"
        c = loaded.require_context()
        f = loaded.field
        X, Y = loaded.module(spec.X), loaded.module(spec.Y)
        try:
            mx, ny = tensor(c.M, X).result, tensor(c.N, Y).result
            fm = la.matrix(spec.f, f, Y.dim) if spec.f else la.zeros(mx.dim, Y.dim, f.domain)
            gm = la.matrix(spec.g, f, X.dim) if spec.g else la.zeros(ny.dim, X.dim, f.domain)
            return make_tuple(c, X, Y, ModuleMap(mx, Y, fm), ModuleMap(ny, X, gm), name=name)
        except MoritaKitError as e:
            raise DocumentError(f"{location}: {e.message}", location=location) from e
