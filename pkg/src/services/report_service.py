"""
报告服务
Dispatches commands against loaded documents, assembles deterministic reports
and runs the bundled example corpus.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from src.config.settings import get_settings
from src.core.exactla import Field
from src.core.exceptions import DocumentError, IsoSearchError, MoritaKitError, PreconditionError
from src.core.fdalg import (
    Arrow,
    FDAlgebra,
    Presentation,
    Quiver,
    build_path_algebra,
    cartan_matrix,
    find_algebra_iso,
    loewy_length,
)
from src.core.fdmod import (
    DimResult,
    FDModule,
    gldim,
    left_module,
    minimal_resolution,
    pd,
    projective,
    regular_bimodule,
    simples,
)
from src.core.morita import (
    MoritaContext,
    classify_injectives,
    classify_projectives,
    classify_simples,
    delta_context,
    dual_tuple,
    flat_to_tuple,
    functor_T,
    loewy_bound_cor_3_10,
    opposite_context,
    opposite_iso,
    prop37_premise,
    selfinjective_check,
    transport_module,
    validate_context,
    zero_context,
)
from src.models.base import DimValue, Verdict
from src.models.document import Document
from src.models.report import CheckEntry, CheckReport, Report
from src.services.document_service import DocumentService, LoadedDocument
from src.services.gorenstein_service import GorensteinService
from src.services.homdim_service import HomologicalDimensionService
from src.services.subcat_service import PAIRS, TARGETS, SubcategoryService
from src.utils.performance import measure_time, monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()

COMMANDS: Dict[str, str] = {
    "check": "validate the algebra, context and modules of a document",
    "gldim": "global dimensions of the algebra, or of A, B and the Morita ring",
    "resolve": "minimal projective resolutions of named modules",
    "simples": "classified simple tuples",
    "projectives": "classified projective tuples",
    "injectives": "classified injective tuples",
    "selfinjective": "selfinjectivity and the projective/injective equivalence premise",
    "torsion": "torsion-pair decompositions and Hom vanishing",
    "approx": "bireflective and W-left approximations",
    "tight": "tight resolutions with the independent resolution check",
    "bounds": "global-dimension bounds selected by --theorem",
    "gorenstein": "Gorenstein tests and the sufficient projective/injective premise",
    "gproj": "Gorenstein-projective membership of named modules",
    "lemma61": "homology of T on projective resolutions against Tor and Ext",
    "cor64": "Gorenstein equivalence between l and Δ(l)",
    "cor66": "Gorenstein-projective tuples over Δ(l)",
    "opposite": "the opposite context and its algebra isomorphism",
    "loewy": "Loewy lengths of A, B and the Morita ring",
    "tensor": "dimensions of alternating tensor words and the nilpotency class",
    "examples": "run the bundled example corpus",
}


@dataclass
class RunFlags:
    """单次运行的参数；命令行参数优先于文档选项"""

    cutoff: Optional[int] = None
    depth: Optional[int] = None
    window: Optional[int] = None
    theorem: Optional[str] = None
    module: Optional[str] = None

    def merged(self, document: Document) -> "RunFlags":
        opts = document.options
        return RunFlags(
            cutoff=self.cutoff or opts.cutoff or settings.default_cutoff,
            depth=self.depth if self.depth is not None else opts.depth,
            window=self.window or opts.window,
            theorem=self.theorem or opts.theorem,
            module=self.module or opts.module,
        )


def _check_json(report: CheckReport) -> Dict[str, Any]:
    data = report.to_json_dict()
    data["verdict"] = report.verdict
    return data


def _status_of(obj: Any) -> str:
    """违例优先，其次未决"""
    found = set()

    def walk(node: Any) -> None:
        if isinstance(node, dict):
            if node.get("verdict") in (Verdict.VIOLATED.value, Verdict.UNDECIDED.value):
                found.add(node["verdict"])
            if node.get("decided") is False:
                found.add(Verdict.UNDECIDED.value)
            for value in node.values():
                walk(value)
        elif isinstance(node, list):
            for value in node:
                walk(value)

    walk(obj)
    if Verdict.VIOLATED.value in found:
        return "violated"
    if Verdict.UNDECIDED.value in found:
        return "undecided"
    return "ok"


def _algebra_summary(a: FDAlgebra) -> Dict[str, Any]:
    return {
        "name": a.name,
        "dim": a.dim,
        "vertices": a.n_idempotents,
        "loewy_length": loewy_length(a),
        "cartan": cartan_matrix(a),
    }


def _dim_json(d: DimResult) -> Dict[str, Any]:
    return DimValue.from_result(d).to_json_dict()


def _expected_dim(actual: DimResult, expected: Any) -> Verdict:
    """期望值为整数或 "inf"；截断下界只在超过期望时判为违例"""
    if expected == "inf":
        if actual.is_infinite:
            return Verdict.SATISFIED
        return Verdict.VIOLATED if actual.is_finite else Verdict.UNDECIDED
    if actual.is_finite:
        return Verdict.SATISFIED if actual.value == expected else Verdict.VIOLATED
    if actual.is_infinite:
        return Verdict.VIOLATED
    return Verdict.VIOLATED if (actual.value or 0) > expected else Verdict.UNDECIDED


def _same(actual: Any, expected: Any) -> Verdict:
    return Verdict.SATISFIED if actual == expected else Verdict.VIOLATED


def dual_numbers(field: Field) -> FDAlgebra:
    """K[x]/(x²)"""
    quiver = Quiver(("v",), (Arrow("x", "v", "v"),))
    return build_path_algebra(Presentation(quiver, (((1, ("x", "x")),),), 2, field), name="K[x]/(x^2)")


class ReportService:
    """命令分发与报告组装"""

    def __init__(self, document_service: Optional[DocumentService] = None):
        self.documents = document_service or DocumentService()
        self._handlers: Dict[str, Callable[[LoadedDocument, RunFlags], Dict[str, Any]]] = {
            "check": self._check,
            "gldim": self._gldim,
            "resolve": self._resolve,
            "simples": lambda d, f: self._classified(d, "simples"),
            "projectives": lambda d, f: self._classified(d, "projectives"),
            "injectives": lambda d, f: self._classified(d, "injectives"),
            "selfinjective": self._selfinjective,
            "torsion": self._torsion,
            "approx": self._approx,
            "tight": self._tight,
            "bounds": self._bounds,
            "gorenstein": self._gorenstein,
            "gproj": self._gproj,
            "lemma61": self._lemma61,
            "cor64": self._cor64,
            "cor66": self._cor66,
            "opposite": self._opposite,
            "loewy": self._loewy,
            "tensor": self._tensor,
        }

    def commands(self) -> Dict[str, str]:
        return dict(COMMANDS)

    # ------------------------------------------------------------------
    # Entry points

    @monitor_performance("run")
    def run(self, command: str, loaded: LoadedDocument, flags: Optional[RunFlags] = None) -> Report:
        """对已加载的文档执行命令"""
        if command not in self._handlers:
            raise PreconditionError(f"未知的命令: {command}", witness=command)
        flags = (flags or RunFlags()).merged(loaded.document)
        logger.info(f"执行命令 {command}: cutoff={flags.cutoff}")
        with measure_time(f"command:{command}"):
            results = self._handlers[command](loaded, flags)
        return Report(
            command=command,
            tool_version=settings.app_version,
            field=loaded.field.label,
            cutoff=flags.cutoff,
            inputs_digest=loaded.digest,
            status=_status_of(results),
            results=results,
        )

    def run_document(
        self,
        command: str,
        document: Document,
        flags: Optional[RunFlags] = None,
        field: Optional[Field] = None,
    ) -> Report:
        """加载并执行；MoritaKitError 转为 error 状态的报告"""
        flags = flags or RunFlags()
        try:
            loaded = self.documents.load(document, field)
            return self.run(command, loaded, flags)
        except MoritaKitError as e:
            logger.error(f"命令 {command} 失败: {e.message}")
            return self._error_report(command, e, flags, document, field)

    def run_path(
        self,
        command: str,
        path: Union[str, Path],
        flags: Optional[RunFlags] = None,
        field: Optional[Field] = None,
    ) -> Report:
        flags = flags or RunFlags()
        try:
            document = self.documents.parse_document(path)
        except DocumentError as e:
            return self._error_report(command, e, flags, None, field)
        return self.run_document(command, document, flags, field)

    def _error_report(
        self,
        command: str,
        error: MoritaKitError,
        flags: RunFlags,
        document: Optional[Document],
        field: Optional[Field] = None,
    ) -> Report:
        if field is None:
            field = self.documents.resolve_field(document) if document is not None else Field.rational()
        return Report(
            command=command,
            tool_version=settings.app_version,
            field=field.label,
            cutoff=flags.cutoff or settings.default_cutoff,
            inputs_digest=self.documents.digest(document) if document is not None else "",
            status="error",
            error=error.to_dict(),
        )

    # ------------------------------------------------------------------
    # Rendering

    def render_json(self, report: Report) -> str:
        return json.dumps(report.to_json_dict(), sort_keys=True, indent=settings.report_indent, ensure_ascii=False)

    def render_text(self, report: Report) -> str:
        """由同一字典展开的 key.path: value 行"""
        lines: List[str] = []

        def walk(prefix: str, node: Any) -> None:
            if isinstance(node, dict):
                if not node:
                    lines.append(f"{prefix}: {{}}")
                for key in sorted(node):
                    walk(f"{prefix}.{key}" if prefix else str(key), node[key])
            elif isinstance(node, list) and any(isinstance(x, (dict, list)) for x in node):
                for i, value in enumerate(node):
                    walk(f"{prefix}[{i}]", value)
            else:
                lines.append(f"{prefix}: {json.dumps(node, ensure_ascii=False)}")

        walk("", report.to_json_dict())
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Command handlers

    def _check(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        a = loaded.require_algebra()
        results: Dict[str, Any] = {"algebra": _algebra_summary(a)}
        if loaded.trivext is not None:
            base, n = loaded.trivext
            results["trivial_extension"] = {"base": _algebra_summary(base), "bimodule_dim": n.dim}
        if loaded.context is not None:
            c = loaded.context
            violations = validate_context(c)
            results["context"] = {
                "name": c.name,
                "dims": {"A": c.A.dim, "B": c.B.dim, "M": c.M.dim, "N": c.N.dim},
                "lambda": _algebra_summary(c.algebra),
                "zero_pairings": c.is_zero_context,
                "violations": violations,
                "verdict": Verdict.SATISFIED.value if not violations else Verdict.VIOLATED.value,
            }
            if loaded.pierce is not None:
                results["pierce_iso"] = {"verdict": _same(loaded.pierce.iso().verify(), True).value}
        results["modules"] = {
            name: {"dim": w.dim, "algebra": w.algebra.name} for name, w in sorted(loaded.modules.items())
        }
        results["tuples"] = {
            name: {"dims": [t.X.dim, t.Y.dim]} for name, t in sorted(loaded.tuples.items())
        }
        return results

    def _algebras(self, loaded: LoadedDocument) -> Dict[str, FDAlgebra]:
        if loaded.context is not None:
            c = loaded.context
            return {"A": c.A, "B": c.B, "Lambda": c.algebra}
        return {"algebra": loaded.require_algebra()}

    def _gldim(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        results: Dict[str, Any] = {}
        for label, a in self._algebras(loaded).items():
            gl = gldim(a, flags.cutoff, loaded.witnesses_for(a))
            results[label] = {
                "gldim": _dim_json(gl),
                "simples": {s.name: _dim_json(pd(s, flags.cutoff)) for s in simples(a)},
                "decided": gl.is_decided,
            }
        return results

    def _named_modules(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, FDModule]:
        if flags.module:
            return {flags.module: loaded.module(flags.module)}
        named = dict(loaded.modules)
        named.update({name: t.flat for name, t in loaded.tuples.items()})
        if not named:
            a = loaded.require_algebra()
            named = {s.name: s for s in simples(a)}
        return dict(sorted(named.items()))

    def _resolve(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        results: Dict[str, Any] = {}
        depth = flags.depth if flags.depth is not None else flags.cutoff
        for name, x in self._named_modules(loaded, flags).items():
            res = minimal_resolution(x, depth)
            witness = None
            if res.witness is not None:
                witness = {"start": res.witness.start, "period": res.witness.period}
            sound = res.is_exact() and res.is_minimal()
            results[name] = {
                "status": res.status,
                "terms": [p.dim for p in res.terms],
                "summands": [list(s) for s in res.summands],
                "witness": witness,
                "decided": res.status != "truncated",
                "verdict": Verdict.SATISFIED.value if sound else Verdict.VIOLATED.value,
            }
        return results

    def _classified(self, loaded: LoadedDocument, kind: str) -> Dict[str, Any]:
        c = loaded.require_context()
        classify = {"simples": classify_simples, "projectives": classify_projectives, "injectives": classify_injectives}
        classified = classify[kind](c)
        return {
            "count": len(classified),
            "lambda_count": c.algebra.n_idempotents,
            "items": [
                {"label": label, "dims": [t.X.dim, t.Y.dim], "cross_checked": ok}
                for label, t, ok in zip(classified.labels, classified.tuples, classified.cross_checked)
            ],
            "verdict": _same(classified.all_checked, True).value,
        }

    def _selfinjective(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        check = selfinjective_check(c)
        premise = prop37_premise(c)
        return {
            "selfinjective": check["selfinjective"],
            "pairing": check["pairing"],
            "premise": {
                "holds": premise["holds"],
                "failing": sorted(k for k, v in premise["checks"].items() if not v),
                "verdict": _same(premise["consistent"], True).value,
            },
        }

    def _tuple_samples(self, loaded: LoadedDocument) -> List[Any]:
        if loaded.tuples:
            return [loaded.tuples[name] for name in sorted(loaded.tuples)]
        c = loaded.require_context()
        return list(classify_projectives(c).tuples) + list(classify_simples(c).tuples)

    def _torsion(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        svc = SubcategoryService()
        samples = self._tuple_samples(loaded)
        results: Dict[str, Any] = {"decompositions": {}, "hom_vanishing": {}}
        for t in samples:
            results["decompositions"][t.name] = _check_json(svc.torsion_report(t))
        vanishing_samples = svc.default_samples(c)
        for pair in sorted(PAIRS):
            results["hom_vanishing"][pair] = _check_json(svc.hom_vanishing_check(pair, vanishing_samples))
        return results

    def _approx(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        svc = SubcategoryService()
        results: Dict[str, Any] = {"bireflective": {}, "w_left": {}}
        for t in self._tuple_samples(loaded):
            entry: Dict[str, Any] = {}
            for target in TARGETS:
                for side in ("left", "right"):
                    approx = svc.bireflective_approx(t, target, side)
                    summary = approx.summary()
                    summary["verdict"] = _same(approx.verified, True).value
                    entry[f"{target}:{side}"] = summary
            results["bireflective"][t.name] = entry
            try:
                approx = svc.w_left_approximation(simples(c.A), simples(c.B), t)
                summary = approx.summary()
                summary["verdict"] = _same(approx.verified, True).value
            except PreconditionError as e:
                summary = {"precondition": e.message, "witness": str(e.witness), "verdict": Verdict.VACUOUS.value}
            results["w_left"][t.name] = summary
        return results

    def _oracle_entry(self, svc: HomologicalDimensionService, c: MoritaContext, x: FDModule, side: str) -> Dict[str, Any]:
        rep = svc.tightness(c, x, side)
        oracle = svc.tightness_oracle(c, x, side)
        if rep.tight is None or oracle is None:
            verdict = Verdict.UNDECIDED
        else:
            verdict = _same(rep.tight, oracle)
        data = rep.to_json_dict()
        data.update({"oracle": oracle, "verdict": verdict.value})
        return data

    def _tight(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        svc = HomologicalDimensionService(flags.cutoff)
        results: Dict[str, Any] = {"modules": {}, "pd_identities": {}}
        for side, alg in (("A", c.A), ("B", c.B)):
            candidates = simples(alg) + [projective(alg, i) for i in range(alg.n_idempotents)]
            for x in candidates:
                results["modules"][f"{side}:{x.name}"] = self._oracle_entry(svc, c, x, side)
            for s in simples(alg):
                results["pd_identities"][f"{side}:{s.name}"] = _check_json(svc.pd_identity_checks(c, s, side))
        results["modules"]["B:M"] = self._oracle_entry(svc, c, left_module(c.M), "B")
        results["modules"]["A:N"] = self._oracle_entry(svc, c, left_module(c.N), "A")
        return results

    def _bounds(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        svc = HomologicalDimensionService(flags.cutoff)
        theorem = flags.theorem or "5.9"
        if theorem == "trivext":
            if loaded.trivext is None:
                raise DocumentError("trivext 需要 trivial_extension 代数", location="algebra")
            base, n = loaded.trivext
            return {"trivext": svc.trivext_bounds(base, n).to_json_dict()}
        c = loaded.require_context()
        if theorem == "5.9":
            return {"5.9": svc.bound_thm_5_9(c).to_json_dict()}
        if theorem == "5.17":
            return {"5.17": svc.lower_bound_5_17(c).to_json_dict()}
        if theorem == "bel":
            return {"bel": svc.nilpotency_and_bel_bound(c).to_json_dict()}
        parts = theorem.split(":")
        if len(parts) == 3 and parts[0] == "5.14" and parts[2].isdigit():
            s = int(parts[2])
            if parts[1] == "all":
                return {r.theorem_tag: r.to_json_dict() for r in svc.scan_thm_5_14(c, s)}
            if parts[1].isdigit():
                report = svc.bound_thm_5_14(c, s, int(parts[1]))
                return {report.theorem_tag: report.to_json_dict()}
        raise PreconditionError(f"未知的定理: {theorem}", witness=theorem)

    def _gorenstein(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        svc = GorensteinService(flags.cutoff)
        results: Dict[str, Any] = {}
        for label, a in self._algebras(loaded).items():
            results[label] = svc.gorenstein_test(a).to_json_dict()
        if loaded.context is not None:
            results["thm_6_2"] = _check_json(svc.thm_6_2_sufficient(loaded.context))
        return results

    def _gproj(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        svc = GorensteinService(flags.cutoff)
        results: Dict[str, Any] = {}
        for name, x in self._named_modules(loaded, flags).items():
            try:
                results[name] = svc.gproj_test(x, flags.window).to_json_dict()
            except PreconditionError as e:
                results[name] = {"precondition": e.message, "verdict": Verdict.VACUOUS.value}
        return results

    def _lemma61(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        svc = GorensteinService(flags.cutoff)
        n_max = flags.depth if flags.depth is not None else 4
        results: Dict[str, Any] = {}
        for side, alg in (("A", c.A), ("B", c.B)):
            for s in simples(alg):
                results[f"{side}:{s.name}"] = _check_json(svc.lemma_6_1_check(c, s, n_max, side))
        return results

    def _base_algebra(self, loaded: LoadedDocument) -> FDAlgebra:
        if loaded.algebra is not None:
            return loaded.algebra
        return loaded.require_context().A

    def _cor64(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        svc = GorensteinService(flags.cutoff)
        return {"cor_6_4": _check_json(svc.cor_6_4_check(self._base_algebra(loaded)))}

    def _cor66(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        svc = GorensteinService(flags.cutoff)
        l = self._base_algebra(loaded)
        results: Dict[str, Any] = {"lemma_6_5": _check_json(svc.lemma_6_5_check(l))}
        try:
            delta = delta_context(l)
            samples = list(classify_projectives(delta).tuples) + list(classify_simples(delta).tuples)
            samples.extend(functor_T(delta, "A", s) for s in simples(l))
            results["cor_6_6"] = {t.name: _check_json(svc.cor_6_6_check(l, t, flags.window)) for t in samples}
            results["cor_6_7"] = _check_json(svc.cor_6_7_check(l, window=flags.window))
        except PreconditionError as e:
            results["precondition"] = {"message": e.message, "verdict": Verdict.VACUOUS.value}
        return results

    def _opposite(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        op = opposite_context(c)
        iso = opposite_iso(c)
        duals = {}
        for t in classify_simples(c).tuples:
            d = dual_tuple(t)
            duals[t.name] = {"dims": [t.X.dim, t.Y.dim], "dual_dims": [d.X.dim, d.Y.dim]}
        return {
            "dims": {"A": op.A.dim, "B": op.B.dim, "M": op.M.dim, "N": op.N.dim},
            "iso": {"verdict": _same(iso.verify(), True).value},
            "dual_simples": duals,
        }

    def _loewy(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        if loaded.context is None:
            return {"loewy": loewy_length(loaded.require_algebra())}
        return loewy_bound_cor_3_10(loaded.context)

    def _tensor(self, loaded: LoadedDocument, flags: RunFlags) -> Dict[str, Any]:
        c = loaded.require_context()
        svc = HomologicalDimensionService(flags.cutoff)
        max_length = flags.depth or 6
        return {"words": svc.word_dims(c, max_length), "c_H": svc.nilpotency_class(c)}

    # ------------------------------------------------------------------
    # Example corpus

    @monitor_performance("examples_corpus")
    def examples_corpus(self, fixtures_dir: Optional[Union[str, Path]] = None, flags: Optional[RunFlags] = None) -> Report:
        """逐个运行示例文档并与其期望值比对"""
        directory = Path(fixtures_dir or settings.fixtures_dir)
        flags = flags or RunFlags()
        paths = sorted(directory.glob("*.json"))
        if not paths:
            raise DocumentError(f"没有找到示例文档: {directory}", location=str(directory))
        results: Dict[str, Any] = {}
        for path in paths:
            report = CheckReport(title=path.stem)
            try:
                document = self.documents.parse_document(path)
                loaded = self.documents.load(document)
                merged = flags.merged(document)
                for key in sorted(document.options.expected):
                    for entry in self.evaluate_expectation(loaded, key, document.options.expected[key], merged):
                        report.add(entry)
                report.summary = {"provenance": document.options.provenance, "digest": loaded.digest}
            except MoritaKitError as e:
                report.add(CheckEntry(name="load", verdict=Verdict.VIOLATED, detail=e.to_dict()))
            results[path.stem] = _check_json(report)
            logger.info(f"示例 {path.stem}: {report.verdict}")
        return Report(
            command="examples",
            tool_version=settings.app_version,
            field=Field.rational().label,
            cutoff=flags.cutoff or settings.default_cutoff,
            inputs_digest="",
            status=_status_of(results),
            results=results,
        )

    def evaluate_expectation(self, loaded: LoadedDocument, key: str, expected: Any, flags: RunFlags) -> List[CheckEntry]:
        """单个期望值的核对"""
        evaluator = EXPECTATIONS.get(key)
        if evaluator is None:
            raise DocumentError(f"未知的期望键: {key}", location=f"options.expected.{key}")
        try:
            return evaluator(self, loaded, expected, flags)
        except PreconditionError as e:
            return [CheckEntry(name=key, verdict=Verdict.VIOLATED, detail={"error": e.message})]

    def _lambda(self, loaded: LoadedDocument) -> FDAlgebra:
        return loaded.context.algebra if loaded.context is not None else loaded.require_algebra()

    def _expect_bound(self, name: str, report: Any, expected: Dict[str, Any]) -> List[CheckEntry]:
        data = report.to_json_dict()
        entries = []
        for k, v in sorted(expected.items()):
            if k in ("lhs", "rhs"):
                actual = report.lhs if k == "lhs" else report.rhs
                rendered = actual.render() if actual is not None else None
                entries.append(CheckEntry(name=f"{name}.{k}", verdict=_same(rendered, str(v)), lhs=rendered, rhs=str(v)))
            elif k in data:
                entries.append(CheckEntry(name=f"{name}.{k}", verdict=_same(data[k], v), lhs=str(data[k]), rhs=str(v)))
            elif k in data.get("extras", {}):
                actual = data["extras"][k]
                entries.append(CheckEntry(name=f"{name}.{k}", verdict=_same(actual, v), lhs=str(actual), rhs=str(v)))
            else:
                raise DocumentError(f"未知的界字段: {k}", location=f"options.expected.{name}.{k}")
        return entries


def _dim_entry(name: str, actual: DimResult, expected: Any) -> CheckEntry:
    return CheckEntry(name=name, verdict=_expected_dim(actual, expected), lhs=str(actual), rhs=str(expected))


def _e_algebra_dim(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    actual = loaded.require_algebra().dim
    return [CheckEntry(name="algebra_dim", verdict=_same(actual, v), lhs=str(actual), rhs=str(v))]


def _e_lambda_dim(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    actual = loaded.require_context().algebra.dim
    return [CheckEntry(name="lambda_dim", verdict=_same(actual, v), lhs=str(actual), rhs=str(v))]


def _e_gldim(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    lam = svc._lambda(loaded)
    return [_dim_entry("gldim", gldim(lam, flags.cutoff, loaded.witnesses_for(lam)), v)]


def _e_gldim_side(side: str) -> Callable[..., List[CheckEntry]]:
    def evaluate(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
        c = loaded.require_context()
        a = c.A if side == "A" else c.B
        return [_dim_entry(f"gldim_{side}", gldim(a, flags.cutoff, loaded.witnesses_for(a)), v)]

    return evaluate


def _e_selfinjective(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    actual = selfinjective_check(loaded.require_context())["selfinjective"]
    return [CheckEntry(name="selfinjective", verdict=_same(actual, v), lhs=str(actual), rhs=str(v))]


def _e_premise(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    premise = prop37_premise(loaded.require_context())
    return [
        CheckEntry(name="premise", verdict=_same(premise["holds"], v), lhs=str(premise["holds"]), rhs=str(v)),
        CheckEntry(name="premise consistent", verdict=_same(premise["consistent"], True)),
    ]


def _e_bound(tag: str) -> Callable[..., List[CheckEntry]]:
    def evaluate(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
        c = loaded.require_context()
        hd = HomologicalDimensionService(flags.cutoff)
        report = {"thm_5_9": hd.bound_thm_5_9, "thm_5_17": hd.lower_bound_5_17, "bel": hd.nilpotency_and_bel_bound}[tag](c)
        return svc._expect_bound(tag, report, v)

    return evaluate


def _e_thm_5_14(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    hd = HomologicalDimensionService(flags.cutoff)
    entries = []
    for item in v:
        item = dict(item)
        variant, s = item.pop("variant"), item.pop("s")
        entries.extend(svc._expect_bound(f"thm_5_14:{variant}:{s}", hd.bound_thm_5_14(c, s, variant), item))
    return entries


def _e_trivext(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    if loaded.trivext is None:
        raise DocumentError("trivext 需要 trivial_extension 代数", location="algebra")
    base, n = loaded.trivext
    report = HomologicalDimensionService(flags.cutoff).trivext_bounds(base, n)
    entries = svc._expect_bound("trivext", report, v)
    entries.extend(report.entries)
    return entries


def _e_pd(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    entries = []
    for name, expected in sorted(v.items()):
        x = loaded.lambda_module(name) if loaded.context is not None else loaded.module(name)
        entries.append(_dim_entry(f"pd {name}", pd(x, flags.cutoff), expected))
    return entries


def _e_pd_components(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    entries = []
    for name, parts in sorted(v.items()):
        t = flat_to_tuple(c, loaded.lambda_module(name), name)
        for part, expected in sorted(parts.items()):
            component = t.X if part == "X" else t.Y
            entries.append(_dim_entry(f"pd {name}.{part}", pd(component, flags.cutoff), expected))
    return entries


def _e_periodic(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    entries = []
    for name, (start, period) in sorted(v.items()):
        x = loaded.lambda_module(name) if loaded.context is not None else loaded.module(name)
        res = minimal_resolution(x, flags.cutoff)
        if res.witness is None:
            verdict = Verdict.UNDECIDED if res.status == "truncated" else Verdict.VIOLATED
            entries.append(CheckEntry(name=f"periodic {name}", verdict=verdict, lhs=res.status))
            continue
        actual = [res.witness.start, res.witness.period]
        entries.append(CheckEntry(
            name=f"periodic {name}", verdict=_same(actual, [start, period]), lhs=str(actual), rhs=str([start, period]),
        ))
        iso = res.witness.iso
        entries.append(CheckEntry(
            name=f"periodicity iso {name}",
            verdict=_same(iso is not None and iso.is_valid() and iso.is_iso(), True),
        ))
    return entries


def _e_gorenstein(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    report = GorensteinService(flags.cutoff).gorenstein_test(svc._lambda(loaded))
    return [CheckEntry(name="gorenstein", verdict=_same(report.verdict, v), lhs=report.verdict, rhs=str(v))]


def _e_thm_6_2(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    report = GorensteinService(flags.cutoff).thm_6_2_sufficient(loaded.require_context())
    entries = []
    for k, expected in sorted(v.items()):
        actual = report.summary.get(k)
        entries.append(CheckEntry(name=f"thm_6_2.{k}", verdict=_same(actual, expected), lhs=str(actual), rhs=str(expected)))
    return entries


def _e_w_left(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    t = classify_simples(c).tuples[0]
    try:
        SubcategoryService().w_left_approximation(simples(c.A), simples(c.B), t)
        actual, witness = "holds", None
    except PreconditionError as e:
        actual, witness = "fails", str(e.witness)
    return [CheckEntry(name="w_left_precondition", verdict=_same(actual, v), lhs=actual, rhs=str(v), detail={"witness": witness})]


def _e_zero_context_iso(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    """Λ 与 K[x]/(x²) 上 M = N = 正则双模的零上下文同构，并沿同构拉回模"""
    c = loaded.require_context()
    r = dual_numbers(loaded.field)
    zc = zero_context(r, r, regular_bimodule(r), regular_bimodule(r), name="zero(K[x]/(x^2))")
    try:
        iso = find_algebra_iso(zc.algebra, c.algebra)
    except IsoSearchError as e:
        logger.warning(f"零上下文同构未定: {e.message}")
        return [CheckEntry(name="zero context iso", verdict=Verdict.UNDECIDED, detail=e.to_dict())]
    exists = iso is not None and iso.verify()
    entries = [CheckEntry(name="zero context iso", verdict=_same(exists, v.get("exists", True)))]
    if iso is None:
        return entries
    for name, expected in sorted(v.get("pd", {}).items()):
        pulled = transport_module(iso, loaded.lambda_module(name), f"{name}*")
        entries.append(_dim_entry(f"pd transported {name}", pd(pulled, flags.cutoff), expected))
    return entries


def _e_tight(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    hd = HomologicalDimensionService(flags.cutoff)
    modules = {"M": (left_module(c.M), "B"), "N": (left_module(c.N), "A")}
    entries = []
    for label, expected in sorted(v.items()):
        x, side = modules[label]
        actual = hd.tightness(c, x, side).tight
        verdict = Verdict.UNDECIDED if actual is None else _same(actual, expected)
        entries.append(CheckEntry(name=f"tight {label}", verdict=verdict, lhs=str(actual), rhs=str(expected)))
    return entries


def _e_tightness_oracle(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    hd = HomologicalDimensionService(flags.cutoff)
    entries = []
    for side, alg in (("A", c.A), ("B", c.B)):
        for x in simples(alg) + [projective(alg, i) for i in range(alg.n_idempotents)]:
            data = svc._oracle_entry(hd, c, x, side)
            entries.append(CheckEntry(name=f"oracle {side}:{x.name}", verdict=Verdict(data["verdict"])))
    return entries


def _e_check_reports(kind: str) -> Callable[..., List[CheckEntry]]:
    def evaluate(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
        handler = {"lemma61": svc._lemma61, "cor64": svc._cor64, "cor66": svc._cor66}[kind]
        status = _status_of(handler(loaded, flags))
        actual = {"ok": "satisfied", "violated": "violated", "undecided": "undecided"}[status]
        return [CheckEntry(name=kind, verdict=_same(actual, v), lhs=actual, rhs=str(v))]

    return evaluate


def _e_word_dim(svc: ReportService, loaded: LoadedDocument, v: Any, flags: RunFlags) -> List[CheckEntry]:
    c = loaded.require_context()
    hd = HomologicalDimensionService(flags.cutoff)
    entries = []
    for key, expected in sorted(v.items()):
        actual = hd.alternating_word(c, key[0], int(key[1:])).dim
        entries.append(CheckEntry(name=f"word {key}", verdict=_same(actual, expected), lhs=str(actual), rhs=str(expected)))
    return entries


EXPECTATIONS: Dict[str, Callable[..., List[CheckEntry]]] = {
    "algebra_dim": _e_algebra_dim,
    "lambda_dim": _e_lambda_dim,
    "gldim": _e_gldim,
    "gldim_A": _e_gldim_side("A"),
    "gldim_B": _e_gldim_side("B"),
    "selfinjective": _e_selfinjective,
    "premise": _e_premise,
    "thm_5_9": _e_bound("thm_5_9"),
    "thm_5_17": _e_bound("thm_5_17"),
    "bel": _e_bound("bel"),
    "thm_5_14": _e_thm_5_14,
    "trivext": _e_trivext,
    "pd": _e_pd,
    "pd_components": _e_pd_components,
    "periodic": _e_periodic,
    "gorenstein": _e_gorenstein,
    "thm_6_2": _e_thm_6_2,
    "w_left_precondition": _e_w_left,
    "zero_context_iso": _e_zero_context_iso,
    "tight": _e_tight,
    "tightness_oracle": _e_tightness_oracle,
    "lemma61": _e_check_reports("lemma61"),
    "cor64": _e_check_reports("cor64"),
    "cor66": _e_check_reports("cor66"),
    "word_dim": _e_word_dim,
}
