"""
Gorenstein 服务
Gorenstein tests, derived-functor identities for the tensor functors, and
Gorenstein-projective membership over Morita rings of the form Δ(l).
"""

import logging
from typing import Dict, List, Optional, Sequence

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exceptions import PreconditionError
from src.core.fdalg import FDAlgebra
from src.core.fdmod import (
    DimResult,
    FDModule,
    ModuleMap,
    dual,
    ext_dims,
    hom_adjunct,
    hom_space,
    injdim,
    injective,
    minimal_resolution,
    regular_module,
    simples,
    tensor,
    tor_dim,
)
from src.core.morita import (
    MoritaContext,
    TupleMap,
    TupleModule,
    classify_projectives,
    classify_simples,
    delta_context,
    functor_H,
    functor_H_map,
    functor_T,
    functor_T_map,
    functor_U,
    functor_U_map,
    prop37_premise,
    tuple_map_is_valid,
)
from src.models.base import DimValue, Verdict
from src.models.report import CheckEntry, CheckReport, GorensteinReport, GprojReport
from src.utils.performance import monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()


def _gorenstein_verdict(left: DimResult, right: DimResult) -> str:
    if left.is_finite and right.is_finite:
        return "gorenstein"
    if left.is_infinite or right.is_infinite:
        return "not"
    return "undecided"


def _multiplication(c: MoritaContext, side: str, x: FDModule) -> ModuleMap:
    """Δ 上的乘法 M⊗X → X（B 侧为 N⊗X → X）"""
    bim = c.M if side == "A" else c.N
    tp = tensor(bim, x)
    domain = x.domain

    def bilinear(m_row: List, x_row: List) -> List:
        return la.to_rows(la.mul(la.from_rows([x_row], x.dim, domain), x.act(m_row)))[0]

    return ModuleMap(tp.result, x, tp.induced(bilinear, x.dim))


def _equal_maps(first: TupleMap, second: TupleMap) -> bool:
    return la.equal(first.flat_matrix, second.flat_matrix)


def _compose(first: TupleMap, second: TupleMap) -> TupleMap:
    return TupleMap(first.source, second.target, first.a.then(second.a), first.b.then(second.b))


class GorensteinService:
    """Gorenstein 代数与 Gorenstein 投射模"""

    def __init__(self, cutoff: Optional[int] = None):
        self.cutoff = cutoff or settings.default_cutoff

    @monitor_performance("gorenstein_test")
    def gorenstein_test(self, a: FDAlgebra) -> GorensteinReport:
        """id ΛΛ 与 id Λ_Λ 是否均有限"""
        try:
            left = injdim(regular_module(a), self.cutoff)
            right = injdim(regular_module(a.opposite), self.cutoff)
            verdict = _gorenstein_verdict(left, right)
            logger.info(f"Gorenstein 检查 {a.name}: id = ({left}, {right}) → {verdict}")
            return GorensteinReport(
                algebra=a.name,
                id_left=DimValue.from_result(left),
                id_right=DimValue.from_result(right),
                verdict=verdict,
            )
        except Exception as e:
            logger.error(f"Gorenstein 检查失败: {str(e)}")
            raise

    @monitor_performance("lemma_6_1_check")
    def lemma_6_1_check(self, c: MoritaContext, x: FDModule, n_max: int, side: str = "A") -> CheckReport:
        """T 作用于投射分解的同调：本侧分量在 n ≥ 1 处为零，另一侧分量等于 Tor_n"""
        if n_max < 0:
            raise PreconditionError(f"次数上限不能为负: {n_max}")
        other = "B" if side == "A" else "A"
        bim = c.M if side == "A" else c.N
        cutoff = max(self.cutoff, n_max + 2)
        res = minimal_resolution(x, n_max + 1, detect_period=False)
        report = CheckReport(title=f"Lemma 6.1 {x.name}")

        own_ranks: Dict[int, int] = {}
        other_ranks: Dict[int, int] = {}
        for n in range(1, n_max + 2):
            tm = functor_T_map(c, side, res.differential(n))
            own_ranks[n] = functor_U_map(tm, side).rank
            other_ranks[n] = functor_U_map(tm, other).rank

        tor_vanishes = True
        for n in range(n_max + 1):
            term = functor_T(c, side, res.term(n))
            own = functor_U(term, side).dim - own_ranks.get(n, 0) - own_ranks[n + 1]
            homology = functor_U(term, other).dim - other_ranks.get(n, 0) - other_ranks[n + 1]
            expected_own = x.dim if n == 0 else 0
            report.add(CheckEntry(
                name=f"H_{n} {side}-component",
                verdict=Verdict.SATISFIED if own == expected_own else Verdict.VIOLATED,
                lhs=str(own),
                rhs=str(expected_own),
            ))
            tor = tor_dim(bim, x, n, cutoff)
            report.add(CheckEntry(
                name=f"H_{n} {other}-component = Tor_{n}",
                verdict=Verdict.UNDECIDED if tor is None else (Verdict.SATISFIED if tor == homology else Verdict.VIOLATED),
                lhs=str(homology),
                rhs=None if tor is None else str(tor),
            ))
            if n >= 1 and tor:
                tor_vanishes = False

        report.summary["tor_vanishes"] = tor_vanishes
        if not tor_vanishes:
            return report

        targets = list(classify_projectives(c).tuples) + list(classify_simples(c).tuples)
        tx = functor_T(c, side, x).flat
        res_tx = minimal_resolution(tx, n_max + 1, detect_period=False)
        for w in targets:
            lhs_dims = ext_dims(tx, w.flat, n_max, cutoff, res=res_tx)
            rhs_dims = ext_dims(x, functor_U(w, side), n_max, cutoff, res=res)
            for n, (lhs, rhs) in enumerate(zip(lhs_dims, rhs_dims)):
                verdict = Verdict.UNDECIDED if lhs is None or rhs is None else (
                    Verdict.SATISFIED if lhs == rhs else Verdict.VIOLATED
                )
                report.add(CheckEntry(
                    name=f"Ext^{n}(T({x.name}), {w.name})", verdict=verdict, lhs=str(lhs), rhs=str(rhs),
                ))
        return report

    @monitor_performance("thm_6_2_sufficient")
    def thm_6_2_sufficient(self, c: MoritaContext) -> CheckReport:
        """有限代用前提（投射与内射的对应）及结论 Λ Gorenstein；前提只是充分条件"""
        premise = prop37_premise(c)
        conclusion = self.gorenstein_test(c.algebra)
        if not premise["holds"]:
            verdict = Verdict.VACUOUS
        elif conclusion.verdict == "gorenstein":
            verdict = Verdict.SATISFIED
        elif conclusion.verdict == "not":
            verdict = Verdict.VIOLATED
        else:
            verdict = Verdict.UNDECIDED
        report = CheckReport(
            title=f"Thm 6.2 {c.name}",
            summary={
                "sufficient_only": True,
                "premise_holds": premise["holds"],
                "conclusion": conclusion.verdict,
                "gorenstein": conclusion.to_json_dict(),
            },
        )
        report.add(CheckEntry(
            name="premise implies Gorenstein",
            verdict=verdict,
            lhs=str(premise["holds"]).lower(),
            rhs=conclusion.verdict,
            detail={k: v for k, v in premise["checks"].items() if not v},
        ))
        return report

    @monitor_performance("cor_6_4_check")
    def cor_6_4_check(self, l: FDAlgebra) -> CheckReport:
        """l Gorenstein ⇔ Δ(l) Gorenstein"""
        base = self.gorenstein_test(l)
        delta = self.gorenstein_test(delta_context(l).algebra)
        if "undecided" in (base.verdict, delta.verdict):
            verdict = Verdict.UNDECIDED
        else:
            verdict = Verdict.SATISFIED if base.verdict == delta.verdict else Verdict.VIOLATED
        report = CheckReport(
            title=f"Cor 6.4 {l.name}",
            summary={"base": base.to_json_dict(), "delta": delta.to_json_dict()},
        )
        report.add(CheckEntry(name="Gorenstein equivalence", verdict=verdict, lhs=base.verdict, rhs=delta.verdict))
        return report

    def canonical_isos(self, c: MoritaContext, x: FDModule) -> Dict[str, TupleMap]:
        """Δ(l) 上的 T_A(X) → H_B(X) 与 T_B(X) → H_A(X)"""
        if c.A is not c.B:
            raise PreconditionError(f"需要 A = B 的上下文: {c.name}")
        b = _multiplication(c, "A", x)
        a = hom_adjunct(c.M, x, b)
        first = TupleMap(functor_T(c, "A", x), functor_H(c, "B", x), a, b)
        a2 = _multiplication(c, "B", x)
        b2 = hom_adjunct(c.N, x, a2)
        second = TupleMap(functor_T(c, "B", x), functor_H(c, "A", x), a2, b2)
        return {"T_A~H_B": first, "T_B~H_A": second}

    @monitor_performance("lemma_6_5_check")
    def lemma_6_5_check(self, l: FDAlgebra, modules: Optional[Sequence[FDModule]] = None) -> CheckReport:
        """T_Λ ≅ H′_Λ 与 T′_Λ ≅ H_Λ：可逆性与在 Hom 基上的自然性"""
        c = delta_context(l)
        modules = list(modules) if modules is not None else [regular_module(l)] + simples(l)
        report = CheckReport(title=f"Lemma 6.5 {l.name}")
        try:
            for x in modules:
                isos = self.canonical_isos(c, x)
                for label, iso in isos.items():
                    ok = tuple_map_is_valid(iso) and iso.a.is_iso() and iso.b.is_iso()
                    report.add(CheckEntry(
                        name=f"{label} iso {x.name}",
                        verdict=Verdict.SATISFIED if ok else Verdict.VIOLATED,
                        lhs=str(iso.source.dim),
                        rhs=str(iso.target.dim),
                    ))
                failures: List[str] = []
                endos = hom_space(x, x)
                for k, h in enumerate(endos.maps()):
                    t_maps = {"T_A~H_B": functor_T_map(c, "A", h), "T_B~H_A": functor_T_map(c, "B", h)}
                    h_maps = {"T_A~H_B": functor_H_map(c, "B", h), "T_B~H_A": functor_H_map(c, "A", h)}
                    for label, iso in isos.items():
                        if not _equal_maps(_compose(t_maps[label], iso), _compose(iso, h_maps[label])):
                            failures.append(f"{label}@{k}")
                report.add(CheckEntry(
                    name=f"naturality {x.name}",
                    verdict=Verdict.VIOLATED if failures else Verdict.SATISFIED,
                    detail={"endomorphisms": endos.dim, "failures": failures},
                ))
            return report
        except Exception as e:
            logger.error(f"Lemma 6.5 检查失败: {str(e)}")
            raise

    def _require_gorenstein(self, a: FDAlgebra) -> GorensteinReport:
        g = self.gorenstein_test(a)
        if g.verdict != "gorenstein":
            raise PreconditionError(f"代数 {a.name} 未通过 Gorenstein 检查: {g.verdict}", witness=g.verdict)
        return g

    @monitor_performance("gproj_test")
    def gproj_test(self, x: FDModule, window: Optional[int] = None) -> GprojReport:
        """Ext^n(X, Λ) = 0 对 1 ≤ n ≤ window"""
        lam = x.algebra
        g = self._require_gorenstein(lam)
        id_left = g.id_left.value or 0
        window = window or max(2 * max(id_left, g.id_right.value or 0), settings.gproj_window_floor)
        if window < 1:
            raise PreconditionError(f"窗口至少为 1: {window}")
        cutoff = max(self.cutoff, window + 1)
        target = regular_module(lam)
        dims: Dict[str, int] = {}
        for n, d in enumerate(ext_dims(x, target, window, cutoff)[1:], start=1):
            dims[str(n)] = d if d is not None else 0
        member = all(v == 0 for v in dims.values())

        certificate = None
        if not member:
            certificate = "nonvanishing"
        elif window >= id_left:
            # Ext^n(−, Λ) = 0 for n > id ΛΛ
            certificate = "injective_dimension"
        else:
            res = minimal_resolution(x, window)
            if res.status == "terminated" and res.length <= window:
                certificate = "terminated"
            elif res.status == "periodic" and res.witness is not None:
                if res.witness.start + res.witness.period <= window:
                    certificate = "periodic"
        logger.debug(f"Gproj 检查 {x.name}: member={member}, certificate={certificate}")
        return GprojReport(
            module=x.name,
            window=window,
            ext_vanishing=dims,
            member=member,
            certified=certificate is not None,
            certificate=certificate,
        )

    @monitor_performance("cor_6_6_check")
    def cor_6_6_check(self, l: FDAlgebra, t: TupleModule, window: Optional[int] = None) -> CheckReport:
        """(X, Y, f, g) Gorenstein 投射 ⇔ X 与 Y 均 Gorenstein 投射"""
        self._require_gorenstein(l)
        flat = self.gproj_test(t.flat, window)
        rx, ry = self.gproj_test(t.X, window), self.gproj_test(t.Y, window)
        predicted = rx.member and ry.member
        if flat.member == predicted:
            verdict = Verdict.SATISFIED
        elif flat.certified and rx.certified and ry.certified:
            verdict = Verdict.VIOLATED
        else:
            verdict = Verdict.UNDECIDED
        report = CheckReport(
            title=f"Cor 6.6 {t.name or 'tuple'}",
            summary={"flat": flat.to_json_dict(), "X": rx.to_json_dict(), "Y": ry.to_json_dict()},
        )
        report.add(CheckEntry(
            name="Gproj biconditional",
            verdict=verdict,
            lhs=str(flat.member).lower(),
            rhs=str(predicted).lower(),
            detail={"certified": flat.certified and rx.certified and ry.certified},
        ))
        return report

    def default_gproj_samples(self, l: FDAlgebra) -> List[FDModule]:
        samples = [regular_module(l)] + simples(l)
        samples.extend(injective(l, i) for i in range(l.n_idempotents))
        samples.append(dual(regular_module(l.opposite)))
        return samples

    def _member_entry(self, name: str, x: FDModule, window: Optional[int]) -> CheckEntry:
        r = self.gproj_test(x, window)
        if r.member:
            verdict = Verdict.SATISFIED
        else:
            verdict = Verdict.VIOLATED if r.certified else Verdict.UNDECIDED
        return CheckEntry(name=name, verdict=verdict, lhs=str(r.member).lower(), detail={"certificate": r.certificate})

    @monitor_performance("cor_6_7_check")
    def cor_6_7_check(
        self, l: FDAlgebra, samples: Optional[Sequence[FDModule]] = None, window: Optional[int] = None
    ) -> CheckReport:
        """T_Λ、T′_Λ 与 U_Λ 保持 Gorenstein 投射；Ker U_Λ 的成员形如 (0, Y, 0, 0)"""
        self._require_gorenstein(l)
        c = delta_context(l)
        samples = list(samples) if samples is not None else self.default_gproj_samples(l)
        report = CheckReport(title=f"Cor 6.7 {l.name}")
        negatives = 0
        for x in samples:
            if not self.gproj_test(x, window).member:
                negatives += 1
                report.add(CheckEntry(name=f"sample {x.name} not Gproj", verdict=Verdict.VACUOUS))
                continue
            report.add(self._member_entry(f"T_A({x.name})", functor_T(c, "A", x).flat, window))
            report.add(self._member_entry(f"T_B({x.name})", functor_T(c, "B", x).flat, window))

        tuples = list(classify_projectives(c).tuples) + list(classify_simples(c).tuples)
        for t in tuples:
            if not self.gproj_test(t.flat, window).member:
                continue
            report.add(self._member_entry(f"U({t.name})", t.X, window))
            if t.X.dim == 0:
                shape_ok = t.f.is_zero() and t.g.is_zero()
                report.add(CheckEntry(
                    name=f"kernel shape {t.name}",
                    verdict=Verdict.SATISFIED if shape_ok else Verdict.VIOLATED,
                ))
                report.add(self._member_entry(f"kernel Y {t.name}", t.Y, window))
        report.summary["negative_controls"] = negatives
        return report
