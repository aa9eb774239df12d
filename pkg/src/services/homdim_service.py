"""
同调维数服务
Tight resolutions, projective-dimension identities for embedded modules and
the global-dimension bounds for Morita rings with zero pairings, plus the
bounds for trivial extensions.
"""

import logging
from typing import Dict, List, Optional, Tuple

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exceptions import PreconditionError
from src.core.fdalg import FDAlgebra, trivial_extension
from src.core.fdmod import (
    Bimodule,
    DimResult,
    FDModule,
    dim_max,
    dim_shift,
    dim_sum,
    gldim,
    is_projective,
    left_module,
    minimal_resolution,
    pd,
    projective_cover,
    right_module,
    simples,
    syzygy,
    tensor,
    tensor_bimodules,
)
from src.core.morita import MoritaContext, functor_Z
from src.models.base import DimValue, HypothesisVerdict, Verdict
from src.models.report import BoundReport, CheckEntry, CheckReport, Hypothesis, TightnessReport
from src.utils.performance import memoize_on_instance, monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()


# 词长 = k·s + c，记为 (start, k, c, side)
_WORDS = {
    "N_even": ("N", 2, 0, "A"),
    "M_odd": ("M", 2, 1, "B"),
    "N_odd": ("N", 2, 1, "A"),
    "M_even": ("M", 2, 0, "B"),
}

VARIANTS: Dict[int, Tuple[Tuple[str, ...], int, int, int]] = {
    1: (("N_even",), 1, 0, 1),
    2: (("M_odd",), 0, 1, 2),
    3: (("N_odd",), 0, 2, 1),
    4: (("M_even",), 1, 1, 0),
    5: (("N_even", "M_even"), 1, 0, 0),
    6: (("N_odd", "M_odd"), 0, 1, 1),
}


def compare_le(lhs: DimResult, rhs: DimResult) -> Verdict:
    """lhs ≤ rhs 的判定；rhs 无穷时为空真"""
    if rhs.is_infinite:
        return Verdict.VACUOUS
    if lhs.is_infinite:
        return Verdict.VIOLATED if rhs.is_finite else Verdict.UNDECIDED
    lv, rv = lhs.value or 0, rhs.value or 0
    if lhs.is_finite and rhs.is_finite:
        return Verdict.SATISFIED if lv <= rv else Verdict.VIOLATED
    if not lhs.is_decided and rhs.is_finite:
        return Verdict.VIOLATED if lv > rv else Verdict.UNDECIDED
    if lhs.is_finite and not rhs.is_decided:
        return Verdict.SATISFIED if lv <= rv else Verdict.UNDECIDED
    return Verdict.UNDECIDED


def compare_eq(lhs: DimResult, rhs: DimResult) -> Verdict:
    if lhs.is_decided and rhs.is_decided:
        if lhs.kind != rhs.kind:
            return Verdict.VIOLATED
        return Verdict.SATISFIED if lhs.value == rhs.value else Verdict.VIOLATED
    return Verdict.UNDECIDED


def _combine(hypotheses: List[Hypothesis], lhs: DimResult, rhs: Optional[DimResult]) -> Verdict:
    verdicts = [h.verdict for h in hypotheses]
    if HypothesisVerdict.FAILS.value in verdicts:
        return Verdict.VACUOUS
    if HypothesisVerdict.UNDECIDED.value in verdicts or rhs is None:
        return Verdict.UNDECIDED
    return compare_le(lhs, rhs)


def _sharp(lhs: DimResult, rhs: Optional[DimResult]) -> Optional[bool]:
    if rhs is None or not (lhs.is_finite and rhs.is_finite):
        return None
    return lhs.value == rhs.value


def _holds(flag: Optional[bool]) -> HypothesisVerdict:
    if flag is None:
        return HypothesisVerdict.UNDECIDED
    return HypothesisVerdict.HOLDS if flag else HypothesisVerdict.FAILS


@memoize_on_instance
def _gldim(a: FDAlgebra, cutoff: int) -> DimResult:
    return gldim(a, cutoff)


@memoize_on_instance
def _pd(x: FDModule, cutoff: int) -> DimResult:
    return pd(x, cutoff)


def _bimodule_for(c: MoritaContext, side: str) -> Bimodule:
    """A 侧用 M⊗ 判定紧性，B 侧用 N⊗"""
    if side == "A":
        return c.M
    if side == "B":
        return c.N
    raise PreconditionError(f"未知的一侧: {side}")


def _other(side: str) -> str:
    return "B" if side == "A" else "A"


def z_module(lam: FDAlgebra, a: FDAlgebra, x: FDModule) -> FDModule:
    """平凡扩张 A⋉N 上的 Z(X)：N 作用为零"""
    if x.algebra is not a:
        raise PreconditionError(f"{x.name} 不是 {a.name}-模")
    domain = a.domain
    zeros = tuple(la.zeros(x.dim, x.dim, domain) for _ in range(lam.dim - a.dim))
    return FDModule(lam, x.dim, tuple(x.action) + zeros, f"Z({x.name})")


class HomologicalDimensionService:
    """紧分解与整体维数界"""

    def __init__(self, cutoff: Optional[int] = None):
        self.cutoff = cutoff or settings.default_cutoff

    def _require_zero(self, c: MoritaContext) -> None:
        if not c.is_zero_context:
            raise PreconditionError(f"该计算要求 φ = ψ = 0: {c.name}")

    def tight_projective(self, c: MoritaContext, p: FDModule, side: str) -> bool:
        """p 投射且 M⊗p = 0（B 侧为 N⊗p = 0）"""
        return is_projective(p) and tensor(_bimodule_for(c, side), p).dim == 0

    @monitor_performance("tightness")
    def tightness(self, c: MoritaContext, x: FDModule, side: str = "A") -> TightnessReport:
        """极小投射分解的各项在张量下是否为零"""
        self._require_zero(c)
        bim = _bimodule_for(c, side)
        res = minimal_resolution(x, self.cutoff)
        for n, term in enumerate(res.terms):
            if tensor(bim, term).dim:
                logger.debug(f"{x.name} 在第 {n} 项不紧")
                return TightnessReport(
                    module=x.name, side=side, tight=False, witness_degree=n,
                    status=res.status, depth=len(res.terms),
                )
        tight = True if res.status in ("terminated", "periodic") else None
        return TightnessReport(module=x.name, side=side, tight=tight, status=res.status, depth=len(res.terms))

    def tightness_oracle(self, c: MoritaContext, x: FDModule, side: str = "A") -> Optional[bool]:
        """独立路径：(X,0,0,0) 的极小 Λ-分解各项的另一侧分量是否为零"""
        self._require_zero(c)
        part = "B" if side == "A" else "A"
        unit = c.B.unit if side == "A" else c.A.unit
        e = c.embed(part, unit)
        res = minimal_resolution(functor_Z(c, side, x).flat, self.cutoff)
        for term in res.terms:
            if la.rank(term.act(e)):
                return False
        return True if res.status in ("terminated", "periodic") else None

    def _embedded_pd(self, c: MoritaContext, side: str, x: FDModule) -> DimResult:
        return _pd(functor_Z(c, side, x).flat, self.cutoff)

    @monitor_performance("pd_identity_checks")
    def pd_identity_checks(self, c: MoritaContext, x: FDModule, side: str = "A") -> CheckReport:
        """嵌入模的投射维数等式与不等式"""
        self._require_zero(c)
        other = _other(side)
        bim = _bimodule_for(c, side)
        report = CheckReport(title=f"pd identities {x.name}")
        try:
            p = projective_cover(x).module
            pz = self._embedded_pd(c, side, p)
            mp = tensor(bim, p).result
            if mp.dim == 0:
                report.add(CheckEntry(name="Lemma 5.4", verdict=Verdict.VACUOUS, lhs=str(pz), detail={"tight": True}))
            else:
                rhs = dim_shift(self._embedded_pd(c, other, mp), 1)
                report.add(CheckEntry(name="Lemma 5.4", verdict=compare_eq(pz, rhs), lhs=str(pz), rhs=str(rhs)))

            lhs = self._embedded_pd(c, side, x)
            bim_pd = self._embedded_pd(c, other, left_module(bim))
            omega = syzygy(x, 1)
            rhs = dim_shift(dim_max([self._embedded_pd(c, side, omega), bim_pd]), 1)
            report.add(CheckEntry(name="Lemma 5.6", verdict=compare_le(lhs, rhs), lhs=str(lhs), rhs=str(rhs)))

            pd_x = _pd(x, self.cutoff)
            rhs = dim_sum(dim_shift(pd_x, 1), bim_pd)
            report.add(CheckEntry(name="Cor 5.7", verdict=compare_le(lhs, rhs), lhs=str(lhs), rhs=str(rhs)))

            bim_tight = self.tightness(c, left_module(bim), other).tight
            if bim_tight:
                rhs = dim_sum(dim_shift(pd_x, 1), _pd(left_module(bim), self.cutoff))
                verdict = compare_le(lhs, rhs)
            else:
                rhs = None
                verdict = Verdict.VACUOUS if bim_tight is False else Verdict.UNDECIDED
            report.add(CheckEntry(
                name="Prop 5.8", verdict=verdict, lhs=str(lhs), rhs=None if rhs is None else str(rhs),
                detail={"hypothesis_tight": bim_tight},
            ))

            x_tight = self.tightness(c, x, side).tight
            if x_tight:
                report.add(CheckEntry(
                    name="tight pd equality", verdict=compare_eq(pd_x, lhs), lhs=str(pd_x), rhs=str(lhs),
                ))
            return report
        except Exception as e:
            logger.error(f"投射维数恒等式检查失败: {str(e)}")
            raise

    def _tight_hypotheses(self, c: MoritaContext) -> List[Hypothesis]:
        hyps = []
        for label, module, side in (("M", left_module(c.M), "B"), ("N", left_module(c.N), "A")):
            rep = self.tightness(c, module, side)
            witness = None if rep.witness_degree is None else f"degree {rep.witness_degree}"
            if rep.tight is None:
                witness = f"undecided at depth {rep.depth}"
            hyps.append(Hypothesis(name=f"{label} has a {side}-tight resolution", verdict=_holds(rep.tight), witness=witness))
        return hyps

    @monitor_performance("bound_thm_5_9")
    def bound_thm_5_9(self, c: MoritaContext) -> BoundReport:
        """gld Λ ≤ gld A + gld B + 1"""
        self._require_zero(c)
        try:
            hyps = self._tight_hypotheses(c)
            ga, gb = _gldim(c.A, self.cutoff), _gldim(c.B, self.cutoff)
            lhs = _gldim(c.algebra, self.cutoff)
            rhs = dim_shift(dim_sum(ga, gb), 1)
            verdict = _combine(hyps, lhs, rhs)
            logger.info(f"Thm 5.9 {c.name}: {lhs} ≤ {rhs} → {verdict.value}")
            return BoundReport(
                theorem_tag="5.9",
                hypotheses=hyps,
                lhs=DimValue.from_result(lhs),
                rhs=DimValue.from_result(rhs),
                verdict=verdict,
                sharp=_sharp(lhs, rhs),
                extras={"gldim_A": str(ga), "gldim_B": str(gb)},
            )
        except Exception as e:
            logger.error(f"Thm 5.9 检查失败: {str(e)}")
            raise

    def alternating_word(self, c: MoritaContext, start: str, length: int) -> Bimodule:
        """左结合的交错张量词 N⊗M⊗… 或 M⊗N⊗…"""
        if length < 1:
            raise PreconditionError(f"词长至少为 1: {length}")
        letters = {"N": c.N, "M": c.M}
        if start not in letters:
            raise PreconditionError(f"未知的起始双模: {start}")
        word = letters[start]
        nxt = "M" if start == "N" else "N"
        for _ in range(length - 1):
            if word.dim == 0:
                break
            word, _ = tensor_bimodules(word, letters[nxt])
            nxt = "M" if nxt == "N" else "N"
        return word

    def word_dims(self, c: MoritaContext, max_length: int) -> Dict[str, List[int]]:
        """交错词的维数序列"""
        out: Dict[str, List[int]] = {}
        for start in ("N", "M"):
            out[start] = [self.alternating_word(c, start, k).dim for k in range(1, max_length + 1)]
        return out

    def _word_hypothesis(self, c: MoritaContext, key: str, s: int) -> Hypothesis:
        start, k, const, side = _WORDS[key]
        length = k * s + const
        word = left_module(self.alternating_word(c, start, length))
        holds = self.tight_projective(c, word, side)
        return Hypothesis(
            name=f"{start}-word of length {length} is {side}-tight projective",
            verdict=_holds(holds),
            witness=None if holds else f"dim {word.dim}, tensor dim {tensor(_bimodule_for(c, side), word).dim}",
        )

    @monitor_performance("bound_thm_5_14")
    def bound_thm_5_14(self, c: MoritaContext, s: int, variant: int) -> BoundReport:
        """六个变体：gld Λ ≤ max{gld A + 2s + a, gld B + 2s + b}"""
        self._require_zero(c)
        if variant not in VARIANTS:
            raise PreconditionError(f"未知的变体: {variant}")
        keys, min_s, shift_a, shift_b = VARIANTS[variant]
        if s < min_s:
            raise PreconditionError(f"变体 {variant} 要求 s ≥ {min_s}", witness=s)
        ga, gb = _gldim(c.A, self.cutoff), _gldim(c.B, self.cutoff)
        hyps = [
            Hypothesis(name="gld A finite", verdict=_holds(ga.is_finite if ga.is_decided else None), witness=str(ga)),
            Hypothesis(name="gld B finite", verdict=_holds(gb.is_finite if gb.is_decided else None), witness=str(gb)),
            Hypothesis(name="M projective over B", verdict=_holds(is_projective(left_module(c.M)))),
            Hypothesis(name="N projective over A", verdict=_holds(is_projective(left_module(c.N)))),
        ]
        hyps.extend(self._word_hypothesis(c, key, s) for key in keys)
        lhs = _gldim(c.algebra, self.cutoff)
        rhs = dim_max([dim_shift(ga, 2 * s + shift_a), dim_shift(gb, 2 * s + shift_b)])
        verdict = _combine(hyps, lhs, rhs)
        logger.info(f"Thm 5.14 变体 {variant}, s = {s}: {lhs} ≤ {rhs} → {verdict.value}")
        return BoundReport(
            theorem_tag=f"5.14:{variant}:{s}",
            hypotheses=hyps,
            lhs=DimValue.from_result(lhs),
            rhs=DimValue.from_result(rhs),
            verdict=verdict,
            sharp=_sharp(lhs, rhs),
            extras={"variant": variant, "s": s},
        )

    def scan_thm_5_14(self, c: MoritaContext, s_max: int) -> List[BoundReport]:
        """所有变体、所有允许的 s ≤ s_max"""
        reports = []
        for variant, (_, min_s, _, _) in VARIANTS.items():
            for s in range(min_s, s_max + 1):
                reports.append(self.bound_thm_5_14(c, s, variant))
        return reports

    @monitor_performance("lower_bound_5_17")
    def lower_bound_5_17(self, c: MoritaContext) -> BoundReport:
        """M、N 作为右模投射时 gld Λ ≥ max{gld A, gld B}"""
        hyps = [
            Hypothesis(name="M projective as right A-module", verdict=_holds(is_projective(right_module(c.M)))),
            Hypothesis(name="N projective as right B-module", verdict=_holds(is_projective(right_module(c.N)))),
        ]
        lhs = dim_max([_gldim(c.A, self.cutoff), _gldim(c.B, self.cutoff)])
        rhs = _gldim(c.algebra, self.cutoff)
        return BoundReport(
            theorem_tag="5.17",
            hypotheses=hyps,
            lhs=DimValue.from_result(lhs),
            rhs=DimValue.from_result(rhs),
            verdict=_combine(hyps, lhs, rhs),
            sharp=_sharp(lhs, rhs),
        )

    def nilpotency_class(self, c: MoritaContext) -> Optional[int]:
        """c(H) = min{κ : 长度 κ+1 的两个交错词都为零}；截断内未找到时为 None"""
        words = {"N": c.N, "M": c.M}
        for kappa in range(self.cutoff + 1):
            if words["N"].dim == 0 and words["M"].dim == 0:
                return kappa
            words = {
                "N": words["N"] if words["N"].dim == 0 else tensor_bimodules(words["N"], c.M if kappa % 2 == 0 else c.N)[0],
                "M": words["M"] if words["M"].dim == 0 else tensor_bimodules(words["M"], c.N if kappa % 2 == 0 else c.M)[0],
            }
        return None

    @monitor_performance("nilpotency_and_bel_bound")
    def nilpotency_and_bel_bound(self, c: MoritaContext) -> BoundReport:
        """gld Λ ≤ c(H) + 2·max{gld A, gld B}"""
        self._require_zero(c)
        hyps = self._tight_hypotheses(c)
        kappa = self.nilpotency_class(c)
        hyps.append(Hypothesis(
            name="H nilpotent within cutoff",
            verdict=_holds(True if kappa is not None else None),
            witness=None if kappa is not None else f"cutoff {self.cutoff}",
        ))
        ga, gb = _gldim(c.A, self.cutoff), _gldim(c.B, self.cutoff)
        g = dim_max([ga, gb])
        lhs = _gldim(c.algebra, self.cutoff)
        rhs = dim_shift(dim_sum(g, g), kappa) if kappa is not None else None
        thm59 = dim_shift(dim_sum(ga, gb), 1)
        return BoundReport(
            theorem_tag="bel",
            hypotheses=hyps,
            lhs=DimValue.from_result(lhs),
            rhs=None if rhs is None else DimValue.from_result(rhs),
            verdict=_combine(hyps, lhs, rhs),
            sharp=_sharp(lhs, rhs),
            extras={"c_H": kappa, "thm_5_9_rhs": str(thm59)},
        )

    @monitor_performance("trivext_bounds")
    def trivext_bounds(self, a: FDAlgebra, n: Bimodule) -> BoundReport:
        """Λ = A⋉N：gld Λ ≤ gld A + pd_Λ Z(N) + 1，以及 pd_A N = pd_Λ Z(N) 时的 2·gld A + 1"""
        try:
            lam = trivial_extension(a, n)
            ga = _gldim(a, self.cutoff)
            gl = _gldim(lam, self.cutoff)
            n_left = left_module(n)
            pd_zn = _pd(z_module(lam, a, n_left), self.cutoff)
            pd_an = _pd(n_left, self.cutoff)
            rhs = dim_sum(dim_shift(ga, 1), pd_zn)
            report = BoundReport(
                theorem_tag="5.19",
                hypotheses=[],
                lhs=DimValue.from_result(gl),
                rhs=DimValue.from_result(rhs),
                verdict=compare_le(gl, rhs),
                sharp=_sharp(gl, rhs),
                extras={"gldim_A": str(ga), "pd_A_N": str(pd_an), "pd_Lambda_ZN": str(pd_zn)},
            )
            equal = compare_eq(pd_an, pd_zn) == Verdict.SATISFIED
            cor_rhs = dim_shift(dim_sum(ga, ga), 1)
            report.entries.append(CheckEntry(
                name="Cor 5.20",
                verdict=compare_le(gl, cor_rhs) if equal else Verdict.VACUOUS,
                lhs=str(gl),
                rhs=str(cor_rhs),
                detail={"hypothesis": equal},
            ))
            for s in simples(a):
                zs = _pd(z_module(lam, a, s), self.cutoff)
                omega = _pd(z_module(lam, a, syzygy(s, 1)), self.cutoff)
                lemma_rhs = dim_shift(dim_max([omega, pd_zn]), 1)
                report.entries.append(CheckEntry(
                    name=f"Lemma 5.18 {s.name}", verdict=compare_le(zs, lemma_rhs), lhs=str(zs), rhs=str(lemma_rhs),
                ))
                star_rhs = dim_sum(dim_shift(_pd(s, self.cutoff), 1), pd_zn)
                report.entries.append(CheckEntry(
                    name=f"pd Z({s.name}) bound", verdict=compare_le(zs, star_rhs), lhs=str(zs), rhs=str(star_rhs),
                ))
            logger.info(f"平凡扩张界: gld Λ = {gl}, 右端 {rhs}")
            return report
        except Exception as e:
            logger.error(f"平凡扩张界计算失败: {str(e)}")
            raise
