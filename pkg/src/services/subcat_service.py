"""
子范畴服务
Subcategory machinery for contexts with φ = ψ = 0: the six classes of
tuples, TTF decompositions, bireflective approximations and the
left approximation built from a pushout.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config.settings import get_settings
from src.core import exactla as la
from src.core.exactla import Row, Subspace
from src.core.exceptions import PreconditionError
from src.core.fdmod import (
    FDModule,
    ModuleMap,
    add_approximation,
    factor_through,
    hom_adjunct,
    hom_module,
    hom_space,
    pushout,
    quotient_module,
    simples,
    submodule,
    tensor,
    tensor_map,
    zero_module,
)
from src.core.morita import (
    MoritaContext,
    TupleMap,
    TupleModule,
    classify_injectives,
    classify_projectives,
    classify_simples,
    functor_H,
    functor_T,
    functor_Z,
    make_tuple,
    tuple_map_from_flat,
    tuple_map_is_valid,
)
from src.models.base import Verdict
from src.models.report import CheckEntry, CheckReport, ClassFlags
from src.utils.performance import monitor_performance

logger = logging.getLogger(__name__)
settings = get_settings()

PAIRS: Dict[str, Tuple[str, str]] = {
    "XY": ("in_X", "in_Y"),
    "YZ": ("in_Y", "in_Z"),
    "XpYp": ("in_Xp", "in_Yp"),
    "YpZp": ("in_Yp", "in_Zp"),
}

TARGETS = ("modA", "modB", "lowerTri", "upperTri")


@dataclass(eq=False)
class TorsionDecomposition:
    """0 → sub → mid → quot → 0"""

    pair: str
    sub: TupleModule
    mid: TupleModule
    quot: TupleModule
    inclusion: TupleMap
    projection: TupleMap
    exact: bool
    sub_in_torsion: bool
    quot_in_torsion_free: bool

    @property
    def verified(self) -> bool:
        return self.exact and self.sub_in_torsion and self.quot_in_torsion_free

    def summary(self) -> Dict[str, object]:
        return {
            "pair": self.pair,
            "dims": {
                "sub": [self.sub.X.dim, self.sub.Y.dim],
                "mid": [self.mid.X.dim, self.mid.Y.dim],
                "quot": [self.quot.X.dim, self.quot.Y.dim],
            },
            "exact": self.exact,
            "sub_in_torsion": self.sub_in_torsion,
            "quot_in_torsion_free": self.quot_in_torsion_free,
        }


@dataclass(eq=False)
class Approximation:
    """逼近映射及其分解性质的核对结果"""

    arrow: TupleMap
    side: str
    in_class: bool
    maps_checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.in_class and not self.failures and tuple_map_is_valid(self.arrow)

    def summary(self) -> Dict[str, object]:
        return {
            "side": self.side,
            "source_dims": [self.arrow.source.X.dim, self.arrow.source.Y.dim],
            "target_dims": [self.arrow.target.X.dim, self.arrow.target.Y.dim],
            "in_class": self.in_class,
            "maps_checked": self.maps_checked,
            "failures": list(self.failures),
            "verified": self.verified,
        }


def _require_zero(c: MoritaContext) -> None:
    if not c.is_zero_context:
        raise PreconditionError(f"子范畴计算要求 φ = ψ = 0: {c.name}")


def _padded(rows: Sequence[Row], offset: int, total: int, domain: Any) -> List[Row]:
    out = []
    for row in rows:
        full = [domain.zero] * total
        full[offset : offset + len(row)] = row
        out.append(full)
    return out


def _generated(w: FDModule, rows: List[Row]) -> Subspace:
    """rows 生成的 Λ-子模"""
    domain = w.domain
    span = Subspace.span_rows(rows, w.dim, domain) if rows else Subspace.zero(w.dim, domain)
    while True:
        images = [la.mul(span.basis, m) for m in w.action] if span.dim else []
        grown = span
        for img in images:
            grown = grown + Subspace.span(img, w.dim)
        if grown.dim == span.dim:
            return span
        span = grown


def _zero_tuple_map(c: MoritaContext, x: FDModule, y: FDModule) -> Tuple[ModuleMap, ModuleMap]:
    mx, ny = tensor(c.M, x).result, tensor(c.N, y).result
    domain = c.domain
    return (
        ModuleMap(mx, y, la.zeros(mx.dim, y.dim, domain)),
        ModuleMap(ny, x, la.zeros(ny.dim, x.dim, domain)),
    )


class SubcategoryService:
    """φ = ψ = 0 时元组范畴中的子范畴与逼近"""

    def class_flags(self, t: TupleModule) -> ClassFlags:
        """六个类的成员判定"""
        c = t.context
        _require_zero(c)
        f_epi = t.f.is_surjective()
        g_epi = t.g.is_surjective()
        rho_g = hom_adjunct(c.N, t.Y, t.g)
        pi_f = hom_adjunct(c.M, t.X, t.f)
        flags = ClassFlags(
            in_X=f_epi,
            in_Y=t.X.dim == 0,
            in_Z=t.f.is_zero() and rho_g.is_injective(),
            in_Xp=g_epi,
            in_Yp=t.Y.dim == 0,
            in_Zp=t.g.is_zero() and pi_f.is_injective(),
            consistent=not (f_epi and not t.g.is_zero()) and not (g_epi and not t.f.is_zero()),
        )
        if not flags.consistent:
            logger.warning(f"元组 {t.name} 的结构映射违反强制为零的条件")
        return flags

    def _torsion_subspace(self, t: TupleModule, pair: str) -> Subspace:
        c = t.context
        domain = c.domain
        dx, total = t.X.dim, t.dim
        rows: List[Row]
        if pair == "XY":
            rows = [la.dense_vector({k: domain.one}, total, domain) for k in range(dx)]
            rows += _padded(la.image(t.f.matrix).rows, dx, total, domain)
        elif pair == "YZ":
            rho_g = hom_adjunct(c.N, t.Y, t.g)
            rows = _padded(la.kernel(rho_g.matrix).rows, dx, total, domain)
        elif pair == "XpYp":
            rows = _padded(la.image(t.g.matrix).rows, 0, total, domain)
            rows += [la.dense_vector({dx + k: domain.one}, total, domain) for k in range(t.Y.dim)]
        elif pair == "YpZp":
            pi_f = hom_adjunct(c.M, t.X, t.f)
            rows = _padded(la.kernel(pi_f.matrix).rows, 0, total, domain)
        else:
            raise PreconditionError(f"未知的挠对: {pair}")
        return Subspace.span_rows(rows, total, domain) if rows else Subspace.zero(total, domain)

    @monitor_performance("torsion_decompose")
    def torsion_decompose(self, t: TupleModule, pair: str) -> TorsionDecomposition:
        """按挠对 pair 分解 t 为挠子对象与无挠商"""
        c = t.context
        _require_zero(c)
        try:
            s = self._torsion_subspace(t, pair)
            w = t.flat
            sub, incl = submodule(w, s, check=True)
            quot, proj = quotient_module(w, s)
            inclusion = tuple_map_from_flat(c, incl, target=t)
            projection = tuple_map_from_flat(c, proj, source=t)
            composite = la.mul(incl.matrix, proj.matrix)
            exact = (
                incl.is_injective()
                and proj.is_surjective()
                and incl.rank + proj.rank == w.dim
                and la.is_zero(composite)
            )
            torsion, torsion_free = PAIRS[pair]
            sub_flags = self.class_flags(inclusion.source)
            quot_flags = self.class_flags(projection.target)
            result = TorsionDecomposition(
                pair=pair,
                sub=inclusion.source,
                mid=t,
                quot=projection.target,
                inclusion=inclusion,
                projection=projection,
                exact=exact,
                sub_in_torsion=getattr(sub_flags, torsion),
                quot_in_torsion_free=getattr(quot_flags, torsion_free),
            )
            logger.debug(f"挠分解 {pair}: {t.name} → 子对象维数 {sub.dim}, 商维数 {quot.dim}")
            return result
        except Exception as e:
            logger.error(f"挠分解失败: {str(e)}")
            raise

    def default_samples(self, c: MoritaContext) -> List[TupleModule]:
        """分类的投射、内射、单对象及 A、B 单模的 T、H、Z 像"""
        _require_zero(c)
        samples: List[TupleModule] = []
        for classified in (classify_projectives(c), classify_injectives(c), classify_simples(c)):
            samples.extend(classified.tuples)
        for side, alg in (("A", c.A), ("B", c.B)):
            for s in simples(alg):
                samples.append(functor_T(c, side, s))
                samples.append(functor_H(c, side, s))
                samples.append(functor_Z(c, side, s))
        return samples

    @monitor_performance("hom_vanishing_check")
    def hom_vanishing_check(self, pair: str, samples: Sequence[TupleModule]) -> CheckReport:
        """挠对象到无挠对象的 Hom 为零"""
        if pair not in PAIRS:
            raise PreconditionError(f"未知的挠对: {pair}")
        torsion, torsion_free = PAIRS[pair]
        flagged = [(u, self.class_flags(u)) for u in samples]
        us = [u for u, fl in flagged if getattr(fl, torsion)]
        vs = [v for v, fl in flagged if getattr(fl, torsion_free)]
        report = CheckReport(title=f"Hom vanishing {pair}")
        for u in us:
            for v in vs:
                dim = hom_space(u.flat, v.flat).dim
                report.add(CheckEntry(
                    name=f"Hom({u.name}, {v.name})",
                    verdict=Verdict.SATISFIED if dim == 0 else Verdict.VIOLATED,
                    lhs=str(dim),
                    rhs="0",
                ))
                if dim:
                    logger.warning(f"挠对 {pair} 的反例: Hom({u.name}, {v.name}) 维数 {dim}")
        report.summary = {"torsion": len(us), "torsion_free": len(vs)}
        return report

    def _class_generators(self, c: MoritaContext, target: str) -> List[Row]:
        domain = c.domain
        if target == "modA":
            return [c.embed("B", c.B.unit)]
        if target == "modB":
            return [c.embed("A", c.A.unit)]
        if target == "lowerTri":
            return [c.embed("N", la.dense_vector({k: domain.one}, c.N.dim, domain)) for k in range(c.N.dim)]
        if target == "upperTri":
            return [c.embed("M", la.dense_vector({k: domain.one}, c.M.dim, domain)) for k in range(c.M.dim)]
        raise PreconditionError(f"未知的目标子范畴: {target}")

    @staticmethod
    def _annihilated(w: FDModule, gens: Sequence[Row]) -> bool:
        return all(la.is_zero(w.act(g)) for g in gens)

    @monitor_performance("bireflective_approx")
    def bireflective_approx(self, t: TupleModule, target: str, side: str = "left") -> Approximation:
        """到 modA、modB、下三角或上三角类的左逼近（side="right" 时为右逼近）"""
        c = t.context
        _require_zero(c)
        try:
            gens = self._class_generators(c, target)
            w = t.flat
            if side == "left":
                rows: List[Row] = []
                for g in gens:
                    rows.extend(la.to_rows(w.act(g)))
                quot, proj = quotient_module(w, _generated(w, rows))
                arrow = tuple_map_from_flat(c, proj, source=t)
                image = quot
            elif side == "right":
                space = Subspace.full(w.dim, c.domain)
                for m in w.action:
                    for g in gens:
                        space = space.intersection(la.kernel(la.mul(m, w.act(g))))
                image, incl = submodule(w, space)
                arrow = tuple_map_from_flat(c, incl, target=t)
            else:
                raise PreconditionError(f"未知的逼近方向: {side}")
            result = Approximation(arrow=arrow, side=side, in_class=self._annihilated(image, gens))
            samples = [image] + [s for s in simples(c.algebra) if self._annihilated(s, gens)]
            flat = arrow.flat_map()
            for s in samples:
                if side == "left":
                    maps = hom_space(w, s).maps()
                    checks = [factor_through(h, flat, "right") for h in maps]
                else:
                    maps = hom_space(s, w).maps()
                    checks = [factor_through(h, flat, "left") for h in maps]
                result.maps_checked += len(maps)
                result.failures.extend(s.name for k in checks if k is None)
            logger.debug(f"{target} 逼近: {t.name}, 检查映射 {result.maps_checked} 个")
            return result
        except Exception as e:
            logger.error(f"双反射逼近失败: {str(e)}")
            raise

    @monitor_performance("w_left_approximation")
    def w_left_approximation(
        self,
        u_gens: Sequence[FDModule],
        v_gens: Sequence[FDModule],
        t: TupleModule,
    ) -> Approximation:
        """先作 add(U)-左逼近，再作推出，最后作 add(V)-左逼近"""
        c = t.context
        _require_zero(c)
        u_gens = list(u_gens) or [zero_module(c.A)]
        v_gens = list(v_gens) or [zero_module(c.B)]
        for u in u_gens:
            if hom_module(c.N, u).result.dim:
                raise PreconditionError(f"Hom_A(N, {u.name}) ≠ 0", witness=u.name)
        for v in v_gens:
            if tensor(c.N, v).dim:
                raise PreconditionError(f"N ⊗ {v.name} ≠ 0", witness=v.name)
        try:
            m = add_approximation(u_gens, t.X, "left")
            mm = tensor_map(c.M, m)
            f = ModuleMap(mm.source, t.f.target, t.f.matrix)
            po = pushout(f, mm)
            theta, rho = po.first, po.second
            n = add_approximation(v_gens, po.module, "left")
            x1, y1 = m.target, n.target
            f1 = rho.then(n)
            f1 = ModuleMap(tensor(c.M, x1).result, y1, f1.matrix)
            _, g1 = _zero_tuple_map(c, x1, y1)
            w = make_tuple(c, x1, y1, f1, g1, name=f"W({t.name})")
            arrow = TupleMap(t, w, m, theta.then(n))
            flags_ok = tuple_map_is_valid(arrow)
            result = Approximation(arrow=arrow, side="left", in_class=flags_ok)
            samples = [w]
            for u in u_gens:
                for v in v_gens:
                    for x, y in ((u, v), (u, zero_module(c.B)), (zero_module(c.A), v)):
                        fz, gz = _zero_tuple_map(c, x, y)
                        samples.append(make_tuple(c, x, y, fz, gz, name=f"({x.name},{y.name})"))
            flat = arrow.flat_map()
            for s in samples:
                maps = hom_space(t.flat, s.flat).maps()
                result.maps_checked += len(maps)
                result.failures.extend(s.name for h in maps if factor_through(h, flat, "right") is None)
            logger.info(f"W-左逼近完成: {t.name} → 维数 ({x1.dim},{y1.dim})")
            return result
        except Exception as e:
            logger.error(f"W-左逼近失败: {str(e)}")
            raise

    def torsion_report(self, t: TupleModule, pairs: Optional[Sequence[str]] = None) -> CheckReport:
        """所有挠对分解的汇总"""
        report = CheckReport(title=f"torsion {t.name}")
        report.summary = {"flags": self.class_flags(t).to_json_dict()}
        for pair in pairs or list(PAIRS):
            dec = self.torsion_decompose(t, pair)
            report.add(CheckEntry(
                name=f"{pair} decomposition",
                verdict=Verdict.SATISFIED if dec.verified else Verdict.VIOLATED,
                detail=dec.summary(),
            ))
        return report
