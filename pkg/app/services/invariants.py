"""τ、θ 及其导出不变量 ε、φ、λ、Z，典范测度与容许测度"""
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import GenusMismatch, InvalidGenus, \
    NonEffectiveCanonicalDivisor, NonzeroPolarization, NotRegular
from app.models.models import ComputationResult, Edge, InvariantSet, \
    MeasureReport, ModeKind, PMGraph, Scalar, ScalarMode
from app.services.arithmetic import arithmetic_for
from app.services.graph import canonical_weights, ensure_valid, genus, \
    total_length, valences
from app.services.laplacian import LaplacianSystem, Variant, \
    check_precision, resistance, resistance_complement, solve_system
from app.services.reduce import LoopStrategy, apply_corrections, \
    bouquet_invariants, reduce_to_adequate, subdivide_self_loops

logger = logging.getLogger(__name__)


def _edge_terms(system: LaplacianSystem, edge: Edge):
    """返回 (l_pq, l⁺_pp, l⁺_pq, l⁺_qq)"""
    ar, pinv = system.arithmetic, system.pinv()
    i, j = system.position(edge.u), system.position(edge.v)
    l_pq = -ar.scalar(1 / edge.length)
    return l_pq, ar.get(pinv, i, i), ar.get(pinv, i, j), ar.get(pinv, j, j)


def tau(system: LaplacianSystem,
        edges: Optional[Sequence[Edge]] = None) -> Scalar:
    """由 L 与 L⁺ 计算 τ(Γ)

    τ = -1/12 Σ_e l_pq (1/l_pq + r(p,q))² + 1/4 Σ_{q,s} l_qs l⁺_qq l⁺_ss + tr(L⁺)/v，
    中间的双重和按边展开为 -Σ_e l_pq (l⁺_pp - l⁺_qq)²。
    """
    ar = system.arithmetic
    edges = system.graph.edges if edges is None else edges
    first = ar.scalar(0)
    middle = ar.scalar(0)
    for e in edges:
        l_pq, pp, pq, qq = _edge_terms(system, e)
        r = pp - 2 * pq + qq
        first += l_pq * (1 / l_pq + r) ** 2
        middle -= l_pq * (pp - qq) ** 2
    return -first / 12 + middle / 4 + ar.trace(system.pinv()) / system.size


def _check_weights(weights: Mapping[str, int], gbar: int) -> None:
    negative = [p for p, w in weights.items() if w < 0]
    if negative:
        raise NonEffectiveCanonicalDivisor(
            f"典范除子不是有效的: {', '.join(negative)}", subjects=negative)
    if sum(weights.values()) != 2 * gbar - 2:
        raise GenusMismatch(
            f"权重和 {sum(weights.values())} 不等于 2ḡ - 2 = {2 * gbar - 2}")


def theta(system: LaplacianSystem, weights: Mapping[str, int],
          gbar: int) -> Scalar:
    """θ = 2(2ḡ-2) Σ_p w(p) l⁺_pp - 2 Σ_{p,q} (w(p)+2)(w(q)+2) l⁺_pq

    w(p) = val(p) - 2 + 2q(p)，因此 w(p) + 2 = val(p) + 2q(p)。
    """
    _check_weights(weights, gbar)
    ar, pinv = system.arithmetic, system.pinv()
    diag = ar.diagonal(pinv)
    w = [weights[vid] for vid in system.ordering]
    first = sum((ar.scalar(wp) * diag[i] for i, wp in enumerate(w) if wp),
                ar.scalar(0))
    c = [ar.scalar(wp + 2) for wp in w]
    return 2 * (2 * gbar - 2) * first - 2 * ar.quadratic_form(pinv, c)


def theta_by_definition(system: LaplacianSystem,
                        weights: Mapping[str, int]) -> Scalar:
    """θ = Σ_{p,q} w(p) w(q) r(p,q)，用作矩阵公式的对照"""
    ar = system.arithmetic
    total = ar.scalar(0)
    ids = [vid for vid in system.ordering if weights[vid]]
    for p in ids:
        for q in ids:
            if p != q:
                total += weights[p] * weights[q] * resistance(system, p, q)
    return total


def theta_simple(system: LaplacianSystem, vertex_valences: Mapping[str, int],
                 g: int,
                 polarization: Optional[Mapping[str, int]] = None) -> Scalar:
    """q ≡ 0 时: θ = 2(2g-2) Σ (val(p)-2) l⁺_pp - 2 Σ val(p) val(q) l⁺_pq"""
    if polarization and any(polarization.values()):
        raise NonzeroPolarization("theta_simple 只适用于 q ≡ 0 的图")
    ar, pinv = system.arithmetic, system.pinv()
    diag = ar.diagonal(pinv)
    vals = [vertex_valences[vid] for vid in system.ordering]
    first = sum((ar.scalar(val - 2) * diag[i] for i, val in enumerate(vals)),
                ar.scalar(0))
    c = [ar.scalar(val) for val in vals]
    return 2 * (2 * g - 2) * first - 2 * ar.quadratic_form(pinv, c)


def theta_regular(system: LaplacianSystem,
                  vertex_valences: Mapping[str, int]) -> Scalar:
    """简单 r-正则图: θ = 2v(r-2)² tr(L⁺)"""
    degrees = {vertex_valences[vid] for vid in system.ordering}
    if len(degrees) != 1:
        raise NotRegular(f"图不是正则的, 价集合为 {sorted(degrees)}")
    r = degrees.pop()
    return 2 * system.size * (r - 2) ** 2 * system.arithmetic.trace(
        system.pinv())


def derived(tau_value: Scalar, theta_value: Scalar, length: Scalar,
            gbar: int) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    """由 τ、θ、ℓ、ḡ 得到 (φ, λ, ε, Z)"""
    if gbar < 1:
        raise InvalidGenus(f"ḡ = {gbar} < 1", gbar=gbar)
    phi = (5 * gbar - 2) * tau_value / gbar + theta_value / (4 * gbar) \
        - length / 4
    z = (2 * gbar - 1) * tau_value / gbar ** 2 + theta_value / (8 * gbar ** 2)
    lam = (3 * gbar - 3) * tau_value / (4 * gbar + 2) \
        + theta_value / (16 * gbar + 8) \
        + (gbar + 1) * length / (16 * gbar + 8)
    epsilon = (4 * gbar - 4) * tau_value / gbar + theta_value / (2 * gbar)
    return phi, lam, epsilon, z


def check_derived_identities(invariants: InvariantSet) -> Dict[str, Scalar]:
    """φ = 3ḡZ - (ε+ℓ)/4 与 λ = (ḡ-1)φ/(6(2ḡ+1)) + (ε+ℓ)/12 的残差"""
    gbar = invariants.gbar
    e_plus_l = invariants.epsilon + invariants.length
    phi = 3 * gbar * invariants.z - e_plus_l / 4
    lam = (gbar - 1) * invariants.phi / (6 * (2 * gbar + 1)) + e_plus_l / 12
    return {"phi": invariants.phi - phi, "lambda": invariants.lambda_inv - lam}


def ratios(invariants: InvariantSet) -> Dict[str, Scalar]:
    """τ/ℓ, θ/ℓ, φ/ℓ, λ/ℓ, ε/ℓ, Z/ℓ"""
    length = invariants.length
    return {
        "tau": invariants.tau / length,
        "theta": invariants.theta / length,
        "phi": invariants.phi / length,
        "lambda": invariants.lambda_inv / length,
        "epsilon": invariants.epsilon / length,
        "z": invariants.z / length,
    }


def _edge_density(system: LaplacianSystem, edge: Edge) -> Scalar:
    l_pq, pp, pq, qq = _edge_terms(system, edge)
    return -(l_pq + l_pq ** 2 * (pp - 2 * pq + qq))


def canonical_measure(system: LaplacianSystem,
                      edges: Optional[Sequence[Edge]] = None,
                      vertex_valences: Optional[Mapping[str, int]] = None
                      ) -> MeasureReport:
    """μ_can: 点质量 1 - val(p)/2，边密度 -(l_pq + l_pq² r(p,q))"""
    ar = system.arithmetic
    edges = system.graph.edges if edges is None else edges
    vals = vertex_valences or valences(system.graph)
    return MeasureReport(
        which="canonical",
        point_masses={vid: ar.scalar(Fraction(2 - vals[vid], 2))
                      for vid in system.ordering},
        edge_densities={e.id: _edge_density(system, e) for e in edges},
        edge_lengths={e.id: ar.scalar(e.length) for e in edges},
    )


def canonical_measure_via_complements(
        system: LaplacianSystem,
        edges: Optional[Sequence[Edge]] = None,
        vertex_valences: Optional[Mapping[str, int]] = None
) -> MeasureReport:
    """μ_can 的另一种写法: 边密度 1/(L_i + R_i)，桥上为 0"""
    ar = system.arithmetic
    edges = system.graph.edges if edges is None else edges
    vals = vertex_valences or valences(system.graph)
    densities = {}
    for e in edges:
        complement = resistance_complement(system, e)
        densities[e.id] = ar.scalar(0) if complement is None \
            else 1 / (ar.scalar(e.length) + complement)
    return MeasureReport(
        which="canonical",
        point_masses={vid: ar.scalar(Fraction(2 - vals[vid], 2))
                      for vid in system.ordering},
        edge_densities=densities,
        edge_lengths={e.id: ar.scalar(e.length) for e in edges},
    )


def admissible_measure(system: LaplacianSystem,
                       edges: Optional[Sequence[Edge]] = None,
                       polarization: Optional[Mapping[str, int]] = None,
                       gbar: Optional[int] = None) -> MeasureReport:
    """μ_ad = (1/ḡ) Σ q(p) δ_p - (1/ḡ) Σ_e (l_pq + l_pq² r(p,q)) dx"""
    ar = system.arithmetic
    edges = system.graph.edges if edges is None else edges
    q = polarization if polarization is not None \
        else system.graph.polarization
    gbar = genus(system.graph).gbar if gbar is None else gbar
    if gbar < 1:
        raise InvalidGenus(f"ḡ = {gbar} < 1", gbar=gbar)
    return MeasureReport(
        which="admissible",
        point_masses={vid: ar.scalar(Fraction(q.get(vid, 0), gbar))
                      for vid in system.ordering},
        edge_densities={e.id: _edge_density(system, e) / gbar for e in edges},
        edge_lengths={e.id: ar.scalar(e.length) for e in edges},
    )


def core_invariants(system: LaplacianSystem) -> InvariantSet:
    """适当图上的完整不变量 (不含自环修正)"""
    graph = system.graph
    data = genus(graph)
    length = system.arithmetic.scalar(total_length(graph))
    tau_value = tau(system)
    theta_value = theta(system, canonical_weights(graph), data.gbar)
    phi, lam, epsilon, z = derived(tau_value, theta_value, length, data.gbar)
    return InvariantSet(length=length, g=data.g, gbar=data.gbar,
                        tau=tau_value, theta=theta_value, epsilon=epsilon,
                        phi=phi, lambda_inv=lam, z=z)


def _measures(system: LaplacianSystem) -> Tuple[MeasureReport, MeasureReport]:
    return canonical_measure(system), admissible_measure(system)


def compute_all(graph: PMGraph, mode: Optional[ScalarMode] = None,
                loop_strategy: Optional[LoopStrategy] = None,
                variant: Optional[Variant] = None,
                measures: bool = False,
                check: bool = True,
                strict: bool = False,
                tolerance: Optional[float] = None) -> ComputationResult:
    """完整流程: 校验 → 亏格 → 约化 → L → L⁺ → τ → θ → 导出量 → 自环修正"""
    mode = mode or ScalarMode(kind=settings.DEFAULT_MODE,
                              digits=settings.BIGFLOAT_DIGITS
                              if settings.DEFAULT_MODE == "bigfloat" else None)
    loop_strategy = loop_strategy or settings.LOOP_STRATEGY
    variant = variant or settings.PSEUDO_INVERSE_VARIANT
    ar = arithmetic_for(mode)

    ensure_valid(graph, require_effective=True)
    data = genus(graph)
    core, ledger = reduce_to_adequate(graph, loop_strategy)
    logger.info("开始计算不变量",
                extra={"vertices": len(core.vertices),
                       "edges": len(core.edges), "mode": mode.kind.value,
                       "gbar": data.gbar, "bouquet": ledger.bouquet_flag})

    canonical = admissible = None
    if ledger.bouquet_flag:
        invariants = bouquet_invariants(ledger.loop_length_total, data.gbar,
                                        g=data.g, arithmetic=ar)
        if measures:
            core = subdivide_self_loops(core)
            canonical, admissible = _measures(
                solve_system(core, ar, variant))
        return ComputationResult(invariants=invariants, core=core,
                                 ledger=ledger, canonical=canonical,
                                 admissible=admissible)

    system = solve_system(core, ar, variant)
    if check and mode.kind != ModeKind.EXACT:
        if tolerance is None:
            tolerance = settings.PENROSE_ATOL \
                if mode.kind == ModeKind.MACHINE \
                else 10.0 ** (-(mode.digits - 8))
        check_precision(system, tolerance, strict=strict)

    invariants = apply_corrections(core_invariants(system), ledger, ar)
    if measures:
        canonical, admissible = _measures(system)
    return ComputationResult(invariants=invariants, core=core, ledger=ledger,
                             canonical=canonical, admissible=admissible)


def _compute_job(args) -> ComputationResult:
    graph, mode, loop_strategy, variant, measures, strict, tolerance = args
    return compute_all(graph, mode, loop_strategy, variant, measures,
                       strict=strict, tolerance=tolerance)


def compute_many(graphs: Sequence[PMGraph], mode: Optional[ScalarMode] = None,
                 jobs: int = 1, loop_strategy: Optional[LoopStrategy] = None,
                 variant: Optional[Variant] = None,
                 measures: bool = False,
                 strict: bool = False,
                 tolerance: Optional[float] = None) -> List[ComputationResult]:
    """多个图独立计算；jobs > 1 时使用进程池，结果保持输入顺序"""
    tasks = [(g, mode, loop_strategy, variant, measures, strict, tolerance)
             for g in graphs]
    if mode is not None and mode.kind == ModeKind.BIGFLOAT and jobs > 1:
        # 独立 MPContext 的 mpf 无法跨进程序列化
        logger.info("bigfloat 模式不使用进程池", extra={"jobs": jobs})
        jobs = 1
    if jobs <= 1 or len(tasks) <= 1:
        return [_compute_job(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_compute_job, tasks))
