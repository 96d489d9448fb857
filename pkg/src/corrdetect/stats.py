"""Detection statistics and thresholds.

Two testing routes are implemented.

The polynomial route scores a pair of centered observations with

    T = sum over family motifs M of  omega_M * inj(M, G1c) * inj(M, G2c),

with omega_M = rho^e(M) (n-v(M))! / ( n! (p(1-p))^e(M) aut(M) ). For a
family of connected, pairwise non-isomorphic motifs this weighting makes
the statistic exactly calibrated: its null mean is 0 and

    E_H1[T] = Var_H0[T]
            = sum_M rho^(2 e(M)) * ( s! (n-v(M))! / ( n! (s-v(M))! ) )^2,

with motifs larger than the sample contributing nothing. The test accepts
the correlated hypothesis when T >= tau with tau = E_H1[T] / 2.

The information-theoretic route maximizes, over injections phi defined on m
sample-1 vertices, the number of vertex pairs that are edges in the first
observation and map to edges of the second; its threshold is
C(m,2) p^2 (1 + gamma - eps*gamma) with gamma = rho(1-p)/p. The exhaustive
maximization is exponential and guarded; it exists as ground truth for
small instances, not as a practical detector.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

from .errors import (CapacityError, DegenerateParameterError,
                     ParameterError)
from .graphs import CenteredGraph, Injection, ModelParams, SimpleGraph
from .homcount import _inj_from_dense, inj_weighted
from .motifs import Motif, MotifFamily

_IT_WORK_CAP = 10 ** 8


def weight_omega(motif: Motif, params: ModelParams) -> float:
    """Calibration weight of one motif; computed in log space.

    rho = 0 zeroes every weight (and the statistic); that is allowed but
    almost surely a configuration mistake, so it warns.
    """
    if motif.v > params.n:
        raise ParameterError(f"motif has {motif.v} vertices, population has "
                             f"only {params.n}")
    if params.rho == 0.0:
        warnings.warn("rho = 0 makes every motif weight zero", stacklevel=2)
        return 0.0
    e = motif.edge_count
    log_w = (e * math.log(params.rho)
             - e * math.log(params.p * (1.0 - params.p))
             - math.log(motif.aut)
             - math.fsum(math.log(params.n - i) for i in range(motif.v)))
    return math.exp(log_w)


@dataclass(frozen=True)
class WeightedFamily:
    """A motif family with its omega weights under fixed model parameters."""

    family: MotifFamily
    params: ModelParams
    weights: tuple

    @classmethod
    def build(cls, family: MotifFamily, params: ModelParams) -> "WeightedFamily":
        if len(family) == 0:
            raise ParameterError("family is empty")
        return cls(family, params,
                   tuple(weight_omega(m, params) for m in family))


def _falling_ratio(s: int, n: int, v: int) -> float:
    """prod_{i<v} (s-i)/(n-i); zero when the motif outgrows the sample."""
    if v > s:
        return 0.0
    r = 1.0
    for i in range(v):
        r *= (s - i) / (n - i)
    return r


def expected_signal(wf: WeightedFamily) -> float:
    """E_H1[T] = Var_H0[T] for the weighted family statistic."""
    params = wf.params
    return math.fsum(
        params.rho ** (2 * m.edge_count) * _falling_ratio(params.s, params.n, m.v) ** 2
        for m in wf.family)


def threshold_tau_poly(wf: WeightedFamily) -> float:
    """Midpoint threshold between the null mean (0) and the H1 mean."""
    signal = expected_signal(wf)
    if signal == 0.0:
        raise DegenerateParameterError(
            "the expected signal is zero (rho = 0 or every motif outgrows "
            "the sample); no threshold separates the hypotheses")
    return 0.5 * signal


def motif_statistic(wf: WeightedFamily, gc1: CenteredGraph, gc2: CenteredGraph) -> float:
    """Weighted family statistic on a pair of centered observations."""
    d1, d2 = gc1.dense(), gc2.dense()
    pw1: dict = {}
    pw2: dict = {}
    terms = []
    for w, m in zip(wf.weights, wf.family.members):
        if w == 0.0:
            continue
        a = _inj_from_dense(m, d1, gc1.n, pw1)
        if a == 0.0:
            continue
        b = _inj_from_dense(m, d2, gc2.n, pw2)
        terms.append(w * a * b)
    return math.fsum(terms)


def decide(statistic: float, threshold: float) -> bool:
    """True = correlated hypothesis; ties go to the alternative."""
    return statistic >= threshold


@dataclass(frozen=True)
class TestOutcome:
    statistic: float
    threshold: float
    correlated: bool


def run_test(wf: WeightedFamily, gc1: CenteredGraph, gc2: CenteredGraph) -> TestOutcome:
    stat = motif_statistic(wf, gc1, gc2)
    tau = threshold_tau_poly(wf)
    return TestOutcome(stat, tau, decide(stat, tau))


# ---------------------------------------------------------------------------
# information-theoretic route


@dataclass(frozen=True)
class IntersectionGraph:
    """Pairs of the injection domain that are edges on both sides."""

    domain: tuple
    edges: frozenset

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def intersection_graph(g1: SimpleGraph, g2: SimpleGraph,
                       injection: Injection) -> IntersectionGraph:
    dom = injection.domain
    phi = injection.as_dict()
    edges = set()
    for u, w in itertools.combinations(sorted(dom), 2):
        if g1.has_edge(u, w) and g2.has_edge(phi[u], phi[w]):
            edges.add((u, w))
    return IntersectionGraph(tuple(sorted(dom)), frozenset(edges))


def _it_work(s1: int, s2: int, m: int) -> float:
    return float(math.comb(s1, m)) * math.comb(s2, m) * math.factorial(m)


def it_statistic_exhaustive(g1: SimpleGraph, g2: SimpleGraph, m: int) -> int:
    """Exact max over size-m injections of the intersection edge count."""
    s1, s2 = g1.n, g2.n
    if not 1 <= m <= min(s1, s2):
        raise ParameterError(f"m must lie in [1, min(s1, s2)], got {m}")
    if _it_work(s1, s2, m) > _IT_WORK_CAP:
        raise CapacityError(f"exhaustive search needs ~{_it_work(s1, s2, m):.2e} "
                            f"injections, cap is {_IT_WORK_CAP:.0e}")
    rows2 = g2._bitrows()
    best = 0
    for dom in itertools.combinations(range(s1), m):
        local = [(i, j) for i in range(m) for j in range(i + 1, m)
                 if g1.has_edge(dom[i], dom[j])]
        if len(local) <= best:
            continue
        for img in itertools.permutations(range(s2), m):
            cnt = 0
            for i, j in local:
                cnt += (rows2[img[i]] >> img[j]) & 1
            if cnt > best:
                best = cnt
    return best


def it_statistic_greedy(g1: SimpleGraph, g2: SimpleGraph, m: int, seed,
                        restarts: int = 20) -> int:
    """HEURISTIC hill climbing over injections; best found value only.

    A feasible injection's score never exceeds the exhaustive maximum, so
    this is a lower bound. Not used by any acceptance path.
    """
    from .graphs import _as_rng

    s1, s2 = g1.n, g2.n
    if not 1 <= m <= min(s1, s2):
        raise ParameterError(f"m must lie in [1, min(s1, s2)], got {m}")
    rng = _as_rng(seed)
    rows2 = g2._bitrows()

    def score(dom, img):
        cnt = 0
        for i in range(m):
            for j in range(i + 1, m):
                if g1.has_edge(dom[i], dom[j]):
                    cnt += (rows2[img[i]] >> img[j]) & 1
        return cnt

    best = 0
    for _ in range(restarts):
        dom = [int(x) for x in rng.choice(s1, size=m, replace=False)]
        img = [int(x) for x in rng.choice(s2, size=m, replace=False)]
        cur = score(dom, img)
        improved = True
        while improved:
            improved = False
            # reassign or swap one image vertex
            for i in range(m):
                for x in range(s2):
                    if x == img[i]:
                        continue
                    if x in img:
                        j = img.index(x)
                        img[i], img[j] = img[j], img[i]
                        val = score(dom, img)
                        if val > cur:
                            cur, improved = val, True
                        else:
                            img[i], img[j] = img[j], img[i]
                    else:
                        old = img[i]
                        img[i] = x
                        val = score(dom, img)
                        if val > cur:
                            cur, improved = val, True
                        else:
                            img[i] = old
            # swap one domain vertex for an unused one
            for i in range(m):
                for x in range(s1):
                    if x in dom:
                        continue
                    old = dom[i]
                    dom[i] = x
                    val = score(dom, img)
                    if val > cur:
                        cur, improved = val, True
                    else:
                        dom[i] = old
        best = max(best, cur)
    return best


def default_m(n: int, s: int, eps: float = 0.1) -> int:
    """Injection size floor((1-eps) s^2 / n) used by the IT route."""
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    m = math.floor((1.0 - eps) * s * s / n)
    if m < 1:
        raise ParameterError(f"degenerate injection size m={m} at n={n}, s={s}")
    return m


def it_threshold(m: int, p: float, gamma: float, eps: float) -> float:
    """C(m,2) p^2 (1 + gamma - eps*gamma)."""
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if gamma < 0.0:
        raise ParameterError(f"gamma must be >= 0, got {gamma}")
    return math.comb(m, 2) * p * p * (1.0 + gamma - eps * gamma)


# ---------------------------------------------------------------------------
# admissibility diagnostics (finite-instance report, no asymptotic claims)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Numeric check of the admissibility conditions at one concrete instance.

    connected_ok: every family member is connected (condition 1).
    max_v_or_e / scale_log / scale_sqrt_s: the finite quantities behind the
    boundedness condition (2); reported, not judged.
    signal_sum / signal_ok: sum of rho^(2e) (s/n)^(2v) against the 800
    constant (condition 3).
    min_subgraph_mass / mass_threshold / mass_ok: min over members and their
    nonempty subgraphs of n^v' p^e' against n^eps0 (condition 4).
    """

    connected_ok: bool
    max_v_or_e: int
    scale_log: float
    scale_sqrt_s: float
    signal_sum: float
    signal_ok: bool
    min_subgraph_mass: float
    mass_threshold: float
    mass_ok: bool
    epsilon0: float


def _min_subgraph_mass(motif: Motif, n: int, p: float) -> float:
    """min over nonempty subgraphs of n^{v'} p^{e'}.

    Isolated vertices only raise the value, so it suffices to scan edge
    subsets with their incident vertices, plus the single-vertex subgraph.
    """
    best = float(n)
    edges = sorted(motif.edges)
    for r in range(1, len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            verts = {x for e in sub for x in e}
            best = min(best, float(n) ** len(verts) * p ** r)
    return best


def admissibility_report(family: MotifFamily, params: ModelParams,
                         epsilon0: float = 0.1) -> AdmissibilityReport:
    if len(family) == 0:
        raise ParameterError("family is empty")
    if not 0.0 < epsilon0 < 1.0:
        raise ParameterError(f"epsilon0 must lie in (0, 1), got {epsilon0}")
    n, s, p, rho = params.n, params.s, params.p, params.rho
    connected_ok = all(m.is_connected() for m in family)
    max_v_or_e = max(max(m.v, m.edge_count) for m in family)
    denom = max(math.log(max(math.log(n), math.e * 1e-12)),
                math.log(n / (s * rho)) if rho > 0 else math.inf)
    scale_log = math.log(n) / denom if denom > 0 else math.inf
    signal_sum = math.fsum(rho ** (2 * m.edge_count) * (s / n) ** (2 * m.v)
                           for m in family)
    min_mass = min(_min_subgraph_mass(m, n, p) for m in family)
    threshold = float(n) ** epsilon0
    return AdmissibilityReport(
        connected_ok=connected_ok,
        max_v_or_e=max_v_or_e,
        scale_log=scale_log,
        scale_sqrt_s=math.sqrt(s),
        signal_sum=signal_sum,
        signal_ok=signal_sum >= 800.0,
        min_subgraph_mass=min_mass,
        mass_threshold=threshold,
        mass_ok=min_mass >= threshold,
        epsilon0=epsilon0,
    )
