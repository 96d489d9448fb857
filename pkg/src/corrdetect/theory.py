"""Structural objects behind the impossibility arguments.

Given the latent permutation pi and an independent copy pit, the correlated
functional digraph tracks how vertex PAIRS of the two observation windows
chain together: every pair both maps of which land inside the second window
becomes a node, pairs move along pi, and pit glues each source pair to its
pit-image. Components are paths and cycles; the union of the cycle edges is
exactly C(I*, 2) where I* is the core set, the unique largest subset of the
first window on which pi and pit agree setwise into the second window.
P(|I*| = t) decays like (s/n)^(2t), which is what caps the second moment of
the likelihood ratio in the impossibility regime.

Also here: the exact hypergeometric law of the window overlap and the
closed-form tail bounds used by the threshold analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError
from .graphs import Permutation, VertexSample


def overlap_pmf(n: int, s: int, t: int) -> float:
    """P(|pi(V1) ∩ V2| = t) for independent uniform s-windows of [n]."""
    if not 1 <= s <= n:
        raise ParameterError(f"s must lie in [1, n], got s={s}, n={n}")
    if t < 0 or t > s:
        return 0.0
    num = math.comb(s, t) * math.comb(n - s, s - t)
    return float(Fraction(num, math.comb(n, s)))


# ---------------------------------------------------------------------------
# correlated functional digraph


@dataclass(frozen=True)
class DigraphDecomposition:
    """Component sizes after merging: cycles count their arrows (= nodes),
    paths count their nodes; a glued pair with no arrow is a path of size 1."""

    paths: tuple
    cycles: tuple


@dataclass(frozen=True)
class CoreSet:
    vertices: frozenset

    @property
    def size(self) -> int:
        return len(self.vertices)


def _window_pairs(vertices) -> list:
    vs = sorted(vertices)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _map_pair(pi: Permutation, e) -> tuple:
    a, b = pi(e[0]), pi(e[1])
    return (a, b) if a < b else (b, a)


def decompose_functional_digraph(pi: Permutation, pit: Permutation,
                                 sample1: VertexSample,
                                 sample2: VertexSample) -> DigraphDecomposition:
    """Path and cycle sizes of the correlated functional digraph.

    Nodes are source-side pairs whose pi (resp. pit) image stays in the
    second window, plus the image-side pairs; arrows run e -> pi(e), and
    e is glued to pit(e). A component is a cycle iff every merged node has
    in- and out-degree one.
    """
    if not len(pi) == len(pit) == sample1.parent_n == sample2.parent_n:
        raise ParameterError("permutations and samples disagree on parent size")
    v2 = sample2.as_set()
    s_pi = [v for v in sample1.chosen if pi(v) in v2]
    s_pit = [v for v in sample1.chosen if pit(v) in v2]

    nodes: dict = {}

    def node(side: str, pair) -> int:
        key = (side, pair)
        if key not in nodes:
            nodes[key] = len(nodes)
        return nodes[key]

    for e in _window_pairs(s_pi):
        node("L", e)
        node("R", _map_pair(pi, e))
    glue = []
    for e in _window_pairs(s_pit):
        glue.append((node("L", e), node("R", _map_pair(pit, e))))
    # image-side pairs both of whose endpoints are hit images also exist as
    # nodes even when no arrow touches them; they were created above iff an
    # arrow or glue referenced them, which covers every pair of T_pi or
    # T_pit by construction.

    parent = list(range(len(nodes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in glue:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    arrows = [(find(node("L", e)), find(node("R", _map_pair(pi, e))))
              for e in _window_pairs(s_pi)]

    roots = sorted({find(x) for x in range(len(nodes))})
    indeg = {r: 0 for r in roots}
    outdeg = {r: 0 for r in roots}
    adj = {r: set() for r in roots}
    for a, b in arrows:
        outdeg[a] += 1
        indeg[b] += 1
        adj[a].add(b)
        adj[b].add(a)

    seen = set()
    paths = []
    cycles = []
    for r in roots:
        if r in seen:
            continue
        comp = []
        stack = [r]
        seen.add(r)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        n_arrows = sum(outdeg[x] for x in comp)
        if comp and all(indeg[x] == 1 and outdeg[x] == 1 for x in comp):
            cycles.append(n_arrows)
        else:
            paths.append(len(comp))
    return DigraphDecomposition(tuple(sorted(paths)), tuple(sorted(cycles)))


def core_set(pi: Permutation, pit: Permutation, sample1: VertexSample,
             sample2: VertexSample) -> CoreSet:
    """Largest I inside the first window with pi(I) = pit(I) inside the second.

    Such sets are closed under union, so the maximum is unique: it is the
    union of the orbits of sigma = pit^{-1} o pi that stay inside
    {v in V1 : pi(v) in V2 and pit(v) in V2}.
    """
    if not len(pi) == len(pit) == sample1.parent_n == sample2.parent_n:
        raise ParameterError("permutations and samples disagree on parent size")
    v2 = sample2.as_set()
    eligible = {v for v in sample1.chosen if pi(v) in v2 and pit(v) in v2}
    pit_inv = pit.inverse()
    out = set()
    seen = set()
    for start in eligible:
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        x = pit_inv(pi(start))
        ok = start in eligible
        while x != start:
            orbit.append(x)
            seen.add(x)
            ok = ok and x in eligible
            x = pit_inv(pi(x))
        if ok:
            out.update(orbit)
    return CoreSet(frozenset(out))


# ---------------------------------------------------------------------------
# tail bounds


def hypergeometric_upper_tail_bound(n: int, s: int, eps: float) -> float:
    """Bound on P(overlap >= (1+eps) s^2/n)."""
    if not 1 <= s <= n:
        raise ParameterError(f"s must lie in [1, n], got s={s}, n={n}")
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return min(math.exp(-eps * eps * s * s / ((2.0 + eps) * n)),
               math.exp(-eps * eps * s ** 3 / (n * n)))


def hypergeometric_lower_tail_bound(n: int, s: int, eps: float) -> float:
    """Bound on P(overlap <= (1-eps) s^2/n)."""
    if not 1 <= s <= n:
        raise ParameterError(f"s must lie in [1, n], got s={s}, n={n}")
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    return min(math.exp(-eps * eps * s * s / (2.0 * n)),
               math.exp(-eps * eps * s ** 3 / (n * n)))


def binomial_upper_tail_bound(mu: float, delta: float) -> float:
    """Chernoff bound exp(-mu((1+d)log(1+d)-d)) on P(X >= (1+d) mu)."""
    if mu <= 0 or delta <= 0:
        raise ParameterError("mu and delta must be positive")
    return math.exp(-mu * ((1.0 + delta) * math.log1p(delta) - delta))


def binomial_upper_tail_bound_ratio(mu: float, delta: float) -> float:
    """Weaker algebraic form exp(-d^2 mu / (2+d)) of the upper bound."""
    if mu <= 0 or delta <= 0:
        raise ParameterError("mu and delta must be positive")
    return math.exp(-delta * delta * mu / (2.0 + delta))


def binomial_lower_tail_bound(mu: float, delta: float) -> float:
    """Bound exp(-d^2 mu / 2) on P(X <= (1-d) mu)."""
    if mu <= 0 or not 0 < delta < 1:
        raise ParameterError("require mu > 0 and delta in (0, 1)")
    return math.exp(-delta * delta * mu / 2.0)


_TAIL_KINDS = {
    "hypergeometric-upper": (hypergeometric_upper_tail_bound, ("n", "s", "eps")),
    "hypergeometric-lower": (hypergeometric_lower_tail_bound, ("n", "s", "eps")),
    "binomial-upper": (binomial_upper_tail_bound, ("mu", "delta")),
    "binomial-upper-ratio": (binomial_upper_tail_bound_ratio, ("mu", "delta")),
    "binomial-lower": (binomial_lower_tail_bound, ("mu", "delta")),
}


def tail_bounds(kind: str, params: dict) -> float:
    """Dispatch on the named bound; see _TAIL_KINDS for the argument lists."""
    if kind not in _TAIL_KINDS:
        raise ParameterError(f"unknown tail bound kind {kind!r}; "
                             f"choose from {sorted(_TAIL_KINDS)}")
    fn, names = _TAIL_KINDS[kind]
    try:
        args = [params[name] for name in names]
    except KeyError as exc:
        raise ParameterError(f"{kind} needs parameters {names}") from exc
    return fn(*args)
