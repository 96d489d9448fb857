"""Weighted homomorphism and injective-homomorphism counts.

For a centered graph with weights beta(x, y) = 1{xy edge} - p (zero on the
diagonal), the weighted hom count of a multigraph H sums, over ALL maps phi
from V(H) to the graph, the product of beta(phi(u), phi(w))^mult over the
edges of H; inj restricts to injective maps. The two are tied by partition
Moebius inversion:

    inj(M, G) = sum over set partitions P of V(M) of
                mobius(P) * hom(M / P, G),

where M / P merges each block and mobius(P) is the product over blocks of
(-1)^(|B|-1) (|B|-1)!. Any merge of adjacent motif vertices creates a loop,
a loop's weight is identically zero, so those quotients contribute nothing
and no loop special-casing is needed anywhere.

hom itself is evaluated by sum-product variable elimination: each edge of H
becomes an (n x n) factor beta^mult and shared vertices are contracted out;
the contraction tree is compiled once per quotient shape and replayed as a
single einsum with a precomputed path, so family statistics evaluated on
many sampled graphs do no planning work in the hot loop.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ParameterError
from .graphs import CenteredGraph
from .motifs import Motif

_PARTITION_VERTEX_CAP = 8
_BRUTE_FORCE_WORK_CAP = 10 ** 8
_EINSUM_MEMORY_LIMIT = 2 ** 22


@dataclass(frozen=True)
class MultiMotif:
    """Multigraph pattern: edge and loop multiplicities on vertices 0..v-1."""

    v: int
    edges: tuple  # ((u, w), mult) with u < w, sorted
    loops: tuple  # (u, mult), sorted

    @classmethod
    def from_motif(cls, motif: Motif) -> "MultiMotif":
        return cls(motif.v,
                   tuple(sorted((e, 1) for e in motif.edges)),
                   ())

    @property
    def has_loops(self) -> bool:
        return bool(self.loops)

    @property
    def edge_count(self) -> int:
        return (sum(m for _, m in self.edges)
                + sum(m for _, m in self.loops))


@dataclass(frozen=True)
class PartitionTerm:
    """One set partition with its Moebius coefficient for inj inversion."""

    blocks: tuple
    mobius: int


def partition_terms(v: int) -> list:
    """All set partitions of range(v) with Moebius coefficients.

    Guarded at v <= 8 (Bell(8) = 4140 partitions).
    """
    if v < 0:
        raise ParameterError(f"vertex count must be >= 0, got {v}")
    if v > _PARTITION_VERTEX_CAP:
        raise CapacityError(f"partition expansion capped at v={_PARTITION_VERTEX_CAP}, "
                            f"got {v}")
    return list(_partition_terms_cached(v))


@lru_cache(maxsize=None)
def _partition_terms_cached(v: int) -> tuple:
    partitions: list[list[list[int]]] = [[]]
    for x in range(v):
        grown = []
        for part in partitions:
            for i in range(len(part)):
                grown.append([blk + [x] if j == i else list(blk)
                              for j, blk in enumerate(part)])
            grown.append([list(blk) for blk in part] + [[x]])
        partitions = grown
    out = []
    for part in partitions:
        mob = 1
        for blk in part:
            mob *= (-1) ** (len(blk) - 1) * math.factorial(len(blk) - 1)
        out.append(PartitionTerm(tuple(tuple(blk) for blk in part), mob))
    return tuple(out)


def quotient(motif, blocks) -> MultiMotif:
    """Merge each block of a vertex partition; edges inside a block turn
    into loops, multiplicities accumulate."""
    mm = motif if isinstance(motif, MultiMotif) else MultiMotif.from_motif(motif)
    owner = {}
    for b, blk in enumerate(blocks):
        for u in blk:
            if u in owner:
                raise ParameterError("partition blocks overlap")
            owner[u] = b
    if len(owner) != mm.v:
        raise ParameterError("partition does not cover the vertex set")
    edges: dict = {}
    loops: dict = {}
    for (u, w), m in mm.edges:
        bu, bw = owner[u], owner[w]
        if bu == bw:
            loops[bu] = loops.get(bu, 0) + m
        else:
            key = (bu, bw) if bu < bw else (bw, bu)
            edges[key] = edges.get(key, 0) + m
    for u, m in mm.loops:
        loops[owner[u]] = loops.get(owner[u], 0) + m
    return MultiMotif(len(blocks),
                      tuple(sorted(edges.items())),
                      tuple(sorted(loops.items())))


# ---------------------------------------------------------------------------
# contraction plans


@dataclass(frozen=True)
class _Plan:
    expr: str
    mults: tuple
    path: tuple
    isolated: int

    def run(self, powers: dict, n: int) -> float:
        if not self.mults:
            return float(n) ** self.isolated
        value = np.einsum(self.expr, *(powers[m] for m in self.mults),
                          optimize=self.path)
        return float(value) * float(n) ** self.isolated


@lru_cache(maxsize=4096)
def _compile_plan(v: int, edges: tuple) -> _Plan:
    """Contraction plan for a loop-free multimotif given as ((u, w), mult)."""
    if v > 52:
        raise CapacityError(f"contraction supports at most 52 vertices, got {v}")
    letters = string.ascii_letters
    touched = set()
    for (u, w), _ in edges:
        touched.add(u)
        touched.add(w)
    expr = ",".join(letters[u] + letters[w] for (u, w), _ in edges) + "->"
    mults = tuple(m for _, m in edges)
    if not edges:
        return _Plan("", (), (), v - len(touched))
    probe = [np.empty((2, 2)) for _ in edges]
    mode = "optimal" if len(edges) <= 8 else "greedy"
    path = np.einsum_path(expr, *probe, optimize=(mode, _EINSUM_MEMORY_LIMIT))[0]
    return _Plan(expr, mults, tuple(tuple(p) if isinstance(p, (list, tuple)) else p
                                    for p in path),
                 v - len(touched))


def _edge_powers(dense: np.ndarray, mults, cache: dict | None = None) -> dict:
    powers = {} if cache is None else cache
    for m in mults:
        if m not in powers:
            powers[m] = dense if m == 1 else dense ** m
    return powers


def hom_weighted(h, gc: CenteredGraph) -> float:
    """Weighted hom count of a (multi)motif against a centered graph.

    Any loop makes every term vanish (zero diagonal), so the result is 0.
    """
    mm = h if isinstance(h, MultiMotif) else MultiMotif.from_motif(h)
    if mm.has_loops:
        return 0.0
    plan = _compile_plan(mm.v, mm.edges)
    dense = gc.dense()
    return plan.run(_edge_powers(dense, plan.mults), gc.n)


_INJ_PLAN_CACHE: dict = {}


def _inj_terms(motif: Motif) -> tuple:
    """(mobius, plan) terms for inj via partition inversion, cached by
    isomorphism class. Loop-bearing quotients are dropped at compile time."""
    key = motif.canonical_key
    terms = _INJ_PLAN_CACHE.get(key)
    if terms is None:
        if motif.v > _PARTITION_VERTEX_CAP:
            raise CapacityError(f"inj inversion capped at v={_PARTITION_VERTEX_CAP}, "
                                f"got {motif.v}")
        built = []
        for term in _partition_terms_cached(motif.v):
            q = quotient(motif, term.blocks)
            if q.has_loops:
                continue
            built.append((term.mobius, _compile_plan(q.v, q.edges)))
        terms = _INJ_PLAN_CACHE[key] = tuple(built)
    return terms


def _max_mult(terms) -> int:
    return max((max(plan.mults, default=1) for _, plan in terms), default=1)


def _inj_from_dense(motif: Motif, dense: np.ndarray, n: int,
                    powers: dict | None = None) -> float:
    if motif.v > n:
        return 0.0
    terms = _inj_terms(motif)
    powers = _edge_powers(dense, range(1, _max_mult(terms) + 1), powers)
    return math.fsum(mob * plan.run(powers, n) for mob, plan in terms)


def inj_weighted(motif: Motif, gc: CenteredGraph) -> float:
    """Injective weighted count of a motif against a centered graph.

    Returns 0 when the motif has more vertices than the graph. The empty
    motif counts the single empty map, value 1.
    """
    if motif.v > gc.n:
        return 0.0
    if motif.v == 0:
        return 1.0
    return _inj_from_dense(motif, gc.dense(), gc.n)


def inj_bruteforce(motif: Motif, gc: CenteredGraph) -> float:
    """Direct sum over injective maps; the independent slow path.

    Guarded at n^v <= 1e8 candidate tuples.
    """
    n, v = gc.n, motif.v
    if v > n:
        return 0.0
    if float(n) ** v > _BRUTE_FORCE_WORK_CAP:
        raise CapacityError(f"brute force refused: {n}^{v} tuples")
    rows = gc.dense().tolist()
    edges = [(u, w) for u, w in motif.edges]
    total = []
    for tup in itertools.permutations(range(n), v):
        prod = 1.0
        for u, w in edges:
            prod *= rows[tup[u]][tup[w]]
            if prod == 0.0:
                break
        total.append(prod)
    return math.fsum(total)
