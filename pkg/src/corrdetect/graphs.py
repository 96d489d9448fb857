"""Graph primitives and samplers for the correlated subgraph model.

The population model: a pair of graphs on [n] is rho-correlated when the
first is Erdos-Renyi G(n, p) and, conditionally on it and on a latent
uniform permutation pi*, each pair {pi*(u), pi*(v)} of the second graph is
an edge with probability p + rho(1-p) if {u, v} is an edge of the first and
p(1-rho) otherwise. Marginally both graphs are G(n, p) and matched edge
indicators have correlation rho. Observations are induced subgraphs on s
vertices sampled uniformly without replacement.

Graphs are immutable. Adjacency is kept as one Python-int bitmask per row,
built lazily from the edge array, so a graph on 10^4 vertices stays cheap
to create and adjacency queries stay O(1) word operations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, DegenerateParameterError, ParameterError
from .rng import derive_rng

_DENSE_VERTEX_CAP = 4096


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return derive_rng(int(seed))


class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1.

    Edges are stored as a read-only (m, 2) array with u < v in every row;
    bitmask rows are materialized on first adjacency query.
    """

    __slots__ = ("n", "_edges", "_rows")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ParameterError(f"vertex count must be nonnegative, got {n}")
        self.n = int(n)
        arr = np.asarray(sorted({(u, v) if u < v else (v, u) for u, v in edges}),
                         dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        else:
            lo, hi = int(arr.min()), int(arr.max())
            if lo < 0 or hi >= self.n:
                raise ParameterError(f"edge endpoint out of range [0, {self.n})")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ParameterError("self-loops are not allowed")
        arr.setflags(write=False)
        self._edges = arr
        self._rows = None

    @classmethod
    def _from_sorted_array(cls, n: int, arr: np.ndarray) -> "SimpleGraph":
        # fast path for samplers: arr already deduplicated, sorted, u < v
        g = cls.__new__(cls)
        g.n = int(n)
        arr.setflags(write=False)
        g._edges = arr
        g._rows = None
        return g

    @property
    def edge_count(self) -> int:
        return self._edges.shape[0]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, v in self._edges:
            yield int(u), int(v)

    def edge_array(self) -> np.ndarray:
        return self._edges

    def _bitrows(self) -> list[int]:
        rows = self._rows
        if rows is None:
            rows = [0] * self.n
            for u, v in self._edges:
                rows[u] |= 1 << int(v)
                rows[v] |= 1 << int(u)
            self._rows = rows
        return rows

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._bitrows()[u] >> v) & 1)

    def degree(self, u: int) -> int:
        return self._bitrows()[u].bit_count()

    def neighbors(self, u: int) -> list[int]:
        row = self._bitrows()[u]
        out = []
        while row:
            low = row & -row
            out.append(low.bit_length() - 1)
            row ^= low
        return out

    def degree_sequence(self) -> list[int]:
        return sorted(self.degree(u) for u in range(self.n))

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimpleGraph) and self.n == other.n
                and self._edges.shape == other._edges.shape
                and bool(np.all(self._edges == other._edges)))

    def __hash__(self):
        return hash((self.n, self._edges.tobytes()))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, m={self.edge_count})"


@dataclass(frozen=True)
class ModelParams:
    """Population parameters (n, s, p, rho) of one detection instance."""

    n: int
    s: int
    p: float
    rho: float

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        if not 1 <= self.s <= self.n:
            raise ParameterError(f"s must lie in [1, n], got s={self.s}, n={self.n}")
        if self.p in (0.0, 1.0):
            raise DegenerateParameterError("p in {0, 1} makes the model degenerate")
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"p must lie in (0, 1), got {self.p}")
        if not 0.0 <= self.rho <= 1.0:
            raise ParameterError(f"rho must lie in [0, 1], got {self.rho}")
        if self.p > 0.5:
            warnings.warn("p > 1/2 is outside the analyzed regime; results carry "
                          "no guarantees there", stacklevel=2)

    @property
    def gamma(self) -> float:
        """Signal ratio rho(1-p)/p."""
        return self.rho * (1.0 - self.p) / self.p

    @property
    def h_gamma(self) -> float:
        """(1+gamma)log(1+gamma) - gamma, the exponent governing edge overshoot."""
        g = self.gamma
        return (1.0 + g) * math.log1p(g) - g


@dataclass(frozen=True)
class CenteredGraph:
    """A graph viewed through centered edge weights 1{uv in E} - p, zero diagonal."""

    base: SimpleGraph
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"centering p must lie in [0, 1], got {self.p}")

    @property
    def n(self) -> int:
        return self.base.n

    def weight(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return (1.0 if self.base.has_edge(u, v) else 0.0) - self.p

    def row_sum(self, u: int) -> float:
        return self.base.degree(u) - (self.base.n - 1) * self.p

    def dense(self) -> np.ndarray:
        """Materialize the full weight matrix; guarded, workspace use only."""
        n = self.base.n
        if n > _DENSE_VERTEX_CAP:
            raise CapacityError(f"dense weights refused for n={n} > {_DENSE_VERTEX_CAP}")
        w = np.full((n, n), -self.p)
        e = self.base.edge_array()
        if e.size:
            w[e[:, 0], e[:, 1]] += 1.0
            w[e[:, 1], e[:, 0]] += 1.0
        np.fill_diagonal(w, 0.0)
        return w


def center(graph: SimpleGraph, p: float) -> CenteredGraph:
    """Center a graph at density p. Requires p strictly inside (0, 1)."""
    if p in (0.0, 1.0):
        raise DegenerateParameterError("centering at p in {0, 1} is degenerate")
    if not 0.0 < p < 1.0:
        raise ParameterError(f"centering p must lie in (0, 1), got {p}")
    return CenteredGraph(graph, p)


@dataclass(frozen=True)
class VertexSample:
    """An ordered sample of distinct parent vertices; order fixes the relabeling."""

    parent_n: int
    chosen: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.chosen)) != len(self.chosen):
            raise ParameterError("sampled vertices must be distinct")
        if self.chosen and not (0 <= min(self.chosen) and max(self.chosen) < self.parent_n):
            raise ParameterError("sampled vertex out of parent range")

    def __len__(self) -> int:
        return len(self.chosen)

    def as_set(self) -> frozenset:
        return frozenset(self.chosen)


@dataclass(frozen=True)
class Permutation:
    """Bijection of [n] stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ParameterError("images must be a permutation of 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, seed) -> "Permutation":
        rng = _as_rng(seed)
        return cls(tuple(int(x) for x in rng.permutation(n)))

    def __call__(self, v: int) -> int:
        return self.images[v]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: v -> self(other(v))."""
        return Permutation(tuple(self.images[x] for x in other.images))


@dataclass(frozen=True)
class Injection:
    """Injective partial map between vertex sets, stored as sorted (src, dst) pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        srcs = [a for a, _ in self.pairs]
        dsts = [b for _, b in self.pairs]
        if len(set(srcs)) != len(srcs):
            raise ParameterError("injection domain has a repeated vertex")
        if len(set(dsts)) != len(dsts):
            raise ParameterError("injection image has a repeated vertex")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def from_mapping(cls, mapping: dict) -> "Injection":
        return cls(tuple((int(k), int(v)) for k, v in mapping.items()))

    def as_dict(self) -> dict:
        return dict(self.pairs)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __call__(self, v: int) -> int:
        return self.as_dict()[v]


# ---------------------------------------------------------------------------
# samplers


def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


def _row_offsets(n: int) -> np.ndarray:
    u = np.arange(n, dtype=np.int64)
    return u * (2 * n - u - 1) // 2


def _decode_pairs(n: int, flat: np.ndarray) -> np.ndarray:
    """Map flat upper-triangle indices (row-major, u < v) back to (u, v) rows."""
    offsets = _row_offsets(n)
    u = np.searchsorted(offsets, flat, side="right") - 1
    v = flat - offsets[u] + u + 1
    return np.column_stack([u, v]).astype(np.int64)


def _validate_pair_params(n: int, p: float):
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    if p in (0.0, 1.0):
        raise DegenerateParameterError("p in {0, 1} leaves the correlation "
                                       "undefined")
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")


def sample_er(n: int, p: float, seed) -> SimpleGraph:
    """One G(n, p) draw; every vertex pair is an edge independently w.p. p.

    Accepts the closed range p in [0, 1]; the endpoints give the empty and
    the complete graph.
    """
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    rng = _as_rng(seed)
    bits = rng.random(_pair_count(n)) < p
    return SimpleGraph._from_sorted_array(n, _decode_pairs(n, np.flatnonzero(bits)))


def sample_correlated_pair(n: int, p: float, rho: float, seed):
    """Draw (G1, G2, pi*) from the rho-correlated pair model.

    Conditionally on G1 and the uniform latent permutation pi*, the pair
    {pi*(u), pi*(v)} is an edge of G2 with probability p + rho(1-p) when
    {u, v} is an edge of G1 and p(1-rho) otherwise, independently across
    pairs. Returns the two graphs and pi* as a Permutation.
    """
    _validate_pair_params(n, p)
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho must lie in [0, 1], got {rho}")
    rng = _as_rng(seed)
    m = _pair_count(n)
    bits1 = rng.random(m) < p
    thresh = np.where(bits1, p + rho * (1.0 - p), p * (1.0 - rho))
    bits2 = rng.random(m) < thresh
    images = rng.permutation(n)

    g1 = SimpleGraph._from_sorted_array(n, _decode_pairs(n, np.flatnonzero(bits1)))
    mapped = images[_decode_pairs(n, np.flatnonzero(bits2))]
    mapped.sort(axis=1)
    order = np.lexsort((mapped[:, 1], mapped[:, 0]))
    g2 = SimpleGraph._from_sorted_array(n, mapped[order])
    return g1, g2, Permutation(tuple(int(x) for x in images))


def sample_induced_subgraph(graph: SimpleGraph, s: int, seed):
    """Uniform induced subgraph on s distinct vertices.

    Returns (subgraph, sample); the subgraph relabels the chosen vertices to
    0..s-1 in chosen order.
    """
    if not 0 <= s <= graph.n:
        raise ParameterError(f"s must lie in [0, n], got s={s}, n={graph.n}")
    rng = _as_rng(seed)
    chosen = [int(x) for x in rng.choice(graph.n, size=s, replace=False)]
    return induced_subgraph(graph, chosen), VertexSample(graph.n, tuple(chosen))


def induced_subgraph(graph: SimpleGraph, chosen: Sequence[int]) -> SimpleGraph:
    """Induced subgraph relabeled to 0..len(chosen)-1 in the given order."""
    rows = graph._bitrows()
    edges = []
    for i, u in enumerate(chosen):
        row = rows[u]
        for j in range(i + 1, len(chosen)):
            if (row >> chosen[j]) & 1:
                edges.append((i, j))
    return SimpleGraph(len(chosen), edges)


def overlap_size(sample1: VertexSample, sample2: VertexSample, pi: Permutation) -> int:
    """|pi(V1) intersect V2|, the number of matched vertices both samples see."""
    if sample1.parent_n != len(pi) or sample2.parent_n != len(pi):
        raise ParameterError("samples and permutation disagree on parent size")
    return len({pi(v) for v in sample1.chosen} & sample2.as_set())


# ---------------------------------------------------------------------------
# edge-list text I/O
#
# Format: one edge per line, two whitespace-separated vertex ids, optionally a
# third numeric weight token. '#' starts a comment. Ids are arbitrary strings;
# readers intern them to 0..n-1 in first-appearance order over kept edges and
# return the table. Writers emit the interned ids when no table is supplied.


def parse_edge_list(lines: Iterable[str], m0: float = 1.0):
    """Parse edge-list text. Returns (graph, ids).

    Unweighted lines carry implicit weight 1; an edge is kept iff some line
    for it has weight >= m0. Duplicate edges collapse to one, self-loops are
    dropped. Malformed lines raise ParameterError with the line number.
    """
    index: dict[str, int] = {}
    edges = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 2:
            weight = 1.0
        elif len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError as exc:
                raise ParameterError(f"line {lineno}: bad weight {tokens[2]!r}") from exc
        else:
            raise ParameterError(f"line {lineno}: expected 'u v' or 'u v w', "
                                 f"got {len(tokens)} tokens")
        if weight < m0:
            continue
        a, b = tokens[0], tokens[1]
        if a == b:
            continue
        for tok in (a, b):
            if tok not in index:
                index[tok] = len(index)
        u, v = index[a], index[b]
        edges.add((u, v) if u < v else (v, u))
    ids = [None] * len(index)
    for tok, i in index.items():
        ids[i] = tok
    return SimpleGraph(len(index), edges), ids


def read_edge_list(path, m0: float = 1.0):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh, m0=m0)


def write_edge_list(path, graph: SimpleGraph, ids: Sequence[str] | None = None):
    """Write one 'u v' line per edge; isolated vertices are not representable."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in graph.edges():
            if ids is None:
                fh.write(f"{u} {v}\n")
            else:
                fh.write(f"{ids[u]} {ids[v]}\n")
