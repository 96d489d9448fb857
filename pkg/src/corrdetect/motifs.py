"""Motif families and isomorphism machinery.

A motif is a small unlabeled graph used as a counting pattern. Families used
by the detection statistics:

- free trees with a given edge count,
- connected motifs with a given edge count and a maximum-degree cap,
- a structured bounded-degree family built from parallel paths between two
  central vertices with cross matchings (large families at fixed degree),
- all simple motifs without isolated vertices up to an edge budget,
  including the empty motif (the low-degree polynomial basis).

Isomorphism classes are identified by a canonical key: the minimum adjacency
bitstring over vertex orderings, restricted to orderings that respect the
stable color partition from iterated neighborhood refinement (the partition
is isomorphism-invariant, so the restriction preserves canonicity and prunes
the v! search). When a color class is too large to search, one vertex of the
first largest class is individualized and the key is the minimum over the
class, recursively.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import CapacityError, ParameterError

_CANONICAL_VERTEX_CAP = 10       # public canonical_form / aut guard
_INTERNAL_VERTEX_CAP = 14        # enumeration dedup may go this high
_SEARCH_LIMIT = 50000            # max orderings before individualization kicks in


@dataclass(frozen=True)
class Motif:
    """Unlabeled pattern graph on vertices 0..v-1."""

    v: int
    edges: frozenset

    def __post_init__(self):
        # int() accepts numpy integer labels, which would otherwise leak into
        # the bitset rows and break int-only bit tricks downstream
        object.__setattr__(self, "v", int(self.v))
        norm = frozenset((int(u), int(w)) if u < w else (int(w), int(u))
                         for u, w in self.edges)
        for u, w in norm:
            if u == w:
                raise ParameterError("motif has a self-loop")
            if not 0 <= u < self.v and 0 <= w < self.v:
                raise ParameterError("motif edge endpoint out of range")
            if w >= self.v:
                raise ParameterError("motif edge endpoint out of range")
        object.__setattr__(self, "edges", norm)

    @classmethod
    def from_edges(cls, edges, v: int | None = None) -> "Motif":
        edges = [tuple(e) for e in edges]
        if v is None:
            v = 1 + max((max(e) for e in edges), default=-1)
        return cls(v, frozenset(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _bits(self) -> tuple:
        rows = [0] * self.v
        for u, w in self.edges:
            rows[u] |= 1 << w
            rows[w] |= 1 << u
        return tuple(rows)

    def has_edge(self, u: int, w: int) -> bool:
        return bool((self._bits[u] >> w) & 1)

    def degree(self, u: int) -> int:
        return self._bits[u].bit_count()

    def degree_sequence(self) -> tuple:
        return tuple(sorted(self._bits[u].bit_count() for u in range(self.v)))

    def neighbors(self, u: int) -> list[int]:
        row = self._bits[u]
        out = []
        while row:
            low = row & -row
            out.append(low.bit_length() - 1)
            row ^= low
        return out

    def is_connected(self) -> bool:
        if self.v <= 1:
            return True
        seen = 1
        frontier = [0]
        while frontier:
            u = frontier.pop()
            row = self._bits[u] & ~seen
            while row:
                low = row & -row
                w = low.bit_length() - 1
                seen |= low
                frontier.append(w)
                row ^= low
        return seen == (1 << self.v) - 1

    def relabel(self, perm) -> "Motif":
        """Image of the motif under vertex map u -> perm[u]."""
        return Motif(self.v, frozenset(
            (perm[u], perm[w]) for u, w in self.edges))

    @cached_property
    def canonical_key(self) -> bytes:
        if self.v > _INTERNAL_VERTEX_CAP:
            raise CapacityError(f"canonical key refused for v={self.v} > "
                                f"{_INTERNAL_VERTEX_CAP}")
        return bytes((self.v,)) + bytes(_min_adjacency_string(self.v, self._bits))

    @cached_property
    def aut(self) -> int:
        """Order of the automorphism group."""
        if self.v > _CANONICAL_VERTEX_CAP:
            raise CapacityError(f"automorphism count refused for v={self.v} > "
                                f"{_CANONICAL_VERTEX_CAP}")
        return _count_automorphisms(self.v, self._bits)

    def to_dict(self) -> dict:
        return {"v": self.v, "edges": sorted(list(e) for e in self.edges)}

    @classmethod
    def from_dict(cls, data: dict) -> "Motif":
        return cls(int(data["v"]), frozenset(tuple(e) for e in data["edges"]))


def canonical_form(motif: Motif) -> bytes:
    """Canonical key; equal keys iff isomorphic. Guarded at v <= 10."""
    if motif.v > _CANONICAL_VERTEX_CAP:
        raise CapacityError(f"canonical form refused for v={motif.v} > "
                            f"{_CANONICAL_VERTEX_CAP}")
    return motif.canonical_key


def is_isomorphic(m1: Motif, m2: Motif) -> bool:
    if m1.v != m2.v or len(m1.edges) != len(m2.edges):
        return False
    if m1.degree_sequence() != m2.degree_sequence():
        return False
    return m1.canonical_key == m2.canonical_key


def automorphism_count(motif: Motif) -> int:
    return motif.aut


# ---------------------------------------------------------------------------
# refinement and canonical search


def _refine_colors(v: int, bits, marks=()):
    """Stable colors from iterated (color, sorted neighbor colors) signatures.

    marks is a tuple of individualized vertices, in individualization order;
    each gets a distinct initial signature so refinement keeps it separated.
    Color ids are dense ranks of sorted signatures, hence canonical.
    """
    rank = {x: i + 1 for i, x in enumerate(marks)}
    sigs = [(rank.get(u, 0), bits[u].bit_count()) for u in range(v)]
    ncolors = 0
    colors = [0] * v
    while True:
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [order[s] for s in sigs]
        if len(order) == ncolors or len(order) == v:
            return colors
        ncolors = len(order)
        sigs = []
        for u in range(v):
            row = bits[u]
            nb = []
            while row:
                low = row & -row
                nb.append(colors[low.bit_length() - 1])
                row ^= low
            nb.sort()
            sigs.append((colors[u], tuple(nb)))


def _classes_from_colors(v: int, colors) -> list:
    byc: dict[int, list] = {}
    for u in range(v):
        byc.setdefault(colors[u], []).append(u)
    return [byc[c] for c in sorted(byc)]


def _min_adjacency_string(v: int, bits, marks=()) -> list:
    """Minimum adjacency bitstring over class-respecting vertex orderings."""
    if v == 0:
        return []
    colors = _refine_colors(v, bits, marks)
    classes = _classes_from_colors(v, colors)

    size = 1.0
    for cls in classes:
        size *= math.factorial(len(cls))
    if size > _SEARCH_LIMIT:
        # individualize one vertex of the first largest class
        target = max(classes, key=len)
        return min(_min_adjacency_string(v, bits, marks + (x,)) for x in target)

    slots = []
    for ci, cls in enumerate(classes):
        slots.extend([ci] * len(cls))
    remaining = [list(cls) for cls in classes]
    total_bits = v * (v - 1) // 2
    perm: list[int] = []
    cur: list[int] = []
    best: list | None = None

    def rec():
        nonlocal best
        k = len(perm)
        if k == v:
            if best is None or cur < best:
                best = list(cur)
            return
        cands = []
        for x in remaining[slots[k]]:
            seg = [(bits[x] >> p) & 1 for p in perm]
            cands.append((seg, x))
        cands.sort()
        for seg, x in cands:
            pos = len(cur)
            if best is not None:
                bseg = best[pos:pos + len(seg)]
                if seg > bseg:
                    break  # candidates are sorted; the rest only grow
                if seg < bseg:
                    # subtree beats current best everywhere; pad so deeper
                    # comparisons stay tight
                    best = cur + seg + [1] * (total_bits - pos - len(seg))
            cur.extend(seg)
            perm.append(x)
            remaining[slots[k]].remove(x)
            rec()
            remaining[slots[k]].append(x)
            perm.pop()
            del cur[pos:]
        return

    rec()
    return best


def _count_automorphisms(v: int, bits) -> int:
    if v == 0:
        return 1
    colors = _refine_colors(v, bits)
    img = [0] * v
    used = [False] * v

    def rec(u: int) -> int:
        if u == v:
            return 1
        total = 0
        for w in range(v):
            if used[w] or colors[w] != colors[u]:
                continue
            ok = True
            for t in range(u):
                if ((bits[u] >> t) & 1) != ((bits[w] >> img[t]) & 1):
                    ok = False
                    break
            if ok:
                used[w] = True
                img[u] = w
                total += rec(u + 1)
                used[w] = False
        return total

    return rec(0)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class MotifFamily:
    """Deduplicated, deterministically ordered collection of motifs."""

    kind: str
    members: tuple

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json(self) -> str:
        members = []
        for m in self.members:
            d = m.to_dict()
            d["key"] = m.canonical_key.hex()
            members.append(d)
        return json.dumps({"kind": self.kind, "members": members}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "MotifFamily":
        data = json.loads(text)
        return cls(data["kind"],
                   tuple(Motif.from_dict(d) for d in data["members"]))


def _family(kind: str, motifs) -> MotifFamily:
    dedup: dict[bytes, Motif] = {}
    for m in motifs:
        dedup.setdefault(m.canonical_key, m)
    members = sorted(dedup.values(),
                     key=lambda m: (m.v, m.edge_count, m.canonical_key))
    return MotifFamily(kind, tuple(members))


def _grow_once(level: dict, degree_cap: int | None, allow_disconnected: bool) -> dict:
    """Iso classes reachable from `level` by adding one edge."""
    nxt: dict[bytes, Motif] = {}

    def push(m: Motif):
        nxt.setdefault(m.canonical_key, m)

    for m in level.values():
        v = m.v
        # edge between existing vertices
        for u in range(v):
            if degree_cap is not None and m.degree(u) >= degree_cap:
                continue
            for w in range(u + 1, v):
                if m.has_edge(u, w):
                    continue
                if degree_cap is not None and m.degree(w) >= degree_cap:
                    continue
                push(Motif(v, m.edges | {(u, w)}))
        # pendant vertex
        for u in range(v):
            if degree_cap is not None and m.degree(u) >= degree_cap:
                continue
            push(Motif(v + 1, m.edges | {(u, v)}))
        # fresh disjoint edge
        if allow_disconnected:
            push(Motif(v + 2, m.edges | {(v, v + 1)}))
    return nxt


def enumerate_free_trees(num_edges: int) -> MotifFamily:
    """All free trees with exactly num_edges edges (num_edges+1 vertices)."""
    if num_edges < 1:
        raise ParameterError(f"edge count must be >= 1, got {num_edges}")
    if num_edges > 9:
        raise CapacityError(f"tree enumeration capped at 9 edges, got {num_edges}")
    level = {Motif.from_edges([(0, 1)]).canonical_key: Motif.from_edges([(0, 1)])}
    for _ in range(num_edges - 1):
        nxt: dict[bytes, Motif] = {}
        for m in level.values():
            for u in range(m.v):
                leaf = Motif(m.v + 1, m.edges | {(u, m.v)})
                nxt.setdefault(leaf.canonical_key, leaf)
        level = nxt
    return _family(f"trees:{num_edges}", level.values())


def enumerate_bounded_degree(num_edges: int, max_degree: int) -> MotifFamily:
    """All connected motifs with exactly num_edges edges and max degree <= cap.

    Complete because every connected graph with k+1 edges arises from a
    connected graph with k edges by one edge addition (drop a non-bridge
    edge, or a leaf edge of a spanning tree), and dropping edges never
    raises a degree.
    """
    if num_edges < 1:
        raise ParameterError(f"edge count must be >= 1, got {num_edges}")
    if max_degree < 1:
        raise ParameterError(f"degree cap must be >= 1, got {max_degree}")
    if num_edges > 9:
        raise CapacityError(f"bounded-degree enumeration capped at 9 edges, "
                            f"got {num_edges}")
    k2 = Motif.from_edges([(0, 1)])
    level = {k2.canonical_key: k2}
    for _ in range(num_edges - 1):
        level = _grow_once(level, max_degree, allow_disconnected=False)
    return _family(f"bounded-degree:{num_edges},{max_degree}", level.values())


def enumerate_simple_no_isolated(max_edges: int) -> MotifFamily:
    """All motifs with at most max_edges edges and no isolated vertex.

    Includes the empty motif (v=0); members need not be connected. This is
    the index set of the degree-(2*max_edges) polynomial basis.
    """
    if max_edges < 0:
        raise ParameterError(f"edge budget must be >= 0, got {max_edges}")
    if max_edges > 5:
        raise CapacityError(f"simple-motif enumeration capped at 5 edges, "
                            f"got {max_edges}")
    empty = Motif(0, frozenset())
    out = {empty.canonical_key: empty}
    level = dict(out)
    for _ in range(max_edges):
        level = _grow_once(level, None, allow_disconnected=True)
        out.update(level)
    return _family(f"simple:{max_edges}", out.values())


def enumerate_structured_bd(ell: int, d: int) -> MotifFamily:
    """Structured bounded-degree motifs: d-1 internally disjoint paths with
    ell internal vertices each between two central vertices, one pendant per
    central vertex, and a perfect matching of cross edges between the
    internal vertices of every pair of paths. All matchings are enumerated
    and deduplicated up to isomorphism.

    Every member has ell(d-1)+4 vertices, C(d,2)ell+d+1 edges, and maximum
    degree exactly d.
    """
    if ell < 1:
        raise ParameterError(f"path length must be >= 1, got {ell}")
    if d < 3:
        raise ParameterError(f"degree must be >= 3, got {d}")
    n_v = ell * (d - 1) + 4
    if n_v > _INTERNAL_VERTEX_CAP:
        raise CapacityError(f"structured family needs {n_v} vertices, "
                            f"cap is {_INTERNAL_VERTEX_CAP}")
    c1, c2, p1, p2 = 0, 1, 2, 3

    def internal(path: int, j: int) -> int:
        return 4 + path * ell + j

    base = [(c1, p1), (c2, p2)]
    for i in range(d - 1):
        base.append((c1, internal(i, 0)))
        for j in range(ell - 1):
            base.append((internal(i, j), internal(i, j + 1)))
        base.append((internal(i, ell - 1), c2))

    pairs = list(itertools.combinations(range(d - 1), 2))
    motifs = []
    for choice in itertools.product(itertools.permutations(range(ell)),
                                    repeat=len(pairs)):
        edges = list(base)
        for (i, j), sigma in zip(pairs, choice):
            for k in range(ell):
                edges.append((internal(i, k), internal(j, sigma[k])))
        m = Motif.from_edges(edges, v=n_v)
        assert m.edge_count == math.comb(d, 2) * ell + d + 1
        assert max(m.degree(u) for u in range(n_v)) == d
        motifs.append(m)
    return _family(f"structured:{ell},{d}", motifs)


def structured_size_lower_bound(ell: int, d: int) -> float:
    """Growth lower bound on |structured family| in terms of its edge count."""
    if d < 3:
        raise ParameterError(f"degree must be >= 3, got {d}")
    if ell < 1:
        raise ParameterError(f"path length must be >= 1, got {ell}")
    n_e = math.comb(d, 2) * ell + d + 1
    base = 2.0 * (n_e - d - 1) / (math.e * d ** (d / (d - 2)) * (d - 1))
    return 0.5 * base ** ((d - 2) * (n_e - d - 1) / d)


def parse_family_spec(spec) -> MotifFamily:
    """Family from a compact spec: 'trees:4', 'bd:4,4', 'structured:1,3',
    'simple:2', or the equivalent dict {'kind': ..., ...}."""
    if isinstance(spec, str):
        try:
            kind, _, args = spec.partition(":")
            nums = [int(x) for x in args.split(",")] if args else []
        except ValueError as exc:
            raise ParameterError(f"bad family spec {spec!r}") from exc
    elif isinstance(spec, dict):
        kind = spec.get("kind", "")
        if kind in ("trees", "simple"):
            nums = [int(spec["edges"])]
        elif kind in ("bd", "bounded-degree"):
            nums = [int(spec["edges"]), int(spec["degree"])]
        elif kind == "structured":
            nums = [int(spec["ell"]), int(spec["degree"])]
        else:
            nums = []
    else:
        raise ParameterError(f"bad family spec {spec!r}")
    if kind == "trees" and len(nums) == 1:
        return enumerate_free_trees(nums[0])
    if kind in ("bd", "bounded-degree") and len(nums) == 2:
        return enumerate_bounded_degree(nums[0], nums[1])
    if kind == "structured" and len(nums) == 2:
        return enumerate_structured_bd(nums[0], nums[1])
    if kind == "simple" and len(nums) == 1:
        return enumerate_simple_no_isolated(nums[0])
    raise ParameterError(f"bad family spec {spec!r}")
