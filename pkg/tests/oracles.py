"""Independent reference implementations used by the acceptance gate.

Everything here is deliberately written from first principles against the
public graph types only, so the library's counting and search code is
checked against logic that shares none of its internals.
"""

import heapq
from itertools import permutations, product


def prufer_decode(seq, n):
    """Edge list of the labeled tree on n vertices with the given sequence."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def ahu_certificate(n, edges):
    """Canonical string of an unrooted tree: encode from its center(s)."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = [len(a) for a in adj]
    layer = [i for i in range(n) if deg[i] <= 1]
    removed = [False] * n
    remaining = n
    while remaining > 2:
        nxt = []
        for leaf in layer:
            removed[leaf] = True
            remaining -= 1
            for w in adj[leaf]:
                if not removed[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [i for i in range(n) if not removed[i]]

    def enc(root, parent):
        return "(" + "".join(sorted(enc(w, root)
                                    for w in adj[root] if w != parent)) + ")"

    return min(enc(c, None) for c in centers)


def free_tree_classes(num_edges):
    """Distinct unlabeled trees with the given edge count, by exhausting
    every Prufer sequence on num_edges + 1 vertices."""
    n = num_edges + 1
    if n == 2:
        return 1
    certs = set()
    for seq in product(range(n), repeat=n - 2):
        certs.add(ahu_certificate(n, prufer_decode(seq, n)))
    return len(certs)


def it_recursive(g1, g2, m):
    """Largest agreeing edge count over size-m partial matchings, grown one
    domain vertex at a time (ascending domain kills duplicate searches)."""
    best = 0

    def rec(dom, img):
        nonlocal best
        if len(dom) == m:
            cnt = 0
            for i in range(m):
                for j in range(i + 1, m):
                    if g1.has_edge(dom[i], dom[j]) and g2.has_edge(img[i], img[j]):
                        cnt += 1
            best = max(best, cnt)
            return
        start = dom[-1] + 1 if dom else 0
        for u in range(start, g1.n):
            for w in range(g2.n):
                if w not in img:
                    rec(dom + [u], img + [w])

    rec([], [])
    return best


def perm_isomorphic(m1, m2):
    """Isomorphism by trying every vertex bijection."""
    if m1.v != m2.v or len(m1.edges) != len(m2.edges):
        return False
    target = m2.edges
    for perm in permutations(range(m1.v)):
        mapped = frozenset(
            (perm[u], perm[w]) if perm[u] < perm[w] else (perm[w], perm[u])
            for u, w in m1.edges)
        if mapped == target:
            return True
    return False
