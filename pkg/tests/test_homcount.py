import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrdetect.errors import CapacityError, ParameterError
from corrdetect.graphs import CenteredGraph, SimpleGraph, center, sample_er
from corrdetect.homcount import (MultiMotif, hom_weighted, inj_bruteforce,
                                 inj_weighted, partition_terms, quotient)
from corrdetect.motifs import Motif


def k3_centered(p=0.5):
    return center(SimpleGraph(3, [(0, 1), (0, 2), (1, 2)]), p)


def motif(edges, v=None):
    return Motif.from_edges(edges, v)


def hom_bruteforce(h: MultiMotif, gc: CenteredGraph) -> float:
    """Literal sum over all maps; the slowest possible reference."""
    n = gc.n
    total = 0.0
    for phi in itertools.product(range(n), repeat=h.v):
        term = 1.0
        for (u, w), mult in h.edges:
            term *= gc.weight(phi[u], phi[w]) ** mult
        for u, mult in h.loops:
            term *= gc.weight(phi[u], phi[u]) ** mult
        total += term
    return total


# --- hom ----------------------------------------------------------------------


def test_hom_edgeless():
    h = MultiMotif.from_motif(motif([], v=3))
    assert hom_weighted(h, k3_centered()) == pytest.approx(27.0)


def test_hom_single_edge_on_k3():
    h = MultiMotif.from_motif(motif([(0, 1)]))
    assert hom_weighted(h, k3_centered()) == pytest.approx(3.0)


def test_hom_path3_on_k3():
    h = MultiMotif.from_motif(motif([(0, 1), (1, 2)]))
    assert hom_weighted(h, k3_centered()) == pytest.approx(3.0)


def test_hom_with_loop_is_zero():
    h = MultiMotif(2, (((0, 1), 1),), ((0, 1),))
    assert hom_weighted(h, k3_centered()) == 0.0


def test_hom_matches_bruteforce_on_random_instances():
    rnd = random.Random(17)
    for trial in range(25):
        v = rnd.randint(1, 4)
        pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
        edges = tuple(((u, w), rnd.randint(1, 2))
                      for u, w in pairs if rnd.random() < 0.6)
        h = MultiMotif(v, edges, ())
        g = sample_er(6, 0.4, trial)
        gc = center(g, 0.3)
        assert hom_weighted(h, gc) == pytest.approx(hom_bruteforce(h, gc),
                                                    abs=1e-9)


def test_hom_invariant_under_graph_relabeling():
    g = sample_er(7, 0.5, 3)
    perm = [3, 0, 6, 2, 5, 1, 4]
    relabeled = SimpleGraph(7, [(perm[u], perm[v]) for u, v in g.edges()])
    h = MultiMotif.from_motif(motif([(0, 1), (1, 2), (2, 3)]))
    assert hom_weighted(h, center(g, 0.4)) == \
        pytest.approx(hom_weighted(h, center(relabeled, 0.4)))


# --- partitions and quotients ---------------------------------------------------


def test_partition_count_of_four():
    assert len(partition_terms(4)) == 15


def test_partition_terms_identity_partition():
    terms = partition_terms(3)
    singles = [t for t in terms if len(t.blocks) == 3]
    assert len(singles) == 1 and singles[0].mobius == 1


def test_partition_mobius_falling_factorial_identity():
    # sum_P mobius(P) x^{|P|} = x(x-1)...(x-v+1)
    for v in range(1, 7):
        for x in (2, 5, 9):
            total = sum(t.mobius * x ** len(t.blocks)
                        for t in partition_terms(v))
            assert total == math.prod(x - i for i in range(v))


def test_partition_terms_capacity():
    with pytest.raises(CapacityError):
        partition_terms(9)


def test_quotient_merges_edges():
    p3 = motif([(0, 1), (1, 2)])
    q = quotient(MultiMotif.from_motif(p3), (frozenset({0, 2}), frozenset({1})))
    assert q.v == 2
    assert q.edges == (((0, 1), 2),)
    assert q.loops == ()


def test_quotient_intra_block_edge_becomes_loop():
    k2 = motif([(0, 1)])
    q = quotient(MultiMotif.from_motif(k2), (frozenset({0, 1}),))
    assert q.v == 1
    assert q.loops == ((0, 1),)


def test_quotient_rejects_bad_partition():
    k2 = MultiMotif.from_motif(motif([(0, 1)]))
    with pytest.raises(ParameterError):
        quotient(k2, (frozenset({0}),))
    with pytest.raises(ParameterError):
        quotient(k2, (frozenset({0, 1}), frozenset({1})))


# --- inj ------------------------------------------------------------------------


def test_inj_spec_values_on_k3():
    gc = k3_centered()
    assert inj_weighted(motif([(0, 1)]), gc) == pytest.approx(3.0)
    assert inj_weighted(motif([(0, 1), (1, 2)]), gc) == pytest.approx(1.5)


def test_inj_hom_decomposition_on_path():
    # hom(P3) = inj(P3) + inj(endpoint-merge quotient): 3.0 = 1.5 + 1.5
    gc = k3_centered()
    p3 = MultiMotif.from_motif(motif([(0, 1), (1, 2)]))
    merged = quotient(p3, (frozenset({0, 2}), frozenset({1})))
    hom_merged = hom_weighted(merged, gc)
    assert hom_merged == pytest.approx(1.5)
    assert hom_weighted(p3, gc) == pytest.approx(
        inj_weighted(motif([(0, 1), (1, 2)]), gc) + hom_merged)


def test_inj_empty_motif_is_one():
    assert inj_weighted(Motif(0, frozenset()), k3_centered()) == 1.0


def test_inj_edgeless_counts_injections():
    gc = center(sample_er(7, 0.5, 0), 0.5)
    assert inj_weighted(motif([], v=3), gc) == pytest.approx(7 * 6 * 5)


def test_inj_motif_larger_than_graph_is_zero():
    assert inj_weighted(motif([(0, 1)], v=4), k3_centered()) == 0.0


def test_inj_at_p_zero_counts_ordered_embeddings():
    # with p=0 the weight is the raw edge indicator, so inj counts the
    # injective maps sending every motif edge to a graph edge
    g = SimpleGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])
    gc = CenteredGraph(g, 0.0)
    tri = motif([(0, 1), (1, 2), (0, 2)])
    count = 0
    for phi in itertools.permutations(range(5), 3):
        if all(g.has_edge(phi[a], phi[b]) for a, b in tri.edges):
            count += 1
    assert inj_weighted(tri, gc) == pytest.approx(count)
    assert count == 6  # 1-2-3 is the only triangle


@given(st.integers(0, 4), st.integers(5, 8),
       st.sampled_from([0.1, 0.3, 0.5]), st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_inj_weighted_equals_bruteforce(v, n, p, seed):
    rnd = random.Random(seed)
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
    m = Motif(v, frozenset(e for e in pairs if rnd.random() < 0.5))
    gc = center(sample_er(n, 0.4, seed), p)
    a = inj_weighted(m, gc)
    b = inj_bruteforce(m, gc)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def test_inj_bruteforce_capacity_guard():
    big = Motif(12, frozenset())
    gc = center(sample_er(12, 0.5, 0), 0.5)
    with pytest.raises(CapacityError):
        inj_bruteforce(big, gc)


def test_inj_bruteforce_k2_symmetry():
    gc = center(sample_er(6, 0.5, 8), 0.3)
    total = 2 * sum(gc.weight(u, v) for u in range(6)
                    for v in range(u + 1, 6))
    assert inj_bruteforce(motif([(0, 1)]), gc) == pytest.approx(total)


def test_inj_invariant_under_motif_relabeling():
    gc = center(sample_er(7, 0.4, 2), 0.2)
    chair = motif([(0, 1), (1, 2), (1, 3), (3, 4)])
    relabeled = chair.relabel([4, 2, 0, 1, 3])
    assert inj_weighted(chair, gc) == pytest.approx(inj_weighted(relabeled, gc))
