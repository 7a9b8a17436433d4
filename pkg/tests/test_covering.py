import itertools
import random

import numpy as np
import pytest

from dpcolor.counting import count_colorings
from dpcolor.covering import (
    BivariatePoly,
    alon_furedi_exact,
    alon_furedi_exhaustive,
    corresponding_permutation,
    count_nonzeros,
    cover_bound_chain,
    cover_halfk,
    cover_km2_anchored,
    covers,
    derived_multigraph_labeling,
    expected_cover_degree,
    graph_cover_polynomial,
    grid_colorings,
    l_polynomial,
    product_value,
)
from dpcolor.field import field_of_order, make_field
from dpcolor.graphs import Multigraph, cycle_graph, path_graph, spanning_forest
from dpcolor.labelings import (
    affine_perm,
    identity,
    identity_labeling,
    labeling_from_perms,
    parse_perm,
)
from dpcolor.verify import connected_graphs_upto

P = parse_perm


def poly_values(F, poly):
    return {(x, y): poly(x, y) for x in range(F.k) for y in range(F.k)}


def test_l_polynomial_examples():
    F = make_field(3)
    y_minus_x = BivariatePoly.linear(F, 0, F.neg(1), 1)
    assert l_polynomial(F, identity(3), 0, 1).poly == y_minus_x
    f = l_polynomial(F, P("120"), 0, 1).poly
    expected = BivariatePoly.linear(F, F.neg(1), F.neg(1), 1)  # y - x - 1
    assert poly_values(F, f) == poly_values(F, expected)
    assert f.degree == 1


@pytest.mark.parametrize("k", [3, 4, 5, 7, 8, 9])
def test_l_polynomial_vanishes_on_its_two_points(k):
    F = field_of_order(k)
    rng = random.Random(k)
    for _ in range(30):
        pi = tuple(rng.sample(range(k), k))
        i, j = rng.sample(range(k), 2)
        f = l_polynomial(F, pi, i, j)
        assert f.poly(i, pi[i]) == 0 and f.poly(j, pi[j]) == 0
        sigma = corresponding_permutation(F, pi, i, j)
        assert sorted(sigma) == list(range(k))
        assert all(f.poly(x, sigma[x]) == 0 for x in range(k))
        # affine: sigma = a x + b
        b = sigma[0]
        a = F.sub(sigma[1], b)
        assert sigma == affine_perm(F, a, b)


def test_corresponding_permutation_examples():
    assert corresponding_permutation(make_field(3), identity(3), 0, 1) == identity(3)
    F5 = make_field(5)
    pi = (0, 2, 1, 3, 4)
    assert corresponding_permutation(F5, pi, 0, 1) == tuple(F5.mul(2, x) for x in range(5))
    with pytest.raises(ValueError):
        corresponding_permutation(F5, pi, 1, 1)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 7])
def test_cover_halfk_all_permutations(k):
    F = field_of_order(k)
    perms = list(itertools.permutations(range(k)))
    if len(perms) > 1000:
        perms = random.Random(0).sample(perms, 1000)
    for pi in perms:
        fs = cover_halfk(F, pi)
        assert len(fs) == k // 2
        assert all(product_value(F, fs, c, pi[c]) == 0 for c in range(k))


def test_cover_halfk_examples():
    F3 = make_field(3)
    (f,) = cover_halfk(F3, identity(3))
    assert covers(f.poly, identity(3))
    F5 = make_field(5)
    assert len(cover_halfk(F5, P("10234"))) == 2


@pytest.mark.parametrize("k", [3, 4, 5])
def test_cover_anchored_all_permutations_and_anchors(k):
    F = field_of_order(k)
    for pi in itertools.permutations(range(k)):
        for a, b in itertools.product(range(k), repeat=2):
            if pi[a] == b:
                continue
            fs = cover_km2_anchored(F, pi, a, b)
            assert len(fs) == k - 2
            assert all(product_value(F, fs, c, pi[c]) == 0 for c in range(k))
            assert product_value(F, fs, a, b) != 0


def test_cover_anchored_examples():
    F3 = make_field(3)
    (f,) = cover_km2_anchored(F3, identity(3), 0, 1)
    assert covers(f.poly, identity(3)) and f.poly(0, 1) != 0
    F5 = make_field(5)
    fs = cover_km2_anchored(F5, P("10234"), 0, 0)
    assert len(fs) == 3 and product_value(F5, fs, 0, 0) != 0
    with pytest.raises(ValueError):
        cover_km2_anchored(F5, P("10234"), 0, 1)


def random_normalized(rng, g, k):
    allp = list(itertools.permutations(range(k)))
    tree = spanning_forest(g)
    perms = [identity(k) if (u, v) in tree.edges else rng.choice(allp) for u, v, _ in g.edges]
    return labeling_from_perms(g, perms, k)


def test_whole_graph_cover_soundness_random():
    rng = random.Random(11)
    graphs = [g for g in connected_graphs_upto(5) if g.n >= 2]
    for _ in range(120):
        g = rng.choice(graphs)
        k = rng.choice([3, 4, 5])
        L = random_normalized(rng, g, k)
        cols = grid_colorings(g.n, k)
        proper = np.array([L.is_proper(c) for c in cols])
        f = graph_cover_polynomial(L)
        assert f.degree == expected_cover_degree(g.n, g.m, k, "halfk")
        nz = f.nonzero_mask(cols)
        assert not (nz & ~proper).any()
        kappa = cols[rng.choice(np.flatnonzero(proper))]
        fa = graph_cover_polynomial(L, "anchored", kappa=list(kappa))
        assert fa.degree == expected_cover_degree(g.n, g.m, k, "anchored")
        assert fa.evaluate(kappa) != 0
        assert not (fa.nonzero_mask(cols) & ~proper).any()


def test_degree_examples():
    c4 = cycle_graph(4)
    L3 = identity_labeling(c4, 3)
    assert graph_cover_polynomial(L3, "anchored", kappa=[0, 1, 0, 1]).degree == 4
    L4 = identity_labeling(c4, 4)
    assert graph_cover_polynomial(L4).degree == 5
    tree = path_graph(3)
    f = graph_cover_polynomial(identity_labeling(tree, 3))
    assert f.degree == 2
    assert count_nonzeros(f) == 12


def test_tree_nonzeros_are_proper_colorings():
    for n in (2, 3, 4):
        for k in (3, 4, 5):
            L = identity_labeling(path_graph(n), k)
            assert count_nonzeros(graph_cover_polynomial(L)) == count_colorings(L)


def test_single_edge_nonzeros():
    assert count_nonzeros(graph_cover_polynomial(identity_labeling(path_graph(2), 3))) == 6


def test_cover_errors():
    c4 = cycle_graph(4)
    bad = labeling_from_perms(c4, [P("120"), P("012"), P("012"), P("012")])
    with pytest.raises(ValueError):
        graph_cover_polynomial(bad)
    L = identity_labeling(c4, 3)
    with pytest.raises(ValueError):
        graph_cover_polynomial(L, "anchored", kappa=[0, 0, 1, 2])
    with pytest.raises(ValueError):
        graph_cover_polynomial(L, "anchored")
    with pytest.raises(ValueError):
        graph_cover_polynomial(identity_labeling(Multigraph.from_pairs(2, [(0, 1, 2)]), 3))


def test_derived_multigraph_iff_property():
    rng = random.Random(5)
    graphs = [g for g in connected_graphs_upto(4) if g.n >= 2]
    for _ in range(60):
        g = rng.choice(graphs)
        k = rng.choice([3, 4, 5])
        L = random_normalized(rng, g, k)
        D = derived_multigraph_labeling(L)
        F = field_of_order(k)
        for t, h, perms in D.arcs:
            for p in perms:
                a = F.sub(p[1], p[0])
                assert p == affine_perm(F, a, p[0])
        cols = grid_colorings(g.n, k)
        nz = graph_cover_polynomial(L).nonzero_mask(cols)
        proper = np.array([D.is_proper(c) for c in cols])
        assert (nz == proper).all()
        assert count_nonzeros(graph_cover_polynomial(L)) == count_colorings(D)


def test_derived_multigraph_examples():
    tree = path_graph(4)
    L = identity_labeling(tree, 4)
    assert derived_multigraph_labeling(L) == L
    c4 = cycle_graph(4)
    L = labeling_from_perms(c4, [identity(4)] * 3 + [P("1023")])
    D = derived_multigraph_labeling(L)
    assert D.graph.multiplicity(2, 3) == 2


# -- Alon-Furedi ---------------------------------------------------------------------

def test_alon_furedi_examples():
    assert alon_furedi_exact([3, 3], 1) == 6
    assert alon_furedi_exact([3, 3, 3], 4) == 3
    assert alon_furedi_exhaustive([3, 3, 3], 4) == 3
    for k in (2, 3, 5):
        assert alon_furedi_exact([k] * 4, 0) == k**4
    assert alon_furedi_exact([3, 3], 10) == 1


def test_alon_furedi_greedy_equals_exhaustive():
    for n in range(1, 5):
        for sizes in itertools.product(range(1, 6), repeat=n):
            for d in range(sum(sizes) + 1):
                assert alon_furedi_exact(sizes, d) == alon_furedi_exhaustive(sizes, d)


def test_bound_chain_on_cover_polynomials():
    rng = random.Random(2)
    graphs = [g for g in connected_graphs_upto(5) if g.n >= 2]
    for _ in range(60):
        g = rng.choice(graphs)
        k = rng.choice([3, 4, 5])
        f = graph_cover_polynomial(random_normalized(rng, g, k))
        exact, weak = cover_bound_chain(f)
        nz = count_nonzeros(f)
        assert nz >= exact
        if weak.applicable:
            assert exact >= weak.floor
