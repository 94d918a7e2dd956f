import itertools
from fractions import Fraction

import pytest

from hurwitz.core import Partition, RZero, hurwitz_params
from hurwitz import permutation as P
from hurwitz import ribbon as R
from hurwitz import tropical as TR
from hurwitz.traffic import canonical_ticks


def test_enumeration_small_counts():
    assert len(TR.enumerate_tropical_graphs(2, 1, 1)) == 1
    assert len(TR.enumerate_tropical_graphs(1, 1, 2)) == 1
    graphs22 = TR.enumerate_tropical_graphs(2, 2, 2)
    assert all(g.first_betti() == 0 for g, _ in graphs22)


def test_genus_one_double_edge():
    ((graph, aut),) = TR.enumerate_tropical_graphs(1, 1, 2)
    assert aut == 2
    assert graph.first_betti() == 1
    interior = graph.interior_edge_indices()
    assert len(interior) == 2
    assert graph.edges[interior[0]] == graph.edges[interior[1]]


def test_betti_matches_forced_genus():
    for m, n, r in [(2, 1, 1), (1, 1, 2), (2, 2, 2), (1, 3, 2), (1, 1, 4)]:
        g = (r - m - n + 2) // 2 if (r - m - n + 2) % 2 == 0 else None
        for graph, _ in TR.enumerate_tropical_graphs(m, n, r):
            assert graph.first_betti() == g


def test_vertex_order_respected():
    for graph, _ in TR.enumerate_tropical_graphs(2, 2, 2):
        for tail, head in graph.edges:
            if tail[0] == "v" and head[0] == "v":
                assert tail[1] < head[1]


def test_no_duplicate_classes():
    for m, n, r in [(2, 2, 2), (1, 3, 2), (2, 1, 3), (1, 1, 4)]:
        graphs = TR.enumerate_tropical_graphs(m, n, r)
        forms = [g.canonical_form() for g, _ in graphs]
        assert len(forms) == len(set(forms))


def test_connectedness_is_enforced():
    # a source wired straight to a sink would be its own component
    for m, n, r in [(2, 2, 2), (3, 1, 2)]:
        for graph, _ in TR.enumerate_tropical_graphs(m, n, r):
            assert graph.is_connected()
            for tail, head in graph.edges:
                assert not (tail[0] == "s" and head[0] == "t")


def test_flows_join_then_cut():
    params = hurwitz_params(0, (2, 1), (2, 1))
    graphs = TR.enumerate_tropical_graphs(2, 2, 2)
    join_first = next(
        g for g, _ in graphs if (("s", 1), ("v", 1)) in g.edges and (("s", 2), ("v", 1)) in g.edges
    )
    flows = TR.flow_lattice_points(join_first, params.mu, params.nu)
    assert len(flows) == 1
    mg = TR.MonodromyGraph(join_first, flows[0], params)
    assert TR.tropical_multiplicity(mg) == 3


def test_flows_genus_one():
    params = hurwitz_params(1, (2,), (2,))
    ((graph, _),) = TR.enumerate_tropical_graphs(1, 1, 2)
    flows = TR.flow_lattice_points(graph, params.mu, params.nu)
    assert len(flows) == 1
    mg = TR.MonodromyGraph(graph, flows[0], params)
    assert TR.tropical_multiplicity(mg) == 1
    interior = graph.interior_edge_indices()
    assert sorted(flows[0][k] for k in interior) == [1, 1]


def test_tree_flows_are_forced():
    for graph, _ in TR.enumerate_tropical_graphs(2, 2, 2):
        if graph.first_betti() == 0:
            for mu, nu in [((2, 1), (2, 1)), ((3, 1), (2, 2)), ((4, 2), (3, 3))]:
                flows = TR.flow_lattice_points(graph, Partition(mu), Partition(nu))
                assert len(flows) <= 1


def test_flows_satisfy_polytope():
    params = hurwitz_params(0, (3, 2), (4, 1))
    for graph, _ in TR.enumerate_tropical_graphs(2, 2, 2):
        poly = TR.flow_polytope(graph, params.mu, params.nu)
        for coeffs, _ in poly.rows:
            assert set(coeffs) <= {-1, 0, 1}
        flows = TR.flow_lattice_points(graph, params.mu, params.nu)
        for f in flows:
            assert poly.contains(f)
        # brute force over interior values agrees
        interior = list(poly.interior)
        brute = []
        for vals in itertools.product(range(1, params.d + 1), repeat=len(interior)):
            cand = [None] * len(graph.edges)
            for k, (tail, head) in enumerate(graph.edges):
                if tail[0] == "s":
                    cand[k] = params.mu[tail[1] - 1]
                elif head[0] == "t":
                    cand[k] = params.nu[head[1] - 1]
            for k, v in zip(interior, vals):
                cand[k] = v
            if poly.contains(tuple(cand)):
                brute.append(tuple(cand))
        assert sorted(brute) == sorted(flows)


def test_multiplicity_no_interior_edges():
    params = hurwitz_params(0, (1, 1), (2,))
    ((graph, _),) = TR.enumerate_tropical_graphs(2, 1, 1)
    flows = TR.flow_lattice_points(graph, params.mu, params.nu)
    mg = TR.MonodromyGraph(graph, flows[0], params)
    assert TR.tropical_multiplicity(mg) == 1


@pytest.mark.parametrize(
    "g,mu,nu,value",
    [
        (0, (2, 1), (2, 1), Fraction(4)),
        (1, (2,), (2,), Fraction(1, 2)),
        (0, (1, 1), (2,), Fraction(1)),
    ],
)
def test_count_examples(g, mu, nu, value):
    assert TR.count_hurwitz_tropical(hurwitz_params(g, mu, nu)) == value


def test_count_rejects_r_zero():
    with pytest.raises(RZero):
        TR.count_hurwitz_tropical(hurwitz_params(0, (4,), (4,)))


def test_count_agrees_with_permutations(small_params):
    for params in small_params:
        assert TR.count_hurwitz_tropical(params) == P.count_hurwitz_permutation(
            params
        ), params


def test_monodromy_graph_classes_two_two():
    params = hurwitz_params(0, (2, 1), (2, 1))
    classes = TR.monodromy_graph_classes(params)
    assert len(classes) == 2
    total = sum(
        Fraction(TR.tropical_multiplicity(mg), aut) for mg, aut in classes
    )
    assert total == Fraction(4)


def test_conservation_across_prefix_cuts():
    for g, mu, nu in [(0, (2, 1), (2, 1)), (1, (2, 1), (3,)), (1, (2,), (2,))]:
        params = hurwitz_params(g, mu, nu)
        for mg, _ in TR.monodromy_graph_classes(params):
            for k in range(params.r + 1):
                crossing = 0
                group_a = {("s", i) for i in range(1, params.m + 1)}
                group_a |= {("v", i) for i in range(1, k + 1)}
                for (tail, head), f in zip(mg.graph.edges, mg.flows):
                    if tail in group_a and head not in group_a:
                        crossing += f
                    if head in group_a and tail not in group_a:
                        crossing -= f
                assert crossing == params.d


def test_tropicalize_genus_one():
    params = hurwitz_params(1, (2,), (2,))
    hrg, _ = R.hurwitz_ribbon_classes(params)[0]
    mg = TR.tropicalize(hrg)
    assert mg.graph.first_betti() == 1
    interior = mg.graph.interior_edge_indices()
    assert sorted(mg.flows[k] for k in interior) == [1, 1]


def test_tropicalize_single_join():
    params = hurwitz_params(0, (1, 1), (2,))
    hrg, _ = R.hurwitz_ribbon_classes(params)[0]
    mg = TR.tropicalize(hrg)
    assert mg.graph.interior_edge_indices() == []
    assert sorted(mg.flows) == [1, 1, 2]


def test_tropicalize_betti_equals_genus(small_params):
    for params in small_params[:25]:
        for hrg, _ in R.hurwitz_ribbon_classes(params):
            mg = TR.tropicalize(hrg)
            assert mg.graph.first_betti() == params.g
            assert hrg.skeleton.genus() == params.g


def test_tropicalize_cut_join_sequence_matches_chain():
    from hurwitz.traffic import ribbon_to_monodromy

    params = hurwitz_params(0, (2, 2), (3, 1))
    for hrg, _ in R.hurwitz_ribbon_classes(params):
        ms = ribbon_to_monodromy(hrg, canonical_ticks(hrg))
        events = P.chain_events(ms)
        mg = TR.tropicalize(hrg)
        for i, ev in enumerate(events, start=1):
            out_deg = sum(1 for t, h in mg.graph.edges if t == ("v", i))
            assert out_deg == (2 if ev.kind == "cut" else 1)


def test_tropicalization_matrix_genus_one():
    params = hurwitz_params(1, (2,), (2,))
    skel = R.hurwitz_ribbon_classes(params)[0][0].skeleton
    graph, rows = TR.tropicalization_matrix(skel)
    interior = graph.interior_edge_indices()
    supports = [tuple(k for k, c in enumerate(rows[e]) if c) for e in interior]
    assert len(supports) == 2
    assert not (set(supports[0]) & set(supports[1]))
    assert all(len(s) == 2 for s in supports)


def test_tropicalization_matrix_boundary_rows_are_balancing_sums():
    params = hurwitz_params(0, (2, 1), (2, 1))
    for hrg, _ in R.hurwitz_ribbon_classes(params):
        skel = hrg.skeleton
        graph, rows = TR.tropicalization_matrix(skel)
        white_rows = {}
        for (tail, head), row in zip(graph.edges, rows):
            if tail[0] == "s":
                white_rows[tail[1]] = row
        for lab, orbit in skel.white_faces():
            edge_index = {e: k for k, e in enumerate(skel.edges())}
            counts = [0] * len(skel.edges())
            inv = skel.map.edge_involution
            for x in orbit:
                e = (x, inv[x]) if x < inv[x] else (inv[x], x)
                counts[edge_index[e]] += 1
            assert tuple(counts) == white_rows[lab]


def test_matrix_maps_weights_to_flows(small_params):
    for params in small_params[:20]:
        TR.fiber_check(params)  # raises InconsistentFiber on failure


def test_aggregate_fiber_identity():
    for g, mu, nu in [(0, (2, 1), (2, 1)), (1, (2,), (2,)), (0, (2, 2), (3, 1)), (1, (2, 1), (2, 1))]:
        params = hurwitz_params(g, mu, nu)
        groups = TR.fiber_check(params)
        tropical_by_form = {}
        for graph, aut in TR.enumerate_tropical_graphs(params.m, params.n, params.r):
            total = Fraction(0)
            for flows in TR.flow_lattice_points(graph, params.mu, params.nu):
                mult = 1
                for k in graph.interior_edge_indices():
                    mult *= flows[k]
                total += Fraction(mult, aut)
            if total:
                tropical_by_form[graph.canonical_form()] = total
        ribbon_by_form = {
            form: sum(Fraction(1, aut) for _, aut, _ in members)
            for form, members in groups.items()
        }
        assert ribbon_by_form == tropical_by_form, (g, mu, nu)


def test_serialization():
    params = hurwitz_params(0, (2, 1), (2, 1))
    mg, _ = TR.monodromy_graph_classes(params)[0]
    doc = mg.serialize()
    assert doc["sources"] == 2 and doc["sinks"] == 2 and doc["internal"] == 2
    assert all({"tail", "head", "flow"} <= set(e) for e in doc["edges"])
    dot = mg.to_dot()
    assert "digraph" in dot and "->" in dot
