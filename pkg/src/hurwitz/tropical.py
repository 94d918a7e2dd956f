"""Tropical monodromy graphs and the third count of H_g(mu, nu).

An (m, n, r)-tropical graph is a directed graph with m labeled univalent
sources, n labeled univalent sinks and r labeled trivalent internal vertices,
edges between internal vertices running from the smaller to the larger label.
It records which cycles of the chain sigma_0..sigma_r split and merge: edges
are cycles-over-time, internal vertex i is the cut or join at step i.

A monodromy graph adds a positive integer flow: mu_i enters at source i, nu_j
leaves at sink j, and flow is conserved at internal vertices.  Its
multiplicity is the product of the flows on interior edges (edges touching no
univalent vertex), and

    H_g(mu, nu) = sum over monodromy graphs of multiplicity / |Aut|,

where Aut permutes parallel edges only (all vertices are labeled).

Vertices are encoded as ('s', k), ('v', i), ('t', j) for source k, internal i,
sink j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import HurwitzParams, InconsistentFiber, Partition, RZero
from .permutation import MonodromySet, cycles, sigma_chain
from .ribbon import HurwitzRibbonGraph, MNRRibbonGraph
from .traffic import TickAssignment, TrafficState, _circles, _walk_tables, canonical_ticks, ribbon_to_monodromy


def _node_key(node) -> str:
    kind, idx = node
    return f"{kind}{idx}"


@dataclass(frozen=True)
class TropicalGraph:
    """Directed multigraph on labeled sources, sinks and internal vertices;
    edges is a tuple of (tail, head) pairs."""

    m: int
    n: int
    r: int
    edges: tuple

    def __post_init__(self):
        out_deg = {}
        in_deg = {}
        for tail, head in self.edges:
            out_deg[tail] = out_deg.get(tail, 0) + 1
            in_deg[head] = in_deg.get(head, 0) + 1
        for k in range(1, self.m + 1):
            if out_deg.get(("s", k), 0) != 1 or in_deg.get(("s", k), 0) != 0:
                raise ValueError(f"source {k} must have out-degree 1, in-degree 0")
        for j in range(1, self.n + 1):
            if in_deg.get(("t", j), 0) != 1 or out_deg.get(("t", j), 0) != 0:
                raise ValueError(f"sink {j} must have in-degree 1, out-degree 0")
        for i in range(1, self.r + 1):
            deg = in_deg.get(("v", i), 0) + out_deg.get(("v", i), 0)
            if deg != 3:
                raise ValueError(f"internal vertex {i} must be trivalent")
        for tail, head in self.edges:
            if tail[0] == "v" and head[0] == "v" and tail[1] >= head[1]:
                raise ValueError("internal edges must increase the vertex order")
            if head[0] == "s" or tail[0] == "t":
                raise ValueError("edge direction violates source/sink roles")
        if not self.is_connected():
            raise ValueError("tropical graphs must be connected")

    def num_vertices(self) -> int:
        return self.m + self.n + self.r

    def is_connected(self) -> bool:
        nodes = set()
        adj = {}
        for tail, head in self.edges:
            nodes.update((tail, head))
            adj.setdefault(tail, []).append(head)
            adj.setdefault(head, []).append(tail)
        if len(nodes) != self.num_vertices():
            return False
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(nodes)

    def first_betti(self) -> int:
        return len(self.edges) - self.num_vertices() + 1

    def interior_edge_indices(self) -> list:
        return [
            k
            for k, (tail, head) in enumerate(self.edges)
            if tail[0] == "v" and head[0] == "v"
        ]

    def parallel_classes(self) -> list:
        groups = {}
        for k, e in enumerate(self.edges):
            groups.setdefault(e, []).append(k)
        return [tuple(v) for _, v in sorted(groups.items())]

    def aut_order(self) -> int:
        """Label-fixing automorphisms permute parallel edges freely."""
        out = 1
        for cls in self.parallel_classes():
            for i in range(2, len(cls) + 1):
                out *= i
        return out

    def canonical_form(self) -> tuple:
        return tuple(sorted(self.edges))

    def serialize(self, flows=None) -> dict:
        doc = {
            "sources": self.m,
            "sinks": self.n,
            "internal": self.r,
            "edges": [
                {"tail": _node_key(t), "head": _node_key(h)}
                for t, h in self.edges
            ],
        }
        if flows is not None:
            for e, f in zip(doc["edges"], flows):
                e["flow"] = f
        return doc

    def to_dot(self, flows=None) -> str:
        lines = ["digraph tropical {", "  rankdir=LR;"]
        order = [("s", k) for k in range(1, self.m + 1)]
        order += [("v", i) for i in range(1, self.r + 1)]
        order += [("t", j) for j in range(1, self.n + 1)]
        for node in order:
            shape = "circle" if node[0] == "v" else "point"
            lines.append(f'  {_node_key(node)} [shape={shape}, label="{node[1]}"];')
        for k, (t, h) in enumerate(self.edges):
            label = "" if flows is None else f' [label="{flows[k]}"]'
            lines.append(f"  {_node_key(t)} -> {_node_key(h)}{label};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class MonodromyGraph:
    graph: TropicalGraph
    flows: tuple
    params: HurwitzParams

    def __post_init__(self):
        g, p = self.graph, self.params
        if (g.m, g.n, g.r) != (p.m, p.n, p.r):
            raise ValueError("graph shape does not match the parameters")
        if len(self.flows) != len(g.edges):
            raise ValueError("one flow value per edge required")
        if any(f < 1 for f in self.flows):
            raise ValueError("flows must be positive")
        balance = {}
        for (tail, head), f in zip(g.edges, self.flows):
            if tail[0] == "s" and f != p.mu[tail[1] - 1]:
                raise ValueError("source edge must carry mu_i")
            if head[0] == "t" and f != p.nu[head[1] - 1]:
                raise ValueError("sink edge must carry nu_j")
            if tail[0] == "v":
                balance[tail[1]] = balance.get(tail[1], 0) - f
            if head[0] == "v":
                balance[head[1]] = balance.get(head[1], 0) + f
        if any(v != 0 for v in balance.values()):
            raise ValueError("flow is not conserved at an internal vertex")

    def serialize(self) -> dict:
        return self.graph.serialize(self.flows)

    def to_dot(self) -> str:
        return self.graph.to_dot(self.flows)


def tropical_multiplicity(mg: MonodromyGraph) -> int:
    """Product of the flows over interior edges; 1 if there are none."""
    out = 1
    for k in mg.graph.interior_edge_indices():
        out *= mg.flows[k]
    return out


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def enumerate_tropical_graphs(m: int, n: int, r: int) -> tuple:
    """One representative per isomorphism class, with |Aut|.

    Sequential cut-join construction: a pool of open edges starts at the
    sources; internal vertex i either joins two open edges or cuts one; the
    final open edges attach to the labeled sinks.  Open edges are
    interchangeable iff they have the same origin, so deduplicating the
    choices at each step enumerates each class exactly once.
    """
    if r < 1:
        raise ValueError("tropical graphs need r >= 1")
    results = []

    def finish(edges, opens):
        if len(opens) != n:
            return
        for assignment in sorted(set(itertools.permutations(opens))):
            full = list(edges)
            for j, origin in enumerate(assignment):
                full.append((origin, ("t", j + 1)))
            try:
                graph = TropicalGraph(m, n, r, tuple(full))
            except ValueError:
                continue  # disconnected (or a source wired straight to a sink)
            results.append(graph)

    def step(i, edges, opens):
        if i > r:
            finish(edges, opens)
            return
        v = ("v", i)
        seen = set()
        for a_idx in range(len(opens)):
            for b_idx in range(a_idx + 1, len(opens)):
                key = tuple(sorted((opens[a_idx], opens[b_idx])))
                if key in seen:
                    continue
                seen.add(key)
                rest = [o for k, o in enumerate(opens) if k not in (a_idx, b_idx)]
                step(
                    i + 1,
                    edges + [(opens[a_idx], v), (opens[b_idx], v)],
                    rest + [v],
                )
        seen = set()
        for a_idx in range(len(opens)):
            if opens[a_idx] in seen:
                continue
            seen.add(opens[a_idx])
            rest = [o for k, o in enumerate(opens) if k != a_idx]
            step(i + 1, edges + [(opens[a_idx], v)], rest + [v, v])

    step(1, [], [("s", k) for k in range(1, m + 1)])
    uniq = {}
    for g in results:
        key = g.canonical_form()
        if key not in uniq:
            uniq[key] = g
    out = tuple((g, g.aut_order()) for _, g in sorted(uniq.items()))
    return out


@dataclass(frozen=True)
class FlowPolytope:
    """Conservation system over the interior edges; boundary flows are fixed
    at mu/nu and folded into the right-hand sides."""

    interior: tuple  # interior edge indices
    rows: tuple  # (coeffs over interior, rhs) per internal vertex
    num_edges: int

    def contains(self, flows) -> bool:
        if len(flows) != self.num_edges:
            return False
        if any(f < 1 for f in flows):
            return False
        for coeffs, rhs in self.rows:
            if sum(c * flows[k] for c, k in zip(coeffs, self.interior)) != rhs:
                return False
        return True


def flow_polytope(t: TropicalGraph, mu: Partition, nu: Partition) -> FlowPolytope:
    interior = tuple(t.interior_edge_indices())
    rows = []
    for i in range(1, t.r + 1):
        coeffs = []
        rhs = 0
        for k in interior:
            tail, head = t.edges[k]
            c = 0
            if head == ("v", i):
                c += 1
            if tail == ("v", i):
                c -= 1
            coeffs.append(c)
        for k, (tail, head) in enumerate(t.edges):
            if k in interior:
                continue
            if head == ("v", i):  # from a source
                rhs -= mu[tail[1] - 1]
            if tail == ("v", i):  # to a sink
                rhs += nu[head[1] - 1]
        rows.append((tuple(coeffs), rhs))
    return FlowPolytope(interior, tuple(rows), len(t.edges))


def flow_lattice_points(t: TropicalGraph, mu: Partition, nu: Partition) -> list:
    """All positive conservative integer flows with the prescribed boundary
    values, processed in vertex-label order (cuts branch, joins are forced)."""
    if len(mu) != t.m or len(nu) != t.n:
        raise ValueError("partition lengths must match source/sink counts")
    flows = [None] * len(t.edges)
    out_of = {}
    in_of = {}
    for k, (tail, head) in enumerate(t.edges):
        out_of.setdefault(tail, []).append(k)
        in_of.setdefault(head, []).append(k)
    for k, (tail, head) in enumerate(t.edges):
        if tail[0] == "s":
            flows[k] = mu[tail[1] - 1]
    results = []

    def rec(i):
        if i > t.r:
            for j in range(1, t.n + 1):
                k = in_of[("t", j)][0]
                if flows[k] != nu[j - 1]:
                    return
            results.append(tuple(flows))
            return
        v = ("v", i)
        total = sum(flows[k] for k in in_of.get(v, []))
        outs = out_of.get(v, [])
        if len(outs) == 1:
            flows[outs[0]] = total
            rec(i + 1)
            flows[outs[0]] = None
        else:
            a, b = outs
            for w in range(1, total):
                flows[a] = w
                flows[b] = total - w
                rec(i + 1)
            flows[a] = flows[b] = None

    rec(1)
    return results


def count_hurwitz_tropical(params: HurwitzParams) -> Fraction:
    """Weighted sum of multiplicity/|Aut| over all monodromy graphs."""
    if params.r == 0:
        raise RZero("the tropical count needs r >= 1")
    total = Fraction(0)
    for graph, aut in enumerate_tropical_graphs(params.m, params.n, params.r):
        interior = graph.interior_edge_indices()
        for flows in flow_lattice_points(graph, params.mu, params.nu):
            mult = 1
            for k in interior:
                mult *= flows[k]
            total += Fraction(mult, aut)
    return total


def monodromy_graph_classes(params: HurwitzParams):
    """Isomorphism classes of monodromy graphs as (MonodromyGraph, aut_order)
    where aut_order is the stabilizer of the flow vector in Aut(graph)."""
    if params.r == 0:
        raise RZero("the tropical count needs r >= 1")
    out = []
    for graph, aut in enumerate_tropical_graphs(params.m, params.n, params.r):
        classes = {}
        for flows in flow_lattice_points(graph, params.mu, params.nu):
            canon = []
            for cls in graph.parallel_classes():
                canon.append(tuple(sorted(flows[k] for k in cls)))
            key = tuple(canon)
            if key in classes:
                continue
            stab = 1
            for part in key:
                run = {}
                for f in part:
                    run[f] = run.get(f, 0) + 1
                for c in run.values():
                    for i in range(2, c + 1):
                        stab *= i
            classes[key] = (MonodromyGraph(graph, flows, params), stab)
        out.extend(classes[k] for k in sorted(classes))
    return out


# ---------------------------------------------------------------------------
# tropicalization


def monodromy_graph_of_chain(ms: MonodromySet) -> MonodromyGraph:
    """Cycles of the sigma chain become edges; step i is internal vertex i."""
    params = ms.params
    chain = sigma_chain(ms)
    edges = []
    flows = []
    live = {}
    for k, cyc in enumerate(ms.sigma0.cycles_by_label):
        live[frozenset(cyc)] = len(edges)
        edges.append([("s", k + 1), None])
        flows.append(len(cyc))
    for i in range(1, params.r + 1):
        prev = {frozenset(c) for c in cycles(chain[i - 1])}
        cur = {frozenset(c) for c in cycles(chain[i])}
        removed = sorted(prev - cur, key=sorted)
        added = sorted(cur - prev, key=sorted)
        if not (
            (len(removed) == 1 and len(added) == 2)
            or (len(removed) == 2 and len(added) == 1)
        ):
            raise ValueError(f"step {i} is not a single cut or join")
        for s in removed:
            edges[live.pop(s)][1] = ("v", i)
        for s in added:
            live[s] = len(edges)
            edges.append([("v", i), None])
            flows.append(len(s))
    for j, cyc in enumerate(ms.sigma_inf.cycles_by_label):
        edges[live.pop(frozenset(cyc))][1] = ("t", j + 1)
    graph = TropicalGraph(
        params.m, params.n, params.r, tuple((t, h) for t, h in edges)
    )
    return MonodromyGraph(graph, tuple(flows), params)


def tropicalize(h: HurwitzRibbonGraph, ticks: TickAssignment | None = None) -> MonodromyGraph:
    """Run the traffic algorithm and collapse each circle to a tropical edge;
    the flow is the circle's total weight (its number of tick marks)."""
    if ticks is None:
        ticks = canonical_ticks(h)
    return monodromy_graph_of_chain(ribbon_to_monodromy(h, ticks))


def tropicalization_matrix(skeleton: MNRRibbonGraph):
    """(tropical graph, integer matrix) for one skeleton, weight-free.

    The circles of the step walks depend only on the map, so the tropical
    skeleton underneath every weighting is common, and the flow of each
    tropical edge is a fixed 0/1/2-combination of the ribbon edge weights
    (the number of times the circle runs through each edge).  Row k of the
    matrix corresponds to edge k of the returned graph.
    """
    tables = _walk_tables(skeleton)
    edge_of_nat = tables[3]
    invol = skeleton.map.edge_involution
    face_of = skeleton._face_index_by_dart()
    r = skeleton.r
    m, n = skeleton.num_white, skeleton.num_gray
    num_edges = len(skeleton.edges())

    def row_of(circle) -> tuple:
        row = [0] * num_edges
        for x in circle:
            row[edge_of_nat[x]] += 1
        return tuple(row)

    step_circles = [
        {frozenset(c): c for c in _circles(skeleton, TrafficState(i), tables)}
        for i in range(r + 1)
    ]
    edges = []
    rows = []
    live = {}
    whites = {}
    for key, circle in step_circles[0].items():
        whites[skeleton.face_label[face_of[invol[circle[0]]]]] = key
    for k in range(1, m + 1):
        key = whites[k]
        live[key] = len(edges)
        edges.append([("s", k), None])
        rows.append(row_of(step_circles[0][key]))
    for i in range(1, r + 1):
        prev = set(step_circles[i - 1])
        cur = set(step_circles[i])
        removed = sorted(prev - cur, key=sorted)
        added = sorted(cur - prev, key=sorted)
        for s in removed:
            edges[live.pop(s)][1] = ("v", i)
        for s in added:
            live[s] = len(edges)
            edges.append([("v", i), None])
            rows.append(row_of(step_circles[i][s]))
    grays = {}
    for key, circle in step_circles[r].items():
        grays[skeleton.face_label[face_of[circle[0]]]] = key
    for j in range(1, n + 1):
        edges[live.pop(grays[j])][1] = ("t", j)
    graph = TropicalGraph(m, n, r, tuple((t, h) for t, h in edges))
    return graph, tuple(rows)


def fiber_check(params: HurwitzParams):
    """Group weighted ribbon classes by tropical skeleton and verify that the
    weight-free matrix reproduces every weighted tropicalization.

    Returns {tropical skeleton canonical form: [(hrg, aut, monodromy graph)]}.
    Raises InconsistentFiber if any weighting of a skeleton lands on a
    different tropical skeleton than the matrix predicts.
    """
    from .ribbon import hurwitz_ribbon_classes

    groups = {}
    matrix_cache = {}
    for hrg, aut in hurwitz_ribbon_classes(params):
        skel_key = id(hrg.skeleton)  # classes of one skeleton share the object
        if skel_key not in matrix_cache:
            matrix_cache[skel_key] = (
                hrg.skeleton,  # keep it alive so the id stays valid
                tropicalization_matrix(hrg.skeleton),
            )
        _, (graph, rows) = matrix_cache[skel_key]
        mg = tropicalize(hrg)
        predicted = sorted(
            (t, h, sum(c * w for c, w in zip(row, hrg.weights)))
            for (t, h), row in zip(graph.edges, rows)
        )
        actual = sorted(
            (t, h, f) for (t, h), f in zip(mg.graph.edges, mg.flows)
        )
        if predicted != actual:
            raise InconsistentFiber(
                f"weighting {hrg.weights} leaves the common tropical skeleton"
            )
        groups.setdefault(mg.graph.canonical_form(), []).append((hrg, aut, mg))
    return groups
