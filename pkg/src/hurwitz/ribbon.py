"""Dart-based combinatorial maps and the ribbon-graph count of H_g(mu, nu).

Conventions (fixed once, everything downstream depends on them):

* A map is a pair of permutations on darts 0..N-1: ``rotation`` is the
  counterclockwise successor around each vertex, ``edge_involution`` is a
  fixed-point-free pairing of darts into edges.
* Faces are the orbits of rotation . edge_involution.  With a counterclockwise
  rotation this walk traverses each face clockwise, i.e. the face containing
  dart x lies to the RIGHT of x when x is traveled tail-to-head.
* In a bicolored map each edge therefore has one dart whose face (right side)
  is gray; traveling along that dart keeps gray on the right and white on the
  left, which is the natural orientation of the edge.

An (m, n, r)-ribbon graph is a connected 4-valent bicolored map with r labeled
vertices, m labeled white and n labeled gray faces.  A Hurwitz ribbon graph
adds nonnegative integer edge weights that are (mu, nu)-balanced (white face i
sums to mu_i, gray face j to nu_j) and positive (an edge whose natural
orientation runs from vertex i to vertex j with i >= j has weight > 0).

Skeleton enumeration runs through the medial correspondence: 4-valent
bicolored maps with (m white, n gray, r vertices) are exactly the medial
graphs of ordinary maps with m labeled vertices, n labeled faces and r labeled
edges, which are far cheaper to generate (one permutation on 2r darts).  The
test suite cross-checks this against a direct brute force over involutions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import HurwitzParams, NonIntegerGenus, Partition, RZero


def _orbits(succ, n: int) -> list:
    """Orbits of a permutation given as a callable, sorted by minimum, each
    listed in traversal order from its minimum element."""
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orbit = [s]
        seen[s] = True
        x = succ(s)
        while x != s:
            orbit.append(x)
            seen[x] = True
            x = succ(x)
        out.append(tuple(orbit))
    return out


@dataclass(frozen=True)
class CombinatorialMap:
    """Rotation system: vertices are rotation orbits, edges involution pairs,
    faces orbits of rotation . involution."""

    rotation: tuple
    edge_involution: tuple

    def __post_init__(self):
        n = len(self.rotation)
        if len(self.edge_involution) != n:
            raise ValueError("rotation and involution must have equal length")
        if sorted(self.rotation) != list(range(n)):
            raise ValueError("rotation is not a permutation of the darts")
        inv = self.edge_involution
        for x in range(n):
            if inv[x] == x or inv[inv[x]] != x:
                raise ValueError("edge involution must be fixed-point-free")

    @property
    def num_darts(self) -> int:
        return len(self.rotation)

    def vertices(self) -> list:
        return _orbits(lambda x: self.rotation[x], self.num_darts)

    def faces(self) -> list:
        rot, inv = self.rotation, self.edge_involution
        return _orbits(lambda x: rot[inv[x]], self.num_darts)

    def edges(self) -> list:
        """Edges as sorted dart pairs, in increasing order."""
        inv = self.edge_involution
        return [(x, inv[x]) for x in range(self.num_darts) if x < inv[x]]

    def is_connected(self) -> bool:
        if self.num_darts == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in (self.rotation[x], self.edge_involution[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.num_darts

    def genus(self) -> int:
        v = len(self.vertices())
        e = self.num_darts // 2
        f = len(self.faces())
        chi = v - e + f
        if chi % 2 != 0:
            raise NonIntegerGenus(f"V-E+F = {chi} is odd")
        g = (2 - chi) // 2
        if g < 0:
            raise NonIntegerGenus(f"V-E+F = {chi} exceeds 2")
        return g


def faces(m: CombinatorialMap) -> list:
    return m.faces()


def genus(m: CombinatorialMap) -> int:
    return m.genus()


# ---------------------------------------------------------------------------
# labeled 4-valent bicolored maps


@dataclass(frozen=True)
class MNRRibbonGraph:
    """A connected 4-valent bicolored map with labeled vertices and faces.

    vertex_label assigns 1..r per dart (constant on rotation orbits);
    face_color/face_label are aligned with map.faces() (orbits by minimum
    dart), colors 'white'/'gray', white labels 1..m, gray labels 1..n.
    """

    map: CombinatorialMap
    vertex_label: tuple
    face_color: tuple
    face_label: tuple

    def __post_init__(self):
        m = self.map
        if not m.is_connected():
            raise ValueError("the map must be connected")
        for v in m.vertices():
            if len(v) != 4:
                raise ValueError("every vertex must be 4-valent")
            if len({self.vertex_label[x] for x in v}) != 1:
                raise ValueError("vertex labels must be constant on vertices")
        r = m.num_darts // 4
        if sorted({self.vertex_label[x] for x in range(m.num_darts)}) != list(
            range(1, r + 1)
        ):
            raise ValueError("vertex labels must be a bijection onto 1..r")
        fs = m.faces()
        if len(fs) != len(self.face_color) or len(fs) != len(self.face_label):
            raise ValueError("face annotations must align with faces()")
        whites = [
            lab
            for col, lab in zip(self.face_color, self.face_label)
            if col == "white"
        ]
        grays = [
            lab
            for col, lab in zip(self.face_color, self.face_label)
            if col == "gray"
        ]
        if sorted(whites) != list(range(1, len(whites) + 1)):
            raise ValueError("white labels must be a bijection onto 1..m")
        if sorted(grays) != list(range(1, len(grays) + 1)):
            raise ValueError("gray labels must be a bijection onto 1..n")
        # bicolored: the two sides of every edge carry different colors
        face_of = self._face_index_by_dart()
        for x, y in m.edges():
            if self.face_color[face_of[x]] == self.face_color[face_of[y]]:
                raise ValueError("map is not bicolored")

    def _face_index_by_dart(self) -> dict:
        out = {}
        for i, f in enumerate(self.map.faces()):
            for x in f:
                out[x] = i
        return out

    @property
    def r(self) -> int:
        return self.map.num_darts // 4

    @property
    def num_white(self) -> int:
        return sum(1 for c in self.face_color if c == "white")

    @property
    def num_gray(self) -> int:
        return sum(1 for c in self.face_color if c == "gray")

    def genus(self) -> int:
        return self.map.genus()

    def edges(self) -> list:
        return self.map.edges()

    def natural_dart(self, edge) -> int:
        """The dart of the edge whose face (right side) is gray; traveling it
        keeps white on the left."""
        face_of = self._face_index_by_dart()
        x, y = edge
        if self.face_color[face_of[x]] == "gray":
            return x
        return y

    def natural_orientation(self, edge):
        """(tail vertex label, head vertex label) along the natural direction."""
        x = self.natural_dart(edge)
        y = self.map.edge_involution[x]
        return self.vertex_label[x], self.vertex_label[y]

    def white_faces(self) -> list:
        """(label, dart orbit) for each white face, by label."""
        fs = self.map.faces()
        out = [
            (self.face_label[i], fs[i])
            for i in range(len(fs))
            if self.face_color[i] == "white"
        ]
        return sorted(out)

    def gray_faces(self) -> list:
        fs = self.map.faces()
        out = [
            (self.face_label[i], fs[i])
            for i in range(len(fs))
            if self.face_color[i] == "gray"
        ]
        return sorted(out)

    def serialize(self, weights=None) -> dict:
        """JSON-ready description; darts are 1-based in the output."""
        n = self.map.num_darts
        face_of = self._face_index_by_dart()
        doc = {
            "darts": n,
            "rotation": [self.rotation_image(x) + 1 for x in range(n)],
            "involution": [self.map.edge_involution[x] + 1 for x in range(n)],
            "vertex_labels": list(self.vertex_label),
            "face_colors": [self.face_color[face_of[x]] for x in range(n)],
            "face_labels": [self.face_label[face_of[x]] for x in range(n)],
        }
        if weights is not None:
            doc["weights"] = [
                [x + 1, y + 1, w] for (x, y), w in zip(self.edges(), weights)
            ]
        return doc

    def rotation_image(self, x: int) -> int:
        return self.map.rotation[x]

    def to_dot(self, weights=None) -> str:
        """DOT export; edges annotated with natural orientation and weight."""
        lines = ["graph skeleton {"]
        for v in range(1, self.r + 1):
            lines.append(f'  v{v} [label="{v}"];')
        for k, e in enumerate(self.edges()):
            i, j = self.natural_orientation(e)
            note = f"{i}->{j}" if weights is None else f"w={weights[k]}; {i}->{j}"
            lines.append(f'  v{i} -- v{j} [label="{note}"];')
        lines.append("}")
        return "\n".join(lines)

    def canonical_key(self, weights=None):
        """Canonical encoding: minimum over dart relabelings that send vertex
        label v to the dart block 4(v-1)..4(v-1)+3 (one phase choice per
        vertex).  Two labeled skeletons are isomorphic iff keys agree."""
        return _canonical_key(self, weights)


def _canonical_key(g: MNRRibbonGraph, weights=None):
    n = g.map.num_darts
    r = n // 4
    # base relabeling: anchor each vertex at its minimum dart
    verts = sorted(g.map.vertices(), key=lambda v: g.vertex_label[v[0]])
    face_of = g._face_index_by_dart()
    edge_index = {e: k for k, e in enumerate(g.edges())}

    best = None
    for phases in itertools.product(range(4), repeat=r):
        relab = [0] * n
        for v_idx, orbit in enumerate(verts):
            anchor = orbit[0]
            x = anchor
            seq = []
            for _ in range(4):
                seq.append(x)
                x = g.map.rotation[x]
            for pos, dart in enumerate(seq):
                relab[dart] = 4 * v_idx + (pos + phases[v_idx]) % 4
        inv = [0] * n
        col = [None] * n
        lab = [0] * n
        for x in range(n):
            inv[relab[x]] = relab[g.map.edge_involution[x]]
            col[relab[x]] = g.face_color[face_of[x]]
            lab[relab[x]] = g.face_label[face_of[x]]
        key = (tuple(inv), tuple(col), tuple(lab))
        if weights is not None:
            w = {}
            for e, k in edge_index.items():
                a, b = relab[e[0]], relab[e[1]]
                w[(a, b) if a < b else (b, a)] = weights[k]
            key = key + (tuple(w[e] for e in sorted(w)),)
        if best is None or key < best:
            best = key
    return best


def natural_orientation(g: MNRRibbonGraph, edge):
    """(tail, head) vertex labels of the edge, traveled gray-right."""
    return g.natural_orientation(edge)


def aut_order(g: MNRRibbonGraph) -> int:
    """Order of the group of dart permutations commuting with the rotation and
    involution and fixing vertex labels, face colors and face labels.

    Fixing vertex labels pins each vertex, so such a permutation is a rotation
    power at every vertex; all 4^r phase vectors are checked.
    """
    return len(_aut_phase_maps(g))


def _aut_phase_maps(g: MNRRibbonGraph) -> list:
    """All automorphisms, each returned as a dart permutation."""
    n = g.map.num_darts
    r = n // 4
    rot = g.map.rotation
    inv = g.map.edge_involution
    verts = sorted(g.map.vertices(), key=lambda v: g.vertex_label[v[0]])
    face_of = g._face_index_by_dart()
    out = []
    for phases in itertools.product(range(4), repeat=r):
        h = [0] * n
        for orbit, p in zip(verts, phases):
            x = orbit[0]
            seq = []
            for _ in range(4):
                seq.append(x)
                x = rot[x]
            for pos, dart in enumerate(seq):
                h[dart] = seq[(pos + p) % 4]
        ok = all(h[inv[x]] == inv[h[x]] for x in range(n))
        if ok:
            ok = all(
                g.face_color[face_of[h[x]]] == g.face_color[face_of[x]]
                and g.face_label[face_of[h[x]]] == g.face_label[face_of[x]]
                for x in range(n)
            )
        if ok:
            out.append(tuple(h))
    return out


def aut_edge_permutations(g: MNRRibbonGraph) -> list:
    """Automorphisms as permutations of the edge index set."""
    edges = g.edges()
    index = {e: k for k, e in enumerate(edges)}
    perms = []
    for h in _aut_phase_maps(g):
        images = []
        for (x, y) in edges:
            a, b = h[x], h[y]
            images.append(index[(a, b) if a < b else (b, a)])
        perms.append(tuple(images))
    return perms


def edge_length(w: int, i: int, j: int, r: int) -> Fraction:
    """Length of an edge of weight w from vertex i to vertex j, in units of
    2*pi: w + (j - i)/r.  Positivity of a weighting is equivalent to every
    edge having positive length."""
    if not (1 <= i <= r and 1 <= j <= r):
        raise ValueError("vertex labels must lie in 1..r")
    return Fraction(w) + Fraction(j - i, r)


# ---------------------------------------------------------------------------
# general labeled maps and the medial construction


@dataclass(frozen=True)
class LabeledMap:
    """A connected map with labeled vertices (1..m), faces (1..n) and edges
    (1..r); the input of the medial construction."""

    map: CombinatorialMap
    vertex_label: tuple  # per dart
    face_label: tuple  # aligned with map.faces()
    edge_label: tuple  # aligned with map.edges()

    def __post_init__(self):
        m = self.map
        if not m.is_connected():
            raise ValueError("the map must be connected")
        for v in m.vertices():
            if len({self.vertex_label[x] for x in v}) != 1:
                raise ValueError("vertex labels must be constant on vertices")
        nv = len(m.vertices())
        if sorted(set(self.vertex_label)) != list(range(1, nv + 1)):
            raise ValueError("vertex labels must be a bijection onto 1..m")
        if sorted(self.face_label) != list(range(1, len(m.faces()) + 1)):
            raise ValueError("face labels must be a bijection onto 1..n")
        if sorted(self.edge_label) != list(range(1, len(m.edges()) + 1)):
            raise ValueError("edge labels must be a bijection onto 1..r")


def medial_graph(gm: LabeledMap) -> MNRRibbonGraph:
    """The medial map: one 4-valent vertex per edge of the input, one edge per
    corner, white faces from input vertices, gray faces from input faces.

    Corner c_a sits between dart a and rotation(a) at their common vertex; its
    medial edge joins the midpoints of edge(a) and edge(rotation(a)).
    """
    base = gm.map
    rot, inv = base.rotation, base.edge_involution
    edges = base.edges()
    # renumber input darts so edge labeled k+1 owns darts 2k, 2k+1
    order = sorted(range(len(edges)), key=lambda i: gm.edge_label[i])
    dart_id = {}
    for new_e, old_i in enumerate(order):
        x, y = edges[old_i]
        dart_id[x] = 2 * new_e
        dart_id[y] = 2 * new_e + 1
    sigma = [0] * (2 * len(edges))
    for x in range(base.num_darts):
        sigma[dart_id[x]] = dart_id[rot[x]]
    skeleton = _medial_from_sigma(tuple(sigma))

    # label transport: the white face through in-dart 2y+1 is the boundary of
    # the input vertex carrying y; the gray face through out-dart 2x is the
    # input face whose orbit contains the partner dart of x.
    old_of_new = {v: k for k, v in dart_id.items()}
    white_of = {}
    for c in _orbits(lambda x: sigma[x], len(sigma)):
        lab = gm.vertex_label[old_of_new[c[0]]]
        for x in c:
            white_of[x] = lab
    face_label_of_old = {}
    for i, f in enumerate(base.faces()):
        for x in f:
            face_label_of_old[x] = gm.face_label[i]
    colors = []
    labels = []
    for f in skeleton.faces():
        if f[0] % 2 == 1:  # in-darts: white
            colors.append("white")
            labels.append(white_of[(f[0] - 1) // 2])
        else:
            colors.append("gray")
            labels.append(face_label_of_old[inv[old_of_new[f[0] // 2]]])
    return MNRRibbonGraph(
        skeleton.map, skeleton.vertex_label, tuple(colors), tuple(labels)
    )


@dataclass(frozen=True)
class _BareMedial:
    map: CombinatorialMap
    vertex_label: tuple

    def faces(self):
        return self.map.faces()


def _medial_from_sigma(sigma: tuple) -> _BareMedial:
    """4-valent map of the medial construction for a map given as a rotation
    sigma on darts 0..2r-1 with edge k = {2k, 2k+1}.

    Medial darts: out_a = 2a, in_a = 2a+1; vertex k owns 4k..4k+3 in
    counterclockwise order (out_{2k}, in_{2k}, out_{2k+1}, in_{2k+1}); the
    involution pairs out_a with in_{sigma(a)}.
    """
    two_r = len(sigma)
    n = 2 * two_r
    rotation = [0] * n
    for k in range(two_r // 2):
        b = 4 * k
        rotation[b] = b + 1
        rotation[b + 1] = b + 2
        rotation[b + 2] = b + 3
        rotation[b + 3] = b
    inv = [0] * n
    for a in range(two_r):
        inv[2 * a] = 2 * sigma[a] + 1
        inv[2 * sigma[a] + 1] = 2 * a
    cmap = CombinatorialMap(tuple(rotation), tuple(inv))
    vlabel = tuple(x // 4 + 1 for x in range(n))
    return _BareMedial(cmap, vlabel)


# ---------------------------------------------------------------------------
# weight polytopes


@dataclass(frozen=True)
class WeightPolytope:
    """Balancing equalities plus per-edge lower bounds for one skeleton.

    rows: (coefficients over the edge index set, right-hand side); an edge
    incident to the same face twice would contribute coefficient 2 (cannot
    happen on a bicolored map, but the construction counts incidences).
    lower: 1 for edges whose natural orientation runs i -> j with i >= j,
    else 0.
    """

    num_edges: int
    rows: tuple  # ((coeffs...), rhs)
    lower: tuple

    def contains(self, w) -> bool:
        if len(w) != self.num_edges:
            return False
        if any(x < lo for x, lo in zip(w, self.lower)):
            return False
        return all(
            sum(c * x for c, x in zip(coeffs, w)) == rhs for coeffs, rhs in self.rows
        )


def weight_polytope(g: MNRRibbonGraph, mu: Partition, nu: Partition) -> WeightPolytope:
    if len(mu) != g.num_white or len(nu) != g.num_gray:
        raise ValueError("partition lengths must match face counts")
    edges = g.edges()
    index = {}
    for k, (x, y) in enumerate(edges):
        index[x] = k
        index[y] = k
    rows = []
    for lab, orbit in g.white_faces():
        coeffs = [0] * len(edges)
        for x in orbit:
            coeffs[index[x]] += 1
        rows.append((tuple(coeffs), mu[lab - 1]))
    for lab, orbit in g.gray_faces():
        coeffs = [0] * len(edges)
        for x in orbit:
            coeffs[index[x]] += 1
        rows.append((tuple(coeffs), nu[lab - 1]))
    lower = []
    for e in edges:
        i, j = g.natural_orientation(e)
        lower.append(1 if i >= j else 0)
    return WeightPolytope(len(edges), tuple(rows), tuple(lower))


def lattice_points(p: WeightPolytope) -> list:
    """All integer solutions, in lexicographic order."""
    return _solve_rows(p.num_edges, p.rows, p.lower)


def _solve_rows(num_edges: int, rows, lower) -> list:
    """Bounded DFS over edge values in index order with per-row budgets."""
    row_of_edge = [[] for _ in range(num_edges)]
    for ri, (coeffs, rhs) in enumerate(rows):
        for k, c in enumerate(coeffs):
            if c:
                row_of_edge[k].append((ri, c))
    remaining = [rhs for _, rhs in rows]
    # future demand per row: sum of lower bounds of unassigned edges
    future_lb = [0] * len(rows)
    future_cnt = [0] * len(rows)
    for k in range(num_edges):
        for ri, c in row_of_edge[k]:
            future_lb[ri] += c * lower[k]
            future_cnt[ri] += 1
    out = []
    w = [0] * num_edges

    def rec(k: int):
        if k == num_edges:
            if all(v == 0 for v in remaining):
                out.append(tuple(w))
            return
        hi = None
        for ri, c in row_of_edge[k]:
            cap = (remaining[ri] - (future_lb[ri] - c * lower[k])) // c
            hi = cap if hi is None else min(hi, cap)
        if hi is None:
            hi = 0  # edge on no row: impossible for valid skeletons
        for ri, c in row_of_edge[k]:
            future_lb[ri] -= c * lower[k]
            future_cnt[ri] -= 1
        for val in range(lower[k], (hi if hi is not None else lower[k]) + 1):
            ok = True
            for ri, c in row_of_edge[k]:
                remaining[ri] -= c * val
                if remaining[ri] < 0 or (future_cnt[ri] == 0 and remaining[ri] != 0):
                    ok = False
            if ok:
                w[k] = val
                rec(k + 1)
            for ri, c in row_of_edge[k]:
                remaining[ri] += c * val
        for ri, c in row_of_edge[k]:
            future_lb[ri] += c * lower[k]
            future_cnt[ri] += 1
        w[k] = 0

    rec(0)
    return out


# ---------------------------------------------------------------------------
# weighted ribbon graphs


@dataclass(frozen=True)
class HurwitzRibbonGraph:
    """A skeleton plus a positive (mu, nu)-balanced weighting; weights are
    indexed like skeleton.edges()."""

    skeleton: MNRRibbonGraph
    weights: tuple
    params: HurwitzParams

    def __post_init__(self):
        p = weight_polytope(self.skeleton, self.params.mu, self.params.nu)
        if not p.contains(self.weights):
            raise ValueError("weights are not positive and (mu, nu)-balanced")

    def edge_lengths(self) -> list:
        r = self.skeleton.r
        out = []
        for w, e in zip(self.weights, self.skeleton.edges()):
            i, j = self.skeleton.natural_orientation(e)
            out.append(edge_length(w, i, j, r))
        return out

    def canonical_key(self):
        return self.skeleton.canonical_key(self.weights)

    def serialize(self) -> dict:
        return self.skeleton.serialize(self.weights)

    def to_dot(self) -> str:
        return self.skeleton.to_dot(self.weights)


# ---------------------------------------------------------------------------
# skeleton enumeration (via the medial correspondence)


def _swap_tables(r: int) -> list:
    """Dart relabelings generated by swapping the two darts of each edge."""
    n = 2 * r
    tables = []
    for mask in range(1 << r):
        t = list(range(n))
        for i in range(r):
            if mask >> i & 1:
                t[2 * i], t[2 * i + 1] = t[2 * i + 1], t[2 * i]
        tables.append(tuple(t))
    return tables


@lru_cache(maxsize=None)
def _base_map_classes(r: int) -> dict:
    """Isomorphism classes of connected maps with r labeled edges, bucketed by
    (#vertices, #faces).

    A map is a rotation sigma on darts 0..2r-1 with edge k = {2k, 2k+1}; two
    rotations are isomorphic iff conjugate under the per-edge dart swaps.
    Each class record carries sigma, its swap stabilizer, the vertex cycles,
    the face orbits of the medial gray walk x -> sigma(x)^1, and the per-edge
    positivity lower bound.
    """
    n = 2 * r
    all_tables = _swap_tables(r)
    tables = all_tables[1:]
    buckets = {}
    rng = range(n)
    for sigma in itertools.permutations(rng):
        # connectivity under <sigma, xor 1>
        comp = 1
        frontier = [0]
        cnt = 1
        while frontier:
            x = frontier.pop()
            for y in (sigma[x], x ^ 1):
                if not (comp >> y) & 1:
                    comp |= 1 << y
                    cnt += 1
                    frontier.append(y)
        if cnt != n:
            continue
        # canonical under the swap group
        is_canon = True
        for t in tables:
            for x in rng:
                c = t[sigma[t[x]]]
                s0 = sigma[x]
                if c != s0:
                    if c < s0:
                        is_canon = False
                    break
            if not is_canon:
                break
        if not is_canon:
            continue
        cycles = _orbits(lambda x: sigma[x], n)
        grays = _orbits(lambda x: sigma[x] ^ 1, n)
        key = (len(cycles), len(grays))
        stab = [
            t for t in all_tables if all(t[sigma[t[x]]] == sigma[x] for x in rng)
        ]
        lower = tuple(1 if x // 2 >= sigma[x] // 2 else 0 for x in rng)
        buckets.setdefault(key, []).append(
            {
                "sigma": sigma,
                "stab": stab,
                "whites": cycles,
                "grays": grays,
                "lower": lower,
            }
        )
    return buckets


def _face_index(faces_list, n):
    out = [0] * n
    for i, f in enumerate(faces_list):
        for x in f:
            out[x] = i
    return out


def _labeling_orbits(record, m: int, n: int):
    """Representative (white labeling, gray labeling) pairs under the swap
    stabilizer, with stabilizer orders.

    A labeling is a tuple: entry i is the label of the i-th face in minimum-
    dart order.
    """
    whites, grays = record["whites"], record["grays"]
    nd = len(record["sigma"])
    wi = _face_index(whites, nd)
    gi = _face_index(grays, nd)
    actions = []
    for t in record["stab"]:
        wperm = tuple(wi[t[f[0]]] for f in whites)
        gperm = tuple(gi[t[f[0]]] for f in grays)
        actions.append((wperm, gperm))
    seen = set()
    for vlab in itertools.permutations(range(1, m + 1)):
        for glab in itertools.permutations(range(1, n + 1)):
            if (vlab, glab) in seen:
                continue
            orbit = set()
            for wperm, gperm in actions:
                tv = [0] * m
                tg = [0] * n
                for i in range(m):
                    tv[wperm[i]] = vlab[i]
                for j in range(n):
                    tg[gperm[j]] = glab[j]
                orbit.add((tuple(tv), tuple(tg)))
            seen |= orbit
            stab = len(actions) // len(orbit)
            yield vlab, glab, stab


def _build_skeleton(record, vlab, glab) -> MNRRibbonGraph:
    bare = _medial_from_sigma(record["sigma"])
    whites, grays = record["whites"], record["grays"]
    nd = len(record["sigma"])
    white_lab = _face_index(whites, nd)
    gray_lab = _face_index(grays, nd)
    colors = []
    labels = []
    for f in bare.faces():
        if f[0] % 2 == 1:
            colors.append("white")
            labels.append(vlab[white_lab[(f[0] - 1) // 2]])
        else:
            colors.append("gray")
            labels.append(glab[gray_lab[f[0] // 2]])
    return MNRRibbonGraph(bare.map, bare.vertex_label, tuple(colors), tuple(labels))


def skeletons_valid(m: int, n: int, r: int) -> bool:
    """(m, n, r) admits skeletons only if the forced genus (r-m-n+2)/2 is a
    nonnegative integer."""
    if r < 1 or m < 1 or n < 1:
        return False
    val = r - m - n + 2
    return val >= 0 and val % 2 == 0


def enumerate_skeletons(m: int, n: int, r: int):
    """One representative per isomorphism class of (m, n, r)-ribbon graphs,
    with automorphism group orders; deterministic order."""
    if r < 1:
        raise ValueError("skeletons need r >= 1")
    out = []
    if not skeletons_valid(m, n, r):
        return out
    for record in _base_map_classes(r).get((m, n), []):
        for vlab, glab, stab in _labeling_orbits(record, m, n):
            out.append((_build_skeleton(record, vlab, glab), stab))
    return out


def _dominated(needs, haves) -> bool:
    """Can labels with budgets `haves` cover demands `needs` (both unordered)?"""
    return all(
        h >= d for h, d in zip(sorted(haves, reverse=True), sorted(needs, reverse=True))
    )


def _class_lattice_points(record, vlab, glab, mu: Partition, nu: Partition):
    """Integer weightings of one labeled class, via the compact row system."""
    nd = len(record["sigma"])
    rows = []
    for i, c in enumerate(record["whites"]):
        coeffs = [0] * nd
        for x in c:
            coeffs[x] = 1
        rows.append((tuple(coeffs), mu[vlab[i] - 1]))
    for j, o in enumerate(record["grays"]):
        coeffs = [0] * nd
        for x in o:
            coeffs[x] = 1
        rows.append((tuple(coeffs), nu[glab[j] - 1]))
    return _solve_rows(nd, tuple(rows), record["lower"])


def _iter_weighted_classes(params: HurwitzParams):
    """Yield (record, vlab, glab, skeleton_aut, lattice point orbits).

    Each orbit is (representative weight vector, stabilizer order) under the
    labeled skeleton's automorphisms acting on edge indices.
    """
    m, n, r = params.m, params.n, params.r
    mu, nu = params.mu, params.nu
    d = params.d
    for record in _base_map_classes(r).get((m, n), []):
        lower = record["lower"]
        if sum(lower) > d:
            continue
        w_need = [sum(lower[x] for x in c) for c in record["whites"]]
        g_need = [sum(lower[x] for x in o) for o in record["grays"]]
        if not _dominated(w_need, mu.parts) or not _dominated(g_need, nu.parts):
            continue
        nd = len(record["sigma"])
        wi = _face_index(record["whites"], nd)
        gi = _face_index(record["grays"], nd)
        for vlab, glab, aut in _labeling_orbits(record, m, n):
            if any(mu[vlab[i] - 1] < w_need[i] for i in range(m)):
                continue
            if any(nu[glab[j] - 1] < g_need[j] for j in range(n)):
                continue
            points = _class_lattice_points(record, vlab, glab, mu, nu)
            if not points:
                continue
            # label-preserving automorphisms act on edges (= darts of sigma)
            edge_perms = [
                t
                for t in record["stab"]
                if all(vlab[wi[t[f[0]]]] == vlab[i] for i, f in enumerate(record["whites"]))
                and all(glab[gi[t[o[0]]]] == glab[j] for j, o in enumerate(record["grays"]))
            ]
            orbits = []
            seen = set()
            for w in points:
                if w in seen:
                    continue
                orbit = {tuple(w[t[x]] for x in range(nd)) for t in edge_perms}
                seen |= orbit
                orbits.append((w, len(edge_perms) // len(orbit)))
            yield record, vlab, glab, len(edge_perms), orbits


def count_hurwitz_ribbon(params: HurwitzParams) -> Fraction:
    """Sum over isomorphism classes of weighted ribbon graphs of 1/|Aut|."""
    if params.r == 0:
        raise RZero("the ribbon-graph count needs r >= 1")
    total = Fraction(0)
    for _, _, _, _, orbits in _iter_weighted_classes(params):
        for _, stab in orbits:
            total += Fraction(1, stab)
    return total


def hurwitz_ribbon_classes(params: HurwitzParams):
    """All weighted ribbon graph classes as (HurwitzRibbonGraph, aut_order).

    The weight tuple of the built object is re-indexed from sigma darts to
    skeleton edge order.
    """
    if params.r == 0:
        raise RZero("the ribbon-graph count needs r >= 1")
    out = []
    for record, vlab, glab, _, orbits in _iter_weighted_classes(params):
        skeleton = _build_skeleton(record, vlab, glab)
        # edge k of the skeleton is the medial edge {2x, 2 sigma(x)+1}: the
        # even dart identifies the sigma-dart index x
        sigma_index = [
            (a if a % 2 == 0 else b) // 2 for a, b in skeleton.edges()
        ]
        for w, stab in orbits:
            weights = tuple(w[x] for x in sigma_index)
            out.append((HurwitzRibbonGraph(skeleton, weights, params), stab))
    return out
