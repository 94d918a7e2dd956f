"""The traffic-rule algorithm: weighted ribbon graphs <-> permutation chains.

Forward direction: place w(e) tick marks on each edge (ordered along the
natural orientation) and read off permutations sigma_0..sigma_r on the tick
set.  To apply sigma_i to a tick, travel the edge in its natural orientation;
at each vertex turn LEFT when the vertex label exceeds i and RIGHT otherwise,
and continue until the next tick.  With counterclockwise rotations, arriving
at a vertex via dart b means a left turn exits along rotation^-1(b) and a
right turn along rotation(b); both exits are again natural darts, so a trace
never runs an edge backwards.

All-left (i = 0) hugs the face on the walker's left, which is white, so
sigma_0's cycles are the white faces and have lengths mu_k; all-right (i = r)
follows the gray faces and realizes nu.  Successive sigma_i differ by the
rule flip at one vertex, which swaps two walk successors, i.e. multiplies by
a transposition.

Reverse direction: start with one white disk per cycle of sigma_0, ticks on
its boundary in cycle order, then insert vertex i at the unique pair of
boundary positions (just before each point moved by tau_i) that makes the
boundary permutation change from sigma_{i-1} to sigma_i; gray disks close the
surface at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    HurwitzParams,
    InvalidChain,
    NonterminatingTrace,
    RZero,
)
from .permutation import (
    LabeledPermutation,
    MonodromySet,
    compose,
    cycles,
    inverse,
    is_transposition,
    monodromy_class_key,
    monodromy_classes,
    sigma_chain,
)
from .ribbon import HurwitzRibbonGraph, MNRRibbonGraph, CombinatorialMap


@dataclass(frozen=True)
class TickAssignment:
    """Tick identifiers per edge, ordered along each edge's natural
    orientation; identifiers are 0..d-1, globally distinct."""

    per_edge: tuple  # tuple of tick tuples, aligned with skeleton.edges()

    def __post_init__(self):
        seen = [t for ts in self.per_edge for t in ts]
        if sorted(seen) != list(range(len(seen))):
            raise ValueError("tick identifiers must be exactly 0..d-1")

    @property
    def d(self) -> int:
        return sum(len(ts) for ts in self.per_edge)

    def relabeled(self, pi) -> "TickAssignment":
        """Apply a bijection pi to every identifier."""
        return TickAssignment(
            tuple(tuple(pi[t] for t in ts) for ts in self.per_edge)
        )


def canonical_ticks(h: HurwitzRibbonGraph) -> TickAssignment:
    """Number ticks 0,1,2,... edge by edge in edge order."""
    out = []
    nxt = 0
    for w in h.weights:
        out.append(tuple(range(nxt, nxt + w)))
        nxt += w
    return TickAssignment(tuple(out))


@dataclass(frozen=True)
class TrafficState:
    """Turn rules at step i: left at vertices labeled > i, right otherwise."""

    step: int

    def rule(self, vertex_label: int) -> str:
        return "left" if vertex_label > self.step else "right"


def _walk_tables(g: MNRRibbonGraph):
    rot = g.map.rotation
    inv_rot = [0] * len(rot)
    for x, y in enumerate(rot):
        inv_rot[y] = x
    edges = g.edges()
    nat = [g.natural_dart(e) for e in edges]
    edge_of_nat = {x: k for k, x in enumerate(nat)}
    return rot, inv_rot, nat, edge_of_nat


def _circles(g: MNRRibbonGraph, state: TrafficState, tables=None):
    """Orbits of the step-i walk on natural darts, each from its minimum."""
    rot, inv_rot, _nat, edge_of_nat = tables or _walk_tables(g)
    invol = g.map.edge_involution

    def succ(x):
        b = invol[x]
        if state.rule(g.vertex_label[b]) == "left":
            nxt = inv_rot[b]
        else:
            nxt = rot[b]
        if nxt not in edge_of_nat:
            raise NonterminatingTrace("walk left the natural dart set")
        return nxt

    seen = set()
    out = []
    for s in sorted(edge_of_nat):
        if s in seen:
            continue
        orbit = [s]
        seen.add(s)
        x = succ(s)
        while x != s:
            orbit.append(x)
            seen.add(x)
            x = succ(x)
        out.append(tuple(orbit))
    return out


def _circle_tick_cycles(circle, ticks: TickAssignment, edge_of_nat) -> tuple:
    seq = []
    for x in circle:
        seq.extend(ticks.per_edge[edge_of_nat[x]])
    return tuple(seq)


def ribbon_to_chain(h: HurwitzRibbonGraph, ticks: TickAssignment) -> list:
    """The permutations sigma_0..sigma_r on the tick set."""
    ms = ribbon_to_monodromy(h, ticks)
    return sigma_chain(ms)


def ribbon_to_monodromy(h: HurwitzRibbonGraph, ticks: TickAssignment) -> MonodromySet:
    """Full traffic-rule translation, with cycle labels read off the faces."""
    g = h.skeleton
    d = h.params.d
    if ticks.d != d:
        raise ValueError("tick assignment does not match the degree")
    for w, ts in zip(h.weights, ticks.per_edge):
        if len(ts) != w:
            raise ValueError("tick counts must equal edge weights")
    tables = _walk_tables(g)
    edge_of_nat = tables[3]
    invol = g.map.edge_involution
    face_of = g._face_index_by_dart()

    perms = []
    circle_sets = []
    for i in range(h.params.r + 1):
        images = [None] * d
        tick_cycles = []
        for circle in _circles(g, TrafficState(i), tables):
            seq = _circle_tick_cycles(circle, ticks, edge_of_nat)
            if not seq:
                raise NonterminatingTrace(
                    f"step {i}: a circle carries no tick marks"
                )
            for a, b in zip(seq, seq[1:] + seq[:1]):
                images[a] = b
            tick_cycles.append((circle, seq))
        perms.append(tuple(images))
        circle_sets.append(tick_cycles)

    # sigma_0 labels: circle hugging white face F <-> label of F
    label_of_cycle0 = {}
    for circle, seq in circle_sets[0]:
        face = face_of[invol[circle[0]]]
        label_of_cycle0[frozenset(seq)] = g.face_label[face]
    sigma0 = _label_by_sets(perms[0], label_of_cycle0, h.params.m)

    label_of_cycle_r = {}
    for circle, seq in circle_sets[-1]:
        face = face_of[circle[0]]
        label_of_cycle_r[frozenset(seq)] = g.face_label[face]
    sigma_inf = _label_by_sets(inverse(perms[-1]), label_of_cycle_r, h.params.n)

    taus = []
    for prev, cur in zip(perms, perms[1:]):
        t = compose(cur, inverse(prev))
        if not is_transposition(t):
            raise NonterminatingTrace("consecutive walk steps differ by more than a transposition")
        taus.append(t)

    ms = MonodromySet(sigma0, tuple(taus), sigma_inf, h.params)
    ms.validate()
    return ms


def _label_by_sets(perm, label_of_set: dict, count: int) -> LabeledPermutation:
    by_label = [None] * count
    for c in cycles(perm):
        by_label[label_of_set[frozenset(c)] - 1] = c
    return LabeledPermutation(perm, tuple(by_label))


# ---------------------------------------------------------------------------
# the inverse construction


def chain_to_ribbon(ms: MonodromySet):
    """Rebuild the weighted ribbon graph realizing a monodromy set, together
    with the tick assignment that reproduces the chain verbatim.

    Boundary circles are lists of items ('t', tick) / ('g', germ); vertex i
    owns germs 4(i-1)..4(i-1)+3 in counterclockwise order
    (exit-to-x, arrive-before-x, exit-to-y, arrive-before-y).
    """
    params = ms.params
    if params.r == 0:
        raise RZero("an r = 0 chain has no ribbon-graph realization")
    chain = sigma_chain(ms)

    circles = []
    for cyc in ms.sigma0.cycles_by_label:
        circles.append([("t", t) for t in cyc])

    for i in range(1, params.r + 1):
        tau = compose(chain[i], inverse(chain[i - 1]))
        if not is_transposition(tau):
            raise InvalidChain(f"step {i} is not a transposition")
        x, y = [p for p, q in enumerate(tau) if p != q]
        base = 4 * (i - 1)
        out_x, in_x, out_y, in_y = base, base + 1, base + 2, base + 3

        cx = next(k for k, c in enumerate(circles) if ("t", x) in c)
        cy = next(k for k, c in enumerate(circles) if ("t", y) in c)
        if cx != cy:
            a = circles[cx]
            b = circles[cy]
            pa = a.index(("t", x))
            pb = b.index(("t", y))
            merged = (
                a[pa:]
                + a[:pa]
                + [("g", in_x), ("g", out_y)]
                + b[pb:]
                + b[:pb]
                + [("g", in_y), ("g", out_x)]
            )
            circles = [
                c for k, c in enumerate(circles) if k not in (cx, cy)
            ] + [merged]
        else:
            c = circles[cx]
            pa = c.index(("t", x))
            rotated = c[pa:] + c[:pa]
            pb = rotated.index(("t", y))
            first = rotated[:pb] + [("g", in_y), ("g", out_x)]
            second = rotated[pb:] + [("g", in_x), ("g", out_y)]
            circles = [
                cc for k, cc in enumerate(circles) if k != cx
            ] + [first, second]

    return _assemble(ms, circles)


def _assemble(ms: MonodromySet, circles):
    params = ms.params
    r = params.r
    n_darts = 4 * r
    rotation = [0] * n_darts
    for i in range(r):
        b = 4 * i
        rotation[b] = b + 1
        rotation[b + 1] = b + 2
        rotation[b + 2] = b + 3
        rotation[b + 3] = b

    involution = [None] * n_darts
    edge_ticks = {}
    for circle in circles:
        germs = [k for k, item in enumerate(circle) if item[0] == "g"]
        if not germs:
            raise InvalidChain("a boundary circle never met a vertex")
        L = len(circle)
        for start in germs:
            kind = circle[start][1] % 4
            if kind not in (0, 2):  # walk exits via out-germs only
                continue
            out_germ = circle[start][1]
            ticks = []
            pos = (start + 1) % L
            while circle[pos][0] == "t":
                ticks.append(circle[pos][1])
                pos = (pos + 1) % L
            in_germ = circle[pos][1]
            if in_germ % 4 not in (1, 3):
                raise InvalidChain("malformed boundary: out-germ meets out-germ")
            involution[out_germ] = in_germ
            involution[in_germ] = out_germ
            edge_ticks[(min(out_germ, in_germ), max(out_germ, in_germ))] = (
                out_germ,
                tuple(ticks),
            )
    if any(v is None for v in involution):
        raise InvalidChain("unmatched germs in the boundary complex")

    cmap = CombinatorialMap(tuple(rotation), tuple(involution))
    vertex_label = tuple(x // 4 + 1 for x in range(n_darts))

    # faces: out-germ orbits are gray, in-germ orbits white
    face_list = cmap.faces()
    colors = []
    for f in face_list:
        kinds = {x % 4 for x in f}
        if kinds <= {0, 2}:
            colors.append("gray")
        elif kinds <= {1, 3}:
            colors.append("white")
        else:
            raise InvalidChain("face mixes walk directions; chain is invalid")

    # labels: match each face's tick set against the labeled end cycles
    white_sets = {
        frozenset(c): lab + 1
        for lab, c in enumerate(ms.sigma0.cycles_by_label)
    }
    gray_sets = {
        frozenset(c): lab + 1
        for lab, c in enumerate(ms.sigma_inf.cycles_by_label)
    }
    invol = cmap.edge_involution
    tick_of_out = {out: ts for (out, ts) in edge_ticks.values()}
    labels = []
    for f, col in zip(face_list, colors):
        ticks = []
        if col == "gray":
            for x in f:
                ticks.extend(tick_of_out[x])
            labels.append(gray_sets[frozenset(ticks)])
        else:
            for x in f:
                ticks.extend(tick_of_out[invol[x]])
            labels.append(white_sets[frozenset(ticks)])

    skeleton = MNRRibbonGraph(cmap, vertex_label, tuple(colors), tuple(labels))
    edges = skeleton.edges()
    weights = []
    per_edge = []
    for e in edges:
        out_germ, ticks = edge_ticks[e]
        weights.append(len(ticks))
        per_edge.append(ticks)
    hrg = HurwitzRibbonGraph(skeleton, tuple(weights), params)
    return hrg, TickAssignment(tuple(per_edge))


# ---------------------------------------------------------------------------
# roundtrip validation


@dataclass
class RoundtripReport:
    """Outcome of the two-way translation check at one parameter set."""

    params: HurwitzParams
    classes_ribbon: int
    classes_permutation: int
    roundtrip_failures: list
    unmatched: list
    aut_mismatches: list

    @property
    def matched(self) -> bool:
        return (
            self.classes_ribbon == self.classes_permutation
            and not self.roundtrip_failures
            and not self.unmatched
            and not self.aut_mismatches
        )

    def serialize(self) -> dict:
        return {
            "params": self.params.describe(),
            "classes_ribbon": self.classes_ribbon,
            "classes_permutation": self.classes_permutation,
            "matched": self.matched,
            "roundtrip_failures": self.roundtrip_failures,
            "unmatched": self.unmatched,
            "aut_mismatches": self.aut_mismatches,
        }


def roundtrip_check(params: HurwitzParams) -> RoundtripReport:
    """Verify that chain_to_ribbon inverts ribbon_to_chain on every weighted
    ribbon class, and that the induced map onto monodromy-set classes is a
    bijection preserving automorphism group orders."""
    from .ribbon import hurwitz_ribbon_classes

    if params.r == 0:
        raise RZero("the roundtrip needs r >= 1")
    hrg_classes = hurwitz_ribbon_classes(params)
    perm_classes = monodromy_classes(params)
    perm_by_key = {monodromy_class_key(ms): aut for ms, aut in perm_classes}

    roundtrip_failures = []
    unmatched = []
    aut_mismatches = []
    seen_keys = {}
    for idx, (hrg, aut) in enumerate(hrg_classes):
        ticks = canonical_ticks(hrg)
        ms = ribbon_to_monodromy(hrg, ticks)
        back, _ = chain_to_ribbon(ms)
        if back.canonical_key() != hrg.canonical_key():
            roundtrip_failures.append({"class": idx})
            continue
        key = monodromy_class_key(ms)
        if key in seen_keys:
            unmatched.append({"class": idx, "reason": "two ribbon classes hit one permutation class"})
            continue
        seen_keys[key] = idx
        if key not in perm_by_key:
            unmatched.append({"class": idx, "reason": "image is not a known permutation class"})
        elif perm_by_key[key] != aut:
            aut_mismatches.append(
                {"class": idx, "ribbon_aut": aut, "permutation_aut": perm_by_key[key]}
            )
    return RoundtripReport(
        params,
        len(hrg_classes),
        len(perm_classes),
        roundtrip_failures,
        unmatched,
        aut_mismatches,
    )
