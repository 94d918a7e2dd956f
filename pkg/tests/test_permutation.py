import itertools
from fractions import Fraction

import pytest

from hurwitz.core import Partition, hurwitz_params
from hurwitz import permutation as P


def perm_from_cycles(d, *cycs):
    images = list(range(d))
    for c in cycs:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a] = b
    return tuple(images)


SIX_CYCLE = perm_from_cycles(6, (0, 1, 2, 3, 4, 5))


def test_cycle_type_examples():
    assert P.cycle_type(P.identity(3)).sorted_desc() == (1, 1, 1)
    assert P.cycle_type(SIX_CYCLE).sorted_desc() == (6,)
    prod = perm_from_cycles(6, (0, 1), (2, 3, 4, 5))
    assert P.cycle_type(prod).sorted_desc() == (4, 2)


def test_apply_transposition_cut():
    # (13)(123456) = (12)(3456): a cut of the 6-cycle into 2 + 4
    tau = P.transposition(6, 0, 2)
    prod, event = P.apply_transposition(SIX_CYCLE, tau)
    assert prod == perm_from_cycles(6, (0, 1), (2, 3, 4, 5))
    assert event.kind == "cut" and event.lengths == (4, 2)


def test_apply_transposition_join():
    tau = P.transposition(6, 0, 2)
    start = perm_from_cycles(6, (0, 1), (2, 3, 4, 5))
    prod, event = P.apply_transposition(start, tau)
    assert prod == SIX_CYCLE
    assert event.kind == "join" and event.lengths == (4, 2)


def test_apply_transposition_small_join():
    prod, event = P.apply_transposition(P.identity(2), P.transposition(2, 0, 1))
    assert prod == P.transposition(2, 0, 1)
    assert event.kind == "join" and event.lengths == (1, 1)


def test_cut_join_count_values():
    assert P.cut_join_count(2, 4, "join") == 8
    assert P.cut_join_count(2, 4, "cut") == 6
    assert P.cut_join_count(3, 3, "cut") == 3


@pytest.mark.parametrize("d", range(2, 9))
def test_cut_join_count_matches_brute_force(d):
    for k in range(1, d):
        l = d - k
        if k > l:
            continue
        # joins: count over a fixed permutation with one k- and one l-cycle
        if k + l == d:
            base = P.canonical_perm_of_type(Partition((k, l)))
            joins = 0
            for i, j in itertools.combinations(range(d), 2):
                _, ev = P.apply_transposition(base, P.transposition(d, i, j))
                if ev.kind == "join" and ev.lengths == tuple(
                    sorted((k, l), reverse=True)
                ):
                    joins += 1
            assert joins == P.cut_join_count(k, l, "join")
        # cuts of a single d-cycle into (k, l)
        cyc = P.canonical_perm_of_type(Partition((d,)))
        cuts = 0
        for i, j in itertools.combinations(range(d), 2):
            _, ev = P.apply_transposition(cyc, P.transposition(d, i, j))
            if ev.kind == "cut" and ev.lengths == tuple(sorted((k, l), reverse=True)):
                cuts += 1
        assert cuts == P.cut_join_count(k, l, "cut")


def test_is_transitive():
    t = P.transposition(2, 0, 1)
    assert P.is_transitive([t], 2)
    assert not P.is_transitive([P.transposition(3, 0, 1)], 3)
    assert P.is_transitive([P.transposition(3, 0, 1), P.transposition(3, 0, 2)], 3)


def test_sigma_chain_genus_one():
    params = hurwitz_params(1, (2,), (2,))
    (ms,) = list(P.enumerate_monodromy_sets(params))
    chain = P.sigma_chain(ms)
    t = P.transposition(2, 0, 1)
    assert chain == [t, P.identity(2), t]


def test_sigma_chain_r_zero():
    params = hurwitz_params(0, (3,), (3,))
    sets = list(P.enumerate_monodromy_sets(params))
    assert sets and all(P.sigma_chain(ms) == [ms.sigma0.perm] for ms in sets)


def test_sigma_chain_simple():
    params = hurwitz_params(0, (1, 1), (2,))
    for ms in P.enumerate_monodromy_sets(params):
        assert P.sigma_chain(ms) == [P.identity(2), P.transposition(2, 0, 1)]


@pytest.mark.parametrize(
    "g,mu,nu,count",
    [
        (1, (2,), (2,), 1),
        (0, (1, 1), (2,), 2),
        (0, (2, 1), (2, 1), 24),
    ],
)
def test_enumeration_counts(g, mu, nu, count):
    params = hurwitz_params(g, mu, nu)
    sets = list(P.enumerate_monodromy_sets(params))
    assert len(sets) == count
    for ms in sets:
        ms.validate()


@pytest.mark.parametrize(
    "g,mu,nu,value",
    [
        (0, (1, 1), (2,), Fraction(1)),
        (1, (2,), (2,), Fraction(1, 2)),
        (0, (2, 1), (2, 1), Fraction(4)),
    ],
)
def test_count_examples(g, mu, nu, value):
    assert P.count_hurwitz_permutation(hurwitz_params(g, mu, nu)) == value


def test_fast_count_equals_stream(small_params):
    for params in small_params:
        stream = sum(1 for _ in P.enumerate_monodromy_sets(params))
        assert stream == P.count_monodromy_sets(params), params


def test_count_invariant_under_part_reordering():
    base = P.count_hurwitz_permutation(hurwitz_params(0, (2, 1, 1), (3, 1)))
    for mu in set(itertools.permutations((2, 1, 1))):
        for nu in set(itertools.permutations((3, 1))):
            assert P.count_hurwitz_permutation(hurwitz_params(0, mu, nu)) == base


def test_count_invariant_under_convention_reversal():
    """Inverting every entry maps sets of one composition convention
    bijectively onto the other, so the counts agree."""

    def count_reversed(params):
        d, r = params.d, params.r
        cnt = 0
        for p in P.perms_of_type(d, params.mu):
            for taus in itertools.product(P.all_transpositions(d), repeat=r):
                total = p
                for t in taus:
                    total = P.compose(total, t)
                q = P.inverse(total)
                if P.cycle_type(q).sorted_desc() != params.nu.sorted_desc():
                    continue
                if not P.is_transitive([p, *taus], d):
                    continue
                cnt += 1
        mult = P._label_multiplicity(params.mu) * P._label_multiplicity(params.nu)
        return cnt * mult

    for g, mu, nu in [(0, (1, 1), (2,)), (1, (2,), (2,)), (0, (2, 1), (2, 1))]:
        params = hurwitz_params(g, mu, nu)
        assert P.count_monodromy_sets(params) == count_reversed(params)


def test_parity_of_nonempty_enumerations(small_params):
    for params in small_params:
        if P.count_monodromy_sets(params) > 0:
            gap = (params.d - params.m) + (params.d - params.n)
            assert (params.r - gap) % 2 == 0


def test_chain_events_balance(small_params):
    for params in small_params[:20]:
        for ms in itertools.islice(P.enumerate_monodromy_sets(params), 10):
            events = P.chain_events(ms)
            joins = sum(1 for e in events if e.kind == "join")
            cuts = len(events) - joins
            assert joins - cuts == params.m - params.n


def test_isomorphism_reflexive_and_transport():
    params = hurwitz_params(0, (1, 1), (2,))
    a, b = P.enumerate_monodromy_sets(params)
    assert P.are_isomorphic(a, a)
    # conjugation by (12) transports one labeling onto the other, so the two
    # labeled sets form a single class of automorphism order 1; this is what
    # makes the class count match the single ribbon-graph class.
    assert P.are_isomorphic(a, b)
    assert P.automorphism_order(a) == 1
    classes = P.monodromy_classes(params)
    assert len(classes) == 1 and classes[0][1] == 1


def test_isomorphism_respects_cut_join_pattern():
    params = hurwitz_params(0, (2, 1), (2, 1))
    sets = list(P.enumerate_monodromy_sets(params))
    joins = next(ms for ms in sets if P.chain_events(ms)[0].kind == "join")
    cuts = next(ms for ms in sets if P.chain_events(ms)[0].kind == "cut")
    assert not P.are_isomorphic(joins, cuts)


def test_orbit_stabilizer_consistency(small_params):
    for params in small_params:
        classes = P.monodromy_classes(params)
        total = sum(Fraction(1, aut) for _, aut in classes)
        assert total == P.count_hurwitz_permutation(params), params


def test_monodromy_class_keys_partition_the_stream():
    for g, mu, nu in [(0, (2, 1), (2, 1)), (1, (2,), (2,)), (0, (3,), (1, 1, 1))]:
        params = hurwitz_params(g, mu, nu)
        class_keys = {P.monodromy_class_key(ms) for ms, _ in P.monodromy_classes(params)}
        stream_keys = {
            P.monodromy_class_key(ms) for ms in P.enumerate_monodromy_sets(params)
        }
        assert stream_keys == class_keys


def test_r_zero_family():
    for d in range(1, 7):
        params = hurwitz_params(0, (d,), (d,))
        assert P.count_hurwitz_permutation(params) == Fraction(1, d)


def test_classical_closed_forms():
    # transposition factorizations of a d-cycle number d^(d-2) (Denes), so
    # H_0((1,...,1),(d)) = (d-1)! d^(d-2); and H_1((d),(d)) = d(d^2-1)/12
    from math import factorial

    for d in range(2, 6):
        full = hurwitz_params(0, (1,) * d, (d,))
        assert P.count_hurwitz_permutation(full) == factorial(d - 1) * d ** (d - 2)
        torus = hurwitz_params(1, (d,), (d,))
        assert P.count_hurwitz_permutation(torus) == Fraction(d * (d - 1) * (d + 1), 12)


def test_cycle_string():
    assert P.perm_to_cycle_string(P.identity(4)) == "e"
    p = perm_from_cycles(5, (0, 2), (1, 3, 4))
    assert P.perm_to_cycle_string(p) == "(1 3)(2 4 5)"
