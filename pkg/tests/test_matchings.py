from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canadaday.exact_linalg import (
    ExactMatrix,
    IndexSet,
    k_subsets,
    minor,
    random_symmetric,
    t_matrix,
)
from canadaday.matchings import (
    Matching,
    canonical_involution,
    classify_orbit,
    decompose_clusters,
    endpoint_separation,
    enumerate_matchings,
    flip,
    minor_via_matchings,
    orbit,
    orbit_sum_identity,
    partition_into_orbits,
    sign,
    sign_flip_law_check,
    weight,
)
from canadaday.minor_sums import SymmetryError, interlacing_sum, is_interlacing, p_value

# the n=8, k=7 worked matching used throughout the cluster examples
TAU8 = Matching(8, ((1, 6), (2, 8), (3, 4), (4, 2), (5, 5), (6, 1), (8, 7)))


def _perm_parity_sign(m: Matching) -> int:
    """Inversion count of the underlying permutation; independent of the
    crossing-number computation."""
    mapping = m.mapping()
    cols = sorted(mapping.values())
    pos = {j: t for t, j in enumerate(cols)}
    perm = [pos[mapping[i]] for i in sorted(mapping)]
    inversions = sum(
        1 for a, b in combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def test_matching_validation():
    with pytest.raises(ValueError):
        Matching(3, ((1, 2), (1, 3)))  # shared left node
    with pytest.raises(ValueError):
        Matching(3, ((1, 2), (3, 2)))  # shared right node
    with pytest.raises(ValueError):
        Matching(3, ((0, 2),))
    with pytest.raises(ValueError):
        Matching(3, ((1, 4),))


def test_matching_edges_canonically_sorted():
    m = Matching(4, ((4, 1), (2, 3)))
    assert m.edges == ((2, 3), (4, 1))
    assert m.row_set().elems == (2, 4)
    assert m.col_set().elems == (1, 3)


@pytest.mark.parametrize(
    "n,k",
    [(2, 1), (3, 3), (5, 3), (4, 0), (4, 2)],
)
def test_enumeration_count(n, k):
    ms = list(enumerate_matchings(n, k))
    assert len(ms) == comb(n, k) ** 2 * factorial(k)
    assert len(set(ms)) == len(ms)


def test_enumeration_order_is_deterministic():
    assert list(enumerate_matchings(3, 2)) == list(enumerate_matchings(3, 2))


def test_sign_worked_example_two_crossings():
    m = Matching(5, ((2, 3), (3, 5), (4, 1)))
    assert sign(m) == 1


def test_sign_single_edge_and_identity():
    assert sign(Matching(4, ((2, 3),))) == 1
    assert sign(Matching(4, ((1, 1), (2, 2), (4, 4)))) == 1


def test_sign_matches_permutation_parity_exhaustively():
    for k in range(0, 4):
        for m in enumerate_matchings(4, k):
            assert sign(m) == _perm_parity_sign(m)


def test_weight_worked_example_product():
    x = ExactMatrix.from_rows([[100 * i + j for j in range(1, 9)] for i in range(1, 9)])
    expected = Fraction(1)
    for i, j in ((1, 6), (2, 8), (3, 4), (4, 2), (5, 5), (6, 1), (8, 7)):
        expected *= 100 * i + j
    assert weight(TAU8, x) == expected


def test_weight_empty_matching_is_one():
    assert weight(Matching(3, ()), random_symmetric(3, 1, 9)) == 1


def test_weight_single_edge_is_entry():
    x = random_symmetric(3, 2, 9)
    assert weight(Matching(3, ((2, 3),)), x) == x.entry(2, 3)


def test_minor_via_matchings_k1():
    x = random_symmetric(3, 3, 9)
    assert minor_via_matchings(x, IndexSet(3, (2,)), IndexSet(3, (3,))) == x.entry(2, 3)


def test_minor_via_matchings_t3():
    assert minor_via_matchings(t_matrix(3), IndexSet(3, (1, 2)), IndexSet(3, (1, 2))) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_minor_via_matchings_agrees_with_determinant(n):
    x = random_symmetric(n, 40 + n, 9)
    for k in range(1, n + 1):
        for I in k_subsets(n, k):
            for J in k_subsets(n, k):
                assert minor_via_matchings(x, I, J) == minor(x, I, J)


@settings(max_examples=30, deadline=None)
@given(
    rows=st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
        min_size=4,
        max_size=4,
    ),
    I=st.sets(st.integers(min_value=1, max_value=4), min_size=1, max_size=3),
    J=st.sets(st.integers(min_value=1, max_value=4), min_size=1, max_size=3),
)
def test_minor_via_matchings_random(rows, I, J):
    k = min(len(I), len(J))
    I_set = IndexSet(4, tuple(sorted(I))[:k])
    J_set = IndexSet(4, tuple(sorted(J))[:k])
    x = ExactMatrix.from_rows(rows)
    assert minor_via_matchings(x, I_set, J_set) == minor(x, I_set, J_set)


def test_cluster_decomposition_worked_example():
    dec = decompose_clusters(TAU8)
    by_edges = {c.edges: c for c in dec.clusters}
    c1 = by_edges[((2, 8), (3, 4), (4, 2), (8, 7))]
    c2 = by_edges[((1, 6), (6, 1))]
    c3 = by_edges[((5, 5),)]
    assert (c1.kind, c1.endpoints, c1.separation) == ("open", (3, 7), 6)
    assert (c2.kind, c2.separation) == ("closed", 0)
    assert (c3.kind, c3.separation) == ("closed", 0)
    assert len(dec.clusters) == 3


def test_identity_matching_all_closed_singletons():
    m = Matching(4, ((1, 1), (3, 3)))
    dec = decompose_clusters(m)
    assert sorted(c.edges for c in dec.clusters) == [((1, 1),), ((3, 3),)]
    assert all(c.kind == "closed" for c in dec.clusters)


def test_single_offdiagonal_edge_is_open():
    dec = decompose_clusters(Matching(4, ((2, 4),)))
    (c,) = dec.clusters
    assert (c.kind, c.endpoints) == ("open", (2, 4))


def test_open_cluster_count_equals_p():
    for n in range(1, 6):
        for k in range(0, n + 1):
            for m in enumerate_matchings(n, k):
                dec = decompose_clusters(m)
                assert len(dec.open_clusters) == p_value(m.row_set(), m.col_set())


def test_endpoint_separation_worked_example():
    dec = decompose_clusters(TAU8)
    c1 = next(c for c in dec.clusters if c.kind == "open")
    assert endpoint_separation(TAU8, c1) == 6
    closed = next(c for c in dec.clusters if c.kind == "closed")
    assert endpoint_separation(TAU8, closed) == 0


def test_endpoint_separation_small_edge():
    m = Matching(3, ((1, 2),))
    (c,) = decompose_clusters(m).clusters
    assert endpoint_separation(m, c) == 0


def test_endpoint_separation_rejects_foreign_cluster():
    other = decompose_clusters(Matching(8, ((1, 2),))).clusters[0]
    with pytest.raises(ValueError):
        endpoint_separation(TAU8, other)


def test_flip_worked_example():
    flipped = flip(TAU8, 2, 8)
    assert flipped.edges == tuple(
        sorted([(1, 6), (8, 2), (4, 3), (2, 4), (5, 5), (6, 1), (7, 8)])
    )


def test_flip_on_closed_cluster_is_noop():
    # (1, 6) lies in the closed cluster {(1,6), (6,1)}
    assert flip(TAU8, 1, 6) == TAU8


def test_flip_requires_ordered_generator():
    with pytest.raises(ValueError):
        flip(TAU8, 8, 2)


def test_flip_is_involution_exhaustive_n3():
    for k in range(0, 4):
        for m in enumerate_matchings(3, k):
            for i in range(1, 4):
                for j in range(i + 1, 4):
                    assert flip(flip(m, i, j), i, j) == m


def test_flips_commute_exhaustive_n3():
    gens = [(i, j) for i in range(1, 4) for j in range(i + 1, 4)]
    for k in range(0, 4):
        for m in enumerate_matchings(3, k):
            for g1 in gens:
                for g2 in gens:
                    assert flip(flip(m, *g1), *g2) == flip(flip(m, *g2), *g1)


def test_orbit_worked_example_size_two():
    o = orbit(TAU8)
    assert len(o.members) == 2
    assert o.classification == "interlacing"
    assert o.representative == TAU8  # tau itself interlaces


def test_orbit_identity_matching_is_singleton():
    m = Matching(3, ((1, 1), (2, 2)))
    o = orbit(m)
    assert o.members == (m,)
    assert o.classification == "interlacing"


def test_orbit_single_edge_pair():
    o = orbit(Matching(3, ((1, 3),)))
    assert set(o.members) == {Matching(3, ((1, 3),)), Matching(3, ((3, 1),))}


def test_orbit_sizes_are_powers_of_two():
    for n in range(1, 5):
        for k in range(0, n + 1):
            for o in partition_into_orbits(n, k):
                rep = o.members[0]
                assert len(o.members) == 2 ** p_value(rep.row_set(), rep.col_set())


def test_classify_orbit_examples():
    assert classify_orbit(orbit(TAU8)) == "interlacing"
    assert classify_orbit(orbit(Matching(3, ((1, 3),)))) == "interlacing"
    assert classify_orbit(orbit(Matching(2, ((1, 2), (2, 1))))) == "interlacing"
    assert classify_orbit(orbit(Matching(4, ((3, 1), (2, 4))))) == "non-interlacing"


def test_classify_orbit_agrees_both_routes_exhaustively():
    for k in range(0, 4):
        for m in enumerate_matchings(3, k):
            classify_orbit(orbit(m))  # raises on any disagreement


def test_sign_flip_law_worked_example():
    chk = sign_flip_law_check(TAU8, 2, 8)
    assert chk.flipped and chk.holds and chk.separation == 6


def test_sign_flip_law_separation_zero_preserves_sign():
    m = Matching(2, ((1, 2),))
    chk = sign_flip_law_check(m, 1, 2)
    assert chk.flipped and chk.holds and chk.separation == 0
    assert sign(flip(m, 1, 2)) == sign(m) == 1


def test_sign_flip_law_two_edge_case():
    m = Matching(3, ((1, 2), (3, 1)))
    for i in range(1, 4):
        for j in range(i + 1, 4):
            assert sign_flip_law_check(m, i, j).holds


def test_sign_flip_law_vacuous_flag():
    chk = sign_flip_law_check(TAU8, 1, 6)  # closed cluster: no flip happens
    assert not chk.flipped and chk.holds and chk.separation is None


def test_orbit_sum_identity_n2_hand_value():
    # X = [[a, b], [b, d]] with (a, b, d) = (2, 3, 5): k=2 sum is ad - b^2 = 1
    x = ExactMatrix.from_rows([[2, 3], [3, 5]])
    rep = orbit_sum_identity(x, 2)
    assert rep.matching_sum == 1
    assert rep.all_checks_pass


@pytest.mark.parametrize("n,k,seed", [(3, 2, 51), (4, 2, 52)])
def test_orbit_sum_identity_random(n, k, seed):
    rep = orbit_sum_identity(random_symmetric(n, seed, 9), k)
    assert rep.all_checks_pass
    assert rep.matching_sum == rep.interlacing_s


def test_orbit_sum_identity_rejects_asymmetric():
    with pytest.raises(SymmetryError):
        orbit_sum_identity(ExactMatrix.from_rows([[1, 2], [3, 4]]), 1)


def test_weight_constant_on_orbits():
    x = random_symmetric(4, 53, 9)
    for k in range(1, 5):
        for o in partition_into_orbits(4, k):
            assert len({weight(m, x) for m in o.members}) == 1


def test_canonical_involution_properties():
    m = Matching(4, ((3, 1), (2, 4)))
    paired = canonical_involution(m)
    assert sign(paired) == -sign(m)
    assert canonical_involution(paired) == m


def test_canonical_involution_requires_odd_cluster():
    with pytest.raises(ValueError):
        canonical_involution(TAU8)  # interlacing orbit: every separation even


def test_canonical_involution_pairs_whole_orbit():
    for n in range(1, 5):
        for k in range(0, n + 1):
            for o in partition_into_orbits(n, k):
                if o.classification != "non-interlacing":
                    continue
                seen = set()
                for m in o.members:
                    partner = canonical_involution(m)
                    assert partner in o.members
                    assert partner != m
                    assert canonical_involution(partner) == m
                    seen.add(frozenset({m.edges, partner.edges}))
                assert len(seen) == len(o.members) // 2


def test_matching_json_round_trip():
    d = TAU8.to_json_dict()
    assert d["n"] == 8
    assert Matching.from_json_dict(d) == TAU8


def test_grand_identity_small():
    x = random_symmetric(4, 54, 9)
    for k in range(1, 5):
        total = sum(
            (sign(m) * weight(m, x) for m in enumerate_matchings(4, k)), Fraction(0)
        )
        assert total == interlacing_sum(x, k)
