"""Matchings of the complete bipartite graph K_{n,n} as signed, weighted
bijections, their cluster decomposition, and the cluster-flip group action.

A k-edge matching tau: I -> J contributes sign(tau) * prod x_{i,tau(i)} to the
expansion of the minor |X_IJ|.  Joining edges through auxiliary r -> r links
for r in the intersection of I and J partitions the edges into open and closed
clusters; flipping an open cluster (reversing all its edges) generates an
action of (Z/2)^C(n,2) whose orbit structure is what makes the sum of all
minors collapse onto interlacing pairs: non-interlacing orbits are
sign-balanced and cancel, interlacing orbits contribute 2^p equal terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator

from .exact_linalg import DimensionError, ExactMatrix, IndexSet, Rational, k_subsets
from .minor_sums import SIZE_GUARD, SymmetryError, interlacing_sum, is_interlacing

__all__ = [
    "Cluster",
    "ClusterDecomposition",
    "FlipSignCheck",
    "Matching",
    "Orbit",
    "OrbitSumReport",
    "canonical_involution",
    "classify_orbit",
    "decompose_clusters",
    "endpoint_separation",
    "enumerate_matchings",
    "flip",
    "minor_via_matchings",
    "orbit",
    "orbit_sum_identity",
    "partition_into_orbits",
    "sign",
    "sign_flip_law_check",
    "weight",
]


@dataclass(frozen=True)
class Matching:
    """k-edge matching of K_{n,n}; edge (i, j) joins left node i to right node j."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple(sorted((int(i), int(j)) for i, j in self.edges))
        object.__setattr__(self, "edges", edges)
        lefts = [i for i, _ in edges]
        rights = [j for _, j in edges]
        for v in lefts + rights:
            if not 1 <= v <= self.n:
                raise ValueError(f"node {v} out of range for n={self.n}")
        if len(set(lefts)) != len(edges) or len(set(rights)) != len(edges):
            raise ValueError("edges share a vertex; not a matching")

    @property
    def k(self) -> int:
        return len(self.edges)

    def row_set(self) -> IndexSet:
        return IndexSet(self.n, tuple(i for i, _ in self.edges))

    def col_set(self) -> IndexSet:
        return IndexSet(self.n, tuple(sorted(j for _, j in self.edges)))

    def mapping(self) -> dict[int, int]:
        return dict(self.edges)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [[i, j] for i, j in self.edges]}

    @staticmethod
    def from_json_dict(d: dict) -> Matching:
        return Matching(d["n"], tuple((i, j) for i, j in d["edges"]))


def enumerate_matchings(n: int, k: int) -> Iterator[Matching]:
    """All k-edge matchings of K_{n,n}, each exactly once, in lexicographic
    (I, J, assignment) order; there are C(n,k)^2 * k! of them."""
    if not 0 <= k <= n:
        raise ValueError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    for I in k_subsets(n, k):
        for J in k_subsets(n, k):
            for assignment in permutations(J.elems):
                yield Matching(n, tuple(zip(I.elems, assignment)))


def sign(m: Matching) -> int:
    """+1 or -1 by the parity of the crossing number: edge pairs (i -> j),
    (i' -> j') with (i - i') * (j - j') < 0.  Equals the sign of the underlying
    permutation."""
    crossings = 0
    edges = m.edges
    for s in range(len(edges)):
        i, j = edges[s]
        for t in range(s + 1, len(edges)):
            i2, j2 = edges[t]
            if (i - i2) * (j - j2) < 0:
                crossings += 1
    return -1 if crossings % 2 else 1


def weight(m: Matching, x: ExactMatrix) -> Rational:
    """Product of the matrix entries along the matching's edges."""
    if m.n > x.rows or m.n > x.cols:
        raise DimensionError(f"matching on n={m.n} does not fit a {x.rows}x{x.cols} matrix")
    total = Fraction(1)
    for i, j in m.edges:
        total *= x.entry(i, j)
    return total


def minor_via_matchings(x: ExactMatrix, I: IndexSet, J: IndexSet) -> Rational:
    """|X_IJ| as the signed sum over all bijections I -> J; determinant-free
    oracle for `exact_linalg.minor`."""
    if len(I) != len(J):
        raise DimensionError("index sets must have equal cardinality")
    n = max(I.n, J.n)
    total = Fraction(0)
    for assignment in permutations(J.elems):
        m = Matching(n, tuple(zip(I.elems, assignment)))
        total += sign(m) * weight(m, x)
    return total


@dataclass(frozen=True)
class Cluster:
    """One block of a matching's cluster decomposition.

    Open clusters form a path from a left node in I' = I - (I&J) to a right
    node in J' = J - (I&J); those two labels are the endpoints.  Closed
    clusters have separation 0 by definition.
    """

    edges: tuple[tuple[int, int], ...]
    kind: str  # "open" or "closed"
    endpoints: tuple[int, int] | None
    separation: int


@dataclass(frozen=True)
class ClusterDecomposition:
    matching: Matching
    clusters: tuple[Cluster, ...]

    @property
    def open_clusters(self) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if c.kind == "open")


def _separation(I: tuple[int, ...], J: tuple[int, ...], a: int, b: int) -> int:
    lo, hi = min(a, b), max(a, b)
    return sum(1 for v in list(I) + list(J) if lo < v < hi)


def decompose_clusters(m: Matching) -> ClusterDecomposition:
    """Partition the edges into clusters: connected components after
    temporarily adding auxiliary edges r -> r for every r in both I and J.

    Components are found by union-find over the left/right node pairs; a
    component is open exactly when it touches a node of degree one, i.e. a
    left node outside J or a right node outside I.
    """
    I = tuple(i for i, _ in m.edges)
    J = tuple(sorted(j for _, j in m.edges))
    common = set(I) & set(J)

    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in I:
        parent[("L", i)] = ("L", i)
    for j in J:
        parent[("R", j)] = ("R", j)
    for i, j in m.edges:
        union(("L", i), ("R", j))
    for r in common:
        union(("L", r), ("R", r))

    groups: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for e in m.edges:
        groups.setdefault(find(("L", e[0])), []).append(e)

    clusters = []
    for edges in groups.values():
        lefts = {i for i, _ in edges}
        rights = {j for _, j in edges}
        open_left = sorted(lefts - common)
        open_right = sorted(rights - common)
        if open_left or open_right:
            if len(open_left) != 1 or len(open_right) != 1:
                raise RuntimeError(f"open component with endpoints {open_left}/{open_right}")
            a, b = open_left[0], open_right[0]
            clusters.append(
                Cluster(tuple(edges), "open", (a, b), _separation(I, J, a, b))
            )
        else:
            clusters.append(Cluster(tuple(edges), "closed", None, 0))
    clusters.sort(key=lambda c: c.edges)
    return ClusterDecomposition(m, tuple(clusters))


def endpoint_separation(m: Matching, cluster: Cluster) -> int:
    """Number of entries of the sorted multiset I + J (duplicates kept) lying
    strictly between an open cluster's endpoint labels; 0 for closed clusters.
    The cluster must belong to m."""
    for c in decompose_clusters(m).clusters:
        if set(c.edges) == set(cluster.edges):
            return c.separation
    raise ValueError("given cluster is not a cluster of the matching")


def flip(m: Matching, i: int, j: int) -> Matching:
    """Generator f_ij of the flip group: if an open cluster contains the edge
    i -> j or j -> i, reverse every edge of that cluster; otherwise return m
    unchanged."""
    if not 1 <= i < j <= m.n:
        raise ValueError(f"flip generators need 1 <= i < j <= n, got ({i}, {j})")
    for c in decompose_clusters(m).open_clusters:
        if (i, j) in c.edges or (j, i) in c.edges:
            return _flip_cluster(m, c)
    return m


def _flip_cluster(m: Matching, cluster: Cluster) -> Matching:
    dropped = set(cluster.edges)
    kept = [e for e in m.edges if e not in dropped]
    reversed_edges = [(b, a) for a, b in cluster.edges]
    return Matching(m.n, tuple(kept + reversed_edges))


@dataclass(frozen=True)
class Orbit:
    """A flip-group orbit: all 2^p reversals-of-subsets of the open clusters."""

    members: tuple[Matching, ...]
    classification: str  # "interlacing" or "non-interlacing"
    representative: Matching | None  # the unique interlacing member, when any

    def to_json_dict(self, x: ExactMatrix | None = None) -> dict:
        d = {
            "classification": self.classification,
            "members": [m.to_json_dict() for m in self.members],
            "signs": [sign(m) for m in self.members],
            "separations": [
                [c.separation for c in decompose_clusters(m).clusters]
                for m in self.members
            ],
        }
        if x is not None:
            d["weights"] = [str(weight(m, x)) for m in self.members]
        return d


def orbit(m: Matching) -> Orbit:
    """Materialize the orbit of m under all cluster flips.

    Open clusters flip independently, so the members are exactly the 2^p
    subset-reversals.  Classification follows the parity criterion (orbit is
    interlacing iff every cluster separation is even), cross-checked against
    an explicit scan for an interlacing member.
    """
    dec = decompose_clusters(m)
    opens = dec.open_clusters
    members = []
    for mask in range(1 << len(opens)):
        current = m
        for b, c in enumerate(opens):
            if mask >> b & 1:
                current = _flip_cluster(current, c)
        members.append(current)
    members.sort(key=lambda t: t.edges)

    all_even = all(c.separation % 2 == 0 for c in dec.clusters)
    interlacing_members = [
        t for t in members if is_interlacing(t.row_set(), t.col_set())
    ]
    if all_even != bool(interlacing_members) or len(interlacing_members) > 1:
        raise RuntimeError(
            f"orbit classification inconsistency for {m}: even={all_even}, "
            f"interlacing members={len(interlacing_members)}"
        )
    if interlacing_members:
        return Orbit(tuple(members), "interlacing", interlacing_members[0])
    return Orbit(tuple(members), "non-interlacing", None)


def classify_orbit(o: Orbit) -> str:
    """Re-derive the classification both ways (member scan vs even-separation
    criterion on one member) and return it; raises if the two disagree."""
    scan = any(is_interlacing(t.row_set(), t.col_set()) for t in o.members)
    dec = decompose_clusters(o.members[0])
    even = all(c.separation % 2 == 0 for c in dec.clusters)
    if scan != even:
        raise RuntimeError("member scan and separation-parity criterion disagree")
    return "interlacing" if scan else "non-interlacing"


@dataclass(frozen=True)
class FlipSignCheck:
    """Outcome of checking sign(f_ij . tau) == (-1)^separation * sign(tau)."""

    flipped: bool
    holds: bool
    separation: int | None


def sign_flip_law_check(m: Matching, i: int, j: int) -> FlipSignCheck:
    if not 1 <= i < j <= m.n:
        raise ValueError(f"flip generators need 1 <= i < j <= n, got ({i}, {j})")
    for c in decompose_clusters(m).open_clusters:
        if (i, j) in c.edges or (j, i) in c.edges:
            flipped = _flip_cluster(m, c)
            expected = sign(m) * (-1 if c.separation % 2 else 1)
            return FlipSignCheck(True, sign(flipped) == expected, c.separation)
    return FlipSignCheck(False, True, None)


def canonical_involution(m: Matching) -> Matching:
    """Sign-reversing involution on non-interlacing orbits: flip the
    odd-separation open cluster whose smallest incident node label (over both
    sides) is minimal.

    That label set is unchanged by flipping, so applying the map twice gives m
    back; the flip reverses the sign because the separation is odd.
    """
    odd_opens = [
        c
        for c in decompose_clusters(m).open_clusters
        if c.separation % 2 == 1
    ]
    if not odd_opens:
        raise ValueError(
            "matching has no odd-separation open cluster (its orbit is interlacing)"
        )

    def label_key(c: Cluster) -> tuple[int, ...]:
        labels = {i for i, _ in c.edges} | {j for _, j in c.edges}
        return tuple(sorted(labels))

    return _flip_cluster(m, min(odd_opens, key=label_key))


@dataclass(frozen=True)
class OrbitSumReport:
    """Orbit-by-orbit audit of the alternating matching sum for symmetric X."""

    n: int
    k: int
    orbit_count: int
    weight_constant_on_orbits: bool
    interlacing_orbits_uniform_sign: bool
    non_interlacing_orbits_balanced: bool
    matching_sum: Rational
    interlacing_s: Rational

    @property
    def sums_equal(self) -> bool:
        return self.matching_sum == self.interlacing_s

    @property
    def all_checks_pass(self) -> bool:
        return (
            self.weight_constant_on_orbits
            and self.interlacing_orbits_uniform_sign
            and self.non_interlacing_orbits_balanced
            and self.sums_equal
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "orbit_count": self.orbit_count,
            "weight_constant_on_orbits": self.weight_constant_on_orbits,
            "interlacing_orbits_uniform_sign": self.interlacing_orbits_uniform_sign,
            "non_interlacing_orbits_balanced": self.non_interlacing_orbits_balanced,
            "sums_equal": self.sums_equal,
            "matching_sum": str(self.matching_sum),
            "interlacing_S": str(self.interlacing_s),
        }


def partition_into_orbits(n: int, k: int) -> list[Orbit]:
    """All of M_{n,k} grouped into flip-group orbits, in canonical order."""
    if n > SIZE_GUARD:
        raise ValueError(f"n={n} exceeds the guard {SIZE_GUARD}")
    seen: set[tuple[tuple[int, int], ...]] = set()
    orbits = []
    for m in enumerate_matchings(n, k):
        if m.edges in seen:
            continue
        o = orbit(m)
        for member in o.members:
            seen.add(member.edges)
        orbits.append(o)
    return orbits


def orbit_sum_identity(x: ExactMatrix, k: int) -> OrbitSumReport:
    """Execute the orbit-sum proof on concrete data: partition M_{n,k} into
    orbits and verify weight constancy, the two sign properties, and that the
    grand alternating sum equals the interlacing sum S."""
    if not x.is_square():
        raise DimensionError(f"need a square matrix, got {x.rows}x{x.cols}")
    if not x.is_symmetric():
        raise SymmetryError("orbit sum identity needs a symmetric matrix")
    n = x.rows
    orbits = partition_into_orbits(n, k)
    if k == 0:
        s = Fraction(1)  # the single empty pair contributes the empty minor
    else:
        s = interlacing_sum(x, k)

    weight_constant = True
    uniform_sign = True
    balanced = True
    total = Fraction(0)
    for o in orbits:
        weights = [weight(m, x) for m in o.members]
        signs = [sign(m) for m in o.members]
        if len(set(weights)) > 1:
            weight_constant = False
        if o.classification == "interlacing":
            if len(set(signs)) > 1:
                uniform_sign = False
        else:
            if sum(signs) != 0:
                balanced = False
        total += sum(s * w for s, w in zip(signs, weights))

    return OrbitSumReport(
        n=n,
        k=k,
        orbit_count=len(orbits),
        weight_constant_on_orbits=weight_constant,
        interlacing_orbits_uniform_sign=uniform_sign,
        non_interlacing_orbits_balanced=balanced,
        matching_sum=total,
        interlacing_s=s,
    )
