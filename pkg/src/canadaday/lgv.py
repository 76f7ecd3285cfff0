"""Planar layered network whose path matrix is the T matrix, with exhaustive
vertex-disjoint path-family counting.

This gives a second, determinant-free route to the minors of T: by the
Lindstrom-Gessel-Viennot lemma, |T_{J,I}| counts vertex-disjoint path
families from sources J to sinks I.  The counting here is plain backtracking
over per-source path choices, deliberately independent of `exact_linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .exact_linalg import DimensionError, ExactMatrix, IndexSet, k_subsets, minor, t_matrix
from .minor_sums import t_minor_formula

__all__ = [
    "LayeredNetwork",
    "audit_table",
    "build_network",
    "count_disjoint_families",
    "path_matrix",
]

Edge = tuple[int, int]  # (left row, right row) within one layer


@dataclass(frozen=True)
class LayeredNetwork:
    """Directed graph arranged in layers between n-row vertex columns.

    Vertices are (boundary, row) pairs with boundaries 0..len(layers); layer b
    holds edges from boundary b to boundary b+1.  Sources are column 0, sinks
    the last column.
    """

    n: int
    layers: tuple[frozenset[Edge], ...]

    def __post_init__(self) -> None:
        for b, layer in enumerate(self.layers):
            for a, c in layer:
                if not (1 <= a <= self.n and 1 <= c <= self.n):
                    raise ValueError(f"edge ({a}, {c}) in layer {b} out of range")
            for a, c in layer:
                for a2, c2 in layer:
                    if (a - a2) * (c - c2) < 0:
                        raise ValueError(
                            f"layer {b} is not planar: edges ({a}->{c}) and "
                            f"({a2}->{c2}) cross"
                        )

    @property
    def depth(self) -> int:
        return len(self.layers)


def build_network(n: int) -> LayeredNetwork:
    """Network with path matrix equal to t_matrix(n).

    Layer 0 realizes the bidiagonal factor (edges i->i, and i->i-1 for i >= 2);
    layer t in 1..n-1 realizes one elementary factor of the lower-triangular
    all-ones matrix (edges i->i plus the single edge (n-t+1)->(n-t)).  The
    path matrix is checked against t_matrix(n) at construction.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    bidiag = {(i, i) for i in range(1, n + 1)} | {(i, i - 1) for i in range(2, n + 1)}
    layers = [frozenset(bidiag)]
    for t in range(1, n):
        step = {(i, i) for i in range(1, n + 1)}
        step.add((n - t + 1, n - t))
        layers.append(frozenset(step))
    net = LayeredNetwork(n, tuple(layers))
    if path_matrix(net) != t_matrix(n):
        raise RuntimeError(f"constructed network has wrong path matrix for n={n}")
    return net


def _layer_matrix(n: int, layer: frozenset[Edge]) -> ExactMatrix:
    rows = [[0] * n for _ in range(n)]
    for a, c in layer:
        rows[a - 1][c - 1] += 1
    return ExactMatrix.from_rows(rows)


def path_matrix(net: LayeredNetwork) -> ExactMatrix:
    """Entry (a, b) counts directed paths from source a to sink b: the product
    of the per-layer adjacency matrices."""
    mats = [_layer_matrix(net.n, layer) for layer in net.layers]
    return reduce(lambda x, y: x @ y, mats, ExactMatrix.identity(net.n))


def _paths_from(net: LayeredNetwork, source: int) -> list[tuple[int, ...]]:
    """All directed paths from (0, source) to the sink column, as row tuples."""
    depth = net.depth
    done: list[tuple[int, ...]] = []
    stack: list[tuple[int, tuple[int, ...]]] = [(0, (source,))]
    while stack:
        b, path = stack.pop()
        if b == depth:
            done.append(path)
            continue
        r = path[-1]
        for a, c in net.layers[b]:
            if a == r:
                stack.append((b + 1, path + (c,)))
    return done


def count_disjoint_families(net: LayeredNetwork, sources: IndexSet, sinks: IndexSet) -> int:
    """Number of families of vertex-disjoint paths joining the source set
    bijectively onto the sink set.

    Exhaustive backtracking: each source in turn tries each of its paths whose
    endpoint is an unused sink and whose vertices are all unoccupied.  In this
    planar network only the order-preserving connection can survive, which is
    what makes the count equal the corresponding minor of T.
    """
    if len(sources) != len(sinks):
        raise DimensionError(
            f"need equally many sources and sinks, got {len(sources)} and {len(sinks)}"
        )
    sink_set = set(sinks)
    per_source = [
        [p for p in _paths_from(net, s) if p[-1] in sink_set] for s in sources
    ]

    def extend(idx: int, occupied: set, used_sinks: set) -> int:
        if idx == len(per_source):
            return 1
        total = 0
        for path in per_source[idx]:
            if path[-1] in used_sinks:
                continue
            verts = set(enumerate(path))
            if verts & occupied:
                continue
            total += extend(idx + 1, occupied | verts, used_sinks | {path[-1]})
        return total

    return extend(0, set(), set())


def audit_table(n: int) -> list[dict]:
    """Three-way table over all index pairs: closed formula, determinant minor
    of T (rows J, cols I), and the backtracking path-family count."""
    net = build_network(n)
    big_t = t_matrix(n)
    table = []
    for k in range(1, n + 1):
        for I in k_subsets(n, k):
            for J in k_subsets(n, k):
                formula = int(t_minor_formula(I, J))
                det_value = int(minor(big_t, J, I))
                lgv_count = count_disjoint_families(net, J, I)
                table.append(
                    {
                        "k": k,
                        "I": list(I.elems),
                        "J": list(J.elems),
                        "formula_value": formula,
                        "det_value": det_value,
                        "lgv_count": lgv_count,
                        "agree": formula == det_value == lgv_count,
                    }
                )
    return table
