"""Forbidden-subgraph detectors for subgraphs of the hypercube.

Two independent routes for 6-cycles inside a layer:

* a structured scan over 3-dimensional subcube patterns (a 6-cycle in a
  layer flips exactly three coordinates, so it is the middle layer of a
  3-cube), and
* a generic exhaustive backtracking search that works on any subgraph of
  Q_n and any even cycle length.

The generic search breaks symmetry canonically (cycles start at their
smallest vertex; the second vertex is smaller than the last) and prunes by
Hamming distance back to the start, which is a lower bound on remaining
graph distance, so pruning never loses a cycle.  Scans are splittable over
start vertices; the witness with the lowest canonical order always wins,
so results do not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from . import cube
from .construction import LayerSubgraph, UnionGraph, VectorAssignment, edge_pairs
from .cube import bit_indices
from .gf2 import GF2Vec, quotient_image, rank_bits

__all__ = [
    "CubeSubgraph",
    "CycleWitness",
    "PathWitness",
    "SubcubePattern",
    "C6Obstruction",
    "subgraph_of_layer",
    "subgraph_of_union",
    "find_cycle_generic",
    "find_c6_minus",
    "find_c6_structured",
    "explain_c6_impossibility",
    "witness_line",
]


@dataclass(frozen=True)
class CubeSubgraph:
    """A subgraph of Q_n: a vertex set plus induced or explicit edges.

    vertices is a sorted tuple of masks.  edges is None for the subgraph
    induced by Q_n adjacency, or a sorted tuple of (x, y) pairs (each a
    Q_n edge with both endpoints present) for an explicit edge subset.
    """

    n: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] | None = None

    @classmethod
    def induced(cls, n: int, vertices: Iterable[int]) -> CubeSubgraph:
        verts = tuple(sorted(set(vertices)))
        for v in verts:
            if v < 0 or v >> n:
                raise ValueError(f"vertex 0x{v:x} is outside Q_{n}")
        return cls(n=n, vertices=verts)

    @classmethod
    def explicit(
        cls, n: int, vertices: Iterable[int], edges: Iterable[tuple[int, int]]
    ) -> CubeSubgraph:
        verts = tuple(sorted(set(vertices)))
        vert_set = set(verts)
        for v in verts:
            if v < 0 or v >> n:
                raise ValueError(f"vertex 0x{v:x} is outside Q_{n}")
        norm = set()
        for x, y in edges:
            if x > y:
                x, y = y, x
            if (x ^ y).bit_count() != 1:
                raise ValueError(f"(0x{x:x}, 0x{y:x}) is not a Q_n edge")
            if x not in vert_set or y not in vert_set:
                raise ValueError(f"edge (0x{x:x}, 0x{y:x}) has an endpoint outside the vertex set")
            norm.add((x, y))
        return cls(n=n, vertices=verts, edges=tuple(sorted(norm)))

    def edge_list(self) -> list[tuple[int, int]]:
        if self.edges is not None:
            return list(self.edges)
        vert_set = set(self.vertices)
        out = []
        for x in self.vertices:
            for j in range(self.n):
                y = x | (1 << j)
                if y != x and y in vert_set:
                    out.append((x, y))
        return out


def subgraph_of_layer(g: LayerSubgraph) -> CubeSubgraph:
    """The layer subgraph as an induced subgraph of Q_n (same edges)."""
    return CubeSubgraph.induced(g.layer.n, set(g.lower) | set(g.upper))


def subgraph_of_union(u: UnionGraph) -> CubeSubgraph:
    """The union graph with its explicit per-layer edges."""
    verts: set[int] = set()
    edges: list[tuple[int, int]] = []
    for g in u.layers.values():
        verts |= set(g.lower) | set(g.upper)
        edges.extend(edge_pairs(g))
    return CubeSubgraph.explicit(u.n, verts, edges)


@dataclass(frozen=True)
class CycleWitness:
    """A closed walk through distinct, consecutively adjacent vertices."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.vertices)
        if k < 4:
            raise ValueError(f"a cycle needs at least 4 vertices, got {k}")
        if len(set(self.vertices)) != k:
            raise ValueError("cycle vertices must be distinct")
        for i, v in enumerate(self.vertices):
            w = self.vertices[(i + 1) % k]
            if (v ^ w).bit_count() != 1:
                raise ValueError(f"0x{v:x} and 0x{w:x} are not adjacent in Q_n")

    @property
    def length(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class PathWitness:
    """A 5-edge path whose endpoints sit at Hamming distance 1."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != 6:
            raise ValueError(f"expected 6 vertices, got {len(self.vertices)}")
        if len(set(self.vertices)) != 6:
            raise ValueError("path vertices must be distinct")
        for v, w in zip(self.vertices, self.vertices[1:]):
            if (v ^ w).bit_count() != 1:
                raise ValueError(f"0x{v:x} and 0x{w:x} are not adjacent in Q_n")
        if (self.vertices[0] ^ self.vertices[-1]).bit_count() != 1:
            raise ValueError("path endpoints must differ in exactly one coordinate")


@dataclass(frozen=True)
class SubcubePattern:
    """Middle layer of a 3-cube: a shared core subset plus three axis elements.

    The six implied vertices are core+{a}, core+{b}, core+{c} on the lower
    side and core+{a,b}, core+{a,c}, core+{b,c} on the upper side.
    """

    core: int
    axes: tuple[int, int, int]

    def __post_init__(self) -> None:
        a, b, c = self.axes
        if not a < b < c:
            raise ValueError(f"axes must be strictly increasing, got {self.axes}")
        if self.core < 0:
            raise ValueError("core mask must be nonnegative")
        for i in self.axes:
            if (self.core >> i) & 1:
                raise ValueError(f"axis {i} overlaps the core mask 0x{self.core:x}")

    def lower_vertices(self) -> tuple[int, int, int]:
        return tuple(self.core | (1 << i) for i in self.axes)  # type: ignore[return-value]

    def upper_vertices(self) -> tuple[int, int, int]:
        a, b, c = self.axes
        return (
            self.core | (1 << a) | (1 << b),
            self.core | (1 << a) | (1 << c),
            self.core | (1 << b) | (1 << c),
        )


@dataclass(frozen=True)
class C6Obstruction:
    """Which membership condition of a subcube pattern fails for an assignment.

    failed_conditions is empty only when every condition holds, in which
    case pigeonhole carries the (never expected) contradiction message.
    """

    pattern: SubcubePattern
    failed_conditions: tuple[str, ...]
    images: tuple[GF2Vec, GF2Vec, GF2Vec, GF2Vec] | None
    pigeonhole: str | None

    def all_conditions_pass(self) -> bool:
        return not self.failed_conditions


# ---------------------------------------------------------------------------
# Generic backtracking searches


def _adjacency_bits(graph: CubeSubgraph) -> tuple[list[int], list[int]]:
    """Vertex masks (ascending) and per-vertex neighbor sets as index bitmasks."""
    masks = list(graph.vertices)
    pos = {m: i for i, m in enumerate(masks)}
    adj = [0] * len(masks)
    if graph.edges is None:
        for i, m in enumerate(masks):
            for j in range(graph.n):
                k = pos.get(m ^ (1 << j))
                if k is not None:
                    adj[i] |= 1 << k
    else:
        for x, y in graph.edges:
            i, k = pos[x], pos[y]
            adj[i] |= 1 << k
            adj[k] |= 1 << i
    return masks, adj


def _first_cycle_in_range(
    graph: CubeSubgraph, start_lo: int, start_hi: int, length: int
) -> tuple[int, ...] | None:
    masks, adj = _adjacency_bits(graph)
    count = len(masks)

    def extend(path: list[int], visited: int, start: int, above: int) -> list[int] | None:
        v = path[-1]
        if len(path) == length - 1:
            cand = adj[v] & adj[start] & above & ~visited
            while cand:
                low = cand & -cand
                w = low.bit_length() - 1
                cand ^= low
                if w > path[1]:
                    return path + [w]
            return None
        pos_next = len(path)
        check_dist = 2 * pos_next > length
        start_mask = masks[start]
        budget = length - pos_next
        cand = adj[v] & above & ~visited
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            if check_dist and (masks[w] ^ start_mask).bit_count() > budget:
                continue
            found = extend(path + [w], visited | low, start, above)
            if found is not None:
                return found
        return None

    for s in range(start_lo, min(start_hi, count)):
        above = -1 << (s + 1)
        found = extend([s], 1 << s, s, above)
        if found is not None:
            return tuple(masks[i] for i in found)
    return None


def _cycle_scan_task(args: tuple[CubeSubgraph, int, int, int]) -> tuple[int, ...] | None:
    return _first_cycle_in_range(*args)


def _first_c6_minus_in_range(
    graph: CubeSubgraph, start_lo: int, start_hi: int
) -> tuple[int, ...] | None:
    masks, adj = _adjacency_bits(graph)
    count = len(masks)

    def extend(path: list[int], visited: int, start_mask: int, above: int) -> list[int] | None:
        pos_next = len(path)
        cand = adj[path[-1]] & ~visited
        if pos_next == 5:
            cand &= above
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            dist = (masks[w] ^ start_mask).bit_count()
            if dist > 6 - pos_next:
                continue
            if pos_next == 5:
                if dist == 1:
                    return path + [w]
                continue
            found = extend(path + [w], visited | low, start_mask, above)
            if found is not None:
                return found
        return None

    for s in range(start_lo, min(start_hi, count)):
        found = extend([s], 1 << s, masks[s], -1 << (s + 1))
        if found is not None:
            return tuple(masks[i] for i in found)
    return None


def _c6_minus_scan_task(args: tuple[CubeSubgraph, int, int]) -> tuple[int, ...] | None:
    return _first_c6_minus_in_range(*args)


def _split_ranges(count: int, workers: int) -> list[tuple[int, int]]:
    chunk = -(-count // workers)
    return [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]


def find_cycle_generic(
    graph: CubeSubgraph, length: int, workers: int = 1
) -> CycleWitness | None:
    """Exhaustive search for a cycle of exactly the given even length.

    Returns the canonically first witness (lowest start vertex, then DFS
    order) or None.  workers > 1 splits the start vertices over processes;
    the answer is identical for every worker count.
    """
    if length < 4 or length % 2:
        raise ValueError(f"cycle length must be even and >= 4, got {length}")
    count = len(graph.vertices)
    if count < length:
        return None
    if workers <= 1:
        found = _first_cycle_in_range(graph, 0, count, length)
        return None if found is None else CycleWitness(found)
    tasks = [(graph, lo, hi, length) for lo, hi in _split_ranges(count, workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(_cycle_scan_task, tasks):
            if found is not None:
                return CycleWitness(found)
    return None


def find_c6_minus(graph: CubeSubgraph, workers: int = 1) -> PathWitness | None:
    """Exhaustive search for a 5-edge path with endpoints at Hamming distance 1.

    This is a direct path search, not a 6-cycle search: outside a single
    layer the two are not equivalent, because the closing pair only needs
    to be a Q_n edge, not an edge of the graph.
    """
    count = len(graph.vertices)
    if count < 6:
        return None
    if workers <= 1:
        found = _first_c6_minus_in_range(graph, 0, count)
        return None if found is None else PathWitness(found)
    tasks = [(graph, lo, hi) for lo, hi in _split_ranges(count, workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(_c6_minus_scan_task, tasks):
            if found is not None:
                return PathWitness(found)
    return None


# ---------------------------------------------------------------------------
# Structured scan and its impossibility certificate


def find_c6_structured(g: LayerSubgraph) -> SubcubePattern | None:
    """Scan all subcube patterns whose six vertices survive in the layer graph.

    Cores are visited in increasing mask order and axis triples
    lexicographically, so the first hit is deterministic.
    """
    n, r = g.layer.n, g.layer.r
    if r < 2 or n - (r - 2) < 3:
        return None
    lower, upper = g.lower, g.upper
    for core in cube.subsets_of_size(n, r - 2):
        hits = [i for i in range(n) if not (core >> i) & 1 and (core | (1 << i)) in lower]
        if len(hits) < 3:
            continue
        for a, b, c in combinations(hits, 3):
            if (
                (core | (1 << a) | (1 << b)) in upper
                and (core | (1 << a) | (1 << c)) in upper
                and (core | (1 << b) | (1 << c)) in upper
            ):
                return SubcubePattern(core, (a, b, c))
    return None


PIGEONHOLE_MESSAGE = (
    "all seven basis conditions hold: four pairwise-distinct nonzero images "
    "in a 2-dimensional quotient, which has only three nonzero vectors"
)


def explain_c6_impossibility(a: VectorAssignment, pattern: SubcubePattern) -> C6Obstruction:
    """Recompute the quotient by the core's vectors and report what failed.

    The seven conditions are the three upper-side and three lower-side basis
    requirements of the pattern plus the independence of the core's vectors.
    If none fails, the four quotient images would be distinct nonzero
    elements of a 2-dimensional space; the report flags that contradiction,
    which no assignment can reach.
    """
    core_elems = bit_indices(pattern.core)
    if len(core_elems) != a.r - 2:
        raise ValueError(
            f"core size {len(core_elems)} does not match r - 2 = {a.r - 2}"
        )
    if pattern.core >> a.n or any(i >= a.n for i in pattern.axes):
        raise ValueError(f"pattern does not fit a ground set of size {a.n}")
    core_vecs = [a.vectors[i] for i in core_elems]
    if rank_bits(v.bits for v in core_vecs) != len(core_vecs):
        return C6Obstruction(pattern, ("core",), None, None)
    anchor_img = quotient_image(a.anchor, core_vecs)
    axis_imgs = [quotient_image(a.vectors[i], core_vecs) for i in pattern.axes]
    failed = []
    ax = pattern.axes
    for (p, q) in ((0, 1), (0, 2), (1, 2)):
        xi, xj = axis_imgs[p], axis_imgs[q]
        if not xi or not xj or xi == xj:
            failed.append(f"upper:{ax[p]},{ax[q]}")
    for p in range(3):
        xi = axis_imgs[p]
        if not anchor_img or not xi or anchor_img == xi:
            failed.append(f"lower:{ax[p]}")
    images = (anchor_img, axis_imgs[0], axis_imgs[1], axis_imgs[2])
    if failed:
        return C6Obstruction(pattern, tuple(failed), images, None)
    return C6Obstruction(pattern, (), images, PIGEONHOLE_MESSAGE)


def witness_line(witness: CycleWitness | PathWitness) -> str:
    """One-line text form: 'C6 <hex>...', 'C10 <hex>...' or 'C6- <hex>...'."""
    if isinstance(witness, PathWitness):
        label = "C6-"
    else:
        label = f"C{witness.length}"
    return " ".join([label] + [f"{v:x}" for v in witness.vertices])
