"""Random GF(2) vector assignments and the induced layer subgraphs they define.

Every hypercube coordinate i gets a uniform nonzero vector in F_2^r, plus a
fixed nonzero anchor vector.  A vertex S of the upper side of layer r
survives when its coordinate vectors form a basis of F_2^r; a lower-side
vertex survives when the anchor joined to its vectors does.  The induced
subgraph on the survivors is C6-free for every draw, and a single edge of
the layer survives with probability

    p(r) = (prod_{k=1}^{r-1} (2^r - 2^k) / (2^r - 1)) * (2^r - 2^(r-1)) / (2^r - 1),

which stays above half of the infinite product prod_{k>=1}(1 - 2^-k).
All closed-form probabilities and expectations here are exact rationals;
floats appear only in Monte Carlo summaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil, floor
from typing import Iterable, Iterator, Mapping

from . import cube
from .cube import CapacityError, LayerId, bit_indices
from .gf2 import GF2Vec, rank_bits, sample_nonzero

__all__ = [
    "VectorAssignment",
    "LayerSubgraph",
    "UnionGraph",
    "SearchResult",
    "TrialsExhausted",
    "derive_seed",
    "multiset_of",
    "member_upper",
    "member_lower",
    "sample_assignment",
    "build_layer_graph",
    "edge_count",
    "edge_pairs",
    "union_odd_layers",
    "union_edge_count",
    "edge_probability_closed_form",
    "constant_c",
    "constant_c_enclosure",
    "exact_expected_edges",
    "find_good_assignment",
    "format_assignment",
    "parse_assignment",
    "format_layer_graph",
    "parse_layer_graph",
]

EXPECTATION_CAP = 10**7

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, index: int) -> int:
    """Deterministic per-index seed derivation (splitmix64 finalizer).

    Python's built-in hash() is salted per process, so it cannot serve as a
    reproducible mixer; this keeps every trial a pure function of (seed, index).
    """
    x = (seed * 0x9E3779B97F4A7C15 + index * 0xBF58476D1CE4E5B9 + 0x94D049BB133111EB) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class VectorAssignment:
    """One vector per hypercube coordinate, plus the fixed lower-side anchor.

    All vectors are nonzero elements of F_2^r.  The anchor is the extra
    vector adjoined to every lower-side basis test.
    """

    n: int
    r: int
    anchor: GF2Vec
    vectors: tuple[GF2Vec, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.anchor.dim != self.r or not self.anchor:
            raise ValueError("anchor must be a nonzero vector of dimension r")
        if len(self.vectors) != self.n:
            raise ValueError(f"expected {self.n} coordinate vectors, got {len(self.vectors)}")
        for i, v in enumerate(self.vectors):
            if v.dim != self.r or not v:
                raise ValueError(f"coordinate vector {i} must be nonzero of dimension {self.r}")


@dataclass(frozen=True)
class LayerSubgraph:
    """Induced subgraph of a layer, stored as its two surviving vertex sets.

    Edges are implicit: (x, y) is an edge iff x in lower, y in upper and
    x is a subset of y.
    """

    layer: LayerId
    lower: frozenset[int]
    upper: frozenset[int]

    def __post_init__(self) -> None:
        n, r = self.layer.n, self.layer.r
        for x in self.lower:
            if x >> n or x.bit_count() != r - 1:
                raise ValueError(f"lower vertex 0x{x:x} is not an (r-1)-subset of [{n}]")
        for y in self.upper:
            if y >> n or y.bit_count() != r:
                raise ValueError(f"upper vertex 0x{y:x} is not an r-subset of [{n}]")


@dataclass(frozen=True)
class UnionGraph:
    """Disjoint union of layer subgraphs over odd layer indices."""

    n: int
    layers: Mapping[int, LayerSubgraph]

    def __post_init__(self) -> None:
        for r, g in self.layers.items():
            if r % 2 == 0 or not 1 <= r <= self.n:
                raise ValueError(f"layer keys must be odd and in [1, {self.n}], got {r}")
            if g.layer.n != self.n or g.layer.r != r:
                raise ValueError(f"layer {r} does not match its subgraph id {g.layer}")


def multiset_of(a: VectorAssignment, subset: int) -> list[GF2Vec]:
    """The coordinate vectors selected by a subset mask (with multiplicity)."""
    if subset >> a.n:
        raise ValueError(f"subset 0x{subset:x} is not within a ground set of size {a.n}")
    return [a.vectors[i] for i in bit_indices(subset)]


def member_upper(a: VectorAssignment, subset: int) -> bool:
    """True iff the r-subset's vectors form a basis of F_2^r."""
    if subset >> a.n:
        raise ValueError(f"subset 0x{subset:x} is not within a ground set of size {a.n}")
    if subset.bit_count() != a.r:
        raise ValueError(f"upper membership needs |S| = {a.r}, got {subset.bit_count()}")
    return rank_bits(a.vectors[i].bits for i in bit_indices(subset)) == a.r


def member_lower(a: VectorAssignment, subset: int) -> bool:
    """True iff the anchor plus the (r-1)-subset's vectors form a basis."""
    if subset >> a.n:
        raise ValueError(f"subset 0x{subset:x} is not within a ground set of size {a.n}")
    if subset.bit_count() != a.r - 1:
        raise ValueError(f"lower membership needs |S| = {a.r - 1}, got {subset.bit_count()}")
    rows = [a.anchor.bits]
    rows.extend(a.vectors[i].bits for i in bit_indices(subset))
    return rank_bits(rows) == a.r


def sample_assignment(n: int, r: int, seed: int) -> VectorAssignment:
    """Independent uniform nonzero vectors per coordinate, anchor fixed to e_0.

    The anchor only needs to be nonzero and the construction's distribution
    is invariant under its choice, so pinning it to the first standard basis
    vector keeps runs reproducible.
    """
    rng = random.Random(seed)
    anchor = GF2Vec.unit(0, r)
    vectors = tuple(sample_nonzero(rng, r) for _ in range(n))
    return VectorAssignment(n=n, r=r, anchor=anchor, vectors=vectors)


def _survivor_sets(
    n: int, r: int, anchor_bits: int, vector_bits: list[int]
) -> tuple[set[int], set[int]]:
    lower = set()
    for mask in cube.subsets_of_size(n, r - 1):
        rows = [anchor_bits]
        rows.extend(vector_bits[i] for i in bit_indices(mask))
        if rank_bits(rows) == r:
            lower.add(mask)
    upper = set()
    for mask in cube.subsets_of_size(n, r):
        if rank_bits(vector_bits[i] for i in bit_indices(mask)) == r:
            upper.add(mask)
    return lower, upper


def _edge_count_sets(n: int, lower: Iterable[int], upper: set[int]) -> int:
    total = 0
    for x in lower:
        for j in range(n):
            bit = 1 << j
            if not x & bit and (x | bit) in upper:
                total += 1
    return total


def build_layer_graph(a: VectorAssignment) -> LayerSubgraph:
    """Materialize the induced subgraph on the surviving vertex sets."""
    lower, upper = _survivor_sets(a.n, a.r, a.anchor.bits, [v.bits for v in a.vectors])
    return LayerSubgraph(LayerId(a.n, a.r), frozenset(lower), frozenset(upper))


def edge_count(g: LayerSubgraph) -> int:
    """Number of inclusion pairs between the surviving sides."""
    return _edge_count_sets(g.layer.n, g.lower, set(g.upper))


def edge_pairs(g: LayerSubgraph) -> Iterator[tuple[int, int]]:
    """The implicit edges, ordered by (lower mask, upper mask)."""
    n = g.layer.n
    upper = set(g.upper)
    for x in sorted(g.lower):
        for j in range(n):
            bit = 1 << j
            if not x & bit and (x | bit) in upper:
                yield x, x | bit


def union_odd_layers(n: int, assignments: Mapping[int, VectorAssignment]) -> UnionGraph:
    """Build each odd layer from its own assignment and take the disjoint union."""
    layers = {}
    for r in sorted(assignments):
        a = assignments[r]
        if r % 2 == 0 or not 1 <= r <= n:
            raise ValueError(f"layer keys must be odd and in [1, {n}], got {r}")
        if a.n != n:
            raise ValueError(f"assignment for layer {r} has n={a.n}, expected {n}")
        if a.r != r:
            raise ValueError(f"assignment for layer {r} has r={a.r}")
        layers[r] = build_layer_graph(a)
    return UnionGraph(n=n, layers=layers)


def union_edge_count(u: UnionGraph) -> int:
    return sum(edge_count(g) for g in u.layers.values())


def edge_probability_closed_form(r: int) -> Fraction:
    """Exact probability that a fixed layer edge survives the random draw."""
    if r < 1:
        raise ValueError(f"dimension must be >= 1, got {r}")
    top = 1 << r
    p = Fraction(1)
    for k in range(1, r):
        p *= Fraction(top - (1 << k), top - 1)
    p *= Fraction(top - (1 << (r - 1)), top - 1)
    return p


@lru_cache(maxsize=None)
def _partial_products(tolerance: Fraction) -> tuple[Fraction, Fraction, int]:
    """Partial product of prod(1 - 2^-k) with a certified tail bound.

    Returns (lo, hi, k) with lo <= prod_{k>=1}(1 - 2^-k) <= hi and
    hi - lo < tolerance.  The tail beyond k shrinks the product by a factor
    of at least 1 - 2^-k, which gives the lower end.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    partial = Fraction(1)
    k = 0
    while True:
        k += 1
        partial *= 1 - Fraction(1, 1 << k)
        width = partial * Fraction(1, 1 << k)
        if width < tolerance:
            return partial - width, partial, k


def constant_c(tolerance: float | Fraction = 1e-12) -> float:
    """Partial product of prod_{k>=1}(1 - 2^-k), with tail below tolerance."""
    _, hi, _ = _partial_products(Fraction(tolerance))
    return float(hi)


def constant_c_enclosure(
    tolerance: float | Fraction = Fraction(1, 10**12),
) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure [lo, hi] of the constant, hi - lo < tolerance.

    The raw partial products carry enormous denominators, so both ends are
    rounded outward to 18 decimal digits; the extra width is accounted for
    in the tolerance budget.
    """
    tol = Fraction(tolerance)
    scale = 10**18
    rounding = Fraction(2, scale)
    if tol <= rounding:
        raise ValueError(f"tolerance must exceed {float(rounding)}")
    lo_raw, hi_raw, _ = _partial_products(tol - rounding)
    lo = Fraction(floor(lo_raw * scale), scale)
    hi = Fraction(ceil(hi_raw * scale), scale)
    return lo, hi


def exact_expected_edges(n: int, r: int) -> Fraction:
    """Mean edge count over all (2^r - 1)^n assignments, as an exact rational.

    Brute-force enumeration; only sensible for tiny instances, and kept
    independent of the closed-form probability so the two can cross-check.
    """
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    states = ((1 << r) - 1) ** n
    if states > EXPECTATION_CAP:
        raise CapacityError(f"{states} assignments exceed the enumeration cap {EXPECTATION_CAP}")
    anchor_bits = 1
    nonzero = list(range(1, 1 << r))
    total = 0
    for vector_bits in product(nonzero, repeat=n):
        lower, upper = _survivor_sets(n, r, anchor_bits, list(vector_bits))
        total += _edge_count_sets(n, lower, upper)
    return Fraction(total, states)


@dataclass(frozen=True)
class SearchResult:
    """A sampled assignment whose graph beat the density threshold."""

    assignment: VectorAssignment
    graph: LayerSubgraph
    edges: int
    trials: int
    threshold: Fraction


class TrialsExhausted(RuntimeError):
    """Raised when no sampled assignment beat the threshold; carries the best seen."""

    def __init__(self, n: int, r: int, trials: int, best: SearchResult):
        super().__init__(
            f"no assignment with n={n}, r={r} beat the threshold after {trials} trials "
            f"(best: {best.edges} edges vs threshold {best.threshold})"
        )
        self.n = n
        self.r = r
        self.trials = trials
        self.best = best


def find_good_assignment(n: int, r: int, seed: int, max_trials: int = 512) -> SearchResult:
    """Resample until the graph's edge count strictly beats (c/2) * e(L_r(n)).

    The threshold uses the upper end of the certified enclosure of the
    constant at tolerance 1e-12, so a success implies the strict inequality
    against the true constant.  Trial i uses the derived seed (seed, i).
    """
    if max_trials < 1:
        raise ValueError(f"max_trials must be >= 1, got {max_trials}")
    _, c_hi = constant_c_enclosure()
    threshold = c_hi / 2 * cube.layer_edge_count(LayerId(n, r))
    best: SearchResult | None = None
    for trial in range(max_trials):
        a = sample_assignment(n, r, derive_seed(seed, trial))
        g = build_layer_graph(a)
        e = edge_count(g)
        result = SearchResult(a, g, e, trial + 1, threshold)
        if Fraction(e) > threshold:
            return result
        if best is None or e > best.edges:
            best = result
    assert best is not None
    raise TrialsExhausted(n, r, max_trials, best)


# ---------------------------------------------------------------------------
# Text formats


def format_assignment(a: VectorAssignment) -> str:
    lines = [f"# gf2-assignment n={a.n} r={a.r}", f"v0 {a.anchor.bits:x}"]
    for i, v in enumerate(a.vectors, start=1):
        lines.append(f"v{i} {v.bits:x}")
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> VectorAssignment:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# gf2-assignment "):
        raise ValueError("assignment file must start with '# gf2-assignment n=<n> r=<r>'")
    fields = dict(part.split("=", 1) for part in lines[0].split()[2:])
    try:
        n, r = int(fields["n"]), int(fields["r"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad assignment header: {lines[0]!r}") from exc
    if len(lines) != n + 2:
        raise ValueError(f"expected v0 plus {n} vector lines, got {len(lines) - 1}")
    vectors = []
    anchor = None
    for expect_idx, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 2 or parts[0] != f"v{expect_idx}":
            raise ValueError(f"expected 'v{expect_idx} <hex>', got {line!r}")
        vec = GF2Vec(int(parts[1], 16), r)
        if expect_idx == 0:
            anchor = vec
        else:
            vectors.append(vec)
    assert anchor is not None
    return VectorAssignment(n=n, r=r, anchor=anchor, vectors=tuple(vectors))


def format_layer_graph(g: LayerSubgraph) -> str:
    """Edge-list body in the shared format, then the two vertex sections."""
    lines = [f"# qn n={g.layer.n}"]
    for x, y in edge_pairs(g):
        lines.append(f"{x:x} {y:x}")
    lines.append(f"# layer r={g.layer.r}")
    lines.append("# lower")
    lines.extend(f"{x:x}" for x in sorted(g.lower))
    lines.append("# upper")
    lines.extend(f"{y:x}" for y in sorted(g.upper))
    return "\n".join(lines) + "\n"


def parse_layer_graph(text: str) -> LayerSubgraph:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# qn n="):
        raise ValueError("layer file must start with a '# qn n=<n>' header")
    n = int(lines[0].split("=", 1)[1])
    r = None
    section = "edges"
    edges = []
    lower: set[int] = set()
    upper: set[int] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("# layer r="):
            r = int(stripped.split("=", 1)[1])
            continue
        if stripped == "# lower":
            section = "lower"
            continue
        if stripped == "# upper":
            section = "upper"
            continue
        if stripped.startswith("#"):
            continue
        parts = stripped.split()
        if section == "edges":
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected an edge, got {line!r}")
            edges.append((int(parts[0], 16), int(parts[1], 16)))
        else:
            if len(parts) != 1:
                raise ValueError(f"line {lineno}: expected a vertex mask, got {line!r}")
            (lower if section == "lower" else upper).add(int(parts[0], 16))
    if r is None:
        raise ValueError("layer file is missing its '# layer r=<r>' line")
    g = LayerSubgraph(LayerId(n, r), frozenset(lower), frozenset(upper))
    if edges != list(edge_pairs(g)):
        raise ValueError("edge lines do not match the inclusion pairs of the vertex sections")
    return g
