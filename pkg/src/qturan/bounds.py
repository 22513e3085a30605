"""Density accounting and the coloring-certificate pipeline.

Per-layer densities are compared against c/2, the odd-layer union against
c/4, and the best C10-free color class against c/12, where c is the
infinite product prod_{k>=1}(1 - 2^-k).  Every comparison is exact: the
constant enters only through a certified rational enclosure of width below
1e-12, and a report passes only when its exact ratio beats the UPPER end
of the enclosure divided by the bound's denominator, so a recorded pass
implies the strict inequality against the true constant.

The 3-coloring of E(Q_n) driving the final bound is an external input.  It
is verified for shape (every edge colored exactly once) and its color
classes are checked for C10-freeness; nothing about it is trusted or
reconstructed here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Mapping

from . import cube
from .construction import (
    SearchResult,
    TrialsExhausted,
    UnionGraph,
    VectorAssignment,
    constant_c_enclosure,
    derive_seed,
    edge_count,
    edge_pairs,
    find_good_assignment,
    union_odd_layers,
)
from .cube import LayerId, cube_edge_count
from .detector import CubeSubgraph, CycleWitness, find_cycle_generic, subgraph_of_union

__all__ = [
    "BOUND_DIVISORS",
    "ColoringCertificate",
    "DensityReport",
    "PipelineOutcome",
    "SuiteResult",
    "SuiteExhausted",
    "edge_key",
    "monochromatic_certificate",
    "coloring_problems",
    "verify_coloring",
    "make_report",
    "c10_pipeline",
    "search_coloring_small_n",
    "density_report_suite",
    "reports_to_csv",
    "format_coloring",
    "parse_coloring",
]

BOUND_DIVISORS = {"c/2": 2, "c/4": 4, "c/12": 12}

COLOR_COUNT = 3

EXHAUSTIVE_COLORING_MAX_N = 3


def edge_key(x: int, y: int) -> tuple[int, int]:
    """Canonical key of a Q_n edge: (smaller endpoint, flipped coordinate)."""
    if (x ^ y).bit_count() != 1:
        raise ValueError(f"(0x{x:x}, 0x{y:x}) is not a Q_n edge")
    base = min(x, y)
    return base, (x ^ y).bit_length() - 1


@dataclass(frozen=True)
class ColoringCertificate:
    """A 3-coloring of E(Q_n), keyed by (smaller endpoint, coordinate)."""

    n: int
    colors: Mapping[tuple[int, int], int]


def monochromatic_certificate(n: int, color: int = 0) -> ColoringCertificate:
    if color not in range(COLOR_COUNT):
        raise ValueError(f"color must be in [0, {COLOR_COUNT}), got {color}")
    return ColoringCertificate(n, {edge_key(x, y): color for x, y in cube.cube_edges(n)})


def coloring_problems(cert: ColoringCertificate, limit: int = 10) -> list[str]:
    """Human-readable list of defects; empty iff the certificate is valid."""
    problems = []
    expected = {edge_key(x, y) for x, y in cube.cube_edges(cert.n)}
    for key, color in cert.colors.items():
        if key not in expected:
            problems.append(f"key {key} is not an edge of Q_{cert.n}")
        elif color not in range(COLOR_COUNT):
            problems.append(f"edge {key} has color {color}, expected 0..{COLOR_COUNT - 1}")
    for key in sorted(expected - set(cert.colors)):
        problems.append(f"edge (0x{key[0]:x}, coord {key[1]}) is missing")
    return problems[:limit]


def verify_coloring(cert: ColoringCertificate) -> bool:
    """True iff the map covers E(Q_n) exactly once with colors in {0, 1, 2}."""
    return not coloring_problems(cert, limit=1)


@dataclass(frozen=True)
class DensityReport:
    """Exact density of an achieved subgraph against one of the c-bounds."""

    n: int
    r: int | None
    scope: str
    achieved_edges: int
    ambient_edges: int
    ratio: Fraction
    bound_name: str
    bound_value: Fraction
    passed: bool


def make_report(
    n: int, r: int | None, scope: str, achieved: int, ambient: int, bound_name: str
) -> DensityReport:
    divisor = BOUND_DIVISORS[bound_name]
    _, c_hi = constant_c_enclosure()
    bound_value = c_hi / divisor
    ratio = Fraction(achieved, ambient)
    return DensityReport(
        n=n,
        r=r,
        scope=scope,
        achieved_edges=achieved,
        ambient_edges=ambient,
        ratio=ratio,
        bound_name=bound_name,
        bound_value=bound_value,
        passed=ratio > bound_value,
    )


def reports_to_csv(reports: list[DensityReport]) -> str:
    lines = ["n,r,scope,achieved,ambient,ratio,bound,bound_value,pass"]
    for rep in reports:
        r_field = "" if rep.r is None else str(rep.r)
        ratio = f"{rep.ratio.numerator}/{rep.ratio.denominator}"
        bound = f"{rep.bound_value.numerator}/{rep.bound_value.denominator}"
        passed = "true" if rep.passed else "false"
        lines.append(
            f"{rep.n},{r_field},{rep.scope},{rep.achieved_edges},{rep.ambient_edges},"
            f"{ratio},{rep.bound_name},{bound},{passed}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# The C10 pipeline


@dataclass(frozen=True)
class PipelineOutcome:
    """Result of splitting a union graph by certificate color classes.

    success means at least one class is C10-free; best_class is then the
    free class with the most edges (smallest index on ties) and report
    scores it against c/12.  On failure, witnesses holds one C10 per class.
    """

    success: bool
    best_class: int | None
    class_edge_counts: tuple[int, ...]
    free_classes: tuple[int, ...]
    witnesses: Mapping[int, CycleWitness]
    subgraph: CubeSubgraph | None
    report: DensityReport | None


def _color_classes(
    union: UnionGraph, cert: ColoringCertificate
) -> list[list[tuple[int, int]]]:
    classes: list[list[tuple[int, int]]] = [[] for _ in range(COLOR_COUNT)]
    for g in union.layers.values():
        for x, y in edge_pairs(g):
            classes[cert.colors[edge_key(x, y)]].append((x, y))
    return classes


def c10_pipeline(
    union: UnionGraph, cert: ColoringCertificate, workers: int = 1
) -> PipelineOutcome:
    """Score the densest C10-free color class of the union graph against c/12."""
    if cert.n != union.n:
        raise ValueError(f"certificate is for n={cert.n}, union graph has n={union.n}")
    problems = coloring_problems(cert)
    if problems:
        raise ValueError("invalid coloring certificate: " + "; ".join(problems))
    all_vertices = set()
    for g in union.layers.values():
        all_vertices |= set(g.lower) | set(g.upper)
    classes = _color_classes(union, cert)
    counts = tuple(len(edges) for edges in classes)
    free = []
    witnesses = {}
    for k, edges in enumerate(classes):
        sub = CubeSubgraph.explicit(union.n, all_vertices, edges)
        witness = find_cycle_generic(sub, 10, workers=workers)
        if witness is None:
            free.append(k)
        else:
            witnesses[k] = witness
    if not free:
        return PipelineOutcome(False, None, counts, (), witnesses, None, None)
    best = min(free, key=lambda k: (-counts[k], k))
    if len(free) == COLOR_COUNT:
        # Averaging over three classes: the best one carries >= a third.
        assert COLOR_COUNT * counts[best] >= sum(counts)
    subgraph = CubeSubgraph.explicit(union.n, all_vertices, classes[best])
    report = make_report(
        union.n, None, "final", counts[best], cube_edge_count(union.n), "c/12"
    )
    return PipelineOutcome(True, best, counts, tuple(free), witnesses, subgraph, report)


def _classes_are_c10_free(
    union: UnionGraph, colors: Mapping[tuple[int, int], int], vertices: set[int]
) -> tuple[bool, int | None, CycleWitness | None]:
    classes: list[list[tuple[int, int]]] = [[] for _ in range(COLOR_COUNT)]
    for g in union.layers.values():
        for x, y in edge_pairs(g):
            classes[colors[edge_key(x, y)]].append((x, y))
    for k, edges in enumerate(classes):
        if len(edges) < 10:
            continue
        sub = CubeSubgraph.explicit(union.n, vertices, edges)
        witness = find_cycle_generic(sub, 10)
        if witness is not None:
            return False, k, witness
    return True, None, None


def search_coloring_small_n(
    union: UnionGraph, budget: int, seed: int = 0
) -> ColoringCertificate | None:
    """Look for a certificate whose classes restricted to the union are C10-free.

    Exhaustive over all colorings for n <= 3 (first hit in lexicographic
    order); randomized recolor-a-witness-edge local search beyond.  Returns
    None when the budget runs out.  Experimental stand-in for a real
    external certificate; a success here says nothing beyond this graph.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    n = union.n
    keys = sorted(edge_key(x, y) for x, y in cube.cube_edges(n))
    vertices = set()
    for g in union.layers.values():
        vertices |= set(g.lower) | set(g.upper)
    if n <= EXHAUSTIVE_COLORING_MAX_N:
        evaluated = 0
        for combo in iter_product(range(COLOR_COUNT), repeat=len(keys)):
            colors = dict(zip(keys, combo))
            ok, _, _ = _classes_are_c10_free(union, colors, vertices)
            evaluated += 1
            if ok:
                return ColoringCertificate(n, colors)
            if evaluated >= budget:
                return None
        return None
    rng = random.Random(seed)
    colors = {key: rng.randrange(COLOR_COUNT) for key in keys}
    for _ in range(budget):
        ok, bad_class, witness = _classes_are_c10_free(union, colors, vertices)
        if ok:
            return ColoringCertificate(n, dict(colors))
        assert witness is not None and bad_class is not None
        cycle = witness.vertices
        i = rng.randrange(len(cycle))
        key = edge_key(cycle[i], cycle[(i + 1) % len(cycle)])
        colors[key] = (colors[key] + 1 + rng.randrange(COLOR_COUNT - 1)) % COLOR_COUNT
    return None


# ---------------------------------------------------------------------------
# The full report suite


@dataclass(frozen=True)
class SuiteResult:
    reports: tuple[DensityReport, ...]
    union: UnionGraph
    assignments: Mapping[int, VectorAssignment]
    trials: Mapping[int, int]
    pipeline: PipelineOutcome | None


class SuiteExhausted(RuntimeError):
    """A layer search ran out of trials; carries the reports gathered so far."""

    def __init__(self, cause: TrialsExhausted, partial_reports: tuple[DensityReport, ...]):
        super().__init__(str(cause))
        self.cause = cause
        self.partial_reports = partial_reports


def density_report_suite(
    n: int,
    seed: int,
    certificate: ColoringCertificate | None = None,
    max_trials: int = 512,
    workers: int = 1,
) -> SuiteResult:
    """Run the whole chain: per-layer searches, the odd-layer union, and the
    certificate step when a certificate is supplied.

    Layer r uses the derived seed (seed, r).  Per-layer reports are checked
    against c/2, the union against c/4 and the best color class against
    c/12; all ratios are exact.
    """
    reports: list[DensityReport] = []
    searches: dict[int, SearchResult] = {}
    for r in range(1, n + 1, 2):
        try:
            found = find_good_assignment(n, r, derive_seed(seed, r), max_trials)
        except TrialsExhausted as exc:
            raise SuiteExhausted(exc, tuple(reports)) from exc
        searches[r] = found
        reports.append(
            make_report(
                n, r, "layer", found.edges, cube.layer_edge_count(LayerId(n, r)), "c/2"
            )
        )
    union = UnionGraph(n, {r: s.graph for r, s in searches.items()})
    achieved = sum(s.edges for s in searches.values())
    reports.append(make_report(n, None, "union", achieved, cube_edge_count(n), "c/4"))
    pipeline = None
    if certificate is not None:
        pipeline = c10_pipeline(union, certificate, workers=workers)
        if pipeline.report is not None:
            reports.append(pipeline.report)
    return SuiteResult(
        reports=tuple(reports),
        union=union,
        assignments={r: s.assignment for r, s in searches.items()},
        trials={r: s.trials for r, s in searches.items()},
        pipeline=pipeline,
    )


# ---------------------------------------------------------------------------
# Certificate text format


def format_coloring(cert: ColoringCertificate) -> str:
    lines = [f"# qn-coloring n={cert.n}"]
    for (base, coord), color in sorted(cert.colors.items()):
        lines.append(f"{base:x} {coord} {color}")
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> ColoringCertificate:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# qn-coloring n="):
        raise ValueError("coloring file must start with '# qn-coloring n=<n>'")
    n = int(lines[0].split("=", 1)[1])
    if n < 1:
        raise ValueError(f"bad ground-set size in header: {n}")
    colors: dict[tuple[int, int], int] = {}
    duplicates = []
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected '<hex-mask> <coord> <color>', got {line!r}")
        base = int(parts[0], 16)
        coord = int(parts[1])
        color = int(parts[2])
        if not 0 <= coord < n or base >> n or (base >> coord) & 1:
            raise ValueError(f"line {lineno}: (0x{base:x}, {coord}) is not an edge of Q_{n}")
        if color not in range(COLOR_COUNT):
            raise ValueError(f"line {lineno}: color must be 0..{COLOR_COUNT - 1}, got {color}")
        if (base, coord) in colors:
            duplicates.append(f"line {lineno}: duplicate edge (0x{base:x}, {coord})")
        colors[(base, coord)] = color
    if duplicates:
        raise ValueError("; ".join(duplicates))
    return ColoringCertificate(n, colors)
