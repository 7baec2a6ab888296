"""Fibers of cell maps and cohomological width reports.

Width of a map is evaluated on vertex fibers, which for cell maps are the
exact point preimages; closed-cell preimages are reported alongside as the
upper envelope.  ``subdivide`` re-evaluates after subdividing source and
target, sampling points in the interiors of the original target cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .complexes import (CellComplex, CellMap, ComplexError, is_face,
                        restriction_rank, subdivide_map)
from .exactalg import check_ring
from . import gallery


def vertex_fiber(f: CellMap, v) -> CellComplex:
    """The full subcomplex of the source on vertices mapping to v."""
    if v not in set(f.target.vertices()):
        raise ComplexError(f"{v!r} is not a vertex of the target")
    picked = [u for u in f.source.vertices() if f.vertex_map[u] == v]
    return f.source.full_subcomplex(picked)


def closed_cell_preimage(f: CellMap, cell) -> CellComplex:
    """Preimage of the closed cell: all source cells mapping into its closure."""
    if not f.target.has_cell(cell):
        raise ComplexError(f"{cell!r} is not a cell of the target")
    picked = [c for layer in f.source.cells for c in layer
              if is_face(f.target.kind, f.image_cell(c), cell) or f.image_cell(c) == cell]
    return f.source.subcomplex(picked)


@dataclass(frozen=True)
class FiberTable:
    """Per target cell: the closed-cell preimage and its restriction ranks."""

    ring: str
    entries: Tuple[Tuple[tuple, Tuple[int, ...]], ...]  # (target cell, ranks by degree)

    def ranks(self, cell) -> Tuple[int, ...]:
        for c, r in self.entries:
            if c == cell:
                return r
        raise KeyError(cell)


@dataclass(frozen=True)
class WidthReport:
    ring: str
    degrees: Tuple[int, ...]
    widths: Dict[int, int] = field(compare=False)
    witnesses: Dict[int, object] = field(compare=False)
    vertex_table: Dict = field(compare=False)      # vertex -> (rank_0, rank_1, ...)
    fiber_table: FiberTable = field(compare=False)
    subdivisions: int = 0

    def width(self, k: int) -> int:
        return self.widths.get(k, 0)


def width_report(f: CellMap, ring: str, subdivide: int = 0) -> WidthReport:
    """Degree-wise width of f over vertex fibers, with witnesses.

    width_k = max over target vertices v of rank[H^k(source) -> H^k(f^-1 v)].
    """
    check_ring(ring)
    for _ in range(subdivide):
        f = subdivide_map(f)
    X = f.source
    degrees = tuple(range(X.dim + 1))
    vertex_table: Dict = {}
    for v in f.target.vertices():
        fiber = vertex_fiber(f, v)
        vertex_table[v] = tuple(restriction_rank(X, fiber, k, ring) for k in degrees)
    widths: Dict[int, int] = {}
    witnesses: Dict[int, object] = {}
    for k in degrees:
        best_v, best = None, 0
        for v in f.target.vertices():
            r = vertex_table[v][k]
            if best_v is None or r > best:
                best_v, best = v, r
        widths[k] = best
        witnesses[k] = best_v
    entries: List[Tuple[tuple, Tuple[int, ...]]] = []
    for layer in f.target.cells:
        for cell in layer:
            pre = closed_cell_preimage(f, cell)
            entries.append((cell, tuple(restriction_rank(X, pre, k, ring) for k in degrees)))
    return WidthReport(ring=ring, degrees=degrees, widths=widths, witnesses=witnesses,
                       vertex_table=vertex_table,
                       fiber_table=FiberTable(ring=ring, entries=tuple(entries)),
                       subdivisions=subdivide)


def sharpness_example(n: int, q: int) -> CellMap:
    """Coordinate projection T^n -> T^q, the sharp case width_1 = n - q."""
    if not 1 <= q < n:
        raise ValueError("need 1 <= q < n")
    return gallery.projection(n, q)
