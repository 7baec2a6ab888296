"""Built-in complexes and maps: tori, projections, degree maps, RP2.

The torus models built here carry ``meta["torus"]["sizes"]``; that metadata
is what marks a complex as "the standard cubical torus" for the lattice and
essentialness machinery, which needs the coordinate H_1 basis e_1 ... e_n.
"""

from __future__ import annotations

from typing import List, Sequence

from .complexes import CUBICAL, SIMPLICIAL, CellComplex, CellMap, product_complex


def circle(size: int = 3) -> CellComplex:
    """Cubical circle with ``size`` vertices and ``size`` wraparound edges."""
    if size < 3:
        raise ValueError("need size >= 3 for an unambiguous cell structure")
    cells = [((i,),) for i in range(size)]
    cells += [((i, (i + 1) % size),) for i in range(size)]
    return CellComplex(CUBICAL, cells, meta={"torus": {"sizes": [size]}})


def torus(n: int, size: int = 3) -> CellComplex:
    """Standard cubical n-torus, the product of n circles."""
    if n < 1:
        raise ValueError("need n >= 1")
    out = circle(size)
    for _ in range(n - 1):
        out = product_complex(out, circle(size))
    return CellComplex(out.kind, [c for layer in out.cells for c in layer],
                       meta={"torus": {"sizes": [size] * n}})


def point() -> CellComplex:
    return CellComplex(CUBICAL, [((0,),)])


def projection(n: int, q: int, size: int = 3) -> CellMap:
    """Coordinate projection T^n -> T^q (first q coordinates)."""
    if not 1 <= q < n:
        raise ValueError("need 1 <= q < n")
    src = torus(n, size)
    tgt = torus(q, size)
    vmap = {v: v[:q] for v in src.vertices()}
    return CellMap(src, tgt, vmap)


def constant_map(X: CellComplex) -> CellMap:
    tgt = point()
    return CellMap(X, tgt, {v: (0,) for v in X.vertices()})


def degree_circle_map(degree: int, size: int = 3) -> CellMap:
    """The degree-d self map of the circle, modelled on d*size -> size cells."""
    if degree < 1:
        raise ValueError("need degree >= 1")
    src = circle(degree * size)
    tgt = circle(size)
    vmap = {(i,): (i % size,) for i in range(degree * size)}
    return CellMap(src, tgt, vmap)


def degree2_torus_selfmap(size: int = 3) -> CellMap:
    """A degree-2 self map of T^2 (doubling the first circle factor)."""
    src = product_complex(circle(2 * size), circle(size))
    src = CellComplex(src.kind, [c for layer in src.cells for c in layer],
                      meta={"torus": {"sizes": [2 * size, size]}})
    tgt = torus(2, size)
    vmap = {v: (v[0] % size, v[1]) for v in src.vertices()}
    return CellMap(src, tgt, vmap)


def subtorus_inclusion(positions: Sequence[int], n: int, size: int = 3) -> CellMap:
    """Coordinate sub-torus T^{|positions|} -> T^n at the given positions."""
    positions = list(positions)
    if len(set(positions)) != len(positions) or not all(0 <= p < n for p in positions):
        raise ValueError("positions must be distinct and inside range(n)")
    src = torus(len(positions), size)
    tgt = torus(n, size)

    def embed(v):
        out = [0] * n
        for value, p in zip(v, positions):
            out[p] = value
        return tuple(out)

    return CellMap(src, tgt, {v: embed(v) for v in src.vertices()})


def disjoint_circles_map(size: int = 3) -> CellMap:
    """Two disjoint circles hitting the two coordinate classes of T^2."""
    cells: List = []
    for i in range(size):
        cells.append(((i,),))
        cells.append(((i, (i + 1) % size),))
        cells.append(((size + i,),))
        cells.append(((size + i, size + (i + 1) % size),))
    src = CellComplex(CUBICAL, cells)
    tgt = torus(2, size)
    vmap = {}
    for i in range(size):
        vmap[(i,)] = (i, 0)
        vmap[(size + i,)] = (0, i)
    return CellMap(src, tgt, vmap)


def rp2() -> CellComplex:
    """The minimal 6-vertex triangulation of the projective plane."""
    faces = [(1, 2, 3), (1, 2, 5), (1, 3, 4), (1, 4, 6), (1, 5, 6),
             (2, 3, 6), (2, 4, 5), (2, 4, 6), (3, 4, 5), (3, 5, 6)]
    return CellComplex.from_top_cells(SIMPLICIAL, faces)


def sphere_cubical() -> CellComplex:
    """S^2 as the boundary of the unit 3-cube."""
    squares = []
    for axis in range(3):
        for side in (0, 1):
            cell = []
            for j in range(3):
                cell.append((side,) if j == axis else (0, 1))
            squares.append(tuple(cell))
    return CellComplex.from_top_cells(CUBICAL, squares)


def s2_x_s1(size: int = 3) -> CellComplex:
    return product_complex(sphere_cubical(), circle(size))


def s2_x_s1_projection(size: int = 3) -> CellMap:
    """Projection S^2 x S^1 -> S^1 (used as an inessential example)."""
    src = s2_x_s1(size)
    tgt = circle(size)
    vmap = {v: (v[3],) for v in src.vertices()}
    return CellMap(src, tgt, vmap)


def simplicial_circle(size: int = 3) -> CellComplex:
    edges = [(i, i + 1) for i in range(size - 1)] + [(0, size - 1)]
    return CellComplex.from_top_cells(SIMPLICIAL, edges)
