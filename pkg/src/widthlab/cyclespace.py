"""The simplicial cycle space of a chain complex and canonical cycles.

A k-simplex of the cycle space (shift s) is a chain map from the normalized
chains of the standard k-simplex into the ambient complex shifted by s; it
is stored as its k+1 faces plus its top chain, the image of the unique
nondegenerate k-simplex.  Gluing is the paper-side uniqueness statement:
a simplex is determined by compatible faces and a top chain whose boundary
is the alternating face sum.

``canonical_cycle`` mechanizes the fibered-chain assembly: fundamental
cycles on vertex fibers, boundary-solved interpolating chains on
closed-cell preimages, glued into a q-dimensional cycle Z with dZ = 0 whose
evaluation represents the fundamental class of the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (CUBICAL, SIMPLICIAL, CellComplex, CellMap,
                        ChainComplexRep, cell_boundary, restriction_rank)
from .exactalg import (GF2, Q, Z, InfeasibilityCertificate, SparseMatrix,
                       Vector, check_ring, kernel_basis, rank_over,
                       solve_linear, vec_add, vec_clean)
from .width import closed_cell_preimage


class CycleSpaceError(ValueError):
    pass


class GlueCompatibilityError(CycleSpaceError):
    def __init__(self, i: int, j: int):
        super().__init__(f"faces {i} and {j} are incompatible: d_{i} phi_{j} != d_{j-1} phi_{i}")
        self.indices = (i, j)


class GlueBoundaryError(CycleSpaceError):
    def __init__(self, residual: Vector):
        super().__init__("boundary of the top chain does not match the alternating face sum")
        self.residual = dict(residual)


class FiberednessError(CycleSpaceError):
    def __init__(self, cell, detail: str):
        super().__init__(f"fiberedness fails over target cell {cell!r}: {detail}")
        self.cell = cell


class OrientationError(CycleSpaceError):
    pass


class UnsupportedTargetError(CycleSpaceError):
    pass


def _freeze(vec: Vector) -> Tuple[Tuple[int, object], ...]:
    return tuple(sorted(vec.items()))


class CycleSpaceSimplex:
    """Immutable k-simplex of cl^shift(D_*): faces plus a top chain."""

    __slots__ = ("ambient", "shift", "dim", "faces", "top", "_hash")

    def __init__(self, ambient: ChainComplexRep, shift: int, dim: int,
                 faces: Tuple["CycleSpaceSimplex", ...], top: Tuple[Tuple[int, object], ...],
                 _checked: bool = False):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "_hash", None)
        if not _checked:
            _validate_simplex(self)

    def __setattr__(self, name, value):
        raise AttributeError("CycleSpaceSimplex is immutable")

    def top_chain(self) -> Vector:
        return dict(self.top)

    def key(self):
        return (self.dim, self.top, tuple(f.key() for f in self.faces))

    def __eq__(self, other):
        return (isinstance(other, CycleSpaceSimplex) and self.shift == other.shift
                and self.dim == other.dim and self.top == other.top
                and self.faces == other.faces)

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.shift, self.dim, self.top, self.faces))
            object.__setattr__(self, "_hash", h)
        return h

    def is_zero(self) -> bool:
        return not self.top and all(f.is_zero() for f in self.faces)

    def __repr__(self):
        return f"CycleSpaceSimplex(dim={self.dim}, shift={self.shift}, |top|={len(self.top)})"


def _validate_simplex(s: CycleSpaceSimplex):
    ring = s.ambient.ring
    top = vec_clean(ring, dict(s.top))
    bdry = s.ambient.boundary_of(s.shift + s.dim, top)
    if s.dim == 0:
        if s.faces:
            raise CycleSpaceError("0-simplex with faces")
        if bdry:
            raise CycleSpaceError("top chain of a 0-simplex must be a cycle")
        return
    if len(s.faces) != s.dim + 1:
        raise CycleSpaceError(f"need {s.dim + 1} faces, got {len(s.faces)}")
    expect: Vector = {}
    for i, f in enumerate(s.faces):
        if f.dim != s.dim - 1 or f.shift != s.shift:
            raise CycleSpaceError("face of wrong dimension or shift")
        expect = vec_add(ring, expect, f.top_chain(), 1 if i % 2 == 0 else -1)
    if bdry != expect:
        raise GlueBoundaryError(vec_add(ring, bdry, expect, -1))
    if s.dim >= 2:
        for j in range(1, len(s.faces)):
            for i in range(j):
                if s.faces[j].faces[i] != s.faces[i].faces[j - 1]:
                    raise GlueCompatibilityError(i, j)


def zero_simplex(ambient: ChainComplexRep, shift: int, dim: int = 0) -> CycleSpaceSimplex:
    if dim == 0:
        return CycleSpaceSimplex(ambient, shift, 0, (), ())
    face = zero_simplex(ambient, shift, dim - 1)
    return CycleSpaceSimplex(ambient, shift, dim, tuple([face] * (dim + 1)), ())


def cycle_simplex(ambient: ChainComplexRep, shift: int, top: Vector) -> CycleSpaceSimplex:
    """A 0-simplex: its top chain must be a cycle in degree shift."""
    return CycleSpaceSimplex(ambient, shift, 0, (), _freeze(vec_clean(ambient.ring, top)))


def glue(faces: Sequence[CycleSpaceSimplex], top: Vector,
         ambient: Optional[ChainComplexRep] = None) -> CycleSpaceSimplex:
    """The unique simplex with the given compatible faces and top chain.

    Raises :class:`GlueCompatibilityError` on a failed simplicial identity
    and :class:`GlueBoundaryError` (with the residual vector) when the top
    chain's boundary is not the alternating sum of the face tops.
    """
    faces = tuple(faces)
    if not faces:
        raise CycleSpaceError("glue needs at least one face; use cycle_simplex for dim 0")
    amb = ambient or faces[0].ambient
    dim = faces[0].dim + 1
    return CycleSpaceSimplex(amb, faces[0].shift, dim, faces,
                             _freeze(vec_clean(amb.ring, top)))


class CycleSpaceChain:
    """Formal sum of equal-dimension cycle-space simplices."""

    def __init__(self, ambient: ChainComplexRep, shift: int, dim: int,
                 terms: Sequence[Tuple[CycleSpaceSimplex, object]]):
        self.ambient = ambient
        self.shift = shift
        self.dim = dim
        collected: Dict[CycleSpaceSimplex, object] = {}
        for s, c in terms:
            if s.shift != shift or s.dim != dim:
                raise CycleSpaceError("all summands must share shift and dimension")
            cc = collected.get(s, 0) + c
            if self.ambient.ring == GF2:
                cc %= 2
            if cc:
                collected[s] = cc
            else:
                collected.pop(s, None)
        self.terms: Tuple[Tuple[CycleSpaceSimplex, object], ...] = tuple(
            sorted(collected.items(), key=lambda t: t[0].key()))
        self.provenance = None

    @property
    def ring(self) -> str:
        return self.ambient.ring

    def ev(self) -> Vector:
        out: Vector = {}
        for s, c in self.terms:
            out = vec_add(self.ring, out, s.top_chain(), c)
        return out

    def boundary(self) -> "CycleSpaceChain":
        if self.dim == 0:
            return CycleSpaceChain(self.ambient, self.shift, 0, [])
        terms = []
        for s, c in self.terms:
            for i, f in enumerate(s.faces):
                terms.append((f, c if i % 2 == 0 else -c))
        return CycleSpaceChain(self.ambient, self.shift, self.dim - 1, terms)

    def scale(self, factor) -> "CycleSpaceChain":
        return CycleSpaceChain(self.ambient, self.shift, self.dim,
                               [(s, c * factor) for s, c in self.terms])

    def add(self, other: "CycleSpaceChain") -> "CycleSpaceChain":
        if other.shift != self.shift or other.dim != self.dim:
            raise CycleSpaceError("shift/dim mismatch")
        return CycleSpaceChain(self.ambient, self.shift, self.dim,
                               list(self.terms) + list(other.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, CycleSpaceChain) and self.shift == other.shift
                and self.dim == other.dim and self.terms == other.terms)

    def __hash__(self):
        return hash((self.shift, self.dim, self.terms))

    def __repr__(self):
        return f"CycleSpaceChain(dim={self.dim}, shift={self.shift}, {len(self.terms)} terms)"


def ev(chain: CycleSpaceChain) -> Vector:
    """Evaluation: coefficient-weighted sum of top chains (a chain map)."""
    return chain.ev()


# ---------------------------------------------------------------------------
# Canonical cycle
# ---------------------------------------------------------------------------

@dataclass
class CanonicalProvenance:
    """Bookkeeping carried by a canonical cycle for the cone construction.

    ``star_support`` holds, per target cell, the ambient cells of the
    preimage of its closed star (the local-mode solve region);
    ``fiber_ranks`` holds rank[H^1(M;Z) -> H^1(F_sigma;Z)], reported side by
    side with local infeasibility without asserting a link between them.
    """

    target: CellComplex
    ring: str
    simplex_of_cell: Dict[tuple, CycleSpaceSimplex] = field(default_factory=dict)
    star_support: Dict[tuple, Tuple[tuple, ...]] = field(default_factory=dict)
    fiber_ranks: Dict[tuple, int] = field(default_factory=dict)


def _target_faces(target: CellComplex, cell) -> List[tuple]:
    """Ordered face list of a simplex-shaped target cell (signs (-1)^i)."""
    if target.kind == SIMPLICIAL:
        return [cell[:i] + cell[i + 1:] for i in range(len(cell))]
    # cubical edge (a, b): faces [head, tail] matching d(e) = head - tail
    iv = cell[0]
    return [((iv[1],),), ((iv[0],),)]


def _check_target(target: CellComplex, ring: str):
    if target.kind == CUBICAL and target.dim > 1:
        raise UnsupportedTargetError(
            "cycle-space simplices need simplex-shaped target cells: use a "
            "simplicial target, or a cubical target of dimension <= 1")
    ones = {i: 1 for i in range(target.n_cells(target.dim))}
    if target.dim >= 1 and target.boundary_matrix(target.dim, ring).mat_vec(ones):
        raise OrientationError(
            "target is not coherently oriented over this ring: the sum of its "
            "top cells is not a cycle")


def _component_top_cycle(M: CellComplex, comp: CellComplex, d: int, ring: str) -> Vector:
    """Fundamental cycle of one fiber component, in ambient coordinates.

    Lead coefficient normalized to +1 (lowest cell index first).
    """
    h = comp.homology(ring)
    if h.betti(d) != 1 or h.torsion(d):
        raise OrientationError(f"component has top homology of rank {h.betti(d)}, expected 1")
    gen = h.generators(d)[0]
    reindex = [M.cell_index(cell)[1] for cell in comp.cells[d]]
    vec = {reindex[i]: v for i, v in gen.items()}
    lead = min(vec)
    lv = vec[lead]
    if ring == GF2:
        return vec
    return vec_clean(ring, {i: v / lv for i, v in vec.items()})


def fundamental_cycle(M: CellComplex, ring: str) -> Vector:
    """Fundamental cycle of a closed ring-oriented combinatorial manifold.

    Sum of per-component top generators; raises OrientationError when some
    component does not have top homology of rank one (e.g. a nonorientable
    manifold over Q).
    """
    check_ring(ring)
    n = M.dim
    out: Vector = {}
    for comp in M.component_subcomplexes():
        if comp.dim != n:
            raise OrientationError("component of lower dimension")
        out = vec_add(ring, out, _component_top_cycle(M, comp, n, ring))
    return out


def _boundary_part(f: CellMap, fiber: CellComplex, cell) -> CellComplex:
    """The part of a closed-cell preimage sitting over the cell's boundary."""
    picked = [c for layer in fiber.cells for c in layer if f.image_cell(c) != cell]
    return fiber.subcomplex(picked)


def _relative_top_rank(fiber: CellComplex, boundary_part: CellComplex, d: int, ring: str) -> int:
    """rank H_d(F, dF) over a field, via the relative chain complex."""
    work_ring = Q if ring == Z else ring
    rel_cells = {dd: [c for c in (fiber.cells[dd] if 0 <= dd <= fiber.dim else ())
                      if not boundary_part.has_cell(c)] for dd in (d - 1, d, d + 1)}
    index = {c: i for i, c in enumerate(rel_cells[d])}
    index_low = {c: i for i, c in enumerate(rel_cells[d - 1])}

    def rel_boundary(cols, idx_rows):
        entries = []
        for j, cell_ in enumerate(cols):
            for face, sign in cell_boundary(fiber.kind, cell_):
                if face in idx_rows:
                    entries.append((idx_rows[face], j, sign))
        return SparseMatrix(len(idx_rows), len(cols), work_ring, entries)

    bd = rel_boundary(rel_cells[d], index_low)
    bnext = rel_boundary(rel_cells[d + 1], index)
    return len(kernel_basis(bd, work_ring)) - rank_over(bnext, work_ring)


def _relevant_components(fiber: CellComplex, boundary_part: CellComplex, d: int) -> List[CellComplex]:
    out = []
    for comp in fiber.component_subcomplexes():
        if comp.dim >= d and any(not boundary_part.has_cell(c) for c in comp.cells[d]):
            out.append(comp)
    return out


def _closed_components(fiber: CellComplex, boundary_part: CellComplex, d: int) -> List[CellComplex]:
    bverts = set(boundary_part.vertices())
    return [comp for comp in fiber.component_subcomplexes()
            if comp.dim >= d and comp.cells[d] and not (set(comp.vertices()) & bverts)]


def canonical_cycle(f: CellMap, ring: str) -> CycleSpaceChain:
    """The canonical cycle Z of a fibered cell map, with dZ = 0 verified.

    Per target cell sigma a chain c_sigma on the closed-cell preimage is
    found by an exact linear solve against the alternating sum of the face
    chains; vertex fibers get their fundamental cycles.  The relative-class
    condition is enforced on closed fiber components by appending the
    component generator (lowest index first) when the solved class is zero.
    The assembled Z satisfies dZ = 0 and [ev Z] = [M], both verified here.
    """
    check_ring(ring, (GF2, Q))
    M, N = f.source, f.target
    n, q = M.dim, N.dim
    if n < q:
        raise FiberednessError(None, f"source dimension {n} below target dimension {q}")
    shift = n - q
    _check_target(N, ring)
    rep = M.chain_complex(ring)
    hM = M.homology(ring)
    mu = fundamental_cycle(M, ring)
    if ring == Q and len(M.components()) != 1:
        raise OrientationError("Q-coefficient canonical cycles need a connected source")

    fibers: Dict[tuple, CellComplex] = {}
    bparts: Dict[tuple, CellComplex] = {}
    prov = CanonicalProvenance(target=N, ring=ring)
    for d_t in range(q + 1):
        for cell in N.cells[d_t]:
            fiber = closed_cell_preimage(f, cell)
            fibers[cell] = fiber
            bparts[cell] = _boundary_part(f, fiber, cell)
            d = shift + d_t
            relevant = _relevant_components(fiber, bparts[cell], d)
            rel_rank = _relative_top_rank(fiber, bparts[cell], d, ring)
            if rel_rank != len(relevant):
                raise FiberednessError(
                    cell, f"relative top homology has rank {rel_rank}, "
                    f"but {len(relevant)} relevant components")
            star_cells = {c for layer in N.closed_star(cell).cells for c in layer}
            prov.star_support[cell] = tuple(
                c for layer in M.cells for c in layer if f.image_cell(c) in star_cells)
            prov.fiber_ranks[cell] = restriction_rank(M, fiber, 1, Z)

    chains: Dict[tuple, Vector] = {}
    simplices: Dict[tuple, CycleSpaceSimplex] = {}
    anchored: set = set()

    def build_vertex(cell, sign=1):
        fiber = fibers[cell]
        d = shift
        total: Vector = {}
        for comp in _relevant_components(fiber, bparts[cell], d):
            total = vec_add(ring, total, _component_top_cycle(M, comp, d, ring), sign)
        chains[cell] = total
        simplices[cell] = cycle_simplex(rep, shift, total)

    def solve_cell(cell, d_t):
        d = shift + d_t
        fiber = fibers[cell]
        faces = _target_faces(N, cell)
        y: Vector = {}
        for i, face in enumerate(faces):
            y = vec_add(ring, y, chains[face], 1 if i % 2 == 0 else -1)
        cols = list(fiber.cells[d]) if d <= fiber.dim else []
        reindex = [M.cell_index(c)[1] for c in cols]
        rows_map = {M.cell_index(c)[1]: i for i, c in
                    enumerate(fiber.cells[d - 1] if d - 1 <= fiber.dim else ())}
        for idx in y:
            if idx not in rows_map:
                raise FiberednessError(cell, "face chains leave the preimage")
        bd_fiber = fiber.boundary_matrix(d, ring)
        y_local = {rows_map[i]: v for i, v in y.items()}
        res = solve_linear(bd_fiber, y_local, ring)
        if isinstance(res, InfeasibilityCertificate):
            return None
        c_vec = {reindex[j]: v for j, v in res.items()}
        # enforce the relative class on closed components
        for comp in _closed_components(fiber, bparts[cell], d):
            comp_idx = {M.cell_index(c)[1] for c in comp.cells[d]}
            restr_local = {i: v for i, v in c_vec.items() if i in comp_idx}
            back = {comp.cell_index(c)[1]: restr_local.get(M.cell_index(c)[1], 0)
                    for c in comp.cells[d]}
            hc = comp.homology(ring)
            if hc.betti(d) == 0:
                continue
            if hc.class_is_zero(d, vec_clean(ring, back)):
                c_vec = vec_add(ring, c_vec, _component_top_cycle(M, comp, d, ring))
        return c_vec

    for v_cell in N.cells[0]:
        build_vertex(v_cell)

    for d_t in range(1, q + 1):
        for cell in N.cells[d_t]:
            c_vec = solve_cell(cell, d_t)
            if c_vec is None and ring == Q and d_t == 1:
                # orientation propagation: flip an unanchored endpoint once
                head, tail = _target_faces(N, cell)
                for flip in (tail, head):
                    if flip not in anchored:
                        build_vertex(flip, sign=-1)
                        c_vec = solve_cell(cell, d_t)
                        if c_vec is not None:
                            break
                        build_vertex(flip, sign=1)
            if c_vec is None:
                raise FiberednessError(cell, "boundary equation has no solution in the preimage")
            if d_t == 1:
                for endpoint in _target_faces(N, cell):
                    anchored.add(endpoint)
            chains[cell] = c_vec
            face_simplices = [simplices[face] for face in _target_faces(N, cell)]
            simplices[cell] = glue(face_simplices, c_vec, rep)

    Zc = CycleSpaceChain(rep, shift, q, [(simplices[cell], 1) for cell in N.cells[q]])
    if not Zc.boundary().is_zero():
        raise CycleSpaceError("internal error: dZ != 0")
    cls_mu = hM.coords_of_cycle(n, mu)
    cls_ev = hM.coords_of_cycle(n, Zc.ev())
    if ring == Q and cls_ev[0] and cls_mu[0]:
        lead = next((i for i, v in enumerate(cls_mu[0]) if v), None)
        if lead is not None and cls_ev[0][lead] == -cls_mu[0][lead]:
            Zc = Zc.scale(-1)
            cls_ev = hM.coords_of_cycle(n, Zc.ev())
    if cls_ev != cls_mu:
        raise OrientationError("evaluation of Z does not represent the fundamental class")
    for d_t in range(q + 1):
        for cell in N.cells[d_t]:
            prov.simplex_of_cell[cell] = simplices[cell]
    Zc.provenance = prov
    return Zc
