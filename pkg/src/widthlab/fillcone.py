"""Lattice form of the filling lemma, cone obstructions, essentialness.

The filling spaces themselves are never built: their two computable roles
are (a) the per-component image lattice of H_1 in Z^n, which bounds which
degrees can survive a filling, and (b) the solvability of the chain-level
cone systems, decided exactly with infeasibility certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import CellComplex, CellMap, ComplexError
from .cyclespace import (CanonicalProvenance, CycleSpaceChain,
                         CycleSpaceSimplex, CycleSpaceError, _target_faces,
                         cycle_simplex, fundamental_cycle, glue, zero_simplex)
from .exactalg import (GF2, Q, Z, InfeasibilityCertificate, RingError,
                       SparseMatrix, SpanBasis, Vector, check_ring,
                       hermite_row_basis, rank_over, smith_normal_form,
                       solve_linear, vec_clean)


class TorusModelError(ValueError):
    """The target complex is not a standard torus model."""


# ---------------------------------------------------------------------------
# Standard torus coordinates
# ---------------------------------------------------------------------------

class TorusBasis:
    """Coordinate homology bases of a standard cubical torus.

    H_d(T^n) has the basis of coordinate sub-torus classes e_S, |S| = d;
    this object converts arbitrary cycle classes into e_S coordinates,
    exactly, over Z, Q or GF(2).
    """

    def __init__(self, torus: CellComplex):
        info = torus.meta.get("torus")
        if not info:
            raise TorusModelError("complex does not carry standard torus metadata")
        self.torus = torus
        self.sizes: List[int] = list(info["sizes"])
        self.n = len(self.sizes)

    def subsets(self, d: int) -> List[Tuple[int, ...]]:
        return [tuple(s) for s in combinations(range(self.n), d)]

    def subtorus_cycle(self, subset: Sequence[int]) -> Vector:
        """Fundamental cycle of the coordinate sub-torus T_S at base 0."""
        subset = tuple(subset)
        cells = [()]
        for j in range(self.n):
            if j in subset:
                sz = self.sizes[j]
                cells = [c + ((i, (i + 1) % sz),) for c in cells for i in range(sz)]
            else:
                cells = [c + ((0,),) for c in cells]
        out: Vector = {}
        for cell in cells:
            out[self.torus.cell_index(cell)[1]] = 1
        return out

    def _basis_matrix(self, d: int, ring: str):
        key = ("torusbasis", d, ring)
        if key not in self.torus._cache:
            h = self.torus.homology(ring)
            cols = []
            for subset in self.subsets(d):
                free, _ = h.coords_of_cycle(d, vec_clean(ring, self.subtorus_cycle(subset)))
                cols.append({i: v for i, v in enumerate(free) if v})
            mat = SparseMatrix.from_columns(cols, h.betti(d), ring)
            if mat.rows != mat.cols:
                raise TorusModelError("coordinate classes do not form a basis")
            self.torus._cache[key] = mat
        return self.torus._cache[key]

    def class_coords(self, d: int, cycle: Vector, ring: str) -> Dict[Tuple[int, ...], object]:
        """Coordinates of a cycle class in the e_S basis, as {S: coeff}."""
        check_ring(ring)
        if d < 0 or d > self.n:
            return {}
        h = self.torus.homology(ring)
        free, _ = h.coords_of_cycle(d, vec_clean(ring, cycle))
        target = {i: v for i, v in enumerate(free) if v}
        mat = self._basis_matrix(d, ring)
        if ring == Z:
            snf = smith_normal_form(mat)
            if snf.divisors != tuple([1] * mat.rows):
                raise TorusModelError("coordinate class matrix is not unimodular")
            inv = snf.V.matmul(snf.U)
            coords = inv.mat_vec(target)
        else:
            res = solve_linear(mat, target, ring)
            if isinstance(res, InfeasibilityCertificate):
                raise TorusModelError("class does not lie in the coordinate basis span")
            coords = res
        subsets = self.subsets(d)
        return {subsets[i]: v for i, v in coords.items() if v}


# ---------------------------------------------------------------------------
# Image lattices of H_1 (filling certificates)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSubgroup:
    """A subgroup of Z^n via its canonical Hermite-form row basis."""

    ambient_rank: int
    basis: Tuple[Tuple[int, ...], ...]
    index_in_saturation: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], n: int) -> "LatticeSubgroup":
        rows = hermite_row_basis([list(v) for v in vectors], n)
        if rows:
            mat = SparseMatrix.from_dense(rows, Z)
            index = 1
            for dd in smith_normal_form(mat).divisors:
                index *= dd
        else:
            index = 1
        return cls(ambient_rank=n, basis=tuple(tuple(r) for r in rows),
                   index_in_saturation=index)


@dataclass(frozen=True)
class ComponentLattice:
    component_vertices: Tuple
    lattice: LatticeSubgroup

    @property
    def rank(self) -> int:
        return self.lattice.rank


@dataclass(frozen=True)
class FillingCertificate:
    """Per-component image lattices of H_1(k;Z) with the n-q verdict."""

    ambient_rank: int
    components: Tuple[ComponentLattice, ...]
    bound: Optional[int]

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(c.rank for c in self.components)

    @property
    def applicable(self) -> Optional[bool]:
        if self.bound is None:
            return None
        return all(r < self.bound for r in self.ranks)


def h1_image_lattice(k: CellMap, bound: Optional[int] = None) -> FillingCertificate:
    """Image lattice of H_1(component;Z) -> Z^n per component of the source.

    The target must be a standard torus model (it provides the e-basis
    through which the Hurewicz image is read off).
    """
    tb = TorusBasis(k.target)
    comps = []
    for comp in k.source.component_subcomplexes():
        h = comp.homology(Z)
        vectors = []
        chain = k.chain_map(1, Z)
        for gen in h.free_generators(1):
            reindex = {i: k.source.cell_index(cell)[1]
                       for i, cell in enumerate(comp.cells[1] if comp.dim >= 1 else ())}
            pushed = chain.mat_vec({reindex[i]: v for i, v in gen.items()})
            coords = tb.class_coords(1, pushed, Z)
            vectors.append([coords.get((j,), 0) for j in range(tb.n)])
        lattice = LatticeSubgroup.from_vectors(vectors, tb.n)
        comps.append(ComponentLattice(
            component_vertices=tuple(sorted(comp.vertices(), key=lambda v: str(v))),
            lattice=lattice))
    return FillingCertificate(ambient_rank=tb.n, components=tuple(comps), bound=bound)


@dataclass(frozen=True)
class PushforwardComponentReport:
    rank: int
    image_dim: int
    forced_zero: bool          # degree exceeds the lattice rank
    contained: bool


@dataclass(frozen=True)
class PushforwardVanishingReport:
    degree: int
    components: Tuple[PushforwardComponentReport, ...]

    @property
    def ok(self) -> bool:
        return all(c.contained for c in self.components)


def pushforward_vanishing_check(k: CellMap, d: int, ring: str = Q) -> PushforwardVanishingReport:
    """Check im H_d(component;Q) lies in Lambda^d(lattice x Q) inside H_d(T^n;Q).

    GF(2) coefficients are refused: the double cover S^1 -> S^1 has
    rank H^1(k;GF2) = 0 yet cannot be filled, so no filling statement holds
    mod 2.
    """
    if ring == GF2:
        raise RingError(
            "pushforward vanishing needs Z or Q coefficients: the double cover "
            "S^1 -> S^1 has rank H^1(k;GF2) = 0 but cannot be filled")
    check_ring(ring, (Z, Q))
    tb = TorusBasis(k.target)
    cert = h1_image_lattice(k)
    subsets = tb.subsets(d)
    sub_pos = {s: i for i, s in enumerate(subsets)}
    reports = []
    for comp, comp_cells in zip(cert.components, k.source.component_subcomplexes()):
        lattice = comp.lattice
        wedges = []
        for rows in combinations(range(lattice.rank), d):
            vec: Vector = {}
            for s in subsets:
                sub = [[lattice.basis[r][c] for c in s] for r in rows]
                det = _det_int(sub)
                if det:
                    vec[sub_pos[s]] = det
            wedges.append(vec)
        span = SpanBasis(Q)
        for wvec in wedges:
            span.insert(wvec)
        h = comp_cells.homology(Q)
        chain = k.chain_map(d, Q)
        image_vectors = []
        for gen in h.generators(d):
            reindex = {i: k.source.cell_index(cell)[1]
                       for i, cell in enumerate(comp_cells.cells[d] if comp_cells.dim >= d else ())}
            pushed = chain.mat_vec({reindex[i]: v for i, v in gen.items()})
            coords = tb.class_coords(d, pushed, Q)
            image_vectors.append({sub_pos[s]: v for s, v in coords.items()})
        img_span = SpanBasis(Q)
        contained = True
        for vec in image_vectors:
            img_span.insert(vec)
            if not span.contains(vec):
                contained = False
        reports.append(PushforwardComponentReport(
            rank=lattice.rank, image_dim=img_span.rank,
            forced_zero=d > lattice.rank, contained=contained))
    return PushforwardVanishingReport(degree=d, components=tuple(reports))


def _det_int(rows: List[List[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det_int(minor)
    return total


# ---------------------------------------------------------------------------
# Cone building
# ---------------------------------------------------------------------------

GLOBAL = "global"
LOCAL = "local"


@dataclass
class ObstructionReport:
    """A stage where the cone system d w = y has no solution.

    The certificate is checkable by hand: u^T B = 0 and u^T y = 1 over
    GF(2).  ``fiber_rank`` carries rank[H^1(M;Z) -> H^1(F_sigma;Z)] for the
    same stage, reported side by side without asserting any equivalence.
    """

    stage: object
    mode: str
    system: SparseMatrix
    rhs: Dict[int, int]
    certificate: InfeasibilityCertificate
    partial: Dict[tuple, CycleSpaceSimplex]
    fiber_rank: Optional[int] = None
    support_size: Optional[int] = None

    def verify(self) -> bool:
        return self.certificate.verify(self.system, self.rhs)


@dataclass
class ConeResult:
    """A complete cone: simplices w_sigma with d(sum w) = (-1)^(q+1) Z."""

    cone: Dict[tuple, CycleSpaceSimplex]
    chain: CycleSpaceChain

    @property
    def complete(self) -> bool:
        return True


def cone_build(Zc: CycleSpaceChain, mode: str = GLOBAL):
    """Build the cone of a canonical cycle, or certify the obstruction.

    Iterates target cells by dimension; per cell solves d w = y with
    y = sum w_faces + z (GF(2)).  Mode ``global`` solves in the full
    ambient complex, ``local`` restricts support to the preimage of the
    closed star of the cell.  Returns a :class:`ConeResult` only when every
    solve succeeds and d(sum w) = Z holds; otherwise the first failing
    stage's :class:`ObstructionReport`.
    """
    if mode not in (GLOBAL, LOCAL):
        raise ValueError(f"unknown mode {mode!r}")
    if Zc.ring != GF2:
        raise RingError("cone building is a GF(2) construction")
    ambient = Zc.ambient
    shift = Zc.shift
    if Zc.is_zero():
        return ConeResult(cone={}, chain=CycleSpaceChain(ambient, shift, Zc.dim + 1, []))
    prov: Optional[CanonicalProvenance] = Zc.provenance
    if prov is None:
        raise CycleSpaceError("cone building needs a canonical cycle with provenance")
    N = prov.target
    q = N.dim
    M = ambient.complex
    w: Dict[tuple, CycleSpaceSimplex] = {}
    for d_t in range(q + 1):
        for cell in N.cells[d_t]:
            z_s = prov.simplex_of_cell[cell]
            y: Vector = dict(z_s.top_chain())
            if d_t == 0:
                faces = [zero_simplex(ambient, shift), z_s]
            else:
                tfaces = _target_faces(N, cell)
                faces = [w[fc] for fc in tfaces] + [z_s]
                for fc in tfaces:
                    for i, v in w[fc].top_chain().items():
                        y[i] = (y.get(i, 0) + v) % 2
                y = {i: v for i, v in y.items() if v}
            degree = shift + d_t + 1
            B = ambient.boundary(degree)
            reindex = None
            if mode == LOCAL:
                support = set(prov.star_support.get(cell, ()))
                cols = [i for i, c in enumerate(M.cells[degree] if degree <= M.dim else ())
                        if c in support]
                all_cols = B.columns()
                B = SparseMatrix(B.rows, len(cols), GF2,
                                 [(r, j, v) for j, i in enumerate(cols)
                                  for r, v in all_cols[i].items()])
                reindex = cols
            res = solve_linear(B, y, GF2)
            if isinstance(res, InfeasibilityCertificate):
                return ObstructionReport(
                    stage=cell, mode=mode, system=B, rhs=dict(y), certificate=res,
                    partial=dict(w), fiber_rank=prov.fiber_ranks.get(cell),
                    support_size=(len(reindex) if reindex is not None else None))
            if reindex is not None:
                res = {reindex[j]: v for j, v in res.items()}
            w[cell] = glue(faces, res, ambient)
    W = CycleSpaceChain(ambient, shift, q + 1,
                        [(w[cell], 1) for cell in N.cells[q]])
    if W.boundary() != Zc:
        raise CycleSpaceError("internal error: cone boundary does not recover Z")
    return ConeResult(cone=w, chain=W)


def _column(B: SparseMatrix, i: int) -> Vector:
    return {r: v for (r, c), v in B.data.items() if c == i}


# ---------------------------------------------------------------------------
# Essentialness and pushforward
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EssentialnessReport:
    ring: str
    essential: bool
    class_coords: Tuple[Tuple[Tuple[int, ...], object], ...]

    def coords_dict(self) -> Dict[Tuple[int, ...], object]:
        return dict(self.class_coords)


def essentialness_check(phi: CellMap, ring: str) -> EssentialnessReport:
    """Compute phi_*[M] in H_m(T^n; ring); essential iff nonzero.

    Over Z a nonorientable source raises OrientationError (no fundamental
    class to push).
    """
    check_ring(ring, (Z, GF2))
    tb = TorusBasis(phi.target)
    M = phi.source
    m = M.dim
    mu = fundamental_cycle(M, ring)
    pushed = phi.chain_map(m, ring).mat_vec(mu)
    coords = tb.class_coords(m, pushed, ring) if m <= tb.n else {}
    if m > tb.n and pushed:
        raise ComplexError("pushed chain in degree above the torus dimension")
    items = tuple(sorted(coords.items()))
    return EssentialnessReport(ring=ring, essential=bool(items), class_coords=items)


def pushforward_cycle(Zc: CycleSpaceChain, phi: CellMap) -> CycleSpaceChain:
    """Push a cycle-space chain forward along a cell map of its ambient space.

    Applies the chain map to all tops and faces; naturality ev(phi_* Z) =
    phi_#(ev Z) is verified before returning.
    """
    if phi.source != Zc.ambient.complex:
        raise ComplexError("map source does not match the chain's ambient complex")
    ring = Zc.ring
    new_ambient = phi.target.chain_complex(ring)
    memo: Dict[CycleSpaceSimplex, CycleSpaceSimplex] = {}

    def push(s: CycleSpaceSimplex) -> CycleSpaceSimplex:
        if s in memo:
            return memo[s]
        top = phi.push_chain(s.shift + s.dim, s.top_chain(), ring)
        if s.dim == 0:
            out = cycle_simplex(new_ambient, s.shift, top)
        else:
            out = glue([push(fc) for fc in s.faces], top, new_ambient)
        memo[s] = out
        return out

    new_terms = [(push(s), c) for s, c in Zc.terms]
    out = CycleSpaceChain(new_ambient, Zc.shift, Zc.dim, new_terms)
    expected = phi.push_chain(Zc.shift + Zc.dim, Zc.ev(), ring)
    if out.ev() != expected:
        raise CycleSpaceError("pushforward broke ev naturality")
    if Zc.provenance is not None:
        old = Zc.provenance
        prov = CanonicalProvenance(target=old.target, ring=old.ring)
        prov.simplex_of_cell = {cell: push(s) for cell, s in old.simplex_of_cell.items()}
        image_support = {}
        for cell, cells in old.star_support.items():
            image_support[cell] = tuple(sorted(
                {phi.image_cell(c) for c in cells}, key=lambda c: str(c)))
        prov.star_support = image_support
        prov.fiber_ranks = dict(old.fiber_ranks)
        out.provenance = prov
    return out
