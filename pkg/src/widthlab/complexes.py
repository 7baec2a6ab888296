"""Finite simplicial and cubical complexes, maps, homology and kernels.

Cells are plain tuples.  A simplicial cell is a sorted tuple of vertex
labels.  A cubical cell is a tuple of intervals, one per coordinate
position, where an interval is ``(a,)`` (degenerate) or ``(a, b)`` (a
directed edge in that coordinate, wraparound allowed).  Labels may be ints,
strings or tuples; the global cell order is lexicographic on a typed key,
which makes every basis and every report deterministic.

Complexes are immutable after construction (homology results are cached on
the instance, keyed by ring).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import (
    GF2, Q, Z, FIELDS, SparseMatrix, SpanBasis, Vector, check_ring,
    kernel_basis, rank_over, smith_normal_form, solve_in_span,
    span_basis_of_columns, vec_add, vec_clean,
)

SIMPLICIAL = "simplicial"
CUBICAL = "cubical"


class ComplexError(ValueError):
    """Malformed complex: bad cells or missing faces."""


class MapError(ValueError):
    """A vertex map that does not carry cells onto cells."""


def label_key(label):
    """Total order on labels of mixed type (ints, strings, tuples)."""
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    if isinstance(label, str):
        return (1, label)
    return (0, label)


def cell_key(cell):
    return tuple(label_key(part) for part in cell)


def simplex_dim(cell) -> int:
    return len(cell) - 1


def cube_dim(cell) -> int:
    return sum(1 for iv in cell if len(iv) == 2)


def cell_dim(kind: str, cell) -> int:
    return simplex_dim(cell) if kind == SIMPLICIAL else cube_dim(cell)


def cube_vertices(cell) -> List[tuple]:
    """All corner vertex names of a cubical cell (tuples of labels)."""
    corners = [()]
    for iv in cell:
        if len(iv) == 1:
            corners = [c + (iv[0],) for c in corners]
        else:
            corners = [c + (e,) for c in corners for e in iv]
    return corners


def cell_vertices(kind: str, cell) -> List:
    if kind == SIMPLICIAL:
        return list(cell)
    return cube_vertices(cell)


def cell_boundary(kind: str, cell) -> List[Tuple[tuple, int]]:
    """Codimension-one faces with incidence signs.

    Simplicial: alternating signs over vertex deletion.  Cubical: graded
    product rule, d(edge) = upper - lower.
    """
    if kind == SIMPLICIAL:
        if len(cell) <= 1:
            return []
        out = []
        for i in range(len(cell)):
            face = cell[:i] + cell[i + 1:]
            out.append((face, -1 if i % 2 else 1))
        return out
    out = []
    t = 0
    for j, iv in enumerate(cell):
        if len(iv) != 2:
            continue
        sign = -1 if t % 2 else 1
        upper = cell[:j] + ((iv[1],),) + cell[j + 1:]
        lower = cell[:j] + ((iv[0],),) + cell[j + 1:]
        out.append((upper, sign))
        out.append((lower, -sign))
        t += 1
    return out


def _iter_faces(kind: str, cell):
    for face, _ in cell_boundary(kind, cell):
        yield face


def is_face(kind: str, face, cell) -> bool:
    """True when ``face`` lies in the closure of ``cell``."""
    if kind == SIMPLICIAL:
        return set(face) <= set(cell)
    if len(face) != len(cell):
        return False
    for fiv, civ in zip(face, cell):
        if fiv == civ:
            continue
        if len(fiv) == 1 and len(civ) == 2 and fiv[0] in civ:
            continue
        return False
    return True


class CellComplex:
    """A finite cell complex with a deterministic global cell order."""

    def __init__(self, kind: str, cells: Iterable, meta: Optional[dict] = None):
        if kind not in (SIMPLICIAL, CUBICAL):
            raise ComplexError(f"unknown kind {kind!r}")
        self.kind = kind
        by_dim: Dict[int, set] = {}
        width = None
        for cell in cells:
            cell = self._normalize(cell)
            if kind == CUBICAL:
                if width is None:
                    width = len(cell)
                elif len(cell) != width:
                    raise ComplexError("cubical cells must share the number of coordinate positions")
            by_dim.setdefault(cell_dim(kind, cell), set()).add(cell)
        dims = sorted(by_dim)
        if dims and (dims[0] < 0):
            raise ComplexError("cell of negative dimension")
        top = dims[-1] if dims else -1
        self.cells: Tuple[Tuple[tuple, ...], ...] = tuple(
            tuple(sorted(by_dim.get(d, ()), key=cell_key)) for d in range(top + 1)
        )
        self._index: Dict[tuple, Tuple[int, int]] = {}
        for d, layer in enumerate(self.cells):
            for i, cell in enumerate(layer):
                self._index[cell] = (d, i)
        self._validate_closed()
        self.meta = dict(meta or {})
        self._cache: Dict = {}

    def _normalize(self, cell):
        if self.kind == SIMPLICIAL:
            cell = tuple(sorted(cell, key=label_key))
            if len(set(cell)) != len(cell):
                raise ComplexError(f"repeated vertex in simplex {cell!r}")
            return cell
        cell = tuple(tuple(iv) for iv in cell)
        for iv in cell:
            if len(iv) not in (1, 2) or (len(iv) == 2 and iv[0] == iv[1]):
                raise ComplexError(f"bad interval {iv!r} in cube {cell!r}")
        return cell

    def _validate_closed(self):
        for layer in self.cells[1:]:
            for cell in layer:
                for face in _iter_faces(self.kind, cell):
                    if face not in self._index:
                        raise ComplexError(f"face {face!r} of {cell!r} missing")

    @classmethod
    def from_top_cells(cls, kind: str, cells: Iterable, meta: Optional[dict] = None) -> "CellComplex":
        """Build the closure of the given cells."""
        todo = [tuple(tuple(iv) for iv in c) if kind == CUBICAL else tuple(c) for c in cells]
        seen = set()
        while todo:
            cell = todo.pop()
            if kind == SIMPLICIAL:
                cell = tuple(sorted(cell, key=label_key))
            if cell in seen:
                continue
            seen.add(cell)
            todo.extend(_iter_faces(kind, cell))
        return cls(kind, seen, meta=meta)

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, d: int) -> int:
        if 0 <= d < len(self.cells):
            return len(self.cells[d])
        return 0

    def cell_index(self, cell) -> Tuple[int, int]:
        return self._index[cell]

    def has_cell(self, cell) -> bool:
        return cell in self._index

    def vertex_name(self, cell):
        if self.kind == SIMPLICIAL:
            return cell[0]
        return tuple(iv[0] for iv in cell)

    def vertices(self) -> List:
        if not self.cells:
            return []
        return [self.vertex_name(c) for c in self.cells[0]]

    def vertex_cell(self, name):
        if self.kind == SIMPLICIAL:
            return (name,)
        return tuple((x,) for x in name)

    def cell_vertex_names(self, cell) -> Tuple:
        return tuple(sorted(cell_vertices(self.kind, cell), key=label_key))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.cells))

    def components(self) -> List[frozenset]:
        """Vertex sets of the connected components, in deterministic order."""
        parent: Dict = {v: v for v in self.vertices()}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for layer in self.cells[1:]:
            for cell in layer:
                names = self.cell_vertex_names(cell)
                for other in names[1:]:
                    ra, rb = find(names[0]), find(other)
                    if ra != rb:
                        parent[rb] = ra
        groups: Dict = {}
        for v in self.vertices():
            groups.setdefault(find(v), set()).add(v)
        comps = [frozenset(g) for g in groups.values()]
        comps.sort(key=lambda g: min(label_key(v) for v in g))
        return comps

    # -- subcomplexes ------------------------------------------------------

    def subcomplex(self, cells: Iterable) -> "CellComplex":
        cells = list(cells)
        for cell in cells:
            if cell not in self._index:
                raise ComplexError(f"{cell!r} is not a cell of this complex")
        return CellComplex(self.kind, cells)

    def full_subcomplex(self, vertex_names: Iterable) -> "CellComplex":
        """Largest subcomplex whose cells have all vertices in the set."""
        allowed = set(vertex_names)
        picked = []
        for layer in self.cells:
            for cell in layer:
                if all(v in allowed for v in self.cell_vertex_names(cell)):
                    picked.append(cell)
        return CellComplex(self.kind, picked)

    def closed_star(self, cell) -> "CellComplex":
        """Closure of all cells whose closure contains the given cell."""
        if cell not in self._index:
            raise ComplexError(f"{cell!r} is not a cell of this complex")
        cofaces = [c for layer in self.cells for c in layer if is_face(self.kind, cell, c)]
        return CellComplex.from_top_cells(self.kind, cofaces)

    def is_subcomplex_of(self, other: "CellComplex") -> bool:
        return self.kind == other.kind and all(
            other.has_cell(c) for layer in self.cells for c in layer)

    def component_subcomplexes(self) -> List["CellComplex"]:
        return [self.full_subcomplex(comp) for comp in self.components()]

    # -- chain level -------------------------------------------------------

    def boundary_matrix(self, d: int, ring: str) -> SparseMatrix:
        check_ring(ring)
        rows = self.n_cells(d - 1)
        cols = self.n_cells(d)
        if d <= 0 or cols == 0:
            return SparseMatrix.zero(max(rows, 0) if d > 0 else 0, cols, ring)
        acc: Dict[Tuple[int, int], int] = {}
        for i, cell in enumerate(self.cells[d]):
            for face, sign in cell_boundary(self.kind, cell):
                r = self._index[face][1]
                acc[(r, i)] = acc.get((r, i), 0) + sign
        return SparseMatrix(rows, cols, ring, [(r, c, v) for (r, c), v in acc.items() if v])

    def chain_complex(self, ring: str) -> "ChainComplexRep":
        key = ("chain", ring)
        if key not in self._cache:
            self._cache[key] = ChainComplexRep(self, ring)
        return self._cache[key]

    def homology(self, ring: str) -> "HomologySummary":
        key = ("homology", ring)
        if key not in self._cache:
            self._cache[key] = HomologySummary(self.chain_complex(ring))
        return self._cache[key]

    def __eq__(self, other):
        return (isinstance(other, CellComplex) and self.kind == other.kind
                and self.cells == other.cells)

    def __hash__(self):
        return hash((self.kind, self.cells))

    def __repr__(self):
        counts = ",".join(str(len(layer)) for layer in self.cells)
        return f"CellComplex({self.kind}, cells per dim [{counts}])"


class ChainComplexRep:
    """Boundary matrices of a complex over a ring, with d∘d = 0 verified."""

    def __init__(self, complex_: CellComplex, ring: str):
        check_ring(ring)
        self.complex = complex_
        self.ring = ring
        self.boundaries: Tuple[SparseMatrix, ...] = tuple(
            complex_.boundary_matrix(d, ring) for d in range(complex_.dim + 1))
        for d in range(1, len(self.boundaries)):
            if not self.boundaries[d - 1].matmul(self.boundaries[d]).is_zero():
                raise ComplexError(f"dd != 0 between dims {d} and {d - 1}")

    @property
    def dim(self) -> int:
        return self.complex.dim

    def n_chains(self, d: int) -> int:
        return self.complex.n_cells(d)

    def boundary(self, d: int) -> SparseMatrix:
        if 0 <= d < len(self.boundaries):
            return self.boundaries[d]
        return SparseMatrix.zero(self.n_chains(d - 1), self.n_chains(d), self.ring)

    def boundary_of(self, d: int, chain: Vector) -> Vector:
        return self.boundary(d).mat_vec(vec_clean(self.ring, chain))


def chain_complex(X: CellComplex, ring: str) -> ChainComplexRep:
    return X.chain_complex(ring)


@dataclass(frozen=True)
class _DegreeData:
    betti: int
    torsion: Tuple[int, ...]
    generators: Tuple[Tuple[Tuple[int, object], ...], ...]  # torsion gens then free gens


class HomologySummary:
    """Exact homology of a complex: betti, torsion, generator cycles.

    Over Z the summary also answers coordinate questions: given a cycle it
    returns its class in the chosen generator basis (free and torsion parts
    separately).  Over fields the same via a span solve.
    """

    def __init__(self, rep: ChainComplexRep):
        self.rep = rep
        self.ring = rep.ring
        self._data: List[_DegreeData] = []
        self._coords_aux = []
        for d in range(rep.dim + 1):
            if self.ring == Z:
                self._build_integer(d)
            else:
                self._build_field(d)

    # -- construction ------------------------------------------------------

    def _build_integer(self, d: int):
        bd = self.rep.boundary(d)
        bnext = self.rep.boundary(d + 1)
        snf_d = smith_normal_form(bd)
        r = snf_d.rank
        n = bd.cols
        kdim = n - r
        # kernel basis = last kdim columns of V; quotient matrix in that basis
        xcols = []
        for col in bnext.columns():
            w = snf_d.vinv.mat_vec(col)
            if any(i < r for i in w):
                raise ComplexError("boundary column is not a cycle")
            xcols.append({i - r: v for i, v in w.items()})
        X = SparseMatrix.from_columns(xcols, kdim, Z)
        snf_x = smith_normal_form(X)
        rx = snf_x.rank
        betti = kdim - rx
        torsion = tuple(di for di in snf_x.divisors if di > 1)
        K = SparseMatrix(n, kdim, Z,
                         [(rr, cc - r, v) for (rr, cc), v in snf_d.V.data.items() if cc >= r])
        G = K.matmul(snf_x.uinv)
        gcols = G.columns()
        gens = []
        tors_idx = [i for i, di in enumerate(snf_x.divisors) if di > 1]
        for i in tors_idx:
            gens.append(tuple(sorted(gcols[i].items())))
        for i in range(rx, kdim):
            gens.append(tuple(sorted(gcols[i].items())))
        self._data.append(_DegreeData(betti, torsion, tuple(gens)))
        self._coords_aux.append({
            "vinv": snf_d.vinv, "rank": r, "kdim": kdim,
            "ux": snf_x.U, "divisors": snf_x.divisors, "tors_idx": tors_idx,
        })

    def _build_field(self, d: int):
        bd = self.rep.boundary(d)
        bnext = self.rep.boundary(d + 1)
        kbasis = kernel_basis(bd, self.ring)
        bcols = bnext.columns()
        # greedy extension of the image to the kernel, lowest index first
        n = bd.cols
        all_cols = bcols + kbasis
        pivots = _pivot_columns(all_cols, n, self.ring)
        gen_idx = [i - len(bcols) for i in pivots if i >= len(bcols)]
        gens = tuple(tuple(sorted(kbasis[i].items())) for i in gen_idx)
        betti = len(gen_idx)
        self._data.append(_DegreeData(betti, (), gens))
        span_cols = [dict(g) for g in gens] + bcols
        self._coords_aux.append({"span": span_cols, "n": n})

    # -- queries -----------------------------------------------------------

    def betti(self, d: int) -> int:
        if 0 <= d < len(self._data):
            return self._data[d].betti
        return 0

    def torsion(self, d: int) -> Tuple[int, ...]:
        if 0 <= d < len(self._data):
            return self._data[d].torsion
        return ()

    def generators(self, d: int) -> List[Vector]:
        if 0 <= d < len(self._data):
            return [dict(g) for g in self._data[d].generators]
        return []

    def free_generators(self, d: int) -> List[Vector]:
        if 0 <= d < len(self._data):
            dd = self._data[d]
            return [dict(g) for g in dd.generators[len(dd.torsion):]]
        return []

    def betti_numbers(self) -> Tuple[int, ...]:
        return tuple(dd.betti for dd in self._data)

    def coords_of_cycle(self, d: int, cycle: Vector) -> Tuple[Tuple, Tuple]:
        """Class of a cycle in the generator basis: (free coords, torsion coords)."""
        cycle = vec_clean(self.ring, cycle)
        if d < 0 or d > self.rep.dim:
            if cycle:
                raise ComplexError("nonzero chain outside complex dimensions")
            return ((), ())
        if self.ring == Z:
            aux = self._coords_aux[d]
            w = aux["vinv"].mat_vec(cycle)
            if any(i < aux["rank"] for i in w):
                raise ComplexError("chain is not a cycle")
            x = {i - aux["rank"]: v for i, v in w.items()}
            h = aux["ux"].mat_vec(x)
            free = tuple(h.get(i, 0) for i in range(len(aux["divisors"]), aux["kdim"]))
            tors = tuple(h.get(i, 0) % aux["divisors"][i] for i in aux["tors_idx"])
            return (free, tors)
        aux = self._coords_aux[d]
        res = solve_in_span([dict(c) for c in aux["span"]], cycle, self.ring)
        if not isinstance(res, dict):
            raise ComplexError("chain is not a cycle")
        nb = self._data[d].betti
        return (tuple(res.get(i, 0) for i in range(nb)), ())

    def class_is_zero(self, d: int, cycle: Vector) -> bool:
        free, tors = self.coords_of_cycle(d, cycle)
        return not any(free) and not any(tors)


def _pivot_columns(columns: List[Vector], nrows: int, ring: str) -> List[int]:
    """Indices of the columns picked by a greedy left-to-right rank scan."""
    pivots = []
    rows: Dict[int, Vector] = {}
    pivot_of_row: Dict[int, int] = {}
    for idx, col in enumerate(columns):
        vec = vec_clean(ring, dict(col))
        while vec:
            lead = min(vec)
            if lead in rows:
                if ring == GF2:
                    vec = vec_add(ring, vec, rows[lead])
                else:
                    factor = vec[lead] / rows[lead][lead]
                    vec = vec_add(ring, vec, rows[lead], -factor)
            else:
                rows[lead] = vec
                pivots.append(idx)
                break
    return pivots


def homology(X: CellComplex, ring: str) -> HomologySummary:
    return X.homology(ring)


# ---------------------------------------------------------------------------
# Cell maps
# ---------------------------------------------------------------------------

class CellMap:
    """A map of complexes given on vertices, carrying cells onto cells."""

    def __init__(self, source: CellComplex, target: CellComplex, vertex_map: Dict):
        if source.kind != target.kind:
            raise MapError("source and target must be of the same kind")
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        for v in source.vertices():
            if v not in self.vertex_map:
                raise MapError(f"vertex {v!r} has no image")
            if self.vertex_map[v] not in set(target.vertices()):
                raise MapError(f"image {self.vertex_map[v]!r} is not a target vertex")
        lookup: Dict[frozenset, List[tuple]] = {}
        for layer in target.cells:
            for cell in layer:
                lookup.setdefault(frozenset(target.cell_vertex_names(cell)), []).append(cell)
        self._image: Dict[tuple, tuple] = {}
        for layer in source.cells:
            for cell in layer:
                image_set = frozenset(self.vertex_map[v] for v in source.cell_vertex_names(cell))
                candidates = lookup.get(image_set, [])
                if not candidates:
                    raise MapError(f"image of {cell!r} spans no target cell")
                if len(candidates) > 1:
                    raise MapError(f"image of {cell!r} is ambiguous: {candidates}")
                self._image[cell] = candidates[0]
        self._chain_cache: Dict = {}

    def __call__(self, vertex):
        return self.vertex_map[vertex]

    def image_cell(self, cell) -> tuple:
        return self._image[cell]

    def compose(self, other: "CellMap") -> "CellMap":
        """self after other (other first)."""
        if other.target is not self.source and other.target != self.source:
            raise MapError("composition mismatch")
        vm = {v: self.vertex_map[other.vertex_map[v]] for v in other.source.vertices()}
        return CellMap(other.source, self.target, vm)

    @classmethod
    def inclusion(cls, sub: CellComplex, ambient: CellComplex) -> "CellMap":
        if not sub.is_subcomplex_of(ambient):
            raise MapError("not a subcomplex")
        return cls(sub, ambient, {v: v for v in sub.vertices()})

    @classmethod
    def identity(cls, X: CellComplex) -> "CellMap":
        return cls(X, X, {v: v for v in X.vertices()})

    # -- chain level -------------------------------------------------------

    def _simplicial_sign(self, cell, image_cell):
        images = [self.vertex_map[v] for v in cell]
        if len(set(images)) != len(images):
            return 0
        keyed = [label_key(x) for x in images]
        inversions = sum(1 for i in range(len(keyed)) for j in range(i + 1, len(keyed))
                         if keyed[i] > keyed[j])
        return -1 if inversions % 2 else 1

    def _cubical_sign(self, cell, image_cell):
        src_dirs = [j for j, iv in enumerate(cell) if len(iv) == 2]
        tgt_dirs = [l for l, iv in enumerate(image_cell) if len(iv) == 2]
        if len(tgt_dirs) < len(src_dirs):
            return 0
        base = tuple(iv[0] for iv in cell)
        fbase = self.vertex_map[base]
        perm = []
        orient = 1
        for j in src_dirs:
            moved = tuple(cell[k][1] if k == j else cell[k][0] for k in range(len(cell)))
            fmoved = self.vertex_map[moved]
            diff = [l for l in range(len(fbase)) if fbase[l] != fmoved[l]]
            if len(diff) != 1 or diff[0] not in tgt_dirs:
                raise MapError(f"image of {cell!r} is not a product map")
            l = diff[0]
            c, dlab = image_cell[l]
            if fbase[l] == c and fmoved[l] == dlab:
                pass
            elif fbase[l] == dlab and fmoved[l] == c:
                orient = -orient
            else:
                raise MapError(f"edge image of {cell!r} off the target cell")
            perm.append(l)
        if sorted(perm) != tgt_dirs:
            raise MapError(f"image of {cell!r} is not a combinatorial cube map")
        inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
                         if perm[i] > perm[j])
        return orient * (-1 if inversions % 2 else 1)

    def chain_map(self, d: int, ring: str) -> SparseMatrix:
        """Matrix of the induced chain map in degree d (degenerate images = 0)."""
        key = (d, ring)
        if key in self._chain_cache:
            return self._chain_cache[key]
        rows = self.target.n_cells(d)
        cols = self.source.n_cells(d)
        entries = []
        if d <= self.source.dim:
            for i, cell in enumerate(self.source.cells[d]):
                image = self._image[cell]
                if cell_dim(self.target.kind, image) != d:
                    continue
                if self.source.kind == SIMPLICIAL:
                    sign = self._simplicial_sign(cell, image)
                else:
                    sign = self._cubical_sign(cell, image)
                if sign:
                    entries.append((self.target.cell_index(image)[1], i, sign))
        mat = SparseMatrix(rows, cols, ring, entries)
        self._chain_cache[key] = mat
        return mat

    def push_chain(self, d: int, chain: Vector, ring: str) -> Vector:
        return self.chain_map(d, ring).mat_vec(vec_clean(ring, chain))

    def __repr__(self):
        return f"CellMap({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def product_complex(X: CellComplex, Y: CellComplex) -> CellComplex:
    """Cubical product: cells are concatenated interval tuples."""
    if X.kind != CUBICAL or Y.kind != CUBICAL:
        raise ComplexError("product_complex needs two cubical complexes")
    cells = [cx + cy for lx in X.cells for cx in lx for ly in Y.cells for cy in ly]
    return CellComplex(CUBICAL, cells)


# ---------------------------------------------------------------------------
# Induced maps, restriction ranks, kernel ideals
# ---------------------------------------------------------------------------

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"


def induced_map(f: CellMap, k: int, ring: str, variance: str = HOMOLOGY) -> SparseMatrix:
    """Matrix of H_k(f) (or H^k(f), its transpose) in the stored bases.

    Over Z only the free parts enter; torsion is reported by homology() and
    stays out of rank bookkeeping, matching the universal-coefficient
    splitting that the cohomology bases are chosen by.
    """
    check_ring(ring)
    if variance not in (HOMOLOGY, COHOMOLOGY):
        raise ValueError(f"unknown variance {variance!r}")
    hs = f.source.homology(ring)
    ht = f.target.homology(ring)
    chain = f.chain_map(k, ring)
    src_gens = hs.free_generators(k) if ring == Z else hs.generators(k)
    cols = []
    for g in src_gens:
        img = chain.mat_vec(g)
        free, _ = ht.coords_of_cycle(k, img)
        cols.append({i: v for i, v in enumerate(free) if v})
    mat = SparseMatrix.from_columns(cols, ht.betti(k), ring)
    if variance == COHOMOLOGY:
        return mat.transpose()
    return mat


def restriction_rank(X: CellComplex, A: CellComplex, k: int, ring: str) -> int:
    """Rank of H^k(X) -> H^k(A) for a subcomplex A.

    Computed without choosing generators: over a field the rank of the
    cohomology restriction equals the rank of H_k(A -> X), which is
    rank(Z_k(A) + B_k(X)) - rank(B_k(X)) at chain level.  Over Z the rank
    (free rank of the image) equals the rank after tensoring with Q, since
    torsion maps into torsion; so the Z case runs through the same exact
    fraction-free elimination.  The ambient boundary elimination is cached
    on X, making fiber sweeps cheap.
    """
    if not A.is_subcomplex_of(X):
        raise ComplexError("A is not a subcomplex of X")
    check_ring(ring)
    work_ring = Q if ring == Z else ring
    if k < 0 or k > X.dim:
        return 0
    key = ("bspan", k, work_ring)
    if key not in X._cache:
        X._cache[key] = span_basis_of_columns(X.boundary_matrix(k + 1, work_ring), work_ring)
    base: SpanBasis = X._cache[key]
    cycles = kernel_basis(A.boundary_matrix(k, work_ring), work_ring)
    reindex = [X.cell_index(cell)[1] for cell in (A.cells[k] if k <= A.dim else ())]
    pushed = [{reindex[i]: v for i, v in vec.items()} for vec in cycles]
    return base.added_rank(pushed)


@dataclass(frozen=True)
class KernelIdeal:
    """Degree-wise basis of ker[H^*X -> H^*A], in H^*(X) coordinates."""

    ring: str
    basis: Tuple[Tuple[Tuple[Tuple[int, object], ...], ...], ...]

    def degree_basis(self, k: int) -> List[Vector]:
        if 0 <= k < len(self.basis):
            return [dict(b) for b in self.basis[k]]
        return []

    def degree_dim(self, k: int) -> int:
        if 0 <= k < len(self.basis):
            return len(self.basis[k])
        return 0

    def total_dim(self) -> int:
        return sum(len(layer) for layer in self.basis)


def kernel_ideal(X: CellComplex, A: CellComplex, ring: str) -> KernelIdeal:
    """The restriction kernel: satisfies kappa(X) = 0 and kappa(empty) = H^*X."""
    if not A.is_subcomplex_of(X):
        raise ComplexError("A is not a subcomplex of X")
    incl = CellMap.inclusion(A, X)
    layers = []
    for k in range(X.dim + 1):
        mat = induced_map(incl, k, ring, COHOMOLOGY)
        if ring == Z:
            snf = smith_normal_form(mat)
            r = snf.rank
            basis = [tuple(sorted(snf.V.column(c).items())) for c in range(r, mat.cols)]
        else:
            basis = [tuple(sorted(b.items())) for b in kernel_basis(mat, ring)]
        for b in basis:
            if mat.mat_vec(dict(b)):
                raise ComplexError("kernel basis element does not restrict to zero")
        layers.append(tuple(basis))
    return KernelIdeal(ring=ring, basis=tuple(layers))


# ---------------------------------------------------------------------------
# Subdivision (target sampling for width reports)
# ---------------------------------------------------------------------------

def _midpoint(a, b):
    return ("m", a, b)


def subdivide_complex(X: CellComplex) -> CellComplex:
    """One subdivision: cubical halving / simplicial barycentric."""
    if X.kind == CUBICAL:
        pieces = []
        for layer in X.cells:
            for cell in layer:
                factor_pieces = []
                for iv in cell:
                    if len(iv) == 1:
                        factor_pieces.append([iv])
                    else:
                        mid = _midpoint(iv[0], iv[1])
                        factor_pieces.append([(iv[0], mid), (mid, iv[1])])
                prods = [()]
                for options in factor_pieces:
                    prods = [p + (o,) for p in prods for o in options]
                pieces.extend(prods)
        return CellComplex.from_top_cells(CUBICAL, pieces)
    flags = []
    for layer in X.cells:
        for cell in layer:
            stack = [(cell,)]
            while stack:
                flag = stack.pop()
                flags.append(tuple(flag))
                bottom = flag[0]
                if len(bottom) > 1:
                    for face in _iter_faces(SIMPLICIAL, bottom):
                        stack.append((face,) + flag)
    return CellComplex.from_top_cells(SIMPLICIAL, flags)


def _cubical_carrier(vertex_name) -> tuple:
    return tuple((lab[1], lab[2]) if isinstance(lab, tuple) and len(lab) == 3 and lab[0] == "m"
                 else (lab,) for lab in vertex_name)


def _cubical_barycenter(cell) -> tuple:
    return tuple(iv[0] if len(iv) == 1 else _midpoint(iv[0], iv[1]) for iv in cell)


def subdivide_map(f: CellMap) -> CellMap:
    """Canonical subdivision of a cell map (barycenters map to barycenters)."""
    src = subdivide_complex(f.source)
    tgt = subdivide_complex(f.target)
    vmap = {}
    if f.source.kind == CUBICAL:
        for v in src.vertices():
            carrier = _cubical_carrier(v)
            vmap[v] = _cubical_barycenter(f.image_cell(carrier))
    else:
        for v in src.vertices():
            vmap[v] = f.image_cell(v)
    return CellMap(src, tgt, vmap)
