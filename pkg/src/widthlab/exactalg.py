"""Exact sparse linear algebra over Z, Q and GF(2).

Everything here is exact: integers are arbitrary precision, rationals are
``fractions.Fraction`` and GF(2) rows are packed int bitsets.  All values are
immutable after construction and all operations are pure functions, so
independent solves can run in parallel without shared state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

Z = "Z"
Q = "Q"
GF2 = "GF2"

RINGS = (Z, Q, GF2)
FIELDS = (Q, GF2)

Vector = Dict[int, object]


class RingError(ValueError):
    """Unknown ring tag or a value that does not live in the ring."""


def check_ring(ring: str, allowed: Sequence[str] = RINGS) -> str:
    if ring not in allowed:
        raise RingError(f"unsupported ring {ring!r}, expected one of {allowed}")
    return ring


def coeff(ring: str, value) -> object:
    """Normalize a scalar into the ring (0 stays 0, GF(2) reduces mod 2)."""
    if ring == GF2:
        return int(value) % 2
    if ring == Q:
        return Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise RingError(f"{value} is not an integer")
        return value.numerator
    return int(value)


def vec_clean(ring: str, vec: Vector) -> Vector:
    out = {}
    for i, v in vec.items():
        c = coeff(ring, v)
        if c:
            out[i] = c
    return out


def vec_add(ring: str, a: Vector, b: Vector, scale=1) -> Vector:
    out = dict(a)
    for i, v in b.items():
        c = out.get(i, 0) + scale * v
        if ring == GF2:
            c %= 2
        if c:
            out[i] = c
        else:
            out.pop(i, None)
    return out


def vec_scale(ring: str, a: Vector, scale) -> Vector:
    if ring == GF2:
        return dict(a) if scale % 2 else {}
    if not scale:
        return {}
    return {i: v * scale for i, v in a.items()}


def vec_dot(ring: str, a: Vector, b: Vector):
    total = 0
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    for i, v in small.items():
        w = big.get(i)
        if w is not None:
            total += v * w
    return total % 2 if ring == GF2 else total


class SparseMatrix:
    """Immutable sparse matrix given by (row, col) -> nonzero coefficient."""

    __slots__ = ("rows", "cols", "ring", "data")

    def __init__(self, rows: int, cols: int, ring: str, entries: Iterable[Tuple[int, int, object]] = ()):
        check_ring(ring)
        data = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of bounds for {rows}x{cols}")
            if (r, c) in data:
                raise ValueError(f"duplicate entry at ({r},{c})")
            val = coeff(ring, v)
            if val:
                data[(r, c)] = val
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("SparseMatrix is immutable")

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]], ring: str) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = [(r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row) if v]
        return cls(rows, cols, ring, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int, ring: str) -> "SparseMatrix":
        entries = [(r, c, v) for c, col in enumerate(columns) for r, v in col.items()]
        return cls(rows, len(columns), ring, entries)

    @classmethod
    def identity(cls, n: int, ring: str) -> "SparseMatrix":
        return cls(n, n, ring, [(i, i, 1) for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int, ring: str) -> "SparseMatrix":
        return cls(rows, cols, ring)

    def entry(self, r: int, c: int):
        return self.data.get((r, c), coeff(self.ring, 0))

    def to_dense(self) -> List[List[object]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> List[Vector]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def column(self, c: int) -> Vector:
        return {r: v for (r, cc), v in self.data.items() if cc == c}

    def columns(self) -> List[Vector]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.data.items():
            out[c][r] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.ring,
                            [(c, r, v) for (r, c), v in self.data.items()])

    def mat_vec(self, vec: Vector) -> Vector:
        cols = self.columns()
        out: Vector = {}
        for c, s in vec.items():
            if s:
                out = vec_add(self.ring, out, cols[c], s)
        return out

    def vec_mat(self, vec: Vector) -> Vector:
        rows = self.row_dicts()
        out: Vector = {}
        for r, s in vec.items():
            if s:
                out = vec_add(self.ring, out, rows[r], s)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        if self.ring != other.ring:
            raise RingError("ring mismatch in matmul")
        orows = other.row_dicts()
        acc: Dict[Tuple[int, int], object] = {}
        for (r, k), v in self.data.items():
            for c, w in orows[k].items():
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        entries = [(r, c, v) for (r, c), v in acc.items()]
        return SparseMatrix(self.rows, other.cols, self.ring, entries)

    def change_ring(self, ring: str) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, ring,
                            [(r, c, v) for (r, c), v in self.data.items()])

    def is_zero(self) -> bool:
        return not self.data

    def nnz(self) -> int:
        return len(self.data)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.ring == other.ring
                and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.ring, frozenset(self.data.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols} over {self.ring}, {len(self.data)} entries)"


@dataclass(frozen=True)
class SmithForm:
    """U*A*V = diag(divisors) padded with zeros, U and V unimodular.

    ``uinv`` and ``vinv`` are the exact inverses, tracked during reduction;
    they make kernel membership and coordinate extraction a single matvec.
    """

    divisors: Tuple[int, ...]
    U: SparseMatrix
    V: SparseMatrix
    uinv: SparseMatrix
    vinv: SparseMatrix

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def diagonal_matrix(self, rows: int, cols: int) -> SparseMatrix:
        return SparseMatrix(rows, cols, Z,
                            [(i, i, d) for i, d in enumerate(self.divisors)])


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Row vector u with u^T B = 0 and u^T y != 0 for the system B w = y."""

    u: Tuple[Tuple[int, object], ...]
    ring: str

    def as_dict(self) -> Vector:
        return dict(self.u)

    def verify(self, B: SparseMatrix, y: Vector) -> bool:
        u = self.as_dict()
        if B.vec_mat(u):
            return False
        return bool(vec_dot(self.ring, u, vec_clean(self.ring, y)))


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

class _Rows:
    """Row-major mutable sparse store with a column index."""

    def __init__(self, rows: int):
        self.row: List[Dict[int, int]] = [dict() for _ in range(rows)]
        self.col: Dict[int, set] = {}

    def set(self, r, c, v):
        if v:
            if c not in self.row[r]:
                self.col.setdefault(c, set()).add(r)
            self.row[r][c] = v
        elif c in self.row[r]:
            del self.row[r][c]
            self.col[c].discard(r)

    def add_row(self, dst, src, q):
        # row[dst] += q * row[src]
        if not q:
            return
        for c, v in list(self.row[src].items()):
            self.set(dst, c, self.row[dst].get(c, 0) + q * v)

    def swap_rows(self, a, b):
        if a == b:
            return
        ca, cb = set(self.row[a]), set(self.row[b])
        for c in ca - cb:
            self.col[c].discard(a)
            self.col[c].add(b)
        for c in cb - ca:
            self.col[c].discard(b)
            self.col[c].add(a)
        self.row[a], self.row[b] = self.row[b], self.row[a]

    def add_col(self, dst, src, q):
        # col[dst] += q * col[src]
        if not q:
            return
        for r in list(self.col.get(src, ())):
            v = self.row[r].get(src, 0)
            self.set(r, dst, self.row[r].get(dst, 0) + q * v)

    def swap_cols(self, a, b):
        if a == b:
            return
        rows = self.col.get(a, set()) | self.col.get(b, set())
        for r in rows:
            va = self.row[r].pop(a, 0)
            vb = self.row[r].pop(b, 0)
            if va:
                self.row[r][b] = va
            if vb:
                self.row[r][a] = vb
        self.col[a] = {r for r in rows if a in self.row[r]}
        self.col[b] = {r for r in rows if b in self.row[r]}

    def negate_row(self, r):
        for c in self.row[r]:
            self.row[r][c] = -self.row[r][c]

    def to_matrix(self, rows, cols, transpose=False):
        entries = []
        for r, d in enumerate(self.row):
            for c, v in d.items():
                entries.append((c, r, v) if transpose else (r, c, v))
        if transpose:
            return SparseMatrix(cols, rows, Z, entries)
        return SparseMatrix(rows, cols, Z, entries)


def smith_normal_form(A: SparseMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms and their inverses.

    Pivots on the minimal-absolute-value entry of the active block, ties
    broken by lowest (row, col); this keeps coefficient growth in check on
    random matrices while staying fully deterministic.
    """
    if A.ring != Z:
        raise RingError("smith_normal_form needs an integer matrix")
    m, n = A.rows, A.cols
    work = _Rows(m)
    for (r, c), v in A.data.items():
        work.set(r, c, v)
    # U tracked as rows, U^-1 tracked transposed (so both see row ops).
    u = _Rows(m)
    uinv_t = _Rows(m)
    for i in range(m):
        u.set(i, i, 1)
        uinv_t.set(i, i, 1)
    # V tracked transposed (col ops become row ops), V^-1 tracked as rows.
    v_t = _Rows(n)
    vinv = _Rows(n)
    for i in range(n):
        v_t.set(i, i, 1)
        vinv.set(i, i, 1)

    def row_add(dst, src, q):
        work.add_row(dst, src, q)
        u.add_row(dst, src, q)
        uinv_t.add_row(src, dst, -q)

    def col_add(dst, src, q):
        work.add_col(dst, src, q)
        v_t.add_row(dst, src, q)
        vinv.add_row(src, dst, -q)

    def row_swap(a, b):
        work.swap_rows(a, b)
        u.swap_rows(a, b)
        uinv_t.swap_rows(a, b)

    def col_swap(a, b):
        work.swap_cols(a, b)
        v_t.swap_rows(a, b)
        vinv.swap_rows(a, b)

    def pick_pivot(t):
        best = None
        for r in range(t, m):
            for c, val in work.row[r].items():
                if c < t:
                    continue
                key = (abs(val), r, c)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[1], best[2])

    divisors: List[int] = []
    t = 0
    while t < min(m, n):
        pos = pick_pivot(t)
        if pos is None:
            break
        row_swap(t, pos[0])
        col_swap(t, pos[1])
        while True:
            pivot = work.row[t][t]
            # clear column t
            touched = False
            for r in sorted(work.col.get(t, ())):
                if r == t:
                    continue
                val = work.row[r][t]
                qq = val // pivot
                row_add(r, t, -qq)
                touched = True
            # clear row t
            for c in sorted(work.row[t]):
                if c == t:
                    continue
                val = work.row[t][c]
                qq = val // pivot
                col_add(c, t, -qq)
                touched = True
            col_left = any(r != t for r in work.col.get(t, ()))
            row_left = any(c != t for c in work.row[t])
            if col_left or row_left:
                # remainders are smaller than the pivot, re-pivot on them
                pos = pick_pivot(t)
                row_swap(t, pos[0])
                col_swap(t, pos[1])
                continue
            # divisibility: fold in any entry the pivot does not divide
            pivot = work.row[t][t]
            offender = None
            for r in range(t + 1, m):
                for c, val in work.row[r].items():
                    if c > t and val % pivot:
                        key = (r, c)
                        if offender is None or key < offender:
                            offender = key
            if offender is None:
                break
            row_add(t, offender[0], 1)
        pivot = work.row[t][t]
        if pivot < 0:
            work.negate_row(t)
            u.negate_row(t)
            uinv_t.negate_row(t)
        divisors.append(work.row[t][t])
        t += 1

    return SmithForm(
        divisors=tuple(divisors),
        U=u.to_matrix(m, m),
        V=v_t.to_matrix(n, n, transpose=True),
        uinv=uinv_t.to_matrix(m, m, transpose=True),
        vinv=vinv.to_matrix(n, n),
    )


# ---------------------------------------------------------------------------
# Field elimination: rank, kernels, solves with certificates
# ---------------------------------------------------------------------------

def _gf2_rows(A: SparseMatrix) -> List[int]:
    rows = [0] * A.rows
    for (r, c), v in A.data.items():
        if v % 2:
            rows[r] |= 1 << c
    return rows


def gf2_rank(rows: List[int], ncols: int) -> int:
    work = [r for r in rows if r]
    rank = 0
    for c in range(ncols):
        mask = 1 << c
        piv = None
        for i in range(rank, len(work)):
            if work[i] & mask:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        for i in range(len(work)):
            if i != rank and (work[i] & mask):
                work[i] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def _rank_q(A: SparseMatrix) -> int:
    rows = [{c: Fraction(v) for c, v in row.items()} for row in A.row_dicts() if row]
    rank = 0
    for c in range(A.cols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i].get(c):
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        for i in range(len(rows)):
            if i != rank and rows[i].get(c):
                factor = rows[i][c] / pv
                for cc, vv in rows[rank].items():
                    nv = rows[i].get(cc, Fraction(0)) - factor * vv
                    if nv:
                        rows[i][cc] = nv
                    else:
                        rows[i].pop(cc, None)
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_over(A: SparseMatrix, ring: str) -> int:
    """Exact rank of A over the chosen ring (Z rank equals Q rank)."""
    check_ring(ring)
    if ring == GF2:
        return gf2_rank(_gf2_rows(A), A.cols)
    return _rank_q(A)


def kernel_basis(A: SparseMatrix, ring: str) -> List[Vector]:
    """Deterministic basis of ker(A) over a field, as sparse column vectors."""
    check_ring(ring, FIELDS)
    n = A.cols
    if ring == GF2:
        rows = _gf2_rows(A)
        work = [r for r in rows if r]
        pivots: List[int] = []
        rank = 0
        for c in range(n):
            mask = 1 << c
            piv = None
            for i in range(rank, len(work)):
                if work[i] & mask:
                    piv = i
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            for i in range(len(work)):
                if i != rank and (work[i] & mask):
                    work[i] ^= work[rank]
            pivots.append(c)
            rank += 1
        free = [c for c in range(n) if c not in set(pivots)]
        basis = []
        for fc in free:
            vec = {fc: 1}
            for i, pc in enumerate(pivots):
                if i < len(work) and (work[i] >> fc) & 1:
                    vec[pc] = 1
            basis.append(vec)
        return basis
    rows = [{c: Fraction(v) for c, v in row.items()} for row in A.row_dicts() if row]
    pivots = []
    rank = 0
    for c in range(n):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i].get(c):
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        rows[rank] = {cc: vv / pv for cc, vv in rows[rank].items()}
        for i in range(len(rows)):
            if i != rank and rows[i].get(c):
                factor = rows[i][c]
                for cc, vv in rows[rank].items():
                    nv = rows[i].get(cc, Fraction(0)) - factor * vv
                    if nv:
                        rows[i][cc] = nv
                    else:
                        rows[i].pop(cc, None)
        pivots.append(c)
        rank += 1
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for fc in free:
        vec: Vector = {fc: Fraction(1)}
        for i, pc in enumerate(pivots):
            val = rows[i].get(fc)
            if val:
                vec[pc] = -val
        basis.append(vec)
    return basis


def solve_linear(B: SparseMatrix, y: Vector, ring: str):
    """Solve B w = y over Q or GF(2), totally.

    Returns a sparse solution vector, or an :class:`InfeasibilityCertificate`
    u with u^T B = 0 and u^T y != 0.  Exactly one of the two happens; callers
    distinguish them with ``isinstance`` (the zero solution is ``{}``).
    """
    check_ring(ring, FIELDS)
    y = vec_clean(ring, y)
    for r in y:
        if not 0 <= r < B.rows:
            raise ValueError("right-hand side index out of range")
    if ring == GF2:
        return _solve_gf2(B, y)
    return _solve_q(B, y)


def _solve_gf2(B: SparseMatrix, y: Vector):
    m, n = B.rows, B.cols
    rows = _gf2_rows(B)
    rhs = [1 if y.get(r) else 0 for r in range(m)]
    track = [1 << r for r in range(m)]
    perm = list(range(m))
    rank = 0
    pivots: List[int] = []
    for c in range(n):
        mask = 1 << c
        piv = None
        for i in range(rank, m):
            if rows[perm[i]] & mask:
                piv = i
                break
        if piv is None:
            continue
        perm[rank], perm[piv] = perm[piv], perm[rank]
        pr = perm[rank]
        for i in range(m):
            r = perm[i]
            if r != pr and rows[r] & mask:
                rows[r] ^= rows[pr]
                rhs[r] ^= rhs[pr]
                track[r] ^= track[pr]
        pivots.append(c)
        rank += 1
    for i in range(rank, m):
        r = perm[i]
        if rhs[r]:
            u = tuple((j, 1) for j in range(m) if (track[r] >> j) & 1)
            return InfeasibilityCertificate(u=u, ring=GF2)
    sol: Vector = {}
    for i, c in enumerate(pivots):
        r = perm[i]
        if rhs[r]:
            sol[c] = 1
    return sol


def _solve_q(B: SparseMatrix, y: Vector):
    m, n = B.rows, B.cols
    rows = [{c: Fraction(v) for c, v in row.items()} for row in B.row_dicts()]
    rhs = [Fraction(y.get(r, 0)) for r in range(m)]
    track: List[Vector] = [{r: Fraction(1)} for r in range(m)]
    perm = list(range(m))
    rank = 0
    pivots: List[int] = []
    for c in range(n):
        piv = None
        for i in range(rank, m):
            if rows[perm[i]].get(c):
                piv = i
                break
        if piv is None:
            continue
        perm[rank], perm[piv] = perm[piv], perm[rank]
        pr = perm[rank]
        pv = rows[pr][c]
        for i in range(m):
            r = perm[i]
            if r != pr and rows[r].get(c):
                factor = rows[r][c] / pv
                for cc, vv in rows[pr].items():
                    nv = rows[r].get(cc, Fraction(0)) - factor * vv
                    if nv:
                        rows[r][cc] = nv
                    else:
                        rows[r].pop(cc, None)
                rhs[r] -= factor * rhs[pr]
                track[r] = vec_add(Q, track[r], track[pr], -factor)
        pivots.append(c)
        rank += 1
    for i in range(rank, m):
        r = perm[i]
        if rhs[r]:
            u = tuple(sorted(track[r].items()))
            return InfeasibilityCertificate(u=u, ring=Q)
    sol: Vector = {}
    for i, c in enumerate(pivots):
        r = perm[i]
        if rhs[r]:
            sol[c] = rhs[r] / rows[r][c]
    return sol


class SpanBasis:
    """Incremental exact column-space elimination.

    Vectors are folded in one at a time; each either extends the rank or
    reduces to zero against the stored pivots.  GF(2) vectors are int
    bitsets; Q/Z vectors are kept as gcd-normalized integer rows
    (fraction-free cross-multiplication), which is exact and much faster
    than Fraction arithmetic.  A base built once can be shared: ``extended``
    copies only the pivot table, never the vectors.
    """

    def __init__(self, ring: str):
        check_ring(ring)
        self.ring = ring
        self.pivots: Dict[int, object] = {}

    @staticmethod
    def _to_int_row(vec: Vector) -> Dict[int, int]:
        if not vec:
            return {}
        denoms = [v.denominator for v in vec.values() if isinstance(v, Fraction)]
        if denoms:
            scale = 1
            for d in denoms:
                scale = scale * d // _gcd(scale, d)
            row = {i: int(v * scale) for i, v in vec.items()}
        else:
            row = {i: int(v) for i, v in vec.items()}
        g = 0
        for v in row.values():
            g = _gcd(g, v)
        if g > 1:
            row = {i: v // g for i, v in row.items()}
        return row

    def _fold(self, vec):
        if self.ring == GF2:
            if isinstance(vec, dict):
                bits = 0
                for i, v in vec.items():
                    if v % 2:
                        bits |= 1 << i
                vec = bits
            while vec:
                lead = (vec & -vec).bit_length() - 1
                piv = self.pivots.get(lead)
                if piv is None:
                    return lead, vec
                vec ^= piv
            return None, 0
        row = self._to_int_row(vec)
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return lead, row
            a, b = piv[lead], row[lead]
            new = {}
            for i, v in row.items():
                w = a * v - b * piv.get(i, 0)
                if w:
                    new[i] = w
            for i, v in piv.items():
                if i not in row:
                    w = -b * v
                    if w:
                        new[i] = w
            g = 0
            for v in new.values():
                g = _gcd(g, v)
            if g > 1:
                new = {i: v // g for i, v in new.items()}
            row = new
        return None, {}

    def insert(self, vec) -> bool:
        lead, reduced = self._fold(vec)
        if lead is None:
            return False
        self.pivots[lead] = reduced
        return True

    def contains(self, vec) -> bool:
        lead, _ = self._fold(vec)
        return lead is None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def extended(self) -> "SpanBasis":
        out = SpanBasis(self.ring)
        out.pivots = dict(self.pivots)
        return out

    def added_rank(self, vectors: Iterable) -> int:
        ext = self.extended()
        return sum(1 for v in vectors if ext.insert(v))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def span_basis_of_columns(A: SparseMatrix, ring: str) -> SpanBasis:
    basis = SpanBasis(ring)
    for col in A.columns():
        basis.insert(col)
    return basis


def solve_in_span(columns: List[Vector], target: Vector, ring: str):
    """Express target in the span of the given columns, or certify failure."""
    nrows = 0
    for col in columns:
        for r in col:
            nrows = max(nrows, r + 1)
    for r in target:
        nrows = max(nrows, r + 1)
    B = SparseMatrix.from_columns(columns, nrows, ring)
    return solve_linear(B, target, ring)


# ---------------------------------------------------------------------------
# Integer lattice helpers
# ---------------------------------------------------------------------------

def hermite_row_basis(vectors: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    """Canonical row Hermite normal form of the lattice spanned by vectors.

    Pivots positive, entries above a pivot reduced into [0, pivot); the
    result is the unique canonical basis of the row lattice.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis: List[List[int]] = []
    for vec in rows:
        basis.append(vec)
    # column by column gcd elimination
    out: List[List[int]] = []
    work = [list(v) for v in basis]
    col = 0
    r0 = 0
    while col < n and r0 < len(work):
        # gcd-reduce column col among rows >= r0
        while True:
            nz = [i for i in range(r0, len(work)) if work[i][col]]
            if not nz:
                break
            i_min = min(nz, key=lambda i: (abs(work[i][col]), i))
            work[r0], work[i_min] = work[i_min], work[r0]
            done = True
            for i in range(r0 + 1, len(work)):
                if work[i][col]:
                    qq = work[i][col] // work[r0][col]
                    work[i] = [a - qq * b for a, b in zip(work[i], work[r0])]
                    if work[i][col]:
                        done = False
            if done:
                break
        if r0 < len(work) and work[r0][col]:
            if work[r0][col] < 0:
                work[r0] = [-a for a in work[r0]]
            r0 += 1
        col += 1
    work = [w for w in work[:r0]]
    # reduce above pivots
    pivots = []
    for row in work:
        for c, v in enumerate(row):
            if v:
                pivots.append(c)
                break
    for i in range(len(work) - 1, -1, -1):
        c = pivots[i]
        p = work[i][c]
        for j in range(i):
            if work[j][c]:
                qq = work[j][c] // p
                work[j] = [a - qq * b for a, b in zip(work[j], work[i])]
    for row in work:
        out.append(row)
    return out


def det_bareiss(dense: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n = len(dense)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in dense]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = None
            for i in range(k + 1, n):
                if a[i][k]:
                    swap = i
                    break
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_inverse_unimodular(A: SparseMatrix) -> SparseMatrix:
    """Inverse of a unimodular integer matrix (via its Smith transforms)."""
    snf = smith_normal_form(A)
    if A.rows != A.cols or snf.divisors != tuple([1] * A.rows):
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^-1 = V U
    return snf.V.matmul(snf.U)
