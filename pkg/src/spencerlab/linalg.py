"""Exact rational linear algebra on labeled bases.

The elimination core is fraction-free (Bareiss) on integer rows after
clearing denominators, normalized to a rational RREF at the end; this
keeps intermediate entries small without ever leaving exact arithmetic.

:class:`GradedPiece` is the quotient-space workhorse used by every graded
construction: an ambient labeled basis, a relation span in RREF, and a
normal form ``reduce`` onto the non-pivot labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import InternalInvariantError


def _clear_row(row):
    den = 1
    for c in row:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column indices."""
    work = [_clear_row(r) for r in rows if any(c != 0 for c in r)]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        piv = work[r][c]
        # One-step Bareiss update on every lower row; divisions are exact
        # (Sylvester identity) only if no row is ever skipped.
        for i in range(r + 1, len(work)):
            wi, wr = work[i], work[r]
            fic = wi[c]
            for j in range(c, ncols):
                wi[j] = (wi[j] * piv - fic * wr[j]) // prev
        pivots.append(c)
        prev = piv
        r += 1
        if r == len(work):
            break
    # Back substitution over Fractions for a genuine RREF; rows are kept
    # sparse during elimination since relation matrices mostly are.
    sparse = []
    for i, c in enumerate(pivots):
        piv = work[i][c]
        sparse.append({j: Fraction(v, piv) for j, v in enumerate(work[i]) if v})
    for i in reversed(range(len(sparse))):
        c = pivots[i]
        for k in range(i):
            f = sparse[k].get(c)
            if not f:
                continue
            rk = sparse[k]
            for j, b in sparse[i].items():
                val = rk.get(j, Fraction(0)) - f * b
                if val:
                    rk[j] = val
                elif j in rk:
                    del rk[j]
    out = []
    for row in sparse:
        dense = [Fraction(0)] * ncols
        for j, v in row.items():
            dense[j] = v
        out.append(dense)
    return out, pivots


def _kernel_from_rref(rref_rows, pivots, ncols):
    pivot_of_col = {c: i for i, c in enumerate(pivots)}
    free = [c for c in range(ncols) if c not in pivot_of_col]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, i in pivot_of_col.items():
            vec[c] = -rref_rows[i][f]
        basis.append(tuple(vec))
    return basis


@dataclass(frozen=True)
class LinearMap:
    """Matrix of an exact linear map, rows indexed by target basis."""

    source_basis: tuple
    target_basis: tuple
    matrix: tuple  # matrix[i][j]: coefficient of target i in image of source j

    def __post_init__(self):
        if len(self.matrix) != len(self.target_basis):
            raise InternalInvariantError("row count must match target basis")
        for row in self.matrix:
            if len(row) != len(self.source_basis):
                raise InternalInvariantError("column count must match source basis")

    @classmethod
    def from_columns(cls, source_basis, target_basis, columns) -> LinearMap:
        rows = tuple(
            tuple(columns[j][i] for j in range(len(source_basis)))
            for i in range(len(target_basis))
        )
        return cls(tuple(source_basis), tuple(target_basis), rows)

    @classmethod
    def zero(cls, source_basis, target_basis) -> LinearMap:
        row = (Fraction(0),) * len(source_basis)
        return cls(tuple(source_basis), tuple(target_basis), (row,) * len(target_basis))

    @classmethod
    def identity(cls, basis) -> LinearMap:
        n = len(basis)
        rows = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        return cls(tuple(basis), tuple(basis), rows)

    @property
    def shape(self):
        return len(self.target_basis), len(self.source_basis)

    def apply(self, vec) -> tuple:
        return tuple(
            sum((row[j] * vec[j] for j in range(len(vec)) if vec[j]), Fraction(0))
            for row in self.matrix
        )

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.matrix)

    def compose(self, first: LinearMap) -> LinearMap:
        """self ∘ first."""
        if first.target_basis != self.source_basis:
            raise InternalInvariantError("composition basis mismatch")
        cols = [self.apply(first.column(j)) for j in range(len(first.source_basis))]
        return LinearMap.from_columns(first.source_basis, self.target_basis, cols)

    def add(self, other: LinearMap) -> LinearMap:
        rows = tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.matrix, other.matrix)
        )
        return LinearMap(self.source_basis, self.target_basis, rows)

    def scale(self, c) -> LinearMap:
        c = Fraction(c)
        rows = tuple(tuple(c * a for a in row) for row in self.matrix)
        return LinearMap(self.source_basis, self.target_basis, rows)

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in row) for row in self.matrix)

    def is_identity(self) -> bool:
        if self.source_basis != self.target_basis:
            return False
        return all(
            a == (1 if i == j else 0)
            for i, row in enumerate(self.matrix)
            for j, a in enumerate(row)
        )

    def inverse(self) -> LinearMap:
        n = len(self.source_basis)
        if len(self.target_basis) != n:
            raise InternalInvariantError("inverse of a non-square map")
        aug = [list(self.matrix[i]) + [Fraction(1 if j == i else 0) for j in range(n)]
               for i in range(n)]
        rows, pivots = rref(aug)
        if pivots != list(range(n)):
            raise InternalInvariantError("map is singular")
        inv = tuple(tuple(rows[i][n:]) for i in range(n))
        return LinearMap(self.target_basis, self.source_basis, inv)


def rank_kernel_image(m: LinearMap):
    """Rank, kernel basis (source coordinates), image basis (target coordinates)."""
    nrows, ncols = m.shape
    rows = [list(r) for r in m.matrix]
    rr, pivots = rref(rows) if rows else ([], [])
    rank = len(pivots)
    kernel = _kernel_from_rref(rr, pivots, ncols) if ncols else []
    image = [m.column(j) for j in pivots]
    if rank + len(kernel) != ncols:
        raise InternalInvariantError("rank-nullity violated")
    return rank, kernel, image


@dataclass
class GradedPiece:
    """One graded component: ambient labels modulo a relation span.

    ``basis`` is the non-pivot subset of ``ambient``; ``reduce`` is the
    normal form modulo the relation row space, supported on ``basis``.
    The reduced relation rows are held sparsely; relation matrices in
    this package rarely have more than a few entries per row.
    """

    ambient: tuple
    basis: tuple = field(init=False)
    _index: dict = field(init=False, repr=False)
    _sparse_rows: dict = field(init=False, repr=False)  # pivot col -> {col: coeff}
    _pivots: list = field(init=False, repr=False)

    def __init__(self, ambient, relations):
        self.ambient = tuple(ambient)
        self._index = {lbl: i for i, lbl in enumerate(self.ambient)}
        rows = []
        for rel in relations:
            row = [Fraction(0)] * len(self.ambient)
            nonzero = False
            for lbl, c in rel.items():
                if c == 0:
                    continue
                try:
                    row[self._index[lbl]] = Fraction(c)
                except KeyError:
                    raise InternalInvariantError(
                        f"label {lbl!r} outside ambient basis"
                    )
                nonzero = True
            if nonzero:
                rows.append(row)
        rr, self._pivots = rref(rows) if rows else ([], [])
        self._sparse_rows = {}
        for row, p in zip(rr, self._pivots):
            self._sparse_rows[p] = {
                j: v for j, v in enumerate(row) if v and j != p
            }
        pivot_set = set(self._pivots)
        self.basis = tuple(
            lbl for i, lbl in enumerate(self.ambient) if i not in pivot_set
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec: dict) -> dict:
        """Normal form of an ambient vector modulo the relation span."""
        acc: dict = {}
        for lbl, c in vec.items():
            if c == 0:
                continue
            try:
                j = self._index[lbl]
            except KeyError:
                raise InternalInvariantError(f"label {lbl!r} outside ambient basis")
            acc[j] = acc.get(j, Fraction(0)) + Fraction(c)
        # pivots are eliminated in ascending order; RREF rows only touch
        # non-pivot columns beyond their own pivot, so one pass suffices
        for p in self._pivots:
            f = acc.get(p)
            if not f:
                continue
            del acc[p]
            for j, b in self._sparse_rows[p].items():
                val = acc.get(j, Fraction(0)) - f * b
                if val:
                    acc[j] = val
                elif j in acc:
                    del acc[j]
        return {self.ambient[j]: v for j, v in acc.items() if v}

    def coords(self, vec: dict) -> tuple:
        red = self.reduce(vec)
        return tuple(red.get(lbl, Fraction(0)) for lbl in self.basis)

    def is_relation(self, vec: dict) -> bool:
        return not self.reduce(vec)
