"""Linear algebra over F_q and subspace calculus in F_{q^m}.

Matrices over F_q are stored as *packed rows*: each row is a single Python
integer whose base-q digit at position j is the entry in column j (for q = 2
a row is just a bitmask).  This matches the element packing of
:mod:`lrpc_lab.field`, so an element of F_{q^m} *is* a packed row of its
coefficient vector and subspaces of F_{q^m} need no conversion at all.

Convention for Gauss-Jordan elimination: leftmost pivot column first
(column 0 = lowest digit), topmost available row becomes the pivot row.
The result is the unique reduced row-echelon form, so two subspaces are
equal iff their basis tuples compare equal.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .field import FieldContext


# ---------------------------------------------------------------------------
# Packed-row utilities
# ---------------------------------------------------------------------------

def pack_row(row: Sequence[int], q: int) -> int:
    v = 0
    for c in reversed(row):
        v = v * q + (c % q)
    return v


def unpack_row(v: int, ncols: int, q: int) -> list[int]:
    out = []
    for _ in range(ncols):
        v, c = divmod(v, q)
        out.append(c)
    return out


def rref_packed(rows: Iterable[int], ncols: int, q: int) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form of packed rows.

    Returns (nonzero reduced rows ordered by pivot column, pivot columns).
    """
    if q == 2:
        return _rref_packed_q2(list(rows), ncols)
    return _rref_packed_generic(list(rows), ncols, q)


def _rref_packed_q2(work: list[int], ncols: int) -> tuple[list[int], list[int]]:
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        p = -1
        for i in range(r, nrows):
            if (work[i] >> c) & 1:
                p = i
                break
        if p < 0:
            continue
        work[r], work[p] = work[p], work[r]
        pr = work[r]
        for i in range(nrows):
            if i != r and ((work[i] >> c) & 1):
                work[i] ^= pr
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work[:r], pivots


def _rref_packed_generic(rows: list[int], ncols: int, q: int) -> tuple[list[int], list[int]]:
    work = [unpack_row(v, ncols, q) for v in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        p = -1
        for i in range(r, nrows):
            if work[i][c]:
                p = i
                break
        if p < 0:
            continue
        work[r], work[p] = work[p], work[r]
        inv = pow(work[r][c], -1, q)
        work[r] = [(x * inv) % q for x in work[r]]
        pr = work[r]
        for i in range(nrows):
            f = work[i][c]
            if i != r and f:
                work[i] = [(x - f * y) % q for x, y in zip(work[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [pack_row(w, q) for w in work[:r]], pivots


def rank_packed(rows: Iterable[int], ncols: int, q: int) -> int:
    return len(rref_packed(rows, ncols, q)[0])


# ---------------------------------------------------------------------------
# Dense (list-of-list) front end
# ---------------------------------------------------------------------------

def rref(mat: Sequence[Sequence[int]], q: int) -> tuple[list[list[int]], int, list[int]]:
    """Gauss-Jordan form of a dense matrix over F_q.

    Returns (nonzero reduced rows, rank, pivot columns).
    """
    rows = [list(r) for r in mat]
    if not rows:
        return [], 0, []
    ncols = len(rows[0])
    packed, pivots = rref_packed((pack_row(r, q) for r in rows), ncols, q)
    return [unpack_row(v, ncols, q) for v in packed], len(packed), pivots


class SolveStatus(Enum):
    UNIQUE = "unique"
    NO_SOLUTION = "no_solution"
    UNDERDETERMINED = "underdetermined"


def solve_packed(
    a_rows: Sequence[int], ncols_a: int, b_rows: Sequence[int], n_rhs: int, q: int
) -> tuple[SolveStatus, list[int] | None]:
    """Classify and solve A X = B with packed rows (B packed over n_rhs digits).

    On UNIQUE the solution is returned as ncols_a packed rows of n_rhs
    digits each (row d = the d-th row of X).
    """
    if len(a_rows) != len(b_rows):
        raise ValueError("A and B must have the same number of rows")
    shift = q ** ncols_a
    aug = [a + b * shift for a, b in zip(a_rows, b_rows)]
    reduced, pivots = rref_packed(aug, ncols_a + n_rhs, q)
    if any(p >= ncols_a for p in pivots):
        return SolveStatus.NO_SOLUTION, None
    if len(pivots) < ncols_a:
        return SolveStatus.UNDERDETERMINED, None
    # full column rank: pivots are exactly columns 0..ncols_a-1
    return SolveStatus.UNIQUE, [row // shift for row in reduced]


def solve(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], q: int
) -> tuple[SolveStatus, list[list[int]] | None]:
    """Dense-matrix wrapper around :func:`solve_packed`."""
    if len(a) != len(b):
        raise ValueError("A and B must have the same number of rows")
    if not a:
        raise ValueError("empty system")
    ncols_a, n_rhs = len(a[0]), len(b[0])
    status, x = solve_packed(
        [pack_row(r, q) for r in a], ncols_a, [pack_row(r, q) for r in b], n_rhs, q
    )
    if status is not SolveStatus.UNIQUE:
        return status, None
    return status, [unpack_row(v, n_rhs, q) for v in x]


# ---------------------------------------------------------------------------
# Subspaces of F_{q^m}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """An F_q-linear subspace of F_{q^m} in canonical RREF basis form.

    ``basis`` holds packed field elements (one per basis vector), in reduced
    row-echelon form with pivots ascending; equal subspaces always compare
    equal.  Construct through :func:`subspace_from_rows` / :func:`support`.
    """

    ctx: FieldContext
    basis: tuple[int, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, elem: int) -> bool:
        return self.reduce(elem) == 0

    def reduce(self, elem: int) -> int:
        """Residual of an element after elimination against the basis."""
        ctx = self.ctx
        if ctx.q == 2:
            for row, p in zip(self.basis, self.pivots):
                if (elem >> p) & 1:
                    elem ^= row
            return elem
        q = ctx.q
        for row, p in zip(self.basis, self.pivots):
            d = (elem // q ** p) % q
            if d:
                elem = ctx.sub(elem, ctx.scalar_mul(d, row))
        return elem

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def elements(self) -> Iterator[int]:
        """All q^dim elements (only sensible for small dimensions)."""
        ctx = self.ctx
        for coeffs in itertools.product(range(ctx.q), repeat=self.dim):
            v = 0
            for c, b in zip(coeffs, self.basis):
                v = ctx.add(v, ctx.scalar_mul(c, b))
            yield v

    def basis_coeff_matrix(self) -> list[list[int]]:
        return [self.ctx.to_coeffs(b) for b in self.basis]

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": self.basis_coeff_matrix()}

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={list(self.basis)})"


def subspace_from_rows(ctx: FieldContext, rows: Iterable[int]) -> Subspace:
    basis, pivots = rref_packed(rows, ctx.m, ctx.q)
    return Subspace(ctx, tuple(basis), tuple(pivots))


def subspace_from_json(ctx: FieldContext, obj: dict) -> Subspace:
    sub = subspace_from_rows(ctx, (ctx.from_coeffs(r) for r in obj["basis"]))
    if sub.dim != obj["dim"]:
        raise ValueError("basis rows are not independent")
    return sub


def zero_subspace(ctx: FieldContext) -> Subspace:
    return Subspace(ctx, (), ())


def support(ctx: FieldContext, elems: Iterable[int]) -> Subspace:
    """Span of a vector's entries: the rank-metric support Supp(x)."""
    return subspace_from_rows(ctx, elems)


def scale_subspace(f: int, s: Subspace) -> Subspace:
    """The subspace f . S = {f u : u in S}; f must be nonzero."""
    if f == 0:
        raise ValueError("scaling by zero collapses the subspace")
    ctx = s.ctx
    return subspace_from_rows(ctx, (ctx.mul(f, b) for b in s.basis))


def product_space(e: Subspace, w: Subspace) -> Subspace:
    """The product span E . W = <a b : a in E, b in W>."""
    if e.ctx != w.ctx:
        raise ValueError("context mismatch")
    ctx = e.ctx
    return subspace_from_rows(ctx, (ctx.mul(a, b) for a in e.basis for b in w.basis))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Exact intersection via the Zassenhaus block-matrix method."""
    if u.ctx != v.ctx:
        raise ValueError("context mismatch")
    ctx = u.ctx
    m, q = ctx.m, ctx.q
    shift = q ** m
    rows = [b + b * shift for b in u.basis] + list(v.basis)
    reduced, _ = rref_packed(rows, 2 * m, q)
    inter = [row // shift for row in reduced if row % shift == 0]
    return subspace_from_rows(ctx, inter)


def sample_grassmannian(ctx: FieldContext, t: int, rng: random.Random) -> Subspace:
    """Uniform t-dimensional subspace of F_{q^m}.

    Samples a uniform t x m matrix and rejects until it has rank t; every
    t-subspace has exactly |GL_t(F_q)| full-rank representatives, so the row
    space is uniform on the Grassmannian.
    """
    if not 0 <= t <= ctx.m:
        raise ValueError(f"t must be in [0, {ctx.m}], got {t}")
    if t == 0:
        return zero_subspace(ctx)
    while True:
        rows = [rng.randrange(ctx.order) for _ in range(t)]
        basis, pivots = rref_packed(rows, ctx.m, ctx.q)
        if len(basis) == t:
            return Subspace(ctx, tuple(basis), tuple(pivots))


def gaussian_binomial(m: int, t: int, q: int) -> int:
    """Number of t-dimensional subspaces of F_q^m, exactly."""
    if t < 0 or m < 0:
        raise ValueError("m and t must be nonnegative")
    if t > m:
        return 0
    num = 1
    den = 1
    for i in range(t):
        num *= q ** m - q ** i
        den *= q ** t - q ** i
    return num // den
