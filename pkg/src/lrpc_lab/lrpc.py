"""LRPC instances and the two-step decoder.

An instance is built from a w-dimensional support W, a parity-check matrix H
homogeneous over W (entry h_{r,d} = sum_i nu[r][d][i] f_i with nu uniform
over F_q), an error support E of dimension t and an error vector e with
coordinates in E.  The decoder sees only (f, H, nu, s, t):

* Step I recovers the error support as the intersection of the spaces
  f_i^{-1} . Supp(s) and fails unless its dimension is exactly t.
* Step II decomposes the syndrome on the product basis {f_i eps_j} and
  solves one F_q linear system N X = Sigma with t right-hand sides, where
  N[(r,i), d] = nu[r][d][i].  The literal system of (n-k)tw equations in tn
  unknowns is block diagonal in j with every block equal to N, so solving
  N once with t right-hand sides yields the identical solution set.

Every failure mode is data (a :class:`FailureReason`), never an exception,
and a Success outcome is re-verified against the syndrome before returning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .field import FieldContext
from .linalg import (
    SolveStatus,
    Subspace,
    intersect,
    rank_packed,
    sample_grassmannian,
    scale_subspace,
    solve_packed,
    subspace_from_rows,
    support,
)

ERROR_MODES = ("exact_rank_t", "uniform_in_En")


@dataclass(frozen=True)
class LrpcParams:
    """Code and error parameters for one experiment."""

    ctx: FieldContext
    n: int
    k: int
    w: int
    t: int


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]          # decodability constraints; block sampling
    bound_preconditions: tuple[str, ...]  # extra assumptions used by the bounds

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_params(p: LrpcParams) -> ValidationReport:
    """Check the decoder constraints and the bound preconditions by name."""
    v = []
    m, n, k, w, t = p.ctx.m, p.n, p.k, p.w, p.t
    if not 0 < k < n:
        v.append(f"0 < k < n fails ({k} vs {n})")
    if t < 1:
        v.append(f"t >= 1 fails (t={t})")
    if w < 1:
        v.append(f"w >= 1 fails (w={w})")
    if t * w > n - k:
        v.append(f"tw <= n-k fails ({t * w} > {n - k})")
    if n > (n - k) * w:
        v.append(f"n <= (n-k)w fails ({n} > {(n - k) * w})")
    if t * w > m:
        v.append(f"tw <= m fails ({t * w} > {m})")
    pre = []
    if (2 * w - 1) * t >= m:
        pre.append(f"(2w-1)t < m fails ({(2 * w - 1) * t} >= {m})")
    if 2 * (w - 1) * t >= m:
        pre.append(f"2(w-1)t < m fails ({2 * (w - 1) * t} >= {m})")
    return ValidationReport(tuple(v), tuple(pre))


class FailureReason(Enum):
    SUPPORT_DIM_MISMATCH = "support_dim_mismatch"
    PRODUCT_BASIS_DEFICIENT = "product_basis_deficient"
    SYNDROME_DECOMPOSITION_FAILED = "syndrome_decomposition_failed"
    SYSTEM_RANK_DEFICIENT = "system_rank_deficient"
    SYSTEM_INCONSISTENT = "system_inconsistent"
    VERIFICATION_FAILED = "verification_failed"


@dataclass(frozen=True)
class DecodeOutcome:
    error: Optional[tuple[int, ...]]
    reason: Optional[FailureReason]

    @property
    def success(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class DecoderInput:
    """What the decoder is allowed to see: no E, no e."""

    ctx: FieldContext
    f: tuple[int, ...]                 # ordered basis of W
    h: tuple[tuple[int, ...], ...]     # (n-k) x n matrix of field elements
    nu: tuple[tuple[int, ...], ...]    # nu[r][i] = coordinates over d, packed base q
    s: tuple[int, ...]                 # syndrome, length n-k
    t: int
    n: int


@dataclass(frozen=True)
class LrpcInstance:
    """A fully sampled experiment, ground truth included."""

    params: LrpcParams
    w_space: Subspace
    f: tuple[int, ...]
    h: tuple[tuple[int, ...], ...]
    nu: tuple[tuple[int, ...], ...]
    e_space: Subspace
    eps: tuple[int, ...]
    x: tuple[int, ...]                 # x[j] = error coordinates on eps_j, packed over d
    e: tuple[int, ...]
    s: tuple[int, ...]

    def decoder_input(self) -> DecoderInput:
        return DecoderInput(
            self.params.ctx, self.f, self.h, self.nu, self.s, self.params.t, self.params.n
        )

    def to_json(self) -> dict:
        ctx = self.params.ctx
        p = self.params
        return {
            "field": ctx.to_json(),
            "params": {"n": p.n, "k": p.k, "w": p.w, "t": p.t},
            "W": self.w_space.to_json(),
            "nu": [
                [[_digit(self.nu[r][i], d, ctx.q, p.n) for i in range(p.w)] for d in range(p.n)]
                for r in range(p.n - p.k)
            ],
            "E": self.e_space.to_json(),
            "e": [ctx.to_coeffs(ed) for ed in self.e],
            "s": [ctx.to_coeffs(sr) for sr in self.s],
        }


def _digit(packed: int, pos: int, q: int, _n: int) -> int:
    return (packed // q ** pos) % q


def sample_instance(
    p: LrpcParams,
    rng: random.Random,
    error_mode: str = "exact_rank_t",
    randomize_basis: bool = False,
) -> LrpcInstance:
    """Sample W, H, E, e and compute the syndrome.

    ``error_mode``:
      * ``uniform_in_En`` -- error coordinates i.i.d. uniform in E (the
        support of e may be a proper subspace of E);
      * ``exact_rank_t`` -- the t x n coordinate matrix is redrawn until it
        has rank t, so Supp(e) = E always.

    The ordered basis f is the RREF basis of W; with ``randomize_basis`` it
    is replaced by a random change of basis (for checking that failure rates
    do not depend on the basis choice).
    """
    if error_mode not in ERROR_MODES:
        raise ValueError(f"unknown error_mode {error_mode!r}")
    rep = validate_params(p)
    if not rep.ok:
        raise ValueError("invalid parameters: " + "; ".join(rep.violations))
    ctx, n, k, w, t = p.ctx, p.n, p.k, p.w, p.t
    q = ctx.q

    w_space = sample_grassmannian(ctx, w, rng)
    f = list(w_space.basis)
    if randomize_basis:
        f = _random_basis(ctx, w_space, rng)
    f = tuple(f)

    # nu[r][i]: packed base-q vector over d of the F_q coordinates of row r on f_i
    nu = []
    h = []
    for _r in range(n - k):
        if q == 2:
            row_nu = [rng.getrandbits(n) for _ in range(w)]
            row_h = []
            for d in range(n):
                hv = 0
                for i in range(w):
                    if (row_nu[i] >> d) & 1:
                        hv ^= f[i]
                row_h.append(hv)
        else:
            row_nu = [rng.randrange(q ** n) for _ in range(w)]
            row_h = []
            for d in range(n):
                hv = 0
                for i in range(w):
                    c = _digit(row_nu[i], d, q, n)
                    if c:
                        hv = ctx.add(hv, ctx.scalar_mul(c, f[i]))
                row_h.append(hv)
        nu.append(tuple(row_nu))
        h.append(tuple(row_h))

    e_space = sample_grassmannian(ctx, t, rng)
    eps = e_space.basis
    while True:
        x = [rng.randrange(q ** n) for _ in range(t)]
        if error_mode == "uniform_in_En":
            break
        if rank_packed(x, n, q) == t:
            break
    e = []
    for d in range(n):
        ed = 0
        for j in range(t):
            c = _digit(x[j], d, q, n)
            if c:
                ed = ctx.add(ed, ctx.scalar_mul(c, eps[j]))
        e.append(ed)

    # s_r = sum_d h_{r,d} e_d = sum_{i,j} (sum_d nu^{(r,d)}_i x^{(d)}_j) f_i eps_j:
    # same sum regrouped on the products f_i eps_j, far fewer field products
    s = _bilinear_syndrome(ctx, f, nu, eps, x, n)
    return LrpcInstance(
        p, w_space, f, tuple(h), tuple(nu), e_space, tuple(eps), tuple(x), tuple(e), tuple(s)
    )


def _random_basis(ctx: FieldContext, space: Subspace, rng: random.Random) -> list[int]:
    """A uniformly random ordered basis of the given subspace."""
    w = space.dim
    q = ctx.q
    while True:
        coeffs = [[rng.randrange(q) for _ in range(w)] for _ in range(w)]
        if rank_packed([sum(c * q ** i for i, c in enumerate(row)) for row in coeffs], w, q) == w:
            break
    out = []
    for row in coeffs:
        v = 0
        for c, b in zip(row, space.basis):
            v = ctx.add(v, ctx.scalar_mul(c, b))
        out.append(v)
    return out


def _bilinear_syndrome(
    ctx: FieldContext,
    f: Sequence[int],
    nu: Sequence[Sequence[int]],
    eps: Sequence[int],
    x: Sequence[int],
    n: int,
) -> tuple[int, ...]:
    """Syndrome from the F_q coordinate tensors of H and e."""
    q = ctx.q
    prods = [ctx.mul(fi, ej) for fi in f for ej in eps]
    t = len(eps)
    out = []
    for row_nu in nu:
        acc = 0
        for i, nui in enumerate(row_nu):
            for j, xj in enumerate(x):
                if q == 2:
                    sig = (nui & xj).bit_count() & 1
                    if sig:
                        acc ^= prods[i * t + j]
                else:
                    sig = _dot_mod_q(nui, xj, q, n)
                    if sig:
                        acc = ctx.add(acc, ctx.scalar_mul(sig, prods[i * t + j]))
        out.append(acc)
    return tuple(out)


def _dot_mod_q(a_packed: int, b_packed: int, q: int, n: int) -> int:
    acc = 0
    for _ in range(n):
        a_packed, da = divmod(a_packed, q)
        b_packed, db = divmod(b_packed, q)
        acc += da * db
    return acc % q


def syndrome(ctx: FieldContext, e: Sequence[int], h: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """s = e H^T, computed entry by entry in F_{q^m}."""
    out = []
    for row in h:
        if len(row) != len(e):
            raise ValueError("dimension mismatch between e and H")
        acc = 0
        for hv, ev in zip(row, e):
            if hv and ev:
                acc = ctx.add(acc, ctx.mul(hv, ev))
        out.append(acc)
    return tuple(out)


def recover_support(
    ctx: FieldContext, f: Sequence[int], s: Sequence[int], t: int
) -> Optional[Subspace]:
    """Step I: intersection of the f_i^{-1}-scaled syndrome supports.

    Returns the recovered t-dimensional space, or None when the dimension
    test fails (the decoder's SUPPORT_DIM_MISMATCH case).
    """
    synd_sup = support(ctx, s)
    inter = None
    for fi in f:
        scaled = scale_subspace(ctx.inv(fi), synd_sup)
        inter = scaled if inter is None else intersect(inter, scaled)
        if inter.dim < t:
            return None
    if inter is None or inter.dim != t:
        return None
    return inter


def recover_coordinates(
    inp: DecoderInput, eps: Sequence[int]
) -> tuple[Optional[tuple[int, ...]], Optional[FailureReason]]:
    """Step II: solve for the error coordinates over the recovered basis."""
    e_rec, reason, _, _ = _recover_coordinates_full(inp, eps)
    return e_rec, reason


def _recover_coordinates_full(inp: DecoderInput, eps: Sequence[int]):
    """Step II returning the product basis and coordinate solution as well."""
    ctx, q = inp.ctx, inp.ctx.q
    n, t = inp.n, inp.t
    w = len(inp.f)
    nk = len(inp.s)
    tw = t * w

    # product basis f_i eps_j, indexed by i*t + j
    prods = [ctx.mul(fi, ej) for fi in inp.f for ej in eps]
    if subspace_from_rows(ctx, prods).dim < tw:
        return None, FailureReason.PRODUCT_BASIS_DEFICIENT, None, None

    # decompose every syndrome entry on the product basis: columns of A are
    # the products' coefficient vectors, right-hand sides are the s_r
    a_rows = []
    b_rows = []
    for c in range(ctx.m):
        qp = q ** c
        a_rows.append(sum(((prods[idx] // qp) % q) * q ** idx for idx in range(tw)))
        b_rows.append(sum(((inp.s[r] // qp) % q) * q ** r for r in range(nk)))
    status, sigma_rows = solve_packed(a_rows, tw, b_rows, nk, q)
    if status is not SolveStatus.UNIQUE:
        # rank is tw by the check above, so only inconsistency is possible
        return None, FailureReason.SYNDROME_DECOMPOSITION_FAILED, None, None

    # N[(r,i), d] = nu[r][d][i]; RHS[(r,i), j] = sigma^{(r)}_{i,j}
    n_rows = []
    rhs_rows = []
    for r in range(nk):
        for i in range(w):
            n_rows.append(inp.nu[r][i])
            rhs_rows.append(sum(((sigma_rows[i * t + j] // q ** r) % q) * q ** j for j in range(t)))
    status, x_rows = solve_packed(n_rows, n, rhs_rows, t, q)
    if status is SolveStatus.UNDERDETERMINED:
        return None, FailureReason.SYSTEM_RANK_DEFICIENT, None, None
    if status is SolveStatus.NO_SOLUTION:
        return None, FailureReason.SYSTEM_INCONSISTENT, None, None

    e_rec = []
    for d in range(n):
        ed = 0
        for j in range(t):
            c = (x_rows[d] // q ** j) % q
            if c:
                ed = ctx.add(ed, ctx.scalar_mul(c, eps[j]))
        e_rec.append(ed)
    return tuple(e_rec), None, prods, x_rows


def decode(inp: DecoderInput) -> DecodeOutcome:
    """Full decoder: support recovery, coordinate recovery, verification."""
    ctx = inp.ctx
    rec = recover_support(ctx, inp.f, inp.s, inp.t)
    if rec is None:
        return DecodeOutcome(None, FailureReason.SUPPORT_DIM_MISMATCH)
    e_rec, reason, _, x_rows = _recover_coordinates_full(inp, rec.basis)
    if e_rec is None:
        return DecodeOutcome(None, reason)
    # Success must be semantically trustworthy: re-check the syndrome and the
    # rank of the recovered error before reporting it.
    q, t, n = ctx.q, inp.t, inp.n
    x_cols = [sum(((x_rows[d] // q ** j) % q) * q ** d for d in range(n)) for j in range(t)]
    s_check = _bilinear_syndrome(ctx, inp.f, inp.nu, rec.basis, x_cols, n)
    if s_check != inp.s or support(ctx, e_rec).dim > inp.t:
        return DecodeOutcome(None, FailureReason.VERIFICATION_FAILED)
    return DecodeOutcome(e_rec, None)
