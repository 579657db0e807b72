"""Exact-rational evaluation of every decoding-failure probability bound.

Each evaluator returns a :class:`BoundValue` carrying the raw exact rational,
the value clamped to [0, 1] (the raw formula can exceed 1 and is vacuous
there), log10/log2 renderings computed from the exact rational, and the list
of violated validity assumptions.  Violated assumptions never abort the
evaluation: parameter-grid scans need to see where a formula goes vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


def _log10(x: Fraction) -> float:
    if x <= 0:
        return float("-inf")
    # math.log10 takes arbitrary-size ints, so huge powers of q are safe
    return math.log10(x.numerator) - math.log10(x.denominator)


def _log2(x: Fraction) -> float:
    if x <= 0:
        return float("-inf")
    return math.log2(x.numerator) - math.log2(x.denominator)


@dataclass(frozen=True)
class BoundValue:
    """An exact probability bound with rendering helpers."""

    raw: Fraction
    violated: tuple[str, ...] = field(default_factory=tuple)

    @property
    def exact(self) -> Fraction:
        """Raw value clamped to [0, 1]."""
        return min(max(self.raw, Fraction(0)), Fraction(1))

    @property
    def clamped(self) -> bool:
        return self.raw != self.exact

    @property
    def preconditions_met(self) -> bool:
        return not self.violated

    @property
    def log10(self) -> float:
        return _log10(self.exact)

    @property
    def log2(self) -> float:
        return _log2(self.exact)

    def __float__(self) -> float:
        return float(self.exact)

    def to_json(self) -> dict:
        return {
            "rational": f"{self.raw.numerator}/{self.raw.denominator}",
            "decimal": float(self.exact),
            "log10": self.log10,
            "log2": self.log2,
            "clamped": self.clamped,
            "preconditions_met": self.preconditions_met,
            "violated": list(self.violated),
        }


def qpow(q: int, e: int) -> Fraction:
    """q**e as an exact Fraction, for any sign of e."""
    return Fraction(q) ** e


def span_bound(q: int, n: int, k: int, t: int, w: int) -> BoundValue:
    """T(q,t,w) = 1 - prod_{i=0}^{tw-1} (1 - q^{i-(n-k)}).

    Upper bound on the probability that the syndrome entries fail to span
    the product space; requires tw <= n-k to be meaningful.
    """
    tw = t * w
    violated = () if tw <= n - k else (f"tw <= n-k fails ({tw} > {n - k})",)
    prod = Fraction(1)
    for i in range(tw):
        prod *= 1 - qpow(q, i - (n - k))
    return BoundValue(1 - prod, violated)


def span_bound_simplified(q: int, n: int, k: int, t: int, w: int) -> tuple[BoundValue, BoundValue]:
    """Closed-form envelope of the span bound with its error guarantee.

    Returns (upper, gap): upper = q^{-(n-k)+tw}/(q-1) dominates T(q,t,w),
    and upper - T <= gap = q^{-(n-k)}/(q-1) + (1/(q+1)) * upper^2, both
    valid whenever tw * q^{-(n-k)+tw} <= 1.
    """
    tw = t * w
    cond = tw * qpow(q, -(n - k) + tw) <= 1
    violated = () if cond else (f"tw*q^(-(n-k)+tw) <= 1 fails (q={q}, n-k={n - k}, tw={tw})",)
    upper = qpow(q, -(n - k) + tw) / (q - 1)
    gap = qpow(q, -(n - k)) / (q - 1) + Fraction(1, q + 1) * upper * upper
    return BoundValue(upper, violated), BoundValue(gap, violated)


def lemma_bound(q: int, m: int, t: int, r: int, d: int) -> BoundValue:
    """(q^{tr+1} - (q^d - 1)(q^t - 1)) / (q^{m+1} - q^t).

    Probability that independent rank-t elements admit a vanishing
    combination with coefficients from a set spanned by r independent
    elements and containing a d-dimensional subspace.
    """
    violated = []
    if not 0 < r <= m:
        violated.append(f"0 < r <= m fails (r={r}, m={m})")
    if d > r:
        violated.append(f"d <= r fails ({d} > {r})")
    if t < 1:
        violated.append(f"t >= 1 fails (t={t})")
    num = qpow(q, t * r + 1) - (qpow(q, d) - 1) * (qpow(q, t) - 1)
    den = qpow(q, m + 1) - qpow(q, t)
    return BoundValue(num / den, tuple(violated))


def intersection_bound(q: int, m: int, t: int, w: int) -> BoundValue:
    """(q^{(2w-1)t+1} - (q^w - 1)(q^t - 1)) / (q^{m+1} - q^t).

    Upper bound on the probability that the Step-I intersection strictly
    contains the error support, given the syndrome spans the product space.
    Equals :func:`lemma_bound` with r = 2w-1, d = w.
    """
    violated = () if (2 * w - 1) * t < m else (f"(2w-1)t < m fails ({(2 * w - 1) * t} >= {m})",)
    inner = lemma_bound(q, m, t, 2 * w - 1, w)
    return BoundValue(inner.raw, violated)


def product_dim_bound(q: int, m: int, t: int, w: int) -> BoundValue:
    """q^{tw} / (q^m - q^{t-1}): probability that dim E.W falls short of tw."""
    violated = []
    if t * w >= m:
        violated.append(f"tw < m fails ({t * w} >= {m})")
    if t < 1:
        violated.append(f"t >= 1 fails (t={t})")
    value = qpow(q, t * w) / (qpow(q, m) - qpow(q, t - 1))
    return BoundValue(value, tuple(violated))


def total_bound(
    q: int, m: int, n: int, k: int, t: int, w: int
) -> tuple[BoundValue, BoundValue, BoundValue]:
    """(P_I, P_II, total) with total = min(1, P_I + P_II).

    P_I combines the span and intersection terms, P_II is the product-space
    dimension term; the decoding failure rate is at most P_I + P_II.
    """
    span = span_bound(q, n, k, t, w)
    inter = intersection_bound(q, m, t, w)
    prod = product_dim_bound(q, m, t, w)
    violated = list(span.violated) + list(inter.violated) + list(prod.violated)
    if n > (n - k) * w:
        violated.append(f"n <= (n-k)w fails ({n} > {(n - k) * w})")
    if 2 * (w - 1) * t >= m:
        violated.append(f"2(w-1)t < m fails ({2 * (w - 1) * t} >= {m})")
    violated = tuple(dict.fromkeys(violated))
    p1 = BoundValue(span.raw + inter.raw, violated)
    p2 = BoundValue(prod.raw, violated)
    total = BoundValue(p1.raw + p2.raw, violated)
    return p1, p2, total


def asymptotic_bound(q: int, m: int, n: int, k: int, t: int, w: int) -> BoundValue:
    """q^{-(n-k)+tw}/(q-1) + q^{2tw-m}, the large-n envelope of the total."""
    tw = t * w
    cond = tw * qpow(q, -(n - k) + tw) <= 1
    violated = () if cond else (f"tw*q^(-(n-k)+tw) <= 1 fails (q={q}, n-k={n - k}, tw={tw})",)
    value = qpow(q, -(n - k) + tw) / (q - 1) + qpow(q, 2 * tw - m)
    return BoundValue(value, violated)


def legacy_bounds(q: int, m: int, n: int, k: int, t: int, w: int) -> dict[str, BoundValue]:
    """The earlier published bounds, for side-by-side comparison.

    ``legacy_intersection_a`` is t*q^{(2w-1)t-m} and ``legacy_intersection_b``
    is t*q^{tw(w+1)/2-m}; both stem from the same prior work and are kept
    under separate labels.  ``heuristic_combined`` is the non-rigorous
    estimate q^{-(n-k)+tw-1} + q^{-(w-1)(m-tw-t)}.
    """
    tw = t * w
    out = {
        "legacy_span": BoundValue(qpow(q, -(n - k) + tw)),
        "legacy_intersection_a": BoundValue(t * qpow(q, (2 * w - 1) * t - m)),
        "legacy_intersection_b": BoundValue(t * qpow(q, tw * (w + 1) // 2 - m)),
        "legacy_product_dim": BoundValue(t * qpow(q, tw - m)),
    }
    heur_violated = ()
    if w == 1:
        heur_violated = ("second term degenerate for w = 1 (exponent 0)",)
    out["heuristic_combined"] = BoundValue(
        qpow(q, -(n - k) + tw - 1) + qpow(q, -(w - 1) * (m - tw - t)), heur_violated
    )
    return out


def all_bounds(q: int, m: int, n: int, k: int, t: int, w: int) -> dict[str, BoundValue]:
    """Every bound, keyed by name (what the ``bounds`` CLI renders)."""
    upper, gap = span_bound_simplified(q, n, k, t, w)
    p1, p2, total = total_bound(q, m, n, k, t, w)
    out = {
        "span": span_bound(q, n, k, t, w),
        "span_simplified_upper": upper,
        "span_simplified_gap": gap,
        "intersection": intersection_bound(q, m, t, w),
        "product_dim": product_dim_bound(q, m, t, w),
        "p_step1": p1,
        "p_step2": p2,
        "total": total,
        "asymptotic": asymptotic_bound(q, m, n, k, t, w),
    }
    out.update(legacy_bounds(q, m, n, k, t, w))
    return out
