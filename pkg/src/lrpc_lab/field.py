"""Arithmetic in F_q (q prime) and in the extension field F_{q^m}.

Elements of F_{q^m} are polynomial-basis coefficient vectors over F_q,
packed into a single Python integer: the element with coefficients
``(c_0, c_1, ..., c_{m-1})`` (low degree first) is stored as
``sum(c_j * q**j)``.  For q = 2 this is one bit per coefficient, so field
addition is XOR and all row operations downstream stay branch-free.  The
packing is a pure representation choice; :meth:`FieldContext.to_coeffs` and
:meth:`FieldContext.from_coeffs` convert to and from explicit vectors.

All arithmetic goes through a :class:`FieldContext`, which fixes q, the
extension degree m and a monic irreducible modulus polynomial.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .rng import SplitMix64

MAX_Q = 251
MAX_M = 128


def is_prime(n: int) -> bool:
    """Trial-division primality check (q is capped at 251)."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over F_q.  Polynomials are coefficient lists, low degree
# first, with no trailing zeros (the zero polynomial is the empty list).
# ---------------------------------------------------------------------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _poly_mod(a: Sequence[int], f: Sequence[int], q: int) -> list[int]:
    r = list(a)
    df = len(f) - 1
    lead_inv = pow(f[-1], -1, q)
    while len(r) - 1 >= df and r:
        factor = (r[-1] * lead_inv) % q
        shift = len(r) - 1 - df
        for i in range(df + 1):
            r[shift + i] = (r[shift + i] - factor * f[i]) % q
        r.pop()
        _trim(r)
    return r


def _poly_gcd(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b, q)
    if a:
        inv = pow(a[-1], -1, q)
        a = [(c * inv) % q for c in a]
    return a


def _poly_powmod(base: Sequence[int], exp: int, f: Sequence[int], q: int) -> list[int]:
    result = [1]
    b = _poly_mod(base, f, q)
    while exp:
        if exp & 1:
            result = _poly_mod(_poly_mul(result, b, q), f, q)
        b = _poly_mod(_poly_mul(b, b, q), f, q)
        exp >>= 1
    return result


def is_irreducible(poly: Sequence[int], q: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_q.

    ``poly`` is a coefficient list, low degree first.  Raises on non-monic
    or constant input.
    """
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    p = _trim([c % q for c in poly])
    n = len(p) - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    if p[-1] != 1:
        raise ValueError("polynomial must be monic")
    if n == 1:
        return True
    x = [0, 1]
    # x^(q^n) == x (mod p)
    if _poly_powmod(x, q ** n, p, q) != x:
        return False
    # gcd(x^(q^(n/r)) - x, p) == 1 for every prime divisor r of n
    for r in _prime_divisors(n):
        h = _poly_powmod(x, q ** (n // r), p, q)
        diff = _trim([(hc - xc) % q for hc, xc in _zip_pad(h, x, q)])
        if len(_poly_gcd(diff, p, q)) - 1 != 0:
            return False
    return True


def _zip_pad(a: Sequence[int], b: Sequence[int], q: int):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

class FieldContext:
    """The field F_{q^m} = F_q[x] / (modulus).

    Immutable after construction; safe to share between workers.  Elements
    are packed integers in ``[0, q**m)`` (see module docstring).
    """

    def __init__(self, q: int, m: int, modulus: Sequence[int]):
        if not is_prime(q) or q > MAX_Q:
            raise ValueError(f"q must be a prime <= {MAX_Q}, got {q}")
        if not 1 <= m <= MAX_M:
            raise ValueError(f"m must be in [1, {MAX_M}], got {m}")
        mod = [c % q for c in modulus]
        if len(_trim(list(mod))) - 1 != m or mod[m] != 1:
            raise ValueError(f"modulus must be monic of degree exactly {m}")
        if not is_irreducible(mod, q):
            raise ValueError("modulus is reducible over F_q")
        self.q = q
        self.m = m
        self.modulus = tuple(mod[: m + 1])
        self.order = q ** m
        self._inv_cache: dict[int, int] = {}
        if q == 2:
            self._mod_int = sum(c << i for i, c in enumerate(self.modulus))
            self.add = self._add2
            self.sub = self._add2
            self.neg = self._neg2
            self.mul = self._mul2
        else:
            self._qpow = [q ** i for i in range(m + 1)]
            self.add = self._add_generic
            self.sub = self._sub_generic
            self.neg = self._neg_generic
            self.mul = self._mul_generic

    # -- representation ----------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        """Unpack an element into its length-m coefficient vector."""
        if self.q == 2:
            return [(a >> i) & 1 for i in range(self.m)]
        out = []
        for _ in range(self.m):
            a, c = divmod(a, self.q)
            out.append(c)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        """Pack a coefficient vector (low degree first) into an element."""
        if len(coeffs) > self.m:
            raise ValueError("coefficient vector longer than m")
        a = 0
        for c in reversed(coeffs):
            a = a * self.q + (c % self.q)
        return a

    # -- arithmetic, q = 2 -------------------------------------------------

    def _add2(self, a: int, b: int) -> int:
        return a ^ b

    def _neg2(self, a: int) -> int:
        return a

    def _mul2(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
        m, mod = self.m, self._mod_int
        for d in range(r.bit_length() - 1, m - 1, -1):
            if (r >> d) & 1:
                r ^= mod << (d - m)
        return r

    # -- arithmetic, generic q ----------------------------------------------

    def _add_generic(self, a: int, b: int) -> int:
        q = self.q
        out = 0
        for p in self._qpow[: self.m]:
            da = (a // p) % q
            db = (b // p) % q
            out += ((da + db) % q) * p
        return out

    def _sub_generic(self, a: int, b: int) -> int:
        q = self.q
        out = 0
        for p in self._qpow[: self.m]:
            da = (a // p) % q
            db = (b // p) % q
            out += ((da - db) % q) * p
        return out

    def _neg_generic(self, a: int) -> int:
        return self._sub_generic(0, a)

    def _mul_generic(self, a: int, b: int) -> int:
        pa = _trim(self.to_coeffs(a))
        pb = _trim(self.to_coeffs(b))
        prod = _poly_mod(_poly_mul(pa, pb, self.q), list(self.modulus), self.q)
        return self.from_coeffs(prod + [0] * (self.m - len(prod)))

    # -- shared --------------------------------------------------------------

    def inv(self, a: int) -> int:
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_{q^m}")
        q = self.q
        cached = self._inv_cache.get(a)
        if cached is not None:
            return cached
        if q == 2:
            # Fermat: a^(2^m - 2), square-and-multiply on packed words
            out, base, e = 1, a, self.order - 2
            while e:
                if e & 1:
                    out = self._mul2(out, base)
                base = self._mul2(base, base)
                e >>= 1
            self._cache_inv(a, out)
            return out
        r0, r1 = list(self.modulus), _trim(self.to_coeffs(a))
        s0, s1 = [], [1]
        while r1:
            # r0 = qt * r1 + r2
            qt, r2 = _poly_divmod(r0, r1, q)
            r0, r1 = r1, r2
            s0, s1 = s1, _trim([(c0 - c1) % q for c0, c1 in _zip_pad(s0, _poly_mul(qt, s1, q), q)])
        lead_inv = pow(r0[-1], -1, q)
        inv_poly = [(c * lead_inv) % q for c in s0]
        inv_poly = _poly_mod(inv_poly, list(self.modulus), q)
        out = self.from_coeffs(inv_poly + [0] * (self.m - len(inv_poly)))
        self._cache_inv(a, out)
        return out

    _INV_CACHE_CAP = 1 << 12

    def _cache_inv(self, a: int, out: int) -> None:
        if len(self._inv_cache) >= self._INV_CACHE_CAP:
            self._inv_cache.clear()
        self._inv_cache[a] = out
        self._inv_cache[out] = a

    def scalar_mul(self, c: int, a: int) -> int:
        """Multiply an element by a base-field scalar c in F_q."""
        c %= self.q
        if self.q == 2:
            return a if c else 0
        q = self.q
        out = 0
        for p in self._qpow[: self.m]:
            out += (((a // p) % q) * c % q) * p
        return out

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = self.from_coeffs([1])
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    @property
    def one(self) -> int:
        return 1

    @property
    def zero(self) -> int:
        return 0

    def sample_element(self, rng: random.Random) -> int:
        """Uniform element of F_{q^m}."""
        return rng.randrange(self.order)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"q": self.q, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldContext":
        return cls(obj["q"], obj["m"], obj["modulus"])

    def __reduce__(self):
        # bound-method dispatch attributes do not pickle; rebuild from the arguments
        return (FieldContext, (self.q, self.m, list(self.modulus)))

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and (self.q, self.m, self.modulus) == (other.q, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.q, self.m, self.modulus))

    def __repr__(self):
        return f"FieldContext(q={self.q}, m={self.m}, modulus={list(self.modulus)})"


def _poly_divmod(a: Sequence[int], b: Sequence[int], q: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    lead_inv = pow(b[-1], -1, q)
    quot = [0] * max(len(r) - db, 0)
    while r and len(r) - 1 >= db:
        c = (r[-1] * lead_inv) % q
        shift = len(r) - 1 - db
        quot[shift] = c
        for i in range(db + 1):
            r[shift + i] = (r[shift + i] - c * b[i]) % q
        _trim(r)
    return _trim(quot), r


def make_field(q: int, m: int, modulus: Optional[Sequence[int]] = None, seed: int = 0) -> FieldContext:
    """Build F_{q^m}, searching deterministically for an irreducible modulus.

    If ``modulus`` is given it must be monic of degree m and irreducible.
    Otherwise monic candidates are drawn from a SplitMix64 stream seeded by
    ``seed`` until the Rabin test succeeds; the same (q, m, seed) always
    yields the same field.
    """
    if modulus is not None:
        return FieldContext(q, m, modulus)
    if not is_prime(q) or q > MAX_Q:
        raise ValueError(f"q must be a prime <= {MAX_Q}, got {q}")
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m must be in [1, {MAX_M}], got {m}")
    stream = SplitMix64(seed)
    while True:
        cand = [stream.below(q) for _ in range(m)] + [1]
        if cand[0] == 0:
            continue  # x divides it
        if is_irreducible(cand, q):
            return FieldContext(q, m, cand)
