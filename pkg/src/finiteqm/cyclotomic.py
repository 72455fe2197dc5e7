"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) reduced
modulo the m-th cyclotomic polynomial Phi_m, as an integer coefficient
vector with a single positive denominator.  The stored form is canonical
(content coprime to the denominator), so equality, hashing and the JSON
serialization are exact and byte-stable.

Square roots of integers are embedded through quadratic Gauss sums, which
is what makes Fourier matrices with 1/sqrt(N) entries representable.
conductor_for(N) picks a conductor large enough for every construction in
dimension N: it is deliberately not minimal.
"""

from __future__ import annotations

import json
import math
import threading
from fractions import Fraction

import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "Cyclotomic",
    "FieldMismatchError",
    "SqrtConstructionError",
    "canonical_dumps",
    "conductor_for",
    "cyclotomic_polynomial",
    "euler_phi",
    "sqrt_embed",
    "sqrt_rational",
    "zeta",
]


class FieldMismatchError(ValueError):
    """Binary operation on elements of different cyclotomic fields."""


class SqrtConstructionError(ValueError):
    """The target field does not contain the requested square root."""


def canonical_dumps(obj) -> str:
    """JSON with sorted keys and fixed separators; byte-stable across runs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError(f"euler_phi needs m >= 1, got {m}")
    result = m
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (low degree first)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        out[k - dd] = q
        for j in range(dd + 1):
            num[k - dd + j] -= q * den[j]
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return out


_PHI_CACHE: dict[int, tuple[int, ...]] = {}
_PHI_LOCK = threading.Lock()


def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, low degree first, monic.

    Computed by exact division of x^m - 1 by the Phi_d of the proper
    divisors; results are cached per conductor.
    """
    if m < 1:
        raise ValueError(f"conductor must be >= 1, got {m}")
    with _PHI_LOCK:
        cached = _PHI_CACHE.get(m)
    if cached is not None:
        return cached
    if m == 1:
        poly: tuple[int, ...] = (-1, 1)
    else:
        num = [0] * (m + 1)
        num[0] = -1
        num[m] = 1
        rest = list(num)
        for d in range(1, m):
            if m % d == 0:
                rest = _poly_div_exact(rest, list(cyclotomic_polynomial(d)))
        poly = tuple(rest)
    with _PHI_LOCK:
        _PHI_CACHE[m] = poly
    return poly


class _Context:
    """Per-conductor reduction tables, built once and shared."""

    __slots__ = (
        "m",
        "degree",
        "phi_poly",
        "rows",
        "conj_rows",
        "_lock",
        "_mult_np",
        "_conj_np",
        "_red_np",
        "_embed",
    )

    def __init__(self, m: int):
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        d = len(self.phi_poly) - 1
        self.degree = d
        # rows[k] = coefficients of z^k mod Phi_m, for 0 <= k < m
        rows: list[tuple[int, ...]] = []
        cur = [0] * d
        if d > 0:
            cur[0] = 1
        rows.append(tuple(cur))
        tail = self.phi_poly[:d]
        for _ in range(1, m):
            top = cur[d - 1]
            nxt = [0] * d
            for j in range(1, d):
                nxt[j] = cur[j - 1] - top * tail[j]
            nxt[0] = -top * tail[0]
            cur = nxt
            rows.append(tuple(cur))
        self.rows = tuple(rows)
        self.conj_rows = tuple(rows[(m - a) % m] for a in range(d))
        self._lock = threading.Lock()
        self._mult_np = None
        self._conj_np = None
        self._red_np = None
        self._embed = None

    @property
    def mult_np(self) -> np.ndarray:
        """mult_np[a, b, :] = power-basis coefficients of z^a * z^b."""
        if self._mult_np is None:
            with self._lock:
                if self._mult_np is None:
                    d = self.degree
                    t = np.zeros((d, d, d), dtype=np.int64)
                    for a in range(d):
                        for b in range(d):
                            t[a, b, :] = self.rows[a + b]
                    t.setflags(write=False)
                    self._mult_np = t
        return self._mult_np

    @property
    def conj_np(self) -> np.ndarray:
        if self._conj_np is None:
            with self._lock:
                if self._conj_np is None:
                    t = np.array(self.conj_rows, dtype=np.int64)
                    t.setflags(write=False)
                    self._conj_np = t
        return self._conj_np

    @property
    def embed(self) -> np.ndarray:
        """Complex embedding of the power basis, z -> exp(2*pi*i/m)."""
        if self._embed is None:
            with self._lock:
                if self._embed is None:
                    d = self.degree
                    self._embed = np.exp(2j * math.pi * np.arange(d) / self.m)
        return self._embed


_CONTEXTS: dict[int, _Context] = {}
_CONTEXTS_LOCK = threading.Lock()


def _context(m: int) -> _Context:
    ctx = _CONTEXTS.get(m)
    if ctx is None:
        with _CONTEXTS_LOCK:
            ctx = _CONTEXTS.get(m)
            if ctx is None:
                ctx = _Context(m)
                _CONTEXTS[m] = ctx
    return ctx


def _normalized(m: int, nums: list[int], den: int) -> "Cyclotomic":
    if den == 0:
        raise ZeroDivisionError("cyclotomic denominator is zero")
    if den < 0:
        den = -den
        nums = [-v for v in nums]
    g = den
    for v in nums:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                break
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    if den > 1 and not any(nums):
        den = 1
    z = Cyclotomic.__new__(Cyclotomic)
    z.m = m
    z.num = tuple(nums)
    z.den = den
    z._hash = None
    return z


class Cyclotomic:
    """An exact element of Q(zeta_m) in canonical power-basis form."""

    __slots__ = ("m", "num", "den", "_hash")

    def __init__(self, m: int, num, den: int = 1):
        ctx = _context(m)
        nums = [int(v) for v in num]
        if len(nums) != ctx.degree:
            raise ValueError(
                f"conductor {m} needs {ctx.degree} coefficients, got {len(nums)}"
            )
        z = _normalized(m, nums, int(den))
        self.m = z.m
        self.num = z.num
        self.den = z.den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def make(cls, m: int, coeffs) -> "Cyclotomic":
        """Reduce sum(coeffs[k] * z^k) mod Phi_m; coeffs of any length."""
        ctx = _context(m)
        den = 1
        for c in coeffs:
            c = Fraction(c)
            den = den * c.denominator // math.gcd(den, c.denominator)
        folded = [0] * m
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            folded[k % m] += c.numerator * (den // c.denominator)
        d = ctx.degree
        out = list(folded[:d])
        rows = ctx.rows
        for k in range(d, m):
            c = folded[k]
            if c:
                row = rows[k]
                for t in range(d):
                    if row[t]:
                        out[t] += c * row[t]
        return _normalized(m, out, den)

    @classmethod
    def zero(cls, m: int) -> "Cyclotomic":
        ctx = _context(m)
        return _normalized(m, [0] * ctx.degree, 1)

    @classmethod
    def one(cls, m: int) -> "Cyclotomic":
        return cls.from_rational(m, 1)

    @classmethod
    def from_rational(cls, m: int, q) -> "Cyclotomic":
        q = Fraction(q)
        ctx = _context(m)
        nums = [0] * ctx.degree
        nums[0] = q.numerator
        return _normalized(m, nums, q.denominator)

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return self.den == 1 and not any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def rational(self) -> Fraction | None:
        """The value as a Fraction when it is rational, else None."""
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Canonical power-basis coefficients as reduced fractions."""
        return tuple(Fraction(v, self.den) for v in self.num)

    def to_complex(self) -> complex:
        emb = _context(self.m).embed
        acc = 0j
        for v, e in zip(self.num, emb):
            if v:
                acc += v * e
        return acc / self.den

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m != self.m:
                raise FieldMismatchError(
                    f"conductor mismatch: {self.m} vs {other.m}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.m, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        if d1 == d2:
            nums = [a + b for a, b in zip(self.num, o.num)]
            return _normalized(self.m, nums, d1)
        g = math.gcd(d1, d2)
        s1 = d2 // g
        s2 = d1 // g
        nums = [a * s1 + b * s2 for a, b in zip(self.num, o.num)]
        return _normalized(self.m, nums, d1 // g * d2)

    __radd__ = __add__

    def __neg__(self):
        return _normalized(self.m, [-v for v in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            nums = [v * q.numerator for v in self.num]
            return _normalized(self.m, nums, self.den * q.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = _context(self.m)
        d = ctx.degree
        a, b = self.num, o.num
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:d])
        rows = ctx.rows
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = rows[k]
                for t in range(d):
                    if row[t]:
                        out[t] += c * row[t]
        return _normalized(self.m, out, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        """Multiplicative inverse via extended gcd with Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero cyclotomic")
        ctx = _context(self.m)
        phi = [Fraction(c) for c in ctx.phi_poly]
        a = [Fraction(v) for v in self.num]
        # extended euclid over Q[x]: u*a + v*phi = gcd (a unit, Phi_m irreducible)
        r0, r1 = phi, list(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                break
            q, rem = _poly_divmod_q(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub_q(s0, _poly_mul_q(q, s1))
        c = r1[0]  # nonzero constant
        u = [v / c for v in s1]
        result = Cyclotomic.make(self.m, u)
        return result * self.den

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * Fraction(q.denominator, q.numerator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = Cyclotomic.one(self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^(m-1); exact and involutive."""
        ctx = _context(self.m)
        d = ctx.degree
        out = [0] * d
        for a_idx, c in enumerate(self.num):
            if c:
                row = ctx.conj_rows[a_idx]
                for t in range(d):
                    if row[t]:
                        out[t] += c * row[t]
        return _normalized(self.m, out, self.den)

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = self.rational()
            return r is not None and r == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.m == other.m and self.den == other.den and self.num == other.num

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.m, self.num, self.den))
            self._hash = h
        return h

    def __repr__(self):
        terms = []
        for k, v in enumerate(self.num):
            if not v:
                continue
            c = Fraction(v, self.den)
            terms.append(f"{c}" if k == 0 else f"{c}*z{k}" if k > 1 else f"{c}*z")
        body = " + ".join(terms) if terms else "0"
        return f"Cyc({self.m}: {body})"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        """Canonical form {"m": conductor, "c": ["num/den", ...]}."""
        return {
            "m": self.m,
            "c": [f"{f.numerator}/{f.denominator}" for f in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Cyclotomic":
        m = int(obj["m"])
        coeffs = [Fraction(s) for s in obj["c"]]
        ctx = _context(m)
        if len(coeffs) != ctx.degree:
            raise ValueError("serialized coefficient count does not match phi(m)")
        return cls.make(m, coeffs)

    def key(self) -> str:
        return canonical_dumps(self.to_json())


# -- rational polynomial helpers for inversion ---------------------------------


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    lead = b[-1]
    while len(a) - 1 >= db and any(a):
        k = len(a) - 1
        c = a[k] / lead
        q[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
        while a and a[-1] == 0:
            a.pop()
    if not a:
        a = [Fraction(0)]
    return q, a


def _poly_mul_q(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub_q(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return out


# -- conductors and embedded square roots --------------------------------------


def conductor_for(n: int) -> int:
    """Conductor for all dimension-n constructions: lcm(24, 2n).

    Q(zeta_m) then contains zeta_2n (hence the diagonal phase generators),
    i, sqrt(2), sqrt(3), and sqrt(n); minimality is not promised.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.lcm(24, 2 * n)


def zeta(m: int, k: int = 1) -> Cyclotomic:
    """The root of unity zeta_m^k."""
    ctx = _context(m)
    return _normalized(m, list(ctx.rows[k % m]), 1)


def _legendre(t: int, p: int) -> int:
    r = pow(t, (p - 1) // 2, p)
    return r - p if r == p - 1 else r


def _squarefree_split(n: int) -> tuple[int, list[int]]:
    """n = square * product(primes); returns (sqrt of square part, primes)."""
    root = 1
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            root *= p ** (e // 2)
            if e % 2:
                primes.append(p)
        p += 1
    if n > 1:
        primes.append(n)
    return root, primes


def sqrt_embed(n: int, m: int) -> Cyclotomic:
    """The positive square root of the integer n inside Q(zeta_m).

    Built from quadratic Gauss sums: for an odd prime p the sum
    g = sum_t legendre(t, p) * zeta_p^t squares to +p or -p, and sqrt(2)
    is zeta_8 + zeta_8^7.  A one-time floating evaluation fixes the sign;
    everything else is exact.
    """
    if n <= 0:
        raise ValueError(f"sqrt_embed needs a positive integer, got {n}")
    root, primes = _squarefree_split(n)
    result = Cyclotomic.from_rational(m, root)
    for p in primes:
        if p == 2:
            if m % 8:
                raise SqrtConstructionError(f"sqrt(2) needs 8 | m, got m={m}")
            e = m // 8
            result = result * (zeta(m, e) + zeta(m, 7 * e))
            continue
        if m % p:
            raise SqrtConstructionError(f"sqrt({p}) needs {p} | m, got m={m}")
        e = m // p
        gauss = Cyclotomic.zero(m)
        for t in range(1, p):
            gauss = gauss + _legendre(t, p) * zeta(m, e * t)
        if p % 4 == 3:
            if m % 4:
                raise SqrtConstructionError(f"sqrt({p}) needs 4 | m, got m={m}")
            gauss = gauss * (-zeta(m, m // 4))
        result = result * gauss
    approx = result.to_complex()
    if abs(approx.imag) > 1e-9 or abs(approx.real**2 - n) > 1e-6 * max(n, 1):
        raise SqrtConstructionError(f"gauss-sum construction failed for n={n}, m={m}")
    if approx.real < 0:
        result = -result
    if result * result != Cyclotomic.from_rational(m, n):
        raise SqrtConstructionError(f"sqrt({n}) does not square back exactly in m={m}")
    return result


def sqrt_rational(q, m: int) -> Cyclotomic:
    """Positive square root of a positive rational inside Q(zeta_m)."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"sqrt_rational needs a positive rational, got {q}")
    return sqrt_embed(q.numerator * q.denominator, m) / q.denominator
