"""Finite fields F_{p^l} with subfield traces.

A field is a prime p, a degree l, and the lexicographically smallest monic
irreducible modulus of degree l over F_p (most significant coefficient
first), so every build is reproducible.  Elements are coefficient vectors
mod p, indexed as base-p integers with the highest-degree coefficient most
significant; that ordering fixes the row and column labels of the shift
and phase matrices built on top of these fields.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["GaloisField", "GFElement", "gf_build", "gf_trace"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# polynomials over F_p: tuples of residues, low degree first, no trailing zeros


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mulmod(a, b, modulus, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_rem(out, modulus, p)


def _poly_rem(a, modulus, p):
    a = list(a)
    dm = len(modulus) - 1
    inv_lead = pow(modulus[-1], p - 2, p)
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            q = c * inv_lead % p
            for j in range(dm + 1):
                a[k - dm + j] = (a[k - dm + j] - q * modulus[j]) % p
    return _poly_trim(a[:dm])


def _poly_is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for idx in range(p**d):
            div = _digits(idx, p, d) + (1,)
            if len(_poly_rem(poly, div, p)) == 0:
                return False
    return True


def _digits(idx: int, p: int, length: int) -> tuple[int, ...]:
    """Base-p digits of idx, least significant first."""
    out = []
    for _ in range(length):
        out.append(idx % p)
        idx //= p
    return tuple(out)


@dataclass(frozen=True)
class GaloisField:
    """F_{p^l} with a fixed monic irreducible modulus (low degree first)."""

    p: int
    ell: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.ell

    def element(self, coeffs) -> "GFElement":
        c = [v % self.p for v in coeffs]
        if len(c) > self.ell:
            raise ValueError(f"degree must be < {self.ell}")
        c += [0] * (self.ell - len(c))
        return GFElement(self, tuple(c))

    def from_index(self, idx: int) -> "GFElement":
        """Element whose coefficient vector is the base-p expansion of idx."""
        if not 0 <= idx < self.order:
            raise ValueError(f"index out of range: {idx}")
        return GFElement(self, _digits(idx, self.p, self.ell))

    def elements(self) -> list["GFElement"]:
        """All q elements in index order."""
        return [self.from_index(i) for i in range(self.order)]

    def zero(self) -> "GFElement":
        return self.from_index(0)

    def one(self) -> "GFElement":
        return self.from_index(1)

    def to_json(self) -> dict:
        return {"p": self.p, "l": self.ell, "modulus": list(self.modulus)}


class GFElement:
    """Element of a GaloisField as a reduced coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GaloisField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def index(self) -> int:
        """Coefficient vector read as a base-p integer, high degree most significant."""
        idx = 0
        for c in reversed(self.coeffs):
            idx = idx * self.field.p + c
        return idx

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "GFElement"):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other: "GFElement") -> "GFElement":
        self._check(other)
        p = self.field.p
        return GFElement(
            self.field,
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "GFElement":
        p = self.field.p
        return GFElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other: "GFElement") -> "GFElement":
        return self + (-other)

    def __mul__(self, other: "GFElement") -> "GFElement":
        self._check(other)
        f = self.field
        prod = _poly_mulmod(
            _poly_trim(list(self.coeffs)), _poly_trim(list(other.coeffs)), f.modulus, f.p
        )
        return f.element(list(prod))

    def __pow__(self, k: int) -> "GFElement":
        if k < 0:
            raise ValueError("negative powers not supported")
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            if k > 1:
                base = base * base
            k >>= 1
        return result

    def frobenius(self, times: int = 1) -> "GFElement":
        return self ** (self.field.p**times)

    def __eq__(self, other):
        return (
            isinstance(other, GFElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.ell, self.coeffs))

    def __repr__(self):
        return f"GF({self.field.p}^{self.field.ell})[{self.index}]"


def gf_build(p: int, ell: int) -> GaloisField:
    """F_{p^l} with the lex-smallest monic irreducible modulus.

    For l = 1 the modulus is x, the "x - 0" convention for the prime field.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if ell < 1:
        raise ValueError(f"extension degree must be >= 1, got {ell}")
    if ell == 1:
        return GaloisField(p, 1, (0, 1))
    for idx in range(p**ell):
        # lex order on (c_{l-1}, ..., c_0): high-degree digit most significant
        digits = _digits(idx, p, ell)
        cand = tuple(reversed(digits)) + (1,)
        if _poly_is_irreducible(cand, p):
            return GaloisField(p, ell, cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def gf_trace(alpha: GFElement, m: int = 1) -> GFElement:
    """Trace to the subfield F_{p^m}: alpha + alpha^(p^m) + ... .

    The result is returned inside the source field; it is verified to be
    fixed by Frobenius^m, i.e. to lie in the subfield.
    """
    field = alpha.field
    if field.ell % m:
        raise ValueError(f"subfield degree {m} does not divide {field.ell}")
    n = field.ell // m
    acc = alpha
    power = alpha
    for _ in range(n - 1):
        power = power.frobenius(m)
        acc = acc + power
    if acc.frobenius(m) != acc:
        raise AssertionError("trace result not fixed by Frobenius^m")
    return acc


def gf_trace_int(alpha: GFElement) -> int:
    """Absolute trace as a residue mod p (the prime-field value)."""
    t = gf_trace(alpha, 1)
    if any(t.coeffs[1:]):
        raise AssertionError("absolute trace is not a prime-field constant")
    return t.coeffs[0]
