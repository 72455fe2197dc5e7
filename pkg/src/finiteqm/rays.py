"""Projective state vectors with exact inner products.

A Ray is an unnormalized amplitude vector in canonical projective form:
the first nonzero amplitude is exactly 1.  Transition probabilities are
computed with the scale-invariant formula |<a|b>|^2 / (|a|^2 |b|^2), so
states never need normalizing and the whole pipeline stays inside one
cyclotomic field.  Inverse squared norms are cached per ray because the
rationality filter evaluates many probabilities against the same states.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyclotomic, FieldMismatchError, canonical_dumps
from .qgroups import UMatrix

__all__ = [
    "Ray",
    "apply",
    "inner",
    "ontic_ray",
    "prob_rational",
    "transition_probability",
]


class Ray:
    """Projective state: canonical amplitude tuple, first nonzero entry 1."""

    __slots__ = ("dim", "m", "amps", "_norm_inv", "_hash", "_key")

    def __init__(self, amps):
        amps = tuple(amps)
        if not amps:
            raise ValueError("empty amplitude vector")
        m = amps[0].m
        pivot = None
        for k, a in enumerate(amps):
            if a.m != m:
                raise FieldMismatchError("mixed conductors in amplitudes")
            if pivot is None and not a.is_zero():
                pivot = k
        if pivot is None:
            raise ValueError("zero vector does not define a ray")
        lead = amps[pivot]
        if not lead.is_one():
            scale = lead.inv()
            amps = tuple(
                Cyclotomic.one(m)
                if k == pivot
                else (a if a.is_zero() else a * scale)
                for k, a in enumerate(amps)
            )
        self.dim = len(amps)
        self.m = m
        self.amps = amps
        self._norm_inv = None
        self._hash = None
        self._key = None

    def norm_sq(self) -> Cyclotomic:
        acc = Cyclotomic.zero(self.m)
        for a in self.amps:
            if not a.is_zero():
                acc = acc + a.conj() * a
        return acc

    def norm_sq_inv(self) -> Cyclotomic:
        if self._norm_inv is None:
            self._norm_inv = self.norm_sq().inv()
        return self._norm_inv

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return self.amps == other.amps

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.amps)
            self._hash = h
        return h

    def __repr__(self):
        return f"Ray({', '.join(repr(a) for a in self.amps)})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "amps": [a.to_json() for a in self.amps]}

    @classmethod
    def from_json(cls, obj: dict) -> "Ray":
        amps = [Cyclotomic.from_json(a) for a in obj["amps"]]
        if len(amps) != obj["dim"]:
            raise ValueError("amplitude count does not match dim")
        return cls(amps)

    def key(self) -> str:
        """Byte-stable sort key for deterministic set orderings."""
        if self._key is None:
            self._key = canonical_dumps(self.to_json())
        return self._key


def ontic_ray(n: int, k: int, m: int) -> Ray:
    """Basis state |k> in dimension n over Q(zeta_m)."""
    one = Cyclotomic.one(m)
    zero = Cyclotomic.zero(m)
    return Ray([one if i == k % n else zero for i in range(n)])


def inner(a: Ray, b: Ray) -> Cyclotomic:
    """<a|b> = sum conj(a_i) b_i on the stored representatives."""
    if a.dim != b.dim or a.m != b.m:
        raise FieldMismatchError("rays of different dimension or conductor")
    acc = Cyclotomic.zero(a.m)
    for x, y in zip(a.amps, b.amps):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x.conj() * y
    return acc


def transition_probability(a: Ray, b: Ray) -> Cyclotomic:
    """|<a|b>|^2 / (|a|^2 |b|^2); exact, real, scale-invariant."""
    ip = inner(a, b)
    if ip.is_zero():
        return Cyclotomic.zero(a.m)
    return ip * ip.conj() * a.norm_sq_inv() * b.norm_sq_inv()


def prob_rational(a: Ray, b: Ray) -> Fraction | None:
    """The transition probability as a Fraction when rational, else None."""
    return transition_probability(a, b).rational()


def apply(mat: UMatrix, ray: Ray) -> Ray:
    """Canonicalized image of the ray under the matrix."""
    if mat.dim != ray.dim or mat.m != ray.m:
        raise FieldMismatchError("matrix and ray dimension or conductor mismatch")
    rows = mat.rows()
    out = []
    zero = Cyclotomic.zero(ray.m)
    for i in range(mat.dim):
        acc = zero
        row = rows[i]
        for j, amp in enumerate(ray.amps):
            if not amp.is_zero():
                e = row[j]
                if not e.is_zero():
                    acc = acc + e * amp
        out.append(acc)
    return Ray(out)
