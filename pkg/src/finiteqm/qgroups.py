"""Shift/clock/Fourier matrix constructions and group closure.

Matrices live over a fixed cyclotomic field: an integer coefficient array
of shape (N, N, phi(m)) plus one positive denominator, kept in canonical
(content-reduced) form so byte equality is field equality.  Products are
contractions with a per-conductor multiplication tensor; large closures
run these contractions as float64 matrix products, which is exact as long
as every intermediate integer stays below 2**53 (checked, with an exact
fallback).

Breadth-first closure deduplicates canonical forms by digest, optionally
after projective (scalar) canonicalization: dividing a matrix by its first
nonzero entry, which removes exactly the scalar subgroup.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cyclotomic import (
    Cyclotomic,
    FieldMismatchError,
    _context,
    conductor_for,
    sqrt_embed,
    zeta,
)
from .galois import GaloisField, GFElement, gf_trace_int

__all__ = [
    "ClosureCapError",
    "GroupTable",
    "UMatrix",
    "WeylReport",
    "center_of",
    "check_weyl_relation",
    "clifford_generators",
    "clifford_group",
    "displacement",
    "evolve_ontic",
    "fourier_matrix",
    "galois_generators",
    "group_closure",
    "kron",
    "position_operator",
    "s_matrix",
    "symplectic_form",
    "wh_generators",
    "wh_group",
]

_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62
_DEFAULT_MAX_SIZE = 1_000_000
_AUTO_STORE_LIMIT = 50_000
_AUTO_STORE_BYTES = 200_000_000
_CHUNK = 8192


class ClosureCapError(RuntimeError):
    """Closure exceeded its element cap; carries the partial size."""

    def __init__(self, message: str, partial_size: int):
        super().__init__(message)
        self.partial_size = partial_size


def _element_key(num: np.ndarray, den: int) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    h.update(np.ascontiguousarray(num, dtype=np.int64).tobytes())
    h.update(int(den).to_bytes(8, "little", signed=True))
    return h.digest()


def _reduce_inplace(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den < 0:
        num = -num
        den = -den
    g = int(np.gcd.reduce(np.abs(num), axis=None))
    g = math.gcd(g, den)
    if g > 1:
        num //= g
        den //= g
    return num, den


def _canonicalize_array(num, den: int) -> tuple[np.ndarray, int]:
    """Content-reduce a coefficient array; big-int arrays shrink first."""
    arr = np.asarray(num)
    if arr.dtype == object:
        den = int(den)
        if den < 0:
            arr = -arr
            den = -den
        g = den
        for v in arr.flat:
            if v:
                g = math.gcd(g, abs(int(v)))
                if g == 1:
                    break
        if g > 1:
            arr = arr // g
            den //= g
        return np.ascontiguousarray(arr.astype(np.int64)), den
    arr = np.ascontiguousarray(arr, dtype=np.int64).copy()
    return _reduce_inplace(arr, int(den))


class UMatrix:
    """Square matrix of exact cyclotomic entries with a shared denominator."""

    __slots__ = ("dim", "m", "num", "den", "_rows", "_key")

    def __init__(self, dim: int, m: int, num: np.ndarray, den: int = 1):
        d = _context(m).degree
        if np.asarray(num).shape != (dim, dim, d):
            raise ValueError(
                f"expected shape {(dim, dim, d)}, got {np.asarray(num).shape}"
            )
        num, den = _canonicalize_array(num, den)
        num.setflags(write=False)
        self.dim = dim
        self.m = m
        self.num = num
        self.den = den
        self._rows = None
        self._key = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, dim: int, m: int) -> "UMatrix":
        d = _context(m).degree
        num = np.zeros((dim, dim, d), dtype=np.int64)
        for i in range(dim):
            num[i, i, 0] = 1
        return cls(dim, m, num, 1)

    @classmethod
    def from_entries(cls, entries, m: int | None = None) -> "UMatrix":
        dim = len(entries)
        if m is None:
            m = entries[0][0].m
        d = _context(m).degree
        den = 1
        for row in entries:
            for e in row:
                if e.m != m:
                    raise FieldMismatchError("mixed conductors in matrix entries")
                den = den * e.den // math.gcd(den, e.den)
        num = np.zeros((dim, dim, d), dtype=np.int64)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                s = den // e.den
                num[i, j, :] = [v * s for v in e.num]
        return cls(dim, m, num, den)

    @classmethod
    def diagonal(cls, scalars, m: int | None = None) -> "UMatrix":
        if m is None:
            m = scalars[0].m
        zero = Cyclotomic.zero(m)
        dim = len(scalars)
        return cls.from_entries(
            [[scalars[i] if i == j else zero for j in range(dim)] for i in range(dim)],
            m,
        )

    @classmethod
    def permutation(cls, dim: int, m: int, row_of_col) -> "UMatrix":
        """0/1 matrix with a single 1 per column j, at row row_of_col[j]."""
        d = _context(m).degree
        num = np.zeros((dim, dim, d), dtype=np.int64)
        for j in range(dim):
            num[row_of_col[j] % dim, j, 0] = 1
        return cls(dim, m, num, 1)

    # -- views ------------------------------------------------------------------

    def entry(self, i: int, j: int) -> Cyclotomic:
        return Cyclotomic(self.m, self.num[i, j, :].tolist(), self.den)

    def rows(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        """All entries as Cyclotomic values, cached (used by state application)."""
        if self._rows is None:
            self._rows = tuple(
                tuple(self.entry(i, j) for j in range(self.dim))
                for i in range(self.dim)
            )
        return self._rows

    def key(self) -> bytes:
        if self._key is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(f"{self.dim}:{self.m}:".encode())
            h.update(self.num.tobytes())
            h.update(self.den.to_bytes(8, "little", signed=True))
            self._key = h.digest()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, UMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.m == other.m
            and self.den == other.den
            and np.array_equal(self.num, other.num)
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"UMatrix(dim={self.dim}, m={self.m}, den={self.den})"

    # -- algebra -----------------------------------------------------------------

    def _check(self, other: "UMatrix"):
        if self.dim != other.dim or self.m != other.m:
            raise FieldMismatchError("matrix dimension or conductor mismatch")

    def __matmul__(self, other: "UMatrix") -> "UMatrix":
        self._check(other)
        ctx = _context(self.m)
        out = _mul_nums(self.num, other.num, ctx)
        return UMatrix(self.dim, self.m, out, self.den * other.den)

    def matpow(self, k: int) -> "UMatrix":
        if k < 0:
            raise ValueError("negative matrix powers not supported; use dagger")
        result = UMatrix.identity(self.dim, self.m)
        base = self
        while k:
            if k & 1:
                result = result @ base
            if k > 1:
                base = base @ base
            k >>= 1
        return result

    def dagger(self) -> "UMatrix":
        ctx = _context(self.m)
        conj = np.tensordot(self.num, ctx.conj_np, axes=([2], [0]))
        return UMatrix(self.dim, self.m, np.transpose(conj, (1, 0, 2)), self.den)

    def scale(self, c: Cyclotomic) -> "UMatrix":
        if c.m != self.m:
            raise FieldMismatchError("scalar conductor mismatch")
        ctx = _context(self.m)
        out = _scale_nums(self.num, c.num, ctx)
        return UMatrix(self.dim, self.m, out, self.den * c.den)

    def is_unitary(self) -> bool:
        return (self @ self.dagger()) == UMatrix.identity(self.dim, self.m)

    def is_scalar(self) -> Cyclotomic | None:
        """The scalar c when self == c * identity, else None."""
        for i in range(self.dim):
            for j in range(self.dim):
                if i != j and self.num[i, j].any():
                    return None
            if not np.array_equal(self.num[i, i], self.num[0, 0]):
                return None
        return self.entry(0, 0)

    def first_nonzero_entry(self) -> tuple[int, int]:
        for i in range(self.dim):
            for j in range(self.dim):
                if self.num[i, j].any():
                    return i, j
        raise ValueError("zero matrix has no nonzero entry")

    def scalar_canonical(self) -> "UMatrix":
        """Divide by the first nonzero entry; canonical projective form."""
        i, j = self.first_nonzero_entry()
        inv = Cyclotomic(self.m, self.num[i, j, :].tolist(), 1).inv()
        ctx = _context(self.m)
        out = _scale_nums(self.num, inv.num, ctx)
        return UMatrix(self.dim, self.m, out, inv.den)

    def trace(self) -> Cyclotomic:
        acc = Cyclotomic.zero(self.m)
        for i in range(self.dim):
            acc = acc + self.entry(i, i)
        return acc

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [
                [self.entry(i, j).to_json() for j in range(self.dim)]
                for i in range(self.dim)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UMatrix":
        entries = [
            [Cyclotomic.from_json(e) for e in row] for row in obj["entries"]
        ]
        return cls.from_entries(entries)


def _mul_nums(a: np.ndarray, b: np.ndarray, ctx) -> np.ndarray:
    """Exact coefficient array of the matrix product a @ b."""
    mult = ctx.mult_np
    bound = (
        int(np.abs(a).max(initial=0))
        * int(np.abs(b).max(initial=0))
        * a.shape[0]
        * ctx.degree**2
        * int(np.abs(mult).max(initial=0))
    )
    if bound < _INT64_SAFE:
        t = np.tensordot(a, b, axes=([1], [0]))  # (i, pa, j, pb)
        return np.tensordot(t, mult, axes=([1, 3], [0, 1]))
    ao = a.astype(object)
    bo = b.astype(object)
    mo = mult.astype(object)
    t = np.tensordot(ao, bo, axes=([1], [0]))
    return np.tensordot(t, mo, axes=([1, 3], [0, 1])).astype(object)


def _scale_nums(num: np.ndarray, w_coeffs, ctx) -> np.ndarray:
    """Coefficient array of (entrywise) scalar multiplication by w."""
    mult = ctx.mult_np
    maxw = max((abs(int(v)) for v in w_coeffs), default=0)
    bound = (
        int(np.abs(num).max(initial=0))
        * maxw
        * ctx.degree**2
        * int(np.abs(mult).max(initial=0))
    )
    if bound < _INT64_SAFE:
        w = np.array([int(v) for v in w_coeffs], dtype=np.int64)
        wm = np.tensordot(w, mult, axes=([0], [1]))  # (a, c)
        return np.tensordot(num, wm, axes=([2], [0]))
    w = np.array([int(v) for v in w_coeffs], dtype=object)
    wm = np.tensordot(w, mult.astype(object), axes=([0], [1]))
    return np.tensordot(num.astype(object), wm, axes=([2], [0]))


# -- generator matrices ------------------------------------------------------------


def wh_generators(n: int, m: int | None = None):
    """(tau, X, Z): phase, cyclic shift and clock matrix for dimension n.

    m overrides the working conductor; it must be a multiple of 2n.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if m is None:
        m = conductor_for(n)
    if m % (2 * n):
        raise ValueError(f"conductor {m} must be a multiple of {2 * n}")
    tau = -zeta(m, m // (2 * n))
    x = UMatrix.permutation(n, m, [(j + 1) % n for j in range(n)])
    z = UMatrix.diagonal([zeta(m, (m // n) * k % m) for k in range(n)], m)
    return tau, x, z


def fourier_matrix(n: int, m: int | None = None) -> UMatrix:
    """Discrete Fourier matrix (1/sqrt(n)) * omega^(ij), exactly."""
    if m is None:
        m = conductor_for(n)
    if m % (2 * n):
        raise ValueError(f"conductor {m} must be a multiple of {2 * n}")
    root = sqrt_embed(n, m)
    if root.den != 1:
        raise AssertionError("sqrt(n) should be an algebraic integer")
    ctx = _context(m)
    d = ctx.degree
    num = np.zeros((n, n, d), dtype=np.int64)
    omega_pow = [zeta(m, (m // n) * k % m) for k in range(n)]
    cache = {}
    for k, om in enumerate(omega_pow):
        cache[k] = root * om
    for i in range(n):
        for j in range(n):
            e = cache[(i * j) % n]
            num[i, j, :] = e.num
    return UMatrix(n, m, num, n)


def s_matrix(n: int, m: int | None = None) -> UMatrix:
    """Diagonal quadratic phase matrix diag(tau^(i(i+n)))."""
    tau, _, _ = wh_generators(n, m)
    return UMatrix.diagonal([tau ** (i * (i + n)) for i in range(n)], tau.m)


def clifford_generators(n: int, m: int | None = None) -> dict[str, UMatrix]:
    _, x, _ = wh_generators(n, m)
    return {"X": x, "F": fourier_matrix(n, m), "S": s_matrix(n, m)}


def position_operator(n: int) -> UMatrix:
    """diag(0, ..., n-1); not unitary, exempt from the group checks."""
    m = conductor_for(n)
    return UMatrix.diagonal([Cyclotomic.from_rational(m, k) for k in range(n)], m)


def evolve_ontic(x0: int, v: int, t: int, n: int) -> int:
    """Position after t steps of shift-by-v: x0 + v*t mod n."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if math.gcd(v % n if v % n else n, n) != 1:
        raise ValueError(f"velocity {v} is not coprime to {n}")
    return (x0 + v * t) % n


def displacement(n: int, p1: int, p2: int) -> UMatrix:
    """tau^(p1*p2) X^p1 Z^p2 with the literal integer phase exponent."""
    tau, x, z = wh_generators(n)
    phase = tau ** ((p1 * p2) % (2 * n))
    mat = x.matpow(p1 % n) @ z.matpow(p2 % n)
    return mat.scale(phase)


def symplectic_form(p, q, n: int) -> int:
    """p2*q1 - p1*q2 reduced mod n (mod 2n when n is even)."""
    mod = n if n % 2 else 2 * n
    return (p[1] * q[0] - p[0] * q[1]) % mod


def galois_generators(field: GaloisField, nu: GFElement, mu: GFElement):
    """Additive shift X_nu and trace-character phase Z_mu in dimension p^l."""
    q = field.order
    m = conductor_for(q)
    # permutation() wants a row per column: column gamma -> row gamma+nu
    shift = [0] * q
    for gamma in field.elements():
        shift[gamma.index] = (gamma + nu).index
    x_nu = UMatrix.permutation(q, m, shift)
    p = field.p
    diag = [
        zeta(m, (m // p) * gf_trace_int(mu * gamma) % m) for gamma in field.elements()
    ]
    z_mu = UMatrix.diagonal(diag, m)
    return x_nu, z_mu


@dataclass
class WeylReport:
    """Witnesses for the clock/shift commutation identity."""

    dim: int
    zx: UMatrix
    omega_xz: UMatrix

    @property
    def ok(self) -> bool:
        return self.zx == self.omega_xz


def check_weyl_relation(n: int) -> WeylReport:
    """Assert ZX == omega * XZ exactly and return the witness matrices."""
    _, x, z = wh_generators(n)
    m = conductor_for(n)
    omega = zeta(m, m // n)
    lhs = z @ x
    rhs = (x @ z).scale(omega)
    report = WeylReport(n, lhs, rhs)
    if not report.ok:
        raise AssertionError(f"commutation relation failed for dimension {n}")
    return report


# -- group closure ---------------------------------------------------------------------


class GroupTable:
    """Closure of a matrix generating set, with canonical deduplication."""

    def __init__(
        self,
        dim: int,
        conductor: int,
        projective: bool,
        generator_names: tuple[str, ...],
        order: int,
        elements: list[UMatrix] | None,
        words: list[tuple[str, ...]] | None,
        key_set: set[bytes],
    ):
        self.dim = dim
        self.conductor = conductor
        self.projective = projective
        self.generator_names = generator_names
        self.order = order
        self.elements = elements
        self.words = words
        self._key_set = key_set

    def __len__(self) -> int:
        return self.order

    def contains(self, mat: UMatrix) -> bool:
        if mat.dim != self.dim or mat.m != self.conductor:
            return False
        if self.projective:
            mat = mat.scalar_canonical()
        return _element_key(mat.num, mat.den) in self._key_set

    def scalars(self) -> list[Cyclotomic]:
        """All scalar matrices in the table, as their scalar values."""
        if self.elements is None:
            raise ValueError("scalars need stored elements (order-only table)")
        out = []
        for el in self.elements:
            c = el.is_scalar()
            if c is not None:
                out.append(c)
        out.sort(key=lambda c: c.key())
        return out

    def to_json(self, include_elements: bool = True) -> dict:
        obj = {
            "dim": self.dim,
            "conductor": self.conductor,
            "projective": self.projective,
            "order": self.order,
            "generators": list(self.generator_names),
        }
        if include_elements and self.elements is not None:
            obj["elements"] = [el.to_json() for el in self.elements]
            if self.words is not None:
                obj["words"] = ["".join(w) for w in self.words]
        return obj


def center_of(table: GroupTable) -> list[Cyclotomic]:
    """Scalar subgroup of a non-projective closure, as sorted scalars."""
    if table.projective:
        raise ValueError("center of a projective table is trivial by construction")
    return table.scalars()


def _generator_tensor(g: UMatrix, ctx):
    """T[(k,a),(j,c)] = sum_b g[k,j,b] * mult[a,b,c].

    Returns the float64 copy used by the BLAS fast path together with the
    exact integer tensor for the big-coefficient fallback.
    """
    mult = ctx.mult_np
    d = ctx.degree
    inner_bound = (
        int(np.abs(g.num).max(initial=0)) * int(np.abs(mult).max(initial=0)) * d
    )
    if inner_bound < _INT64_SAFE:
        t = np.einsum("kjb,abc->kajc", g.num, mult)
    else:
        t = np.einsum(
            "kjb,abc->kajc", g.num.astype(object), mult.astype(object)
        )
    n = g.dim
    flat = t.reshape(n * d, n * d).astype(np.float64)
    tmax = max(abs(int(v)) for v in t.flat) if t.size else 0
    return np.ascontiguousarray(flat), t, tmax


def _mul_chunk(
    chunk: np.ndarray, tfloat: np.ndarray, texact: np.ndarray, tmax: int, n: int, d: int
):
    """Batched right-multiplication, exact through bounded float64."""
    b = chunk.shape[0]
    cmax = int(np.abs(chunk).max(initial=0))
    if cmax * tmax * n * d >= _FLOAT_EXACT:
        out = np.empty((b, n, n, d), dtype=np.int64)
        tint = texact.astype(object)
        for t in range(b):
            prod = np.tensordot(
                chunk[t].astype(object), tint, axes=([1, 2], [0, 1])
            )
            out[t] = prod.astype(np.int64)  # raises OverflowError if huge
        return out
    flat = chunk.reshape(b * n, n * d).astype(np.float64)
    prod = flat @ tfloat
    return np.rint(prod).astype(np.int64).reshape(b, n, n, d)


def _reduce_batch(nums: np.ndarray, dens: np.ndarray):
    b = nums.shape[0]
    flat = np.abs(nums.reshape(b, -1))
    g = np.gcd.reduce(flat, axis=1)
    g = np.gcd(g, dens)
    nums //= g[:, None, None, None]
    dens //= g
    return nums, dens


def _scalar_canonical_batch(nums: np.ndarray, ctx, inv_cache: dict):
    """Divide each matrix by its first nonzero entry (denominators cancel)."""
    b, n, _, d = nums.shape
    flat = nums.reshape(b, n * n, d)
    nonzero = np.any(flat != 0, axis=2)
    first = np.argmax(nonzero, axis=1)
    entries = flat[np.arange(b), first]
    wmats = np.empty((b, d, d), dtype=np.float64)
    dens = np.empty(b, dtype=np.int64)
    wmaxes = np.empty(b, dtype=np.int64)
    mult = ctx.mult_np
    for t in range(b):
        key = entries[t].tobytes()
        cached = inv_cache.get(key)
        if cached is None:
            inv = Cyclotomic(ctx.m, entries[t].tolist(), 1).inv()
            w = np.array(inv.num, dtype=np.int64)
            wm = np.tensordot(mult, w, axes=([1], [0]))  # (a, c)
            cached = (wm.astype(np.float64), inv.den, int(np.abs(wm).max(initial=0)))
            inv_cache[key] = cached
        wmats[t], dens[t], wmaxes[t] = cached
    cmax = int(np.abs(nums).max(initial=0))
    if cmax * int(wmaxes.max(initial=0)) * d >= _FLOAT_EXACT:
        out = np.empty_like(nums)
        for t in range(b):
            prod = np.tensordot(
                nums[t].astype(object), wmats[t].astype(object), axes=([2], [0])
            )
            out[t] = prod.astype(np.int64)
    else:
        out = np.rint(np.matmul(flat.astype(np.float64), wmats)).astype(np.int64)
        out = out.reshape(b, n, n, d)
    return out, dens


def group_closure(
    generators,
    *,
    names=None,
    projective: bool = False,
    max_size: int = _DEFAULT_MAX_SIZE,
    store: bool | None = None,
    threads: int = 1,
    check_unitary: bool = True,
) -> GroupTable:
    """Breadth-first closure of a matrix generating set.

    Elements are deduplicated by their canonical form (scalar-canonical
    form when projective=True).  Word provenance keeps the first word
    found at the shallowest level.  store=None keeps element bodies until
    the table grows past an internal limit, then switches to order-only.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    dim = gens[0].dim
    m = gens[0].m
    for g in gens:
        if g.dim != dim or g.m != m:
            raise FieldMismatchError("generators must share dimension and conductor")
        if check_unitary and not g.is_unitary():
            raise ValueError("group generators must be unitary")
    if names is None:
        names = tuple(chr(ord("a") + i) for i in range(len(gens)))
    names = tuple(names)
    if max_size < 1:
        raise ValueError("max_size must be positive")

    ctx = _context(m)
    d = ctx.degree
    inv_cache: dict[bytes, tuple] = {}
    if projective:
        gens = [g.scalar_canonical() for g in gens]
    gen_tensors = [_generator_tensor(g, ctx) for g in gens]
    gen_dens = [g.den for g in gens]

    storing = store is not False
    auto = store is None
    element_bytes = dim * dim * _context(m).degree * 8
    auto_limit = min(_AUTO_STORE_LIMIT, max(1, _AUTO_STORE_BYTES // element_bytes))
    seen: set[bytes] = set()
    bodies_num: list[np.ndarray] | None = [] if storing else None
    bodies_den: list[int] | None = [] if storing else None
    words: list[tuple[str, ...]] | None = [] if storing else None

    ident = UMatrix.identity(dim, m)
    fr_nums = ident.num[None, :, :, :].copy()
    fr_dens = np.array([ident.den], dtype=np.int64)
    fr_words: list[tuple[str, ...]] | None = [()]
    seen.add(_element_key(ident.num, ident.den))
    if storing:
        bodies_num.append(ident.num.copy())
        bodies_den.append(ident.den)
        words.append(())

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def compute_products(chunk_nums, chunk_dens, gi):
        tfloat, texact, tmax = gen_tensors[gi]
        out = _mul_chunk(chunk_nums, tfloat, texact, tmax, dim, d)
        if projective:
            out, dens = _scalar_canonical_batch(out, ctx, inv_cache)
        else:
            dens = chunk_dens * gen_dens[gi]
        out, dens = _reduce_batch(out, dens)
        return out, dens

    try:
        while fr_nums.shape[0]:
            new_nums = []
            new_dens = []
            new_words: list[tuple[str, ...]] = []
            b = fr_nums.shape[0]
            jobs = []
            for gi in range(len(gens)):
                for lo in range(0, b, _CHUNK):
                    hi = min(lo + _CHUNK, b)
                    jobs.append((gi, lo, hi))
            if pool is not None:
                results = list(
                    pool.map(
                        lambda job: compute_products(
                            fr_nums[job[1] : job[2]], fr_dens[job[1] : job[2]], job[0]
                        ),
                        jobs,
                    )
                )
            else:
                results = [
                    compute_products(fr_nums[lo:hi], fr_dens[lo:hi], gi)
                    for gi, lo, hi in jobs
                ]
            for (gi, lo, hi), (out, dens) in zip(jobs, results):
                keep = []
                for t in range(out.shape[0]):
                    key = _element_key(out[t], int(dens[t]))
                    if key in seen:
                        continue
                    seen.add(key)
                    keep.append(t)
                    if storing:
                        bodies_num.append(out[t].copy())
                        bodies_den.append(int(dens[t]))
                        words.append(fr_words[lo + t] + (names[gi],))
                if len(seen) > max_size:
                    raise ClosureCapError(
                        f"closure exceeded cap {max_size}", len(seen)
                    )
                if keep:
                    new_nums.append(out[keep])
                    new_dens.append(dens[keep])
                    if storing:
                        new_words.extend(
                            fr_words[lo + t] + (names[gi],) for t in keep
                        )
                if storing and auto and len(seen) > auto_limit:
                    storing = False
                    bodies_num = bodies_den = words = None
                    new_words = []
            if new_nums:
                fr_nums = np.concatenate(new_nums, axis=0)
                fr_dens = np.concatenate(new_dens, axis=0)
                fr_words = new_words
            else:
                fr_nums = np.empty((0, dim, dim, d), dtype=np.int64)
                fr_dens = np.empty((0,), dtype=np.int64)
                fr_words = []
    finally:
        if pool is not None:
            pool.shutdown()

    elements = None
    word_list = None
    if storing and bodies_num is not None:
        triples = []
        for arr, den, w in zip(bodies_num, bodies_den, words):
            mat = UMatrix(dim, m, arr, den)
            triples.append((mat.key(), mat, w))
        triples.sort(key=lambda t: t[0])
        elements = [t[1] for t in triples]
        word_list = [t[2] for t in triples]
    return GroupTable(
        dim=dim,
        conductor=m,
        projective=projective,
        generator_names=names,
        order=len(seen),
        elements=elements,
        words=word_list,
        key_set=seen,
    )


def wh_group(n: int, **kwargs) -> GroupTable:
    """Closure of (tau * I, X, Z); order n^3 for odd n, 2 n^3 for even."""
    tau, x, z = wh_generators(n)
    tau_mat = UMatrix.identity(n, x.m).scale(tau)
    kwargs.setdefault("names", ("t", "X", "Z"))
    return group_closure([tau_mat, x, z], **kwargs)


def clifford_group(n: int, projective: bool = False, **kwargs) -> GroupTable:
    """Closure of (X, F, S), optionally modulo scalars."""
    gens = clifford_generators(n)
    kwargs.setdefault("names", tuple(gens.keys()))
    return group_closure(list(gens.values()), projective=projective, **kwargs)


def kron(a: UMatrix, b: UMatrix) -> UMatrix:
    """Tensor product; entry (i k, j l) = a[i,j] * b[k,l]."""
    if a.m != b.m:
        raise FieldMismatchError("tensor factors must share a conductor")
    ctx = _context(a.m)
    mult = ctx.mult_np
    bound = (
        int(np.abs(a.num).max(initial=0))
        * int(np.abs(b.num).max(initial=0))
        * ctx.degree**2
        * int(np.abs(mult).max(initial=0))
    )
    if bound >= _INT64_SAFE:
        raise OverflowError("tensor product coefficients exceed safe bounds")
    t = np.einsum("ija,klb,abc->ikjlc", a.num, b.num, mult)
    n = a.dim * b.dim
    return UMatrix(n, a.m, t.reshape(n, n, ctx.degree), a.den * b.den)
