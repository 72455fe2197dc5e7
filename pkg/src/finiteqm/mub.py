"""Mutually unbiased bases: construction, verification, orbit extraction.

Two orthonormal bases are mutually unbiased when every cross-basis
transition probability is exactly 1/N.  In prime power dimension
N = p^l a complete set of N+1 such bases exists.  The construction here
uses the commuting families of shift/phase operators indexed by a Galois
field slope s: the joint eigenvectors of { X_a Z_{s a} } form one basis
per slope, and the computational basis completes the set.  Eigenvectors
come from an exact recursion along an F_p-basis of the field, never from
numeric eigendecomposition; verify_mub is the final arbiter either way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import Cyclotomic, conductor_for, zeta
from .galois import GaloisField, GFElement, gf_build, gf_trace_int, is_prime
from .rays import Ray, ontic_ray, transition_probability

__all__ = [
    "BasisSet",
    "MubExtractionError",
    "MubReport",
    "extract_mubs_from_orbit",
    "mub_complete_set",
    "verify_mub",
]


class MubExtractionError(ValueError):
    """An orbit could not be partitioned into mutually unbiased bases."""

    def __init__(self, message: str, bases=None, leftover=None):
        super().__init__(message)
        self.bases = bases or []
        self.leftover = leftover or []


@dataclass
class BasisSet:
    """A list of orthonormal bases over one field, each a list of N rays."""

    dim: int
    bases: list[list[Ray]]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "bases": [[ray.to_json() for ray in basis] for basis in self.bases],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BasisSet":
        return cls(
            dim=obj["dim"],
            bases=[[Ray.from_json(r) for r in basis] for basis in obj["bases"]],
        )


@dataclass
class MubReport:
    """Outcome of an exact unbiasedness check."""

    dim: int
    n_bases: int
    ok: bool
    violations: list[str]


def verify_mub(bs: BasisSet) -> MubReport:
    """Exact check: orthonormal within bases, probability 1/N across."""
    n = bs.dim
    violations: list[str] = []
    for bi, basis in enumerate(bs.bases):
        if len(basis) != n:
            violations.append(f"basis {bi} has {len(basis)} rays, expected {n}")
            continue
        for i in range(n):
            for j in range(i + 1, n):
                p = transition_probability(basis[i], basis[j]).rational()
                if p != 0:
                    violations.append(
                        f"basis {bi}: rays {i},{j} not orthogonal (P={p})"
                    )
    for bi in range(len(bs.bases)):
        for bj in range(bi + 1, len(bs.bases)):
            for i, u in enumerate(bs.bases[bi]):
                for j, v in enumerate(bs.bases[bj]):
                    p = transition_probability(u, v).rational()
                    if p is None or p.numerator != 1 or p.denominator != n:
                        violations.append(
                            f"bases {bi},{bj}: rays {i},{j} have P={p}, want 1/{n}"
                        )
    return MubReport(
        dim=n, n_bases=len(bs.bases), ok=not violations, violations=violations
    )


def _slope_basis(field: GaloisField, slope: GFElement, m: int) -> list[Ray]:
    """Joint eigenbasis of the commuting family {X_a Z_(slope*a)}.

    For a basis element e of the field, the eigenvector recursion is
    v[g + e] = lam_e^-1 * chi(slope*e*g) * v[g] with chi the trace
    character; consistency around each additive cycle forces
    lam_e^p = chi(slope * e^2 * p(p-1)/2), so lam_e lives in mu_p for odd
    p and in mu_4 for p = 2.  Each eigenvalue tuple yields one vector.
    """
    p = field.p
    ell = field.ell
    q = field.order
    chi_step = m // p
    basis_elems = [field.from_index(p**j) for j in range(ell)]
    # base eigenvalue solving lam^p = chi(slope * e^2 * p(p-1)/2)
    base_lam: list[Cyclotomic] = []
    for e in basis_elems:
        if p % 2:
            base_lam.append(Cyclotomic.one(m))
        else:
            # lam^2 = chi(slope * e^2) = +/-1
            t = gf_trace_int(slope * e * e)
            base_lam.append(zeta(m, (m // 4) * t % m))
    rays = []
    elements = field.elements()
    for tup in range(q):
        lam_exp = []
        rem = tup
        for _ in range(ell):
            lam_exp.append(rem % p)
            rem //= p
        lams = [
            base_lam[j] * zeta(m, chi_step * lam_exp[j] % m) for j in range(ell)
        ]
        lam_invs = [lam.conj() for lam in lams]  # unit modulus: inverse = conj
        amps: list[Cyclotomic | None] = [None] * q
        amps[0] = Cyclotomic.one(m)
        for gamma in elements:
            idx = gamma.index
            if amps[idx] is not None:
                continue
            # peel the lowest nonzero digit: gamma = prev + e_j
            digits = list(gamma.coeffs)
            j = next(k for k, c in enumerate(digits) if c)
            e = basis_elems[j]
            prev = gamma - e
            prev_amp = amps[prev.index]
            if prev_amp is None:
                raise AssertionError("recursion order broken")
            t = gf_trace_int(slope * e * prev)
            amps[idx] = lam_invs[j] * zeta(m, chi_step * t % m) * prev_amp
        rays.append(Ray(amps))
    return rays


def mub_complete_set(p: int, ell: int = 1) -> BasisSet:
    """N+1 mutually unbiased bases in dimension N = p^ell.

    The computational basis plus one slope basis per field element.  The
    returned set always passes verify_mub for the supported inputs; the
    caller can re-verify since the check is exact and cheap.
    """
    if not is_prime(p):
        raise ValueError(f"dimension base {p} is not prime")
    if ell < 1:
        raise ValueError("exponent must be >= 1")
    field = gf_build(p, ell)
    n = field.order
    m = conductor_for(n)
    bases = [[ontic_ray(n, k, m) for k in range(n)]]
    for slope in field.elements():
        bases.append(_slope_basis(field, slope, m))
    return BasisSet(dim=n, bases=bases)


def extract_mubs_from_orbit(rays) -> BasisSet:
    """Greedily partition rays into orthonormal bases, then verify.

    Succeeds exactly when the input is a disjoint union of mutually
    unbiased bases; otherwise raises MubExtractionError naming the
    obstruction and carrying any bases built so far.
    """
    pool = sorted(set(rays), key=Ray.key)
    if not pool:
        raise MubExtractionError("empty orbit")
    n = pool[0].dim
    bases: list[list[Ray]] = []
    remaining = list(pool)
    while remaining:
        seedling = remaining[0]
        basis = [seedling]
        for cand in remaining[1:]:
            if len(basis) == n:
                break
            if all(
                transition_probability(cand, b).rational() == 0 for b in basis
            ):
                basis.append(cand)
        if len(basis) != n:
            raise MubExtractionError(
                f"could not complete an orthonormal basis from ray "
                f"{seedling.key()}: found only {len(basis)} of {n}",
                bases=bases,
                leftover=remaining,
            )
        chosen = set(basis)
        remaining = [r for r in remaining if r not in chosen]
        bases.append(basis)
    result = BasisSet(dim=n, bases=bases)
    report = verify_mub(result)
    if not report.ok:
        raise MubExtractionError(
            "partition found but unbiasedness fails: "
            + "; ".join(report.violations[:3]),
            bases=bases,
        )
    return result
