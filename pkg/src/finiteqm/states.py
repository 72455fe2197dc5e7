"""Iterative generation of Clifford-invariant rational-probability states.

Starting from the orbit of |0>, each step superposes unordered pairs of
current states with every phase from the scalar subgroup of the Clifford
group, keeps the candidates whose transition probabilities against the
frozen pre-step set are all rational, closes the kept set under the
Clifford action, and then re-checks pairwise rationality of the union.
The re-check is an assertion, not a repair: a violation raises.

Superpositions are taken between unit representatives, with equal weight
and a scalar-subgroup relative phase.  Two refinements pin down which
emissions count as formed candidates, both validated against the known
dimension-2 and dimension-3 step counts (48/24 and 153 in orbits
9/36/108): an emission must be commensurable (rational squared norm of
the balanced sum; incommensurable sums provably never survive the
filter), and an orthogonal pair superposes only when it spans a proper
subspace, which excludes exactly the complete-basis pairs of dimension 2.

Canonical rays in a valid set always have rational squared norm (the
first amplitude is 1, so |v|^2 = 1 / P(v, e_pivot)), hence the norm ratio
sqrt(r_a/r_b) needed for unit balancing is the square root of a rational
and usually stays inside the working field; pairs whose ratio does not
embed are skipped and counted.

Candidate counts per step are reported (raw / deduplicated / kept), never
assumed; callers that expect specific counts must check the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import (
    Cyclotomic,
    SqrtConstructionError,
    canonical_dumps,
    conductor_for,
    sqrt_rational,
)
from .qgroups import center_of, clifford_generators, clifford_group
from .rays import Ray, inner, ontic_ray, transition_probability

__all__ = [
    "IntegrityError",
    "StateSet",
    "StepReport",
    "clifford_orbit",
    "generate_states",
    "interference_candidates",
    "orbit_decompose",
    "rationality_filter",
    "RejectedCandidate",
    "center_phases",
    "seed_orbit",
    "verify_requirements",
]


class IntegrityError(RuntimeError):
    """The closed state set violated pairwise rationality."""


@dataclass
class StepReport:
    """Calibration counts for one generation step."""

    step: int
    raw_candidates: int
    deduped_candidates: int
    kept: int
    rejected: int
    new_states: int
    orbit_sizes: list[int]
    skipped_pairs: int = 0

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "raw_candidates": self.raw_candidates,
            "deduped_candidates": self.deduped_candidates,
            "kept": self.kept,
            "rejected": self.rejected,
            "new_states": self.new_states,
            "orbit_sizes": list(self.orbit_sizes),
            "skipped_pairs": self.skipped_pairs,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StepReport":
        return cls(
            step=obj["step"],
            raw_candidates=obj["raw_candidates"],
            deduped_candidates=obj["deduped_candidates"],
            kept=obj["kept"],
            rejected=obj["rejected"],
            new_states=obj["new_states"],
            orbit_sizes=list(obj["orbit_sizes"]),
            skipped_pairs=obj.get("skipped_pairs", 0),
        )


@dataclass
class RejectedCandidate:
    """A filtered-out superposition with one irrational witness pair."""

    candidate: Ray
    against: Ray
    probability: Cyclotomic


@dataclass
class StateSet:
    """States generated so far, with orbit partition and step reports."""

    dim: int
    conductor: int
    states: dict[Ray, int] = field(default_factory=dict)  # ray -> generation step
    orbits: list[list[Ray]] = field(default_factory=list)
    reports: list[StepReport] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.states)

    def sorted_states(self) -> list[Ray]:
        return sorted(self.states, key=Ray.key)

    def to_json(self) -> dict:
        orbits = []
        for orbit in self.orbits:
            rays = sorted(orbit, key=Ray.key)
            orbits.append(
                {
                    "size": len(rays),
                    "generation": self.states[rays[0]],
                    "rays": [r.to_json() for r in rays],
                }
            )
        orbits.sort(key=lambda o: (o["generation"], canonical_dumps(o["rays"][0])))
        return {
            "dim": self.dim,
            "conductor": self.conductor,
            "count": len(self.states),
            "orbits": orbits,
            "reports": [r.to_json() for r in self.reports],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StateSet":
        ss = cls(dim=obj["dim"], conductor=obj["conductor"])
        for orbit in obj["orbits"]:
            rays = [Ray.from_json(r) for r in orbit["rays"]]
            ss.orbits.append(rays)
            for r in rays:
                ss.states[r] = orbit["generation"]
        ss.reports = [StepReport.from_json(r) for r in obj.get("reports", [])]
        return ss


_PHASES_CACHE: dict[int, list[Cyclotomic]] = {}


def center_phases(n: int) -> list[Cyclotomic]:
    """Scalar subgroup of the dimension-n Clifford group, computed once."""
    phases = _PHASES_CACHE.get(n)
    if phases is None:
        table = clifford_group(n)
        phases = center_of(table)
        _PHASES_CACHE[n] = phases
    return phases


def clifford_orbit(start: Ray, n: int) -> list[Ray]:
    """All rays reachable from start under X, F, S, sorted canonically."""
    from .rays import apply

    gens = list(clifford_generators(n).values())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for ray in frontier:
            for g in gens:
                img = apply(g, ray)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(seen, key=Ray.key)


def seed_orbit(n: int) -> list[Ray]:
    """Orbit of the basis state |0>."""
    return clifford_orbit(ontic_ray(n, 0, conductor_for(n)), n)


def _rational_norm(ray: Ray) -> Fraction:
    r = ray.norm_sq().rational()
    if r is None:
        raise IntegrityError(
            "state has irrational squared norm; cannot form unit superpositions: "
            + ray.key()
        )
    return r


def interference_candidates(stateset: StateSet, rng=None):
    """Unit-balanced pairwise superpositions over all center phases.

    An orthogonal pair superposes only when it spans a proper subspace; in
    dimension 2 an orthogonal pair is a complete basis and is skipped.
    Pairs whose unit-balancing norm ratio has no square root inside the
    working field are skipped as well and counted, so a lossy step is
    visible in the calibration report.  An emission only forms a candidate
    when it is commensurable, i.e. the squared norm of the balanced sum is
    rational; an incommensurable sum provably fails the rationality filter
    against its own parents, so this prunes candidates that could never be
    kept.  Returns (candidates, raw_count, deduped_count, skipped_pairs);
    raw counts every (pair, phase) emission before the commensurability
    cut and deduplication.
    """
    states = stateset.sorted_states()
    phases = list(center_phases(stateset.dim))
    if rng is not None:
        rng.shuffle(states)
        rng.shuffle(phases)
    existing = set(stateset.states)
    norms = {ray: _rational_norm(ray) for ray in states}
    ratio_cache: dict[Fraction, Cyclotomic | None] = {}
    m = stateset.conductor
    raw = 0
    skipped = 0
    found: set[Ray] = set()
    for i, a in enumerate(states):
        for b in states[i + 1 :]:
            if stateset.dim == 2 and inner(a, b).is_zero():
                continue
            ratio = norms[a] / norms[b]
            if ratio in ratio_cache:
                r = ratio_cache[ratio]
            else:
                try:
                    r = sqrt_rational(ratio, m)
                except SqrtConstructionError:
                    r = None
                ratio_cache[ratio] = r
            if r is None:
                skipped += 1
                continue
            rb = [amp if amp.is_zero() else amp * r for amp in b.amps]
            for phi in phases:
                raw += 1
                amps = [
                    x + (phi * y if not y.is_zero() else y)
                    for x, y in zip(a.amps, rb)
                ]
                norm_sq = Cyclotomic.zero(m)
                for v in amps:
                    if not v.is_zero():
                        norm_sq = norm_sq + v.conj() * v
                if norm_sq.is_zero() or norm_sq.rational() is None:
                    continue
                ray = Ray(amps)
                if ray not in existing:
                    found.add(ray)
    return sorted(found, key=Ray.key), raw, len(found), skipped


def rationality_filter(candidates, stateset: StateSet, threads: int = 1):
    """Keep candidates whose probabilities against every current state are
    rational; rejects carry one irrational witness each.

    Filtering is independent per candidate; with threads > 1 the list is
    chunked over a pool and results are merged in input order, so the
    outcome never depends on the schedule.
    """
    existing = stateset.sorted_states()

    def check(cand: Ray) -> RejectedCandidate | None:
        for s in existing:
            p = transition_probability(cand, s)
            if p.rational() is None:
                return RejectedCandidate(cand, s, p)
        return None

    candidates = list(candidates)
    if threads > 1 and len(candidates) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(check, candidates))
    else:
        outcomes = [check(c) for c in candidates]
    kept: list[Ray] = []
    rejected: list[RejectedCandidate] = []
    for cand, witness in zip(candidates, outcomes):
        if witness is None:
            kept.append(cand)
        else:
            rejected.append(witness)
    return kept, rejected


def orbit_decompose(rays, n: int) -> list[list[Ray]]:
    """Partition a Clifford-closed set of rays into orbits.

    Raises ValueError when the set is not closed (an orbit escapes it).
    """
    remaining = set(rays)
    universe = set(remaining)
    orbits = []
    for ray in sorted(universe, key=Ray.key):
        if ray not in remaining:
            continue
        orbit = clifford_orbit(ray, n)
        escape = [r for r in orbit if r not in universe]
        if escape:
            raise ValueError(
                f"set is not Clifford-closed: orbit of {ray.key()} leaves it"
            )
        for r in orbit:
            remaining.discard(r)
        orbits.append(orbit)
    return orbits


def _assert_pairwise_rational(new_states, old_states, context: str):
    for i, a in enumerate(new_states):
        for b in new_states[i + 1 :]:
            if transition_probability(a, b).rational() is None:
                raise IntegrityError(
                    f"{context}: irrational probability between new states "
                    f"{a.key()} and {b.key()}"
                )
        for b in old_states:
            if transition_probability(a, b).rational() is None:
                raise IntegrityError(
                    f"{context}: irrational probability between {a.key()} "
                    f"and existing {b.key()}"
                )


def generate_states(
    n: int,
    steps: int,
    *,
    initial: StateSet | None = None,
    rng=None,
    threads: int = 1,
) -> StateSet:
    """Run the generation loop for the given number of steps.

    Step 0 is the orbit of |0>.  Each later step: superposition candidates
    from all current states, rationality filter against the frozen current
    set, Clifford-orbit closure of the kept states, then a pairwise
    rationality assertion over the union.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    m = conductor_for(n)
    if initial is not None:
        if initial.dim != n or initial.conductor != m:
            raise ValueError("initial state set has wrong dimension or conductor")
        ss = initial
        start_step = max(ss.states.values()) + 1 if ss.states else 0
    else:
        orbit0 = seed_orbit(n)
        ss = StateSet(dim=n, conductor=m)
        for ray in orbit0:
            ss.states[ray] = 0
        ss.orbits.append(orbit0)
        for k in range(n):
            if ontic_ray(n, k, m) not in ss.states:
                raise AssertionError("seed orbit must contain every basis state")
        _assert_pairwise_rational(orbit0, [], "seed orbit")
        ss.reports.append(
            StepReport(
                step=0,
                raw_candidates=0,
                deduped_candidates=0,
                kept=0,
                rejected=0,
                new_states=len(orbit0),
                orbit_sizes=[len(orbit0)],
            )
        )
        start_step = 1
    for k in range(steps):
        step = start_step + k
        candidates, raw, deduped, skipped = interference_candidates(ss, rng=rng)
        kept, rejected = rationality_filter(candidates, ss, threads=threads)
        # close the kept set under the Clifford action
        new_states: set[Ray] = set()
        new_orbits: list[list[Ray]] = []
        pending = set(kept)
        for ray in sorted(pending, key=Ray.key):
            if ray in new_states:
                continue
            orbit = clifford_orbit(ray, n)
            orbit_new = [r for r in orbit if r not in ss.states]
            if len(orbit_new) != len(orbit):
                # an orbit that meets the old set would have to be inside it
                raise IntegrityError(
                    "orbit of a kept candidate intersects the existing set "
                    "without being contained in it"
                )
            fresh = [r for r in orbit_new if r not in new_states]
            if len(fresh) != len(orbit_new):
                raise AssertionError("orbits must not overlap")
            new_states.update(orbit_new)
            new_orbits.append(orbit)
        _assert_pairwise_rational(
            sorted(new_states, key=Ray.key), ss.sorted_states(), f"step {step}"
        )
        for orbit in new_orbits:
            for r in orbit:
                ss.states[r] = step
        ss.orbits.extend(new_orbits)
        ss.reports.append(
            StepReport(
                step=step,
                raw_candidates=raw,
                deduped_candidates=deduped,
                kept=len(kept),
                rejected=len(rejected),
                new_states=len(new_states),
                orbit_sizes=sorted(len(o) for o in new_orbits),
                skipped_pairs=skipped,
            )
        )
    return ss


def verify_requirements(ss: StateSet) -> dict:
    """Literal checks of the three defining requirements of the set."""
    from .rays import apply

    gens = list(clifford_generators(ss.dim).values())
    states = ss.sorted_states()
    invariant = all(apply(g, ray) in ss.states for ray in states for g in gens)
    ontic = all(
        ontic_ray(ss.dim, k, ss.conductor) in ss.states for k in range(ss.dim)
    )
    rational = True
    for i, a in enumerate(states):
        for b in states[i:]:
            if transition_probability(a, b).rational() is None:
                rational = False
                break
        if not rational:
            break
    return {
        "clifford_invariant": invariant,
        "contains_ontic": ontic,
        "pairwise_rational": rational,
    }
