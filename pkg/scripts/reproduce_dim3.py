#!/usr/bin/env python3
"""Dimension-3 state generation and unbiased-basis extraction.

The orbit of |0> has 12 states whose consecutive orthogonal triplets form
a complete set of four mutually unbiased bases; one generation step adds
153 states in Clifford orbits of sizes 9, 36 and 108.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from finiteqm.mub import extract_mubs_from_orbit, verify_mub
from finiteqm.states import generate_states, seed_orbit, verify_requirements


def main():
    orbit = seed_orbit(3)
    print(f"seed orbit size: {len(orbit)}")
    bases = extract_mubs_from_orbit(orbit)
    report = verify_mub(bases)
    print(f"extracted {len(bases.bases)} mutually unbiased bases, ok={report.ok}")

    ss = generate_states(3, 1)
    for rep in ss.reports:
        print(
            f"step {rep.step}: raw={rep.raw_candidates} "
            f"candidates={rep.deduped_candidates} kept={rep.kept} "
            f"rejected={rep.rejected} new={rep.new_states} orbits={rep.orbit_sizes}"
        )
    print(f"total states: {len(ss)}")
    print("requirements:", verify_requirements(ss))


if __name__ == "__main__":
    main()
