#!/usr/bin/env python3
"""Dimension-2 state generation end to end.

Prints the seed orbit (the octahedron), runs two generation steps with
their calibration counts (48 candidates, 24 kept forming one orbit of
24, then 16 further orbits of 24), and optionally writes the Bloch
coordinates of every state to CSV for plotting.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from finiteqm.cli import bloch_xyz
from finiteqm.states import generate_states, verify_requirements


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2)
    parser.add_argument("--csv", type=str, default=None, help="write Bloch CSV here")
    args = parser.parse_args()

    ss = generate_states(2, args.steps)
    for rep in ss.reports:
        print(
            f"step {rep.step}: raw={rep.raw_candidates} "
            f"candidates={rep.deduped_candidates} kept={rep.kept} "
            f"rejected={rep.rejected} new={rep.new_states} "
            f"orbits={rep.orbit_sizes} skipped_pairs={rep.skipped_pairs}"
        )
    print(f"total states: {len(ss)}")
    print("requirements:", verify_requirements(ss))

    if args.csv:
        lines = ["x,y,z,generation"]
        for ray in ss.sorted_states():
            x, y, z = bloch_xyz(ray)
            lines.append(f"{x:.12f},{y:.12f},{z:.12f},{ss.states[ray]}")
        Path(args.csv).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
