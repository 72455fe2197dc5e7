#!/usr/bin/env python3
"""Census of group orders and scalar subgroups across dimensions.

Closes the shift/clock group and the Clifford group for each requested
dimension and prints the orders, the scalar subgroup size, and the
projective quotient, all from exact closures.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from finiteqm.qgroups import center_of, clifford_group, wh_group


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    parser.add_argument("--max-closure", type=int, default=1_000_000)
    args = parser.parse_args()

    print(f"{'N':>3} {'|WH|':>8} {'|CL|':>9} {'scalars':>8} {'|PCL|':>8} {'time':>7}")
    for n in args.dims:
        t0 = time.time()
        wh = wh_group(n, max_size=args.max_closure).order
        pcl = clifford_group(
            n, projective=True, store=False, max_size=args.max_closure
        ).order
        cl_table = clifford_group(n, store=False, max_size=args.max_closure)
        cl = cl_table.order
        scalars = cl // pcl
        elapsed = time.time() - t0
        print(f"{n:>3} {wh:>8} {cl:>9} {scalars:>8} {pcl:>8} {elapsed:>6.1f}s")


if __name__ == "__main__":
    main()
