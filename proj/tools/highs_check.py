#!/usr/bin/env python3
"""Solve an exported MPS file with HiGHS and print the result as JSON.

Objective values are divided by the integer scale recorded in the file's
header comment, so they are directly comparable with the exact solver.
"""

import argparse
import json
import re
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("mps")
    parser.add_argument("--time-limit", type=float, default=60.0)
    args = parser.parse_args()

    try:
        import highspy
    except ImportError:
        print(json.dumps({"error": "highspy is not installed"}))
        return 2

    with open(args.mps) as f:
        head = f.read(4096)
    match = re.search(r"objective scale (\d+)", head)
    scale = int(match.group(1)) if match else 1

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", args.time_limit)
    read = h.readModel(args.mps)
    if read == highspy.HighsStatus.kError:
        print(json.dumps({"error": "HiGHS rejected the file"}))
        return 2
    h.run()
    info = h.getInfo()
    has_solution = info.primal_solution_status == 2
    print(
        json.dumps(
            {
                "status": h.modelStatusToString(h.getModelStatus()),
                "has_solution": has_solution,
                "objective": info.objective_function_value / scale if has_solution else None,
                "dual_bound": info.mip_dual_bound / scale,
                "columns": h.getNumCol(),
                "rows": h.getNumRow(),
                "scale": scale,
            }
        )
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
