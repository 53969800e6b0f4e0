#!/usr/bin/env python3
"""Solve an LP/MILP text file with HiGHS and print the result as JSON.

Used as the external solver behind DDDR_EXTERNAL_SOLVER, e.g.
    DDDR_EXTERNAL_SOLVER="python3 tools/highs_solve.py" dddr export-lp ...
"""
import json
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: highs_solve.py MODEL.lp", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 1e-10)
    h.setOptionValue("mip_abs_gap", 1e-9)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print(f"could not read {sys.argv[1]}", file=sys.stderr)
        return 1
    h.run()
    status = h.modelStatusToString(h.getModelStatus()).lower()
    out = {"status": status}
    if h.getModelStatus() == highspy.HighsModelStatus.kOptimal:
        lp = h.getLp()
        values = h.getSolution().col_value
        out["objective"] = h.getInfo().objective_function_value
        out["values"] = {name: values[k] for k, name in enumerate(lp.col_names_)}
    json.dump(out, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
