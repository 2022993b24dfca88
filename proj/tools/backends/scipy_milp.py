#!/usr/bin/env python3
"""MILP backend for `twoscvrp solve --backend`, built on scipy.optimize.milp (HiGHS).

Usage: scipy_milp.py MODEL.mps SOLUTION.out

Reads the free-field MPS written by twoscvrp, writes one `<name> <value>`
line per variable. Exit status: 0 solved, 2 infeasible, 3 time limit with a
solution, 4 time limit without one, 1 anything else. TWOSCVRP_TIME_LIMIT
(seconds) is honoured.
TWOSCVRP_SCIPY_PRESOLVE=0 turns HiGHS presolve off; some scipy releases
return suboptimal points with it on.
"""
import math
import os
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def read_mps(path):
    rows, row_sense, obj_row = {}, [], None
    cols, col_index = [], {}
    entries, cost, integer = [], [], []
    rhs = {}
    lb, ub = [], []
    section = None
    in_int = False
    with open(path) as f:
        for raw in f:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok
                if sense == "N":
                    obj_row = name
                else:
                    rows[name] = len(row_sense)
                    row_sense.append(sense)
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_int = tok[2] == "'INTORG'"
                    continue
                name = tok[0]
                if name not in col_index:
                    col_index[name] = len(cols)
                    cols.append(name)
                    cost.append(0.0)
                    integer.append(in_int)
                    lb.append(0.0)
                    ub.append(math.inf)
                j = col_index[name]
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == obj_row:
                        cost[j] += float(v)
                    else:
                        entries.append((rows[r], j, float(v)))
            elif section == "RHS":
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r != obj_row:
                        rhs[rows[r]] = float(v)
            elif section == "BOUNDS":
                kind, name = tok[0], tok[2]
                j = col_index[name]
                v = float(tok[3]) if len(tok) > 3 else 0.0
                if kind == "BV":
                    integer[j], lb[j], ub[j] = True, 0.0, 1.0
                elif kind == "LO":
                    lb[j] = v
                elif kind == "UP":
                    ub[j] = v
                elif kind == "FX":
                    lb[j] = ub[j] = v
                elif kind == "FR":
                    lb[j], ub[j] = -math.inf, math.inf
                elif kind == "MI":
                    lb[j] = -math.inf
                elif kind == "PL":
                    ub[j] = math.inf
                elif kind == "LI":
                    integer[j], lb[j] = True, v
                elif kind == "UI":
                    integer[j], ub[j] = True, v
                else:
                    raise ValueError("unsupported bound type " + kind)
            elif section == "RANGES":
                raise ValueError("RANGES not supported")
    m, n = len(row_sense), len(cols)
    if entries:
        r, c, v = zip(*entries)
    else:
        r, c, v = (), (), ()
    a = csr_matrix((v, (r, c)), shape=(m, n))
    b = np.array([rhs.get(i, 0.0) for i in range(m)])
    lo = np.where([s == "L" for s in row_sense], -np.inf, b)
    hi = np.where([s == "G" for s in row_sense], np.inf, b)
    return cols, np.array(cost), a, lo, hi, np.array(lb), np.array(ub), np.array(integer, dtype=int)


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 1
    cols, c, a, lo, hi, lb, ub, integrality = read_mps(argv[1])
    options = {"disp": False}
    if os.environ.get("TWOSCVRP_SCIPY_PRESOLVE", "1") == "0":
        options["presolve"] = False
    limit = os.environ.get("TWOSCVRP_TIME_LIMIT")
    if limit:
        options["time_limit"] = float(limit)
    constraints = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lb, ub), options=options)
    if res.status == 2:
        return 2
    if res.x is None:
        if res.status == 1:
            return 4
        print("backend: " + str(res.message), file=sys.stderr)
        return 1
    with open(argv[2], "w") as out:
        bound = getattr(res, "mip_dual_bound", None)
        if res.status != 0 and bound is not None and math.isfinite(bound):
            out.write("# bound %.17g\n" % bound)
        for name, v in zip(cols, res.x):
            out.write("%s %.17g\n" % (name, v))
    return 0 if res.status == 0 else 3


if __name__ == "__main__":
    sys.exit(main(sys.argv))
