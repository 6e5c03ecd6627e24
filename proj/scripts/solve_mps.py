#!/usr/bin/env python3
"""Independent MILP check: parse a fixed-format MPS file and solve it with
scipy's branch-and-cut (HiGHS). Prints `objective <value>` on success.

Usage: solve_mps.py model.mps
"""

import sys

import numpy as np
from scipy import optimize, sparse


def parse_mps(path):
    section = None
    obj_row = None
    rows = {}  # name -> (sense, index)
    row_order = []
    cols = {}  # name -> list[(row name or None for objective, coef)]
    col_order = []
    rhs = {}
    integral = set()
    in_integer = False

    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            fields = line.split()
            if section == "ROWS":
                sense, name = fields
                if sense == "N":
                    obj_row = name
                else:
                    if sense != "E":
                        raise ValueError(f"unsupported row sense {sense}")
                    rows[name] = len(row_order)
                    row_order.append(name)
            elif section == "COLUMNS":
                if len(fields) >= 3 and fields[1].startswith("'MARKER'"):
                    if fields[2] == "'INTORG'":
                        in_integer = True
                    elif fields[2] == "'INTEND'":
                        in_integer = False
                    continue
                name = fields[0]
                if name not in cols:
                    cols[name] = []
                    col_order.append(name)
                    if in_integer:
                        integral.add(name)
                for rname, value in zip(fields[1::2], fields[2::2]):
                    cols[name].append((rname, float(value)))
            elif section == "RHS":
                for rname, value in zip(fields[1::2], fields[2::2]):
                    rhs[rname] = float(value)
            elif section == "BOUNDS":
                kind, _, name = fields[:3]
                if kind != "BV":
                    raise ValueError(f"unsupported bound kind {kind}")
                if name not in integral:
                    raise ValueError(f"BV bound on non-integer column {name}")
            elif section in ("NAME", "ENDATA"):
                pass
            else:
                raise ValueError(f"unsupported section {section}")

    n = len(col_order)
    m = len(row_order)
    c = np.zeros(n)
    mat = sparse.lil_matrix((m, n))
    for j, name in enumerate(col_order):
        for rname, value in cols[name]:
            if rname == obj_row:
                c[j] = value
            else:
                mat[rows[rname], j] = value
    b = np.array([rhs.get(name, 0.0) for name in row_order])
    return c, mat.tocsc(), b, integral == set(col_order)


def main():
    if len(sys.argv) != 2:
        print("usage: solve_mps.py model.mps", file=sys.stderr)
        return 2
    c, mat, b, all_binary = parse_mps(sys.argv[1])
    if not all_binary:
        print("error: expected every column to be binary", file=sys.stderr)
        return 2

    res = optimize.milp(
        c,
        integrality=np.ones_like(c),
        bounds=optimize.Bounds(0.0, 1.0),
        constraints=optimize.LinearConstraint(mat, b, b),
    )
    if not res.success:
        print(f"error: solver failed: {res.message}", file=sys.stderr)
        return 1
    print(f"objective {res.fun!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
