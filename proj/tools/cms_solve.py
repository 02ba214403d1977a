#!/usr/bin/env python3
"""Solve an extended-DIMACS file with CryptoMiniSat (pycryptosat).

Prints SAT-competition style output: an `s` status line and, when
satisfiable, `v` lines terminated by 0. `x` lines are passed to the solver
as native XOR clauses.

    cms_solve.py [--threads N] FILE
"""

import argparse
import sys

import pycryptosat


def read_dimacs(path):
    clauses, xors = [], []
    num_vars = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    sys.exit(f"line {lineno}: malformed problem line")
                num_vars = int(parts[2])
                continue
            is_xor = line.startswith("x")
            lits = [int(t) for t in (line[1:] if is_xor else line).split()]
            if not lits or lits[-1] != 0:
                sys.exit(f"line {lineno}: clause not terminated by 0")
            lits = lits[:-1]
            if is_xor:
                parity = True
                for lit in lits:
                    if lit < 0:
                        parity = not parity
                xors.append(([abs(l) for l in lits], parity))
            else:
                clauses.append(lits)
    return num_vars, clauses, xors


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    num_vars, clauses, xors = read_dimacs(args.file)
    solver = pycryptosat.Solver(threads=args.threads)
    if num_vars:
        # Declares the variable range even when trailing variables are unused.
        solver.add_clause([num_vars, -num_vars])
    for c in clauses:
        solver.add_clause(c)
    for vars_, parity in xors:
        solver.add_xor_clause(vars_, parity)

    sat, model = solver.solve()
    if sat is None:
        print("s UNKNOWN")
        return 0
    if not sat:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model[v] else -v for v in range(1, num_vars + 1)]
    for i in range(0, len(lits), 10):
        print("v " + " ".join(str(l) for l in lits[i:i + 10]))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
