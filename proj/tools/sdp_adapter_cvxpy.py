#!/usr/bin/env python3
"""External SDP solver adapter for gmeact.

Reads a conic program (gmeact-conic-v1 JSON) on stdin, solves it with
cvxpy, and writes a gmeact-solution-v1 JSON document on stdout.

Usage: sdp_adapter_cvxpy.py [--solver SCS|CLARABEL] [--tol 1e-8]
"""
import argparse
import json
import sys

import numpy as np


def read_matrix(obj):
    dims = obj.get("dims")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    n = int(round(np.sqrt(re.size)))
    return (re + 1j * im).reshape(n, n), dims


def write_matrix(m, dims):
    m = np.asarray(m, dtype=complex)
    return {"dims": list(dims), "re": m.real.ravel().tolist(), "im": m.imag.ravel().tolist()}


def transpose_permutation(dims, subsystems):
    """Sparse matrix P with vec(X^{T_M}) = P vec(X) (column-major vec)."""
    import scipy.sparse as sp

    dims = [int(d) for d in dims]
    n = int(np.prod(dims))
    idx = np.arange(n)
    digits = np.array(np.unravel_index(idx, dims))  # row-major, subsystem 0 most significant
    rows = []
    cols = []
    for i in range(n):
        for j in range(n):
            di = digits[:, i].copy()
            dj = digits[:, j].copy()
            for s in subsystems:
                di[s], dj[s] = dj[s], di[s]
            ni = int(np.ravel_multi_index(di, dims))
            nj = int(np.ravel_multi_index(dj, dims))
            # entry (ni, nj) of X lands at (i, j) of the transposed matrix
            rows.append(i + j * n)
            cols.append(ni + nj * n)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n * n, n * n))


def partial_transpose(expr, dims, subsystems):
    import cvxpy as cp

    n = expr.shape[0]
    perm = transpose_permutation(dims, subsystems)
    return cp.reshape(perm @ cp.vec(expr, order="F"), (n, n), order="F")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--solver", default="SCS")
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    import cvxpy as cp

    prog = json.load(sys.stdin)
    if prog.get("format") != "gmeact-conic-v1":
        json.dump({"format": "gmeact-solution-v1", "status": "error",
                   "message": "unsupported problem format"}, sys.stdout)
        return 1

    blocks = prog["blocks"]
    X = [cp.Variable((b["dim"], b["dim"]), hermitian=True) for b in blocks]
    block_dims = [b.get("dims") or [b["dim"]] for b in blocks]

    objective = 0
    for term in prog["objective"]:
        c, _ = read_matrix(term["C"])
        objective = objective + cp.real(cp.sum(cp.multiply(np.conj(c), X[term["block"]])))

    constraints = []
    for eq in prog["equalities"]:
        lhs = 0
        for term in eq["terms"]:
            a, _ = read_matrix(term["A"])
            lhs = lhs + cp.real(cp.sum(cp.multiply(np.conj(a), X[term["block"]])))
        constraints.append(lhs == eq["rhs"])

    for cone in prog["cones"]:
        expr = 0
        for term in cone["terms"]:
            t = term["coeff"] * X[term["block"]]
            if term["transpose"]:
                t = partial_transpose(t, cone["dims"], term["transpose"])
            expr = expr + t
        if cone.get("offset") is not None:
            d, _ = read_matrix(cone["offset"])
            expr = expr + d
        constraints.append(expr >> 0)

    problem = cp.Problem(cp.Minimize(objective), constraints)
    kwargs = {}
    if args.solver.upper() == "SCS":
        kwargs = {"eps": args.tol, "max_iters": 200000}
    elif args.solver.upper() == "CLARABEL":
        kwargs = {"tol_gap_abs": args.tol, "tol_gap_rel": args.tol,
                  "tol_feas": args.tol}
    problem.solve(solver=args.solver.upper(), **kwargs)

    status = {"optimal": "optimal", "optimal_inaccurate": "optimal",
              "infeasible": "infeasible", "infeasible_inaccurate": "infeasible"}
    out = {
        "format": "gmeact-solution-v1",
        "solver": args.solver.upper(),
        "status": status.get(problem.status, "max_iter"),
        "objective": float(problem.value) if problem.value is not None else None,
        "iterations": int(problem.solver_stats.num_iters or 0),
        "blocks": [write_matrix(x.value if x.value is not None else np.zeros(x.shape), d)
                   for x, d in zip(X, block_dims)],
    }
    json.dump(out, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
