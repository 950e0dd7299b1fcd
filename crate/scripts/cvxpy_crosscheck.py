"""Solve an instance with cvxpy and compare against `densest solve`.

    python scripts/cvxpy_crosscheck.py instance.json [--bin target/release/densest]

Needs numpy and cvxpy (SCS or Clarabel). Not part of the Rust test suite.
"""

import argparse
import json
import subprocess
import sys

import cvxpy as cp
import numpy as np


def relaxation(inst):
    w = np.asarray(inst["weights"], dtype=float)
    k = inst["k"]
    if inst["type"] == "clique":
        cost = w
        blocks = [range(0, inst["n"])]
    else:
        m, n = inst["m"], inst["n"]
        cost = np.zeros((m + n, m + n))
        cost[:m, m:] = 0.5 * w
        cost[m:, :m] = 0.5 * w.T
        blocks = [range(0, m), range(m, m + n)]
    dim = cost.shape[0]
    x = cp.Variable((dim, dim), PSD=True)
    cons = [x >= 0]
    for b in blocks:
        sub = x[b.start:b.stop, b.start:b.stop]
        cons += [cp.trace(sub) == k, cp.sum(sub, axis=1) <= 1]
    prob = cp.Problem(cp.Maximize(cp.sum(cp.multiply(cost, x))), cons)
    prob.solve()
    return prob.value, x.value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("instance")
    ap.add_argument("--bin", default="target/release/densest")
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()

    with open(args.instance) as f:
        inst = json.load(f)
    value, x = relaxation(inst)
    out = subprocess.run([args.bin, "solve", args.instance], check=True, capture_output=True, text=True)
    ours = json.loads(out.stdout)
    gap = abs(value - ours["objective"]) / max(1.0, abs(value))
    print(f"cvxpy {value:.6f}  densest {ours['objective']:.6f}  rel gap {gap:.2e}")
    if ours.get("x") is not None:
        diff = np.abs(np.asarray(ours["x"]) - x).max()
        print(f"max |X_cvxpy - X_densest| = {diff:.2e}")
    sys.exit(0 if gap <= args.tol else 1)


if __name__ == "__main__":
    main()
