"""Relative error against polynomial degree for trace-inverse, Estrada index
and nuclear norm, median over probe seeds.

    python3 scripts/sweep_degree.py --dim 2000 --degrees 5 10 15 20 25
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from chebtrace import estrada, infinity_norm, one_norm, schatten_norm, trace_inverse
from chebtrace.oracle import dense_singular_values, dense_spectrum
from chebtrace.recipes import nonsymmetric_recipe, random_regular_graph, spd_recipe


@dataclass
class DegreeSweepConfig:
    dim: int = 2000
    degrees: list = field(default_factory=lambda: [5, 10, 15, 20, 25, 30])
    m: int = 50
    seeds: int = 5
    matrix_seed: int = 1


def run(cfg: DegreeSweepConfig):
    d = cfg.dim
    A = spd_recipe(d, seed=cfg.matrix_seed)
    G = random_regular_graph(d, 10, seed=cfg.matrix_seed)
    M = nonsymmetric_recipe(d, seed=cfg.matrix_seed)
    smax = math.sqrt(one_norm(M) * infinity_norm(M))
    b = infinity_norm(A)
    cases = {
        "trace-inv": (float(np.sum(1 / dense_spectrum(A).eigenvalues)),
                      lambda n, s: trace_inverse(A, (0.1, b), m=cfg.m, n=n, seed=s).estimate),
        "estrada": (float(np.sum(np.exp(dense_spectrum(G).eigenvalues))),
                    lambda n, s: estrada(G, (-10.0, 10.0), m=cfg.m, n=n, seed=s).estimate),
        "nuclear": (float(np.sum(dense_singular_values(M))),
                    lambda n, s: schatten_norm(M, 1.0, 1e-4, smax, m=cfg.m, n=n, seed=s)),
    }
    for name, (exact, est) in cases.items():
        for n in cfg.degrees:
            errs = [abs(est(n, s) - exact) / abs(exact) for s in range(cfg.seeds)]
            yield {"function": name, "n": n, "median_rel_err": float(np.median(errs)),
                   "max_rel_err": float(np.max(errs))}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    dflt = DegreeSweepConfig()
    ap.add_argument("--dim", type=int, default=dflt.dim)
    ap.add_argument("--degrees", type=int, nargs="+", default=dflt.degrees)
    ap.add_argument("--m", type=int, default=dflt.m)
    ap.add_argument("--seeds", type=int, default=dflt.seeds)
    ap.add_argument("--matrix-seed", type=int, default=dflt.matrix_seed)
    cfg = DegreeSweepConfig(**vars(ap.parse_args()))
    w = csv.DictWriter(sys.stdout, fieldnames=["function", "n", "median_rel_err", "max_rel_err"])
    w.writeheader()
    for row in run(cfg):
        w.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
