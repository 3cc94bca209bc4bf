"""Error rate of the positive-definiteness test against the smallest
eigenvalue and the polynomial degree.

For each ``lambda_min`` and degree ``n``, runs the tester on ``--instances``
random normalised matrices (spectrum in ``[lambda_min, 0.99]``) and reports
the fraction of wrong verdicts. ``eps`` defaults to ``2 |lambda_min|`` so
that ``lambda_min`` sits on the edge of the region where an answer is owed.

    python3 scripts/pd_demo.py --dim 5000 --lambda-mins 0.1 -0.1 0.01 -0.01 --degrees 50 200
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from chebtrace import test_pd
from chebtrace.recipes import pd_test_matrix


@dataclass
class PdDemoConfig:
    dim: int = 5000
    lambda_mins: list = field(default_factory=lambda: [0.1, -0.1, 0.01, -0.01])
    degrees: list = field(default_factory=lambda: [25, 50, 200])
    instances: int = 20
    m: int = 50
    block: int = 10


def run(cfg: PdDemoConfig):
    for lam in cfg.lambda_mins:
        eps = 2 * abs(lam)
        mats = [pd_test_matrix(cfg.dim, lam, block=cfg.block, seed=i).matrix
                for i in range(cfg.instances)]
        for n in cfg.degrees:
            wrong = sum(test_pd(A, eps, m=cfg.m, n=n, seed=i, assume_normalized=True).is_pd
                        != (lam > 0) for i, A in enumerate(mats))
            yield {"lambda_min": lam, "eps": eps, "n": n, "error_rate": wrong / cfg.instances}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    dflt = PdDemoConfig()
    ap.add_argument("--dim", type=int, default=dflt.dim)
    ap.add_argument("--lambda-mins", type=float, nargs="+", default=dflt.lambda_mins)
    ap.add_argument("--degrees", type=int, nargs="+", default=dflt.degrees)
    ap.add_argument("--instances", type=int, default=dflt.instances)
    ap.add_argument("--m", type=int, default=dflt.m)
    ap.add_argument("--block", type=int, default=dflt.block)
    cfg = PdDemoConfig(**vars(ap.parse_args()))
    w = csv.DictWriter(sys.stdout, fieldnames=["lambda_min", "eps", "n", "error_rate"])
    w.writeheader()
    for row in run(cfg):
        w.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
