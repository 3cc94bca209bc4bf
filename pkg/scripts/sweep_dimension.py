"""Log-determinant wall time and accuracy as the dimension grows.

Accuracy is checked against the dense oracle only where it is affordable
(``--oracle-max``). Output is one CSV row per dimension on stdout.

    python3 scripts/sweep_dimension.py --dims 10000 100000 1000000
"""

import argparse
import csv
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from chebtrace import infinity_norm, logdet_pd
from chebtrace.oracle import dense_spectrum
from chebtrace.recipes import spd_recipe


@dataclass
class SweepConfig:
    dims: list = field(default_factory=lambda: [1000, 10_000, 100_000])
    m: int = 50
    n: int = 25
    seed: int = 0
    row_nnz: int = 10
    oracle_max: int = 5000
    threads: int = 1


def run(cfg: SweepConfig):
    for d in cfg.dims:
        A = spd_recipe(d, row_nnz=cfg.row_nnz, seed=cfg.seed)
        res = logdet_pd(A, (0.1, infinity_norm(A)), m=cfg.m, n=cfg.n, seed=cfg.seed,
                        threads=cfg.threads)
        err = float("nan")
        if d <= cfg.oracle_max:
            exact = np.sum(np.log(dense_spectrum(A).eigenvalues))
            err = abs(res.estimate - exact) / abs(exact)
        yield {"d": d, "nnz": A.nnz, "estimate": res.estimate, "rel_err": err,
               "stderr": res.stderr, "wall_time_s": res.wall_time}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = SweepConfig()
    ap.add_argument("--dims", type=int, nargs="+", default=defaults.dims)
    for name in ("m", "n", "seed", "row_nnz", "oracle_max", "threads"):
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=getattr(defaults, name))
    cfg = SweepConfig(**vars(ap.parse_args()))
    print("# " + repr(asdict(cfg)), file=sys.stderr)
    w = None
    for row in run(cfg):
        if w is None:
            w = csv.DictWriter(sys.stdout, fieldnames=list(row))
            w.writeheader()
        w.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
