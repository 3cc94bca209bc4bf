"""Command-line front end.

Every subcommand prints one report (JSON by default, or a CSV header plus one
row). Exit status: 0 success, 1 usage error, 2 input or format error,
3 NOT_PD from ``test-pd``, 4 numerical precondition violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import secrets
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from . import funcs, recipes
from .errors import MatrixMarketError, PreconditionError
from .linop import (
    SparseMatrix,
    SpectralInterval,
    gershgorin_interval,
    infinity_norm,
    load_matrix_market,
    one_norm,
    save_matrix_market,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NOT_PD = 3
EXIT_PRECONDITION = 4


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    """One command's result; field order is the JSON key order."""

    function: str
    estimate: Optional[float]
    m: Optional[int]
    n: Optional[int]
    interval: Optional[list]
    seed: Optional[object]
    sample_std: Optional[float]
    wall_time_ms: Optional[float]
    matrix: Optional[dict]
    plan: Optional[dict]
    verdict: Optional[str]
    threshold: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        obj = json.loads(text)
        names = [f.name for f in fields(cls)]
        return cls(**{k: obj.get(k) for k in names})

    def flat(self) -> dict:
        out = {}
        for key, value in self.to_dict().items():
            if key == "interval":
                a, b = value if value is not None else (None, None)
                out["interval.a"], out["interval.b"] = a, b
            elif key == "matrix":
                for sub in ("path", "dim", "nnz"):
                    out[f"matrix.{sub}"] = None if value is None else value.get(sub)
            elif key == "plan":
                for sub in ("rho", "U", "L"):
                    out[f"plan.{sub}"] = None if value is None else value.get(sub)
            else:
                out[key] = value
        return out

    def to_csv(self) -> str:
        row = self.flat()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(row.keys())
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v)
                    for v in row.values()])
        return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


# ----------------------------------------------------------------------------- argument types

def _seed(text: str):
    if text == "entropy":
        return secrets.randbits(63)
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'entropy', got {text!r}")


def _pair(text: str):
    """``"auto"``, ``"a,auto"`` or ``"a,b"``; ``None`` stands for auto."""
    if text == "auto":
        return (None, None)
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', 'a,auto' or 'auto', got {text!r}")
    try:
        a = float(parts[0])
        b = None if parts[1].strip() == "auto" else float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad interval {text!r}")
    return (a, b)


def _threads(text: str):
    k = int(text)
    return None if k <= 0 else k


def _add_common(p: argparse.ArgumentParser, matrix=True):
    if matrix:
        p.add_argument("--matrix", required=True, help="Matrix Market file")
    p.add_argument("--m", type=int, default=None, help="number of probe vectors (default 50)")
    p.add_argument("--n", type=int, default=None, help="polynomial degree (default 25)")
    p.add_argument("--seed", type=_seed, default=0, help="integer or 'entropy'")
    p.add_argument("--probes", choices=["rademacher", "gaussian"], default="rademacher")
    p.add_argument("--threads", type=_threads, default=None,
                   help="probe worker threads (default all cores)")
    p.add_argument("--eps", type=float, default=None,
                   help="take m, n from the planner for this relative accuracy")
    p.add_argument("--zeta", type=float, default=0.1, help="planner failure probability")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chebtrace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("logdet", help="log det A for symmetric positive definite A")
    _add_common(p)
    p.add_argument("--interval", type=_pair, default=(None, None),
                   help="eigenvalue bounds 'a,b', 'a,auto' or 'auto'")

    p = sub.add_parser("logdet-general", help="log|det C| for square non-singular C")
    _add_common(p)
    p.add_argument("--sigma", type=_pair, required=True,
                   help="singular value bounds 'smin,smax' or 'smin,auto'")

    p = sub.add_parser("trace-inv", help="tr(A^-1) for symmetric positive definite A")
    _add_common(p)
    p.add_argument("--interval", type=_pair, default=(None, None))

    p = sub.add_parser("estrada", help="Estrada index of a graph adjacency matrix")
    _add_common(p)
    p.add_argument("--interval", type=_pair, default=None,
                   help="default [-D, D] with D the largest absolute row sum")

    p = sub.add_parser("schatten", help="Schatten p-norm")
    _add_common(p)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--sigma", type=_pair, required=True,
                   help="singular value bounds 'smin,smax' or 'smin,auto'")

    p = sub.add_parser("test-pd", help="property test of positive definiteness")
    _add_common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--assume-normalized", action="store_true",
                   help="spectrum already inside [-1, 1]; skip power iteration")

    p = sub.add_parser("plan", help="theorem-driven m and n")
    p.add_argument("--function", required=True,
                   choices=["logdet", "trace-inv", "estrada", "schatten", "test-pd"])
    p.add_argument("--interval", type=_pair, default=None)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("gen", help="write a synthetic matrix")
    p.add_argument("--recipe", required=True,
                   choices=["spd", "nonsymmetric", "regular-graph", "pd-test"])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--row-nnz", type=int, default=10)
    p.add_argument("--margin", type=float, default=0.1)
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--lambda-min", type=float, default=0.01)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    return parser


# ----------------------------------------------------------------------------- helpers

_PLAN_KIND = {
    "logdet": funcs.LOGDET,
    "logdet-general": funcs.LOGDET,
    "trace-inv": funcs.TRACE_INVERSE,
    "estrada": funcs.ESTRADA,
    "schatten": funcs.SCHATTEN,
    "test-pd": funcs.PD_TEST,
}


def _resolve_eigen_interval(A: SparseMatrix, pair) -> SpectralInterval:
    a, b = pair
    if a is None:
        return gershgorin_interval(A)
    if b is None:
        b = infinity_norm(A)
    return SpectralInterval(a, b)


def _resolve_sigma(A: SparseMatrix, pair) -> SpectralInterval:
    a, b = pair
    if a is None:
        raise UsageError("--sigma needs an explicit lower bound")
    if b is None:
        b = math.sqrt(one_norm(A) * infinity_norm(A))
    return SpectralInterval(a, b)


def _matrix_meta(path, A: SparseMatrix) -> dict:
    return {"path": str(path), "dim": A.dim_rows if A.dim_rows == A.dim_cols else list(A.shape),
            "nnz": A.nnz}


def _plan_dict(plan) -> Optional[dict]:
    if plan is None:
        return None
    return {"rho": plan.rho, "U": plan.U, "L": plan.L}


def _kind_for(command: str, p: float = 1.0, eps=None):
    tag = _PLAN_KIND[command]
    if tag == funcs.SCHATTEN:
        return funcs.SpectralFunctionKind.schatten(p)
    if tag == funcs.PD_TEST:
        return funcs.SpectralFunctionKind.pd_test(eps)
    return funcs.SpectralFunctionKind(tag)


def _m_n(args, plan):
    m = args.m if args.m is not None else (plan.m if plan else 50)
    n = args.n if args.n is not None else (plan.n if plan else 25)
    return m, n


def _estimate_report(name, args, A, interval, res, plan) -> RunReport:
    return RunReport(
        function=name,
        estimate=float(res.estimate),
        m=res.m,
        n=res.n,
        interval=[float(interval.a), float(interval.b)],
        seed=args.seed,
        sample_std=float(res.sample_std),
        wall_time_ms=res.wall_time * 1e3,
        matrix=_matrix_meta(args.matrix, A),
        plan=_plan_dict(plan),
        verdict=None,
    )


# ----------------------------------------------------------------------------- commands

def _run_estimator(args) -> tuple[RunReport, int]:
    A = load_matrix_market(args.matrix)
    cmd = args.command
    opts = dict(seed=args.seed, distribution=args.probes, threads=args.threads)

    if cmd in ("logdet", "trace-inv"):
        interval = _resolve_eigen_interval(A, args.interval)
    elif cmd == "estrada":
        interval = (SpectralInterval(-infinity_norm(A), infinity_norm(A))
                    if args.interval is None else _resolve_eigen_interval(A, args.interval))
    elif cmd in ("logdet-general", "schatten"):
        interval = _resolve_sigma(A, args.sigma)
    else:
        interval = None

    plan = None
    if args.eps is not None and cmd != "test-pd":
        kind = _kind_for(cmd, getattr(args, "p", 1.0))
        plan_interval = interval
        if cmd == "logdet-general":
            plan_interval = SpectralInterval(interval.a**2, interval.b**2)
        plan = funcs.plan_parameters(kind, plan_interval, args.eps, args.zeta, d=A.dim_cols)
    m, n = _m_n(args, plan)

    if cmd == "logdet":
        res = funcs.logdet_pd(A, interval, m=m, n=n, **opts)
    elif cmd == "trace-inv":
        res = funcs.trace_inverse(A, interval, m=m, n=n, **opts)
    elif cmd == "estrada":
        res = funcs.estrada(A, interval, m=m, n=n, **opts)
    elif cmd == "logdet-general":
        res = funcs.logdet_general(A, interval.a, interval.b, m=m, n=n, **opts)
    elif cmd == "schatten":
        res = funcs.schatten_power_sum(A, args.p, interval.a, interval.b, m=m, n=n, **opts)
        if res.estimate < 0:
            raise ArithmeticError(f"negative estimate {res.estimate} of ||M||_p^p")
        # sample_std stays that of the ||M||_p^p samples
        report = _estimate_report("schatten", args, A, interval, res, plan)
        report.estimate = res.estimate ** (1.0 / args.p)
        return report, EXIT_OK
    else:  # test-pd
        v = funcs.test_pd(A, args.epsilon, m=m, n=n, assume_normalized=args.assume_normalized,
                          **opts)
        report = _estimate_report("test-pd", args, A, SpectralInterval(-1.0, 1.0), v.result, None)
        report.verdict = v.verdict
        report.threshold = v.threshold
        return report, (EXIT_OK if v.is_pd else EXIT_NOT_PD)
    return _estimate_report(cmd, args, A, interval, res, plan), EXIT_OK


def _run_plan(args) -> tuple[RunReport, int]:
    kind = _kind_for(args.function, args.p, args.eps if args.function == "test-pd" else None)
    if args.function == "test-pd":
        interval = SpectralInterval(-1.0, 1.0)
        if args.dim is None:
            raise UsageError("plan --function test-pd needs --dim")
    else:
        if args.interval is None or None in args.interval:
            raise UsageError("plan needs an explicit --interval a,b")
        interval = SpectralInterval(*args.interval)
    plan = funcs.plan_parameters(kind, interval, args.eps, args.zeta, d=args.dim)
    report = RunReport(function=args.function, estimate=None, m=plan.m, n=plan.n,
                       interval=[interval.a, interval.b], seed=None, sample_std=None,
                       wall_time_ms=None, matrix=None, plan=_plan_dict(plan), verdict=None)
    return report, EXIT_OK


def _run_gen(args) -> tuple[RunReport, int]:
    d = args.dim
    eigen = None
    if args.recipe == "spd":
        A = recipes.spd_recipe(d, row_nnz=args.row_nnz, margin=args.margin, seed=args.seed)
        eigen = [args.margin, infinity_norm(A)]
    elif args.recipe == "nonsymmetric":
        A = recipes.nonsymmetric_recipe(d, row_nnz=args.row_nnz, seed=args.seed)
    elif args.recipe == "regular-graph":
        A = recipes.random_regular_graph(d, degree=args.degree, seed=args.seed)
        eigen = [-float(args.degree), float(args.degree)]
    else:
        A = recipes.pd_test_matrix(d, args.lambda_min, seed=args.seed).matrix
        eigen = [args.lambda_min, 0.99]
    save_matrix_market(args.out, A, comment=f"chebtrace gen --recipe {args.recipe} "
                                            f"--dim {d} --seed {args.seed}")
    report = RunReport(function=f"gen:{args.recipe}", estimate=None, m=None, n=None,
                       interval=eigen, seed=args.seed, sample_std=None, wall_time_ms=None,
                       matrix=_matrix_meta(args.out, A), plan=None, verdict=None)
    return report, EXIT_OK


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    """Run one command; returns the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "plan":
            report, status = _run_plan(args)
        elif args.command == "gen":
            report, status = _run_gen(args)
        else:
            report, status = _run_estimator(args)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except (MatrixMarketError, OSError) as exc:
        print(f"chebtrace: input error: {exc}", file=err)
        return EXIT_INPUT
    except (PreconditionError, ArithmeticError) as exc:
        print(f"chebtrace: precondition violated: {exc}", file=err)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"chebtrace: error: {exc}", file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out.write(report.to_csv() if args.format == "csv" else report.to_json() + "\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
