"""Command line front end.

Exit codes: 0 separable / verification passed, 1 I/O or parse error,
2 not PSD / verification failed, 3 block family outside the supported class.
"""

import argparse
import sys
from dataclasses import dataclass

from . import __version__
from .blocks import DEFAULT_TOL_COMMUTE, DEFAULT_TOL_NORMAL
from .errors import BlockSepError, ParseError
from .formats import (
    block_matrix_to_dict,
    dumps,
    load_block_matrix,
    load_json,
    matrix_from_json,
    parse_scalar,
)
from .generators import PolynomialSpec, circulant_constant, polynomial_family, power_toeplitz, random_instance
from .oracle import verify_decomposition, verify_witness
from .separability import (
    DEFAULT_TOL_PSD,
    NotPsd,
    Separable,
    SeparableDecomposition,
    coefficient_matrices,
    decompose,
    diagonal_bound_violations,
    necessary_condition,
    witness_from_dict,
)
from .simdiag import simultaneous_diagonalize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_PSD = 2
EXIT_HYPOTHESES = 3


@dataclass(frozen=True)
class RunConfig:
    tol_normal: float = DEFAULT_TOL_NORMAL
    tol_commute: float = DEFAULT_TOL_COMMUTE
    tol_psd: float = DEFAULT_TOL_PSD
    seed: int | None = None
    output_path: str | None = None

    def __post_init__(self):
        for name in ("tol_normal", "tol_commute", "tol_psd"):
            if not getattr(self, name) > 0:
                raise ParseError(f"--{name.replace('_', '-')} must be positive")

    @classmethod
    def from_args(cls, args):
        return cls(
            tol_normal=args.tol_normal,
            tol_commute=args.tol_commute,
            tol_psd=args.tol_psd,
            seed=getattr(args, "seed", None),
            output_path=getattr(args, "output", None),
        )


def _emit(text, path=None):
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _verdict_exit(verdict):
    if isinstance(verdict, Separable):
        return EXIT_OK
    if isinstance(verdict, NotPsd):
        return EXIT_NOT_PSD
    return EXIT_HYPOTHESES


def _run(t, config):
    return decompose(t, config.tol_normal, config.tol_commute, config.tol_psd)


def _not_psd_details(verdict):
    if verdict.vector is None:
        return {"reason": "not_hermitian", "hermiticity_defect": verdict.hermiticity_defect}
    return {"reason": "negative_eigenvalue", "witness": verdict.witness_dict(), "min_eigenvalues": verdict.min_eigenvalues}


def cmd_check(args):
    config = RunConfig.from_args(args)
    t = load_block_matrix(args.input)
    verdict = _run(t, config)
    out = {"verdict": verdict.verdict, "n": t.n, "d": t.d}
    if isinstance(verdict, Separable):
        joint = simultaneous_diagonalize(t, check=False)
        ms = coefficient_matrices(joint)
        passes, _ = necessary_condition(ms, config.tol_psd)
        out.update(
            {
                "terms": len(verdict.decomposition),
                "min_eigenvalues": verdict.min_eigenvalues,
                "joint_residual": joint.residual,
                "necessary_condition": passes,
                "diagonal_bound_flags": [list(v) for v in diagonal_bound_violations(ms)],
            }
        )
    elif isinstance(verdict, NotPsd):
        out.update(_not_psd_details(verdict))
    else:
        out["report"] = verdict.report.to_dict()
        if verdict.reason:
            out["reason"] = verdict.reason
    _emit(dumps(out))
    return _verdict_exit(verdict)


def cmd_decompose(args):
    config = RunConfig.from_args(args)
    t = load_block_matrix(args.input)
    verdict = _run(t, config)
    summary = {"verdict": verdict.verdict}
    payload = None
    if isinstance(verdict, Separable):
        payload = verdict.decomposition.to_dict()
        report = verify_decomposition(t, verdict.decomposition)
        summary.update(
            {
                "terms": len(verdict.decomposition),
                "groups": len(verdict.decomposition.regroup()),
                "verification": report.to_dict(),
            }
        )
    elif isinstance(verdict, NotPsd):
        if verdict.vector is not None:
            payload = verdict.witness_dict()
            summary["witness_verified"] = verify_witness(t, verdict.vector, verdict.value)
        summary.update(_not_psd_details(verdict))
    else:
        summary["report"] = verdict.report.to_dict()
        if verdict.reason:
            summary["reason"] = verdict.reason

    if payload is not None and config.output_path is not None:
        _emit(dumps(payload), config.output_path)
        summary["output"] = config.output_path
        _emit(dumps(summary))
    elif payload is not None:
        _emit(dumps(payload))
        sys.stderr.write(dumps(summary) + "\n")
    else:
        _emit(dumps(summary))
    return _verdict_exit(verdict)


def _param(params, key, kind):
    if not isinstance(params, dict) or key not in params:
        raise ParseError(f"{kind} parameters: missing field '{key}'")
    return params[key]


def _int_param(params, key, kind):
    value = _param(params, key, kind)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(f"field '{key}': expected a positive integer, got {value!r}")
    return value


def _polynomial_grid(data):
    if not isinstance(data, list) or not data or any(not isinstance(row, list) or len(row) != len(data) for row in data):
        raise ParseError("field 'polynomials': expected a square grid of coefficient lists")
    grid = []
    for i, row in enumerate(data):
        out_row = []
        for j, coeffs in enumerate(row):
            field = f"polynomials[{i}][{j}]"
            if not isinstance(coeffs, list) or not coeffs:
                raise ParseError(f"field '{field}': expected a non-empty coefficient list")
            out_row.append(PolynomialSpec([parse_scalar(c, field) for c in coeffs]))
        grid.append(out_row)
    return grid


def cmd_generate(args):
    config = RunConfig.from_args(args)
    params = load_json(args.params) if args.params else {}
    kind = args.kind
    seed = None
    if kind == "circulant":
        a = matrix_from_json(_param(params, "A", kind), "A")
        d = args.d if args.d is not None else _int_param(params, "d", kind)
        t = circulant_constant(a, d)
    elif kind == "power-toeplitz":
        b = matrix_from_json(_param(params, "B", kind), "B")
        n = args.n if args.n is not None else _int_param(params, "n", kind)
        t = power_toeplitz(b, n)
    elif kind == "polynomial":
        b = matrix_from_json(_param(params, "B", kind), "B")
        t = polynomial_family(b, _polynomial_grid(_param(params, "polynomials", kind)))
    else:
        seed = config.seed if config.seed is not None else params.get("seed", 0)
        n = args.n if args.n is not None else params.get("n")
        d = args.d if args.d is not None else params.get("d")
        t = random_instance(seed, n=n, d=d).t
    meta = {"kind": kind, "params": params, "seed": seed}
    _emit(dumps(block_matrix_to_dict(t, meta)), config.output_path)
    return EXIT_OK


def cmd_verify(args):
    t = load_block_matrix(args.matrix)
    artifact = load_json(args.artifact)
    if isinstance(artifact, dict) and "terms" in artifact:
        try:
            decomposition = SeparableDecomposition.from_dict(artifact)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{args.artifact}: malformed decomposition (missing {exc})") from None
        report = verify_decomposition(t, decomposition, args.tol)
        out = {"kind": "decomposition", **report.to_dict()}
        passed = report.passed
    elif isinstance(artifact, dict) and "vector" in artifact:
        try:
            vector, value, k = witness_from_dict(artifact)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{args.artifact}: malformed witness (missing {exc})") from None
        passed = verify_witness(t, vector, value, args.tol)
        out = {"kind": "witness", "passed": passed, "claimed": value, "k": k}
    else:
        raise ParseError(f"{args.artifact}: expected a decomposition ('terms') or a witness ('vector')")
    _emit(dumps(out))
    return EXIT_OK if passed else EXIT_NOT_PSD


def _add_tolerances(p):
    p.add_argument("--tol-normal", type=float, default=DEFAULT_TOL_NORMAL, help="relative normality tolerance")
    p.add_argument("--tol-commute", type=float, default=DEFAULT_TOL_COMMUTE, help="relative commutator tolerance")
    p.add_argument("--tol-psd", type=float, default=DEFAULT_TOL_PSD, help="relative PSD tolerance")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blocksep",
        description="Separability of block matrices with normal, commuting blocks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide separability and print a JSON verdict")
    p.add_argument("input")
    _add_tolerances(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="emit a separable decomposition or a witness")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    _add_tolerances(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="emit an example block matrix")
    p.add_argument("kind", choices=["circulant", "power-toeplitz", "polynomial", "random"])
    p.add_argument("params", nargs="?", help="JSON parameter file")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    _add_tolerances(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a decomposition or witness against its matrix")
    p.add_argument("matrix")
    p.add_argument("artifact")
    p.add_argument("--tol", type=float, default=1e-9, help="relative tolerance for the dense checks")
    _add_tolerances(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlockSepError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
