"""Batch front door: JSON in, JSON reports out.

One command per invocation wires the pipeline check -> parametrize -> solve ->
verify.  Reports are deterministic (sorted keys, stable formatting) and embed
the effective tolerances and evaluation grid so every run is reproducible
from its own output.

Exit status: 0 on success, 1 on a validation failure (violated precondition,
inadmissible parameter), 2 on I/O or schema errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import serialize
from .linalg import ToleranceConfig
from .measures import DiscreteMeasure, StieltjesFunctionRep, moments
from .sequences import (
    MomentSequence,
    classify,
    inverse_schur_transform,
    kth_schur_transform,
    schur_transform,
    stieltjes_parametrization,
    stieltjes_parametrization_via_schur,
)
from .transforms import (
    DirectParameter,
    InadmissibleParameterError,
    LftDomainError,
    ZeroParameter,
    default_parameter_grid,
    inverse_schur_stieltjes_eval,
    low_dim_parameter,
    schur_stieltjes_eval,
    solution_from_parameter,
    unique_solution,
)
from .verify import RecoveryConfig, validate_solution

COMMANDS = (
    "check",
    "parametrize",
    "transform",
    "inverse-transform",
    "solve",
    "unique",
    "verify",
    "measure-moments",
    "round-trip",
)


class ValidationFailure(Exception):
    """Precondition violated by otherwise well-formed input (exit status 1)."""


@dataclass
class JobSpec:
    """One parsed invocation: a single command plus its inputs and knobs."""

    command: str
    input: str
    output: str | None = None
    alpha: float | None = None
    grid: tuple = ()
    param: str = "zero"
    low_dim_rank: int | None = None
    head: str | None = None
    order: int | None = None
    ymax: float = 1e6
    rank_tol: float = 1e-10
    psd_tol: float = 1e-9
    eq_tol: float = 1e-9

    @property
    def tolerances(self) -> ToleranceConfig:
        return ToleranceConfig(self.rank_tol, self.psd_tol, self.eq_tol)


def parse_complex(token: str) -> complex:
    """Parse 'a+bi' notation ('i', '2i', '-1', '1+2i', ...)."""
    text = token.strip().replace("i", "j")
    try:
        return complex(text)
    except ValueError as exc:
        raise serialize.SchemaError(f"cannot parse complex number {token!r}") from exc


def parse_grid(text: str) -> tuple:
    points = tuple(parse_complex(tok) for tok in text.split(",") if tok.strip())
    if not points:
        raise serialize.SchemaError("empty evaluation grid")
    return points


def _grid_json(grid) -> list:
    return [serialize.complex_to_json(z) for z in grid]


def _samples(fn, grid) -> list:
    out = []
    for z in grid:
        out.append({"z": serialize.complex_to_json(z), "value": serialize.matrix_to_json(fn(z))})
    return out


def _load_sequence(job: JobSpec) -> MomentSequence:
    seq = serialize.json_to_moment_sequence(serialize.load_json(job.input))
    if job.alpha is not None and job.alpha != seq.alpha:
        seq = MomentSequence(job.alpha, seq.entries)
    return seq


def _build_parameter(job: JobSpec, seq: MomentSequence, cfg: ToleranceConfig):
    if job.param == "zero":
        return ZeroParameter(seq.q)
    payload = serialize.load_json(job.param)
    mu = serialize.json_to_measure(payload)
    dim = mu.atoms[0][1].shape[0] if mu.atoms else seq.q
    rep = StieltjesFunctionRep(np.zeros((dim, dim)), mu)
    if job.low_dim_rank is None:
        if dim != seq.q:
            raise ValidationFailure(
                f"direct parameter has dimension {dim}, sequence needs {seq.q}"
            )
        return DirectParameter(rep)
    q_last = stieltjes_parametrization(seq, cfg).last
    try:
        param = low_dim_parameter(q_last, rep, cfg)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    if param.rank != job.low_dim_rank:
        raise ValidationFailure(
            f"--low-dim-rank {job.low_dim_rank} does not match rank {param.rank} "
            "of the last parametrization entry"
        )
    return param


def _rel_gap(a, b) -> float:
    return float(np.linalg.norm(a - b)) / max(float(np.linalg.norm(a)), 1.0)


def run(job: JobSpec):
    """Execute one job; returns (exit_status, report dict)."""
    cfg = job.tolerances
    report = {"command": job.command, "tolerances": serialize.tolerances_to_json(cfg)}
    try:
        if job.command == "check":
            seq = _load_sequence(job)
            flags = classify(seq, cfg)
            report["classes"] = {
                "hankel_nonneg": flags.hankel_nonneg,
                "stieltjes_nonneg": flags.stieltjes_nonneg,
                "stieltjes_extendable": flags.stieltjes_extendable,
                "stieltjes_posdef": flags.stieltjes_posdef,
                "completely_degenerate": flags.completely_degenerate,
                "first_term_dominant": flags.first_term_dominant,
            }

        elif job.command == "parametrize":
            seq = _load_sequence(job)
            direct = stieltjes_parametrization(seq, cfg)
            chain = stieltjes_parametrization_via_schur(seq, cfg)
            gap = max(_rel_gap(direct[j], chain[j]) for j in range(len(direct)))
            report["direct"] = [serialize.matrix_to_json(direct[j]) for j in range(len(direct))]
            report["via_schur"] = [serialize.matrix_to_json(chain[j]) for j in range(len(chain))]
            report["agreement_gap"] = gap

        elif job.command == "transform":
            seq = _load_sequence(job)
            k = 1 if job.order is None else job.order
            if not 0 <= k <= seq.kappa:
                raise ValidationFailure(f"transform order {k} outside 0..{seq.kappa}")
            out = kth_schur_transform(seq, k, cfg)
            report["order"] = k
            report["sequence"] = serialize.moment_sequence_to_json(out)

        elif job.command == "inverse-transform":
            payload = serialize.load_json(job.input)
            t_seq = serialize.json_to_moment_sequence(payload)
            if job.head is None:
                raise ValidationFailure("inverse-transform needs --head (matrix file for A)")
            head = serialize.json_to_bare_matrix(serialize.load_json(job.head))
            alpha = job.alpha if job.alpha is not None else t_seq.alpha
            if head.shape != (t_seq.q, t_seq.q):
                raise ValidationFailure(
                    f"head matrix is {head.shape}, sequence entries are {t_seq.q} x {t_seq.q}"
                )
            out = inverse_schur_transform(list(t_seq.entries), head, alpha, cfg)
            report["sequence"] = serialize.moment_sequence_to_json(out)

        elif job.command in ("solve", "unique"):
            seq = _load_sequence(job)
            grid = job.grid or tuple(default_parameter_grid(seq.alpha)[:4])
            if job.command == "unique":
                try:
                    sol = unique_solution(seq, cfg)
                except ValueError as exc:
                    raise ValidationFailure(str(exc)) from exc
            else:
                param = _build_parameter(job, seq, cfg)
                try:
                    sol = solution_from_parameter(seq, param, cfg)
                except InadmissibleParameterError as exc:
                    raise ValidationFailure(str(exc)) from exc
            report["grid"] = _grid_json(grid)
            report["resolvent"] = serialize.matrix_polynomial_to_json(sol.resolvent)
            report["parameter_kind"] = sol.parameter.kind
            try:
                report["samples"] = _samples(sol, grid)
            except LftDomainError as exc:
                raise ValidationFailure(str(exc)) from exc

        elif job.command == "verify":
            seq = _load_sequence(job)
            param = _build_parameter(job, seq, cfg)
            try:
                sol = solution_from_parameter(seq, param, cfg)
            except InadmissibleParameterError as exc:
                raise ValidationFailure(str(exc)) from exc
            order = seq.kappa if job.order is None else min(job.order, seq.kappa)
            rec_cfg = RecoveryConfig(
                y_grid=tuple(np.logspace(2, np.log10(job.ymax), 9)),
                use_extrapolation=True,
            )
            ver = validate_solution(seq.truncated(order), sol, rec_cfg, cfg)
            report["y_grid"] = list(rec_cfg.y_grid)
            report["max_rel_error"] = ver.max_rel_error
            report["per_moment_rel_errors"] = list(ver.per_moment_rel_errors)
            report["recovered"] = serialize.moment_sequence_to_json(ver.recovered_moments)
            report["violations"] = [
                {"condition": name, "z": serialize.complex_to_json(z), "magnitude": mag}
                for name, z, mag in ver.property_violations
            ]
            report["diagnostics"] = [
                {
                    "order": d.order,
                    "nodes_used": list(d.nodes_used),
                    "error_estimate": d.error_estimate,
                    "noise_floor": d.noise_floor,
                    "resolved": d.resolved,
                }
                for d in ver.diagnostics
            ]
            report["growth_bound"] = ver.growth_bound

        elif job.command == "measure-moments":
            mu = serialize.json_to_measure(serialize.load_json(job.input))
            if job.order is None:
                raise ValidationFailure("measure-moments needs --order")
            out = moments(mu, job.order)
            report["sequence"] = serialize.moment_sequence_to_json(out)

        elif job.command == "round-trip":
            seq = _load_sequence(job)
            if seq.kappa < 1:
                raise ValidationFailure("round-trip needs at least two sequence entries")
            t = schur_transform(seq, cfg)
            back = inverse_schur_transform(list(t.entries), seq[0], seq.alpha, cfg)
            seq_gap = max(_rel_gap(seq[j], back[j]) for j in range(len(seq)))
            sol = solution_from_parameter(seq, ZeroParameter(seq.q), cfg, check=False)
            grid = job.grid or (seq.alpha + 1.3j, seq.alpha - 0.7 + 0.9j, seq.alpha - 2.0)

            def forward(w):
                return schur_stieltjes_eval(sol, seq[0], seq.alpha, w, cfg)

            fn_gap = 0.0
            for z in grid:
                back = inverse_schur_stieltjes_eval(forward, seq[0], seq.alpha, z, cfg)
                fn_gap = max(fn_gap, _rel_gap(sol(z), back))
            report["grid"] = _grid_json(grid)
            report["sequence_round_trip"] = {"max_rel_error": seq_gap}
            report["function_round_trip"] = {"max_rel_error": fn_gap}

        else:
            raise ValidationFailure(f"unknown command {job.command!r}")

    except ValidationFailure as exc:
        return 1, {"command": job.command, "error": str(exc)}
    return 0, report


def build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stieltjesmp",
        description="Truncated matricial half-line moment problems: check, parametrize, solve, verify.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="input JSON file (sequence or measure)")
    parser.add_argument("--output", help="write the JSON report here instead of stdout")
    parser.add_argument("--alpha", type=float, default=None, help="override the base point")
    parser.add_argument("--grid", default=None, help="comma list of complex points, e.g. 'i,2i,-1'")
    parser.add_argument("--param", default="zero", help="'zero' or a measure JSON file")
    parser.add_argument("--low-dim-rank", type=int, default=None, help="compress the parameter through rank r")
    parser.add_argument("--head", default=None, help="matrix JSON file (A for inverse-transform)")
    parser.add_argument("--order", type=int, default=None, help="transform iterate / moment order")
    parser.add_argument("--ymax", type=float, default=1e6, help="largest recovery ordinate")
    parser.add_argument("--rank-tol", type=float, default=1e-10)
    parser.add_argument("--psd-tol", type=float, default=1e-9)
    parser.add_argument("--eq-tol", type=float, default=1e-9)
    return parser


def job_from_args(args) -> JobSpec:
    return JobSpec(
        command=args.command,
        input=args.input,
        output=args.output,
        alpha=args.alpha,
        grid=parse_grid(args.grid) if args.grid else (),
        param=args.param,
        low_dim_rank=args.low_dim_rank,
        head=args.head,
        order=args.order,
        ymax=args.ymax,
        rank_tol=args.rank_tol,
        psd_tol=args.psd_tol,
        eq_tol=args.eq_tol,
    )


def main(argv=None) -> int:
    args = build_argparser().parse_args(argv)
    try:
        job = job_from_args(args)
        status, report = run(job)
    except serialize.SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = serialize.dump_json(report, job.output)
    if job.output is None:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
