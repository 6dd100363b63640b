"""Command-line front end.

Subcommands:

``classify``
    Verdict and evidence for one family point.
``scan``
    Grid classification, CSV rows or a JSON summary.
``lambda-min``
    Smallest line parameter at which the line operator becomes a safe
    witness, for a PPT start.
``witness``
    List the deployed witness battery or dump one member as JSON.
``horodecki``
    Walk the one-parameter line, reporting both parametrizations.
``verify``
    Replay the twelve-point verification battery; exit 1 on any failure.

Points are addressed by exactly one of three flag groups: ``--alpha
--beta --gamma`` (simplex coordinates), ``--b`` (the one-parameter line),
or ``--epsilon --gamma`` (coordinates on the positivity facet).  All
numeric output is printed with 12 significant digits.  Exit codes: 0
success, 2 invalid input, 1 failed verification.  Set the environment
variable ``MAGIC_SIMPLEX_LOG`` to a level name (e.g. ``INFO``) for
diagnostics on stderr.

For programmatic use, build a :class:`CommandConfig` and call
:func:`run`; invalid input raises ``ValueError`` instead of exiting.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import nullcontext
from dataclasses import dataclass, fields
from typing import Any, ContextManager, Sequence, TextIO

from .checks import run_all
from .family import (
    FamilyPoint,
    horodecki_classification,
    horodecki_point,
    plane_point,
    pt_min_eigenvalue,
    pyramid_margin,
)
from .qmat import matrix_to_json
from .regions import classify, grid_points, l_a, l_b, parse_grid, plane_grid_points, scan
from .witness import DEFAULT_SEED, deployed_witnesses, lambda_min

_FACET_DOMAIN_LIMIT = 2.0 / 3.0**0.5


def _fmt(x: float) -> str:
    return "%.12g" % (x + 0.0)  # adding 0.0 normalizes -0.0


def _json_round(value: Any) -> Any:
    """Round floats to 12 significant digits for JSON emission."""
    if isinstance(value, float):
        return float(_fmt(value))
    if isinstance(value, dict):
        return {k: _json_round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_round(v) for v in value]
    return value


def _configure_logging() -> None:
    level_name = os.environ.get("MAGIC_SIMPLEX_LOG")
    if not level_name:
        return
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        print(f"ignoring unknown MAGIC_SIMPLEX_LOG level {level_name!r}", file=sys.stderr)
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    pkg_logger = logging.getLogger("magicsimplex")
    pkg_logger.addHandler(handler)
    pkg_logger.setLevel(level)


# ---------------------------------------------------------------------------
# Configuration carrier
# ---------------------------------------------------------------------------

SUBCOMMANDS = ("classify", "scan", "lambda-min", "witness", "horodecki", "verify")


@dataclass(frozen=True)
class CommandConfig:
    """One resolved invocation: a subcommand plus its flag values.

    Fields not used by a given subcommand are simply ignored by it;
    :func:`run` raises ``ValueError`` for anything inconsistent (unknown
    subcommand, conflicting point-addressing flags, malformed grids).
    """

    subcommand: str
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    b: float | None = None
    epsilon: float | None = None
    grid: str | None = None
    plane: bool = False
    name: str | None = None
    only: str | None = None
    tol: float = 1e-8
    format: str = "text"
    out: str | None = None
    seed: int = DEFAULT_SEED
    threads: int = 1

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(
                f"unknown subcommand {self.subcommand!r} (one of {', '.join(SUBCOMMANDS)})"
            )
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


# ---------------------------------------------------------------------------
# Flag handling
# ---------------------------------------------------------------------------


def _add_point_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_argument_group(
        "point addressing (use exactly one group)",
        "--alpha/--beta/--gamma, or --b, or --epsilon with --gamma",
    )
    group.add_argument("--alpha", type=float, default=None)
    group.add_argument("--beta", type=float, default=None)
    group.add_argument("--gamma", type=float, default=None)
    group.add_argument("--b", type=float, default=None)
    group.add_argument("--epsilon", type=float, default=None)


def _resolve_point(cfg: CommandConfig) -> FamilyPoint:
    has_abc = cfg.alpha is not None or cfg.beta is not None
    if cfg.b is not None:
        if has_abc or cfg.epsilon is not None or cfg.gamma is not None:
            raise ValueError("--b conflicts with the other point-addressing flags")
        return horodecki_point(cfg.b)
    if cfg.epsilon is not None:
        if has_abc:
            raise ValueError("--epsilon/--gamma conflicts with --alpha/--beta")
        if cfg.gamma is None:
            raise ValueError("--epsilon requires --gamma")
        return plane_point(cfg.epsilon, cfg.gamma)
    if cfg.alpha is None or cfg.beta is None or cfg.gamma is None:
        raise ValueError(
            "address a point with --alpha/--beta/--gamma, --b, or --epsilon/--gamma"
        )
    return FamilyPoint(cfg.alpha, cfg.beta, cfg.gamma)


def _open_out(path: str | None) -> ContextManager[TextIO]:
    # stdout must survive the ``with`` block: this module is also driven
    # in-process (tests, other tools), not only as a one-shot subprocess.
    if path is None or path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _emit(out: TextIO, text: str) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_classify(cfg: CommandConfig) -> int:
    point = _resolve_point(cfg)
    row = classify(point)
    with _open_out(cfg.out) as out:
        if cfg.format == "csv":
            from .regions import CSV_HEADER

            _emit(out, CSV_HEADER)
            _emit(out, row.csv_row())
        elif cfg.format == "json":
            payload = {
                "alpha": point.alpha,
                "beta": point.beta,
                "gamma": point.gamma,
                "verdict": row.verdict.value,
                "pyramid_margin": row.pyramid_margin,
                "pt_min_eig": row.pt_min_eig,
                "witness_name": row.witness_name,
                "witness_value": row.witness_value,
                "polygon_member": row.polygon_member,
                "detail": row.detail,
            }
            _emit(out, json.dumps(_json_round(payload), indent=2))
        else:
            _emit(out, f"verdict: {row.verdict.value}")
            _emit(
                out,
                "point: alpha=%s beta=%s gamma=%s"
                % (_fmt(point.alpha), _fmt(point.beta), _fmt(point.gamma)),
            )
            _emit(out, f"pyramid_margin: {_fmt(row.pyramid_margin)}")
            if row.pt_min_eig is not None:
                _emit(out, f"pt_min_eig: {_fmt(row.pt_min_eig)}")
            if row.witness_name is not None:
                _emit(
                    out,
                    f"witness: {row.witness_name} value {_fmt(row.witness_value)}",
                )
            if row.polygon_member is not None:
                _emit(out, f"polygon_member: {str(row.polygon_member).lower()}")
            if row.detail:
                _emit(out, f"detail: {row.detail}")
    return 0


def _scan_points(cfg: CommandConfig):
    if cfg.grid is None:
        raise ValueError("scan requires --grid")
    specs = cfg.grid.split(",")
    if cfg.plane:
        if len(specs) != 2:
            raise ValueError("--plane expects --grid gamma0:gamma1:step,beta0:beta1:step")
        return plane_grid_points(specs[0], specs[1])
    if len(specs) != 3:
        raise ValueError(
            "--grid expects alpha0:alpha1:step,beta0:beta1:step,gamma0:gamma1:step"
        )
    return grid_points(specs[0], specs[1], specs[2])


def _cmd_scan(cfg: CommandConfig) -> int:
    points = _scan_points(cfg)
    result = scan(points, threads=cfg.threads)
    with _open_out(cfg.out) as out:
        if cfg.format == "json":
            gammas = sorted({p.gamma for p in points})
            samples = [
                {"gamma": g, "l_a": l_a(g), "l_b": l_b(g)}
                for g in gammas
                if abs(g) <= _FACET_DOMAIN_LIMIT
            ]
            payload = {
                "rows": len(result.rows),
                "counts": result.counts(),
                "boundary_samples": samples,
            }
            _emit(out, json.dumps(_json_round(payload), indent=2))
        else:
            for line in result.csv_lines():
                _emit(out, line)
    counts = ", ".join(f"{k}={v}" for k, v in sorted(result.counts().items()))
    print(f"scanned {len(result.rows)} points: {counts}", file=sys.stderr)
    return 0


def _cmd_lambda_min(cfg: CommandConfig) -> int:
    point = _resolve_point(cfg)
    value = lambda_min(point, tol=cfg.tol)
    with _open_out(cfg.out) as out:
        if cfg.format == "json":
            payload = {
                "alpha": point.alpha,
                "beta": point.beta,
                "gamma": point.gamma,
                "tol": cfg.tol,
                "lambda_min": value,
            }
            _emit(out, json.dumps(_json_round(payload), indent=2))
        elif value is None:
            _emit(out, "lambda_min: never feasible (degenerate line)")
        else:
            _emit(out, f"lambda_min: {_fmt(value)}")
    return 0


def _witness_payload(name: str) -> dict[str, Any]:
    for w in deployed_witnesses():
        if w.name == name:
            plane = w.plane
            lo, hi = w.candidate.a_interval
            return {
                "name": w.name,
                "matrix": matrix_to_json(w.candidate.matrix),
                "plane": {
                    "a_coeff": 1.0,
                    "b_coeff": -plane.beta_coeff,
                    "g_coeff": -plane.gamma_coeff,
                    "const": -plane.offset,
                },
                "trace_scale": plane.trace_scale,
                "feasible": w.candidate.feasible,
                "a_interval": [lo, hi],
                "weyl_coefficients": [
                    [n, m, value.real, value.imag]
                    for (n, m), value in sorted(w.candidate.coeffs.coeffs.items())
                ],
            }
    known = ", ".join(w.name for w in deployed_witnesses())
    raise ValueError(f"unknown witness name {name!r} (known: {known})")


def _cmd_witness(cfg: CommandConfig) -> int:
    with _open_out(cfg.out) as out:
        if cfg.name is None:
            for w in deployed_witnesses():
                plane = w.plane
                _emit(
                    out,
                    "%-4s alpha = %s beta + %s gamma + %s   (trace scale %s)"
                    % (
                        w.name,
                        _fmt(plane.beta_coeff),
                        _fmt(plane.gamma_coeff),
                        _fmt(plane.offset),
                        _fmt(plane.trace_scale),
                    ),
                )
            return 0
        payload = _witness_payload(cfg.name)
        _emit(out, json.dumps(_json_round(payload), indent=2))
    return 0


_HORODECKI_CSV_HEADER = "b,alpha,beta,gamma,pyramid_margin,pt_min_eig,classification"


def _horodecki_rows(b_values: Sequence[float]) -> list[tuple[float, FamilyPoint, float, float, str]]:
    rows = []
    for b in b_values:
        p = horodecki_point(b)
        rows.append(
            (
                b,
                p,
                pyramid_margin(p),
                pt_min_eigenvalue(p),
                classify(p).verdict.value,
            )
        )
    return rows


def _cmd_horodecki(cfg: CommandConfig) -> int:
    if (cfg.b is None) == (cfg.grid is None):
        raise ValueError("give exactly one of --b or --grid b0:b1:step")
    b_values = [cfg.b] if cfg.b is not None else parse_grid(cfg.grid)
    rows = _horodecki_rows(b_values)
    with _open_out(cfg.out) as out:
        if cfg.format == "json":
            payload = [
                {
                    "b": b,
                    "alpha": p.alpha,
                    "beta": p.beta,
                    "gamma": p.gamma,
                    "pyramid_margin": margin,
                    "pt_min_eig": eig,
                    "classification": verdict,
                    "published": horodecki_classification(b).value,
                }
                for b, p, margin, eig, verdict in rows
            ]
            _emit(out, json.dumps(_json_round(payload), indent=2))
        else:
            _emit(out, _HORODECKI_CSV_HEADER)
            for b, p, margin, eig, verdict in rows:
                _emit(
                    out,
                    ",".join(
                        (
                            _fmt(b),
                            _fmt(p.alpha),
                            _fmt(p.beta),
                            _fmt(p.gamma),
                            _fmt(margin),
                            _fmt(eig),
                            verdict,
                        )
                    ),
                )
    return 0


def _cmd_verify(cfg: CommandConfig) -> int:
    only = None
    if cfg.only:
        try:
            only = [int(tok) for tok in cfg.only.split(",")]
        except ValueError:
            raise ValueError(
                f"--only expects comma-separated integers, got {cfg.only!r}"
            ) from None
    results = run_all(seed=cfg.seed, only=only)
    with _open_out(cfg.out) as out:
        failures = 0
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            failures += 0 if r.passed else 1
            _emit(
                out,
                "[%s] %2d %-30s expected=%s computed=%s tol=%s"
                % (status, r.index, r.name, _fmt(r.expected), _fmt(r.computed), _fmt(r.tolerance)),
            )
            if r.detail:
                _emit(out, f"         {r.detail}")
        _emit(out, f"{len(results) - failures}/{len(results)} checks passed")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magicsimplex",
        description="Classify, scan, and verify the three-parameter two-qutrit family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="verdict and evidence for one point")
    _add_point_flags(p_classify)
    p_classify.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_classify.add_argument("--out", default=None)

    p_scan = sub.add_parser("scan", help="classify a grid of points")
    p_scan.add_argument("--grid", required=True, help="comma-separated lo:hi:step specs")
    p_scan.add_argument(
        "--plane",
        action="store_true",
        help="two-spec grid (gamma,beta) on the positivity facet",
    )
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--threads", type=int, default=1)
    p_scan.add_argument("--out", default=None)

    p_lambda = sub.add_parser(
        "lambda-min", help="first safe-witness parameter along the line to the center"
    )
    _add_point_flags(p_lambda)
    p_lambda.add_argument("--tol", type=float, default=1e-8)
    p_lambda.add_argument("--format", choices=("text", "json"), default="text")
    p_lambda.add_argument("--out", default=None)

    p_witness = sub.add_parser("witness", help="list or dump the deployed witnesses")
    p_witness.add_argument("--name", default=None, help="dump one witness as JSON")
    p_witness.add_argument("--out", default=None)

    p_horo = sub.add_parser("horodecki", help="walk the one-parameter line")
    p_horo.add_argument("--b", type=float, default=None)
    p_horo.add_argument("--grid", default=None, help="b0:b1:step")
    p_horo.add_argument("--format", choices=("csv", "json"), default="csv")
    p_horo.add_argument("--out", default=None)

    p_verify = sub.add_parser("verify", help="replay the verification battery")
    p_verify.add_argument("--only", default=None, help="comma-separated check indices")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--out", default=None)

    return parser


_DISPATCH = {
    "classify": _cmd_classify,
    "scan": _cmd_scan,
    "lambda-min": _cmd_lambda_min,
    "witness": _cmd_witness,
    "horodecki": _cmd_horodecki,
    "verify": _cmd_verify,
}


def run(config: CommandConfig) -> int:
    """Execute one invocation; returns the process exit status.

    0 on success, 1 when ``verify`` finds a failed check.  Invalid input
    raises ``ValueError`` (and unwritable output ``OSError``); the
    :func:`main` wrapper maps those to exit status 2.
    """
    return _DISPATCH[config.subcommand](config)


def _config_from_args(args: argparse.Namespace) -> CommandConfig:
    names = {f.name for f in fields(CommandConfig)} - {"subcommand"}
    values = {name: getattr(args, name) for name in names if hasattr(args, name)}
    return CommandConfig(subcommand=args.command, **values)


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(_config_from_args(args))
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
