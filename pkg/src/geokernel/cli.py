"""Command-line interface and run reports.

Commands that decide or certify emit JSON (reports wrapped in a
deterministic envelope, certificates bare so the verifier can consume
them); tabular commands emit headered CSV with LF line endings.  Exit
codes: 0 success / PD / witness found, 2 not PSD (pd-check), 3 search
exhausted, 1 usage or numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from . import spaces as sp
from .certificates import (
    cert_from_json,
    cert_to_json,
    circulant_row,
    psd_decision,
    verify_certificate,
)
from .circle import circle_witness, lambda_profile, w_half
from .embeddings import embedding_for, verify_isometry, witness_for_target
from .partial_theta import (
    PartialThetaQuery,
    bound_rhs,
    leading_term,
    partial_theta,
)
from .precision import DOUBLE_DIGITS, number_to_json, resolve_digits
from .spectral import circulant_eigenvalues
from .stein import lambda_plus_set, probe

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_PSD = 2
EXIT_EXHAUSTED = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract reserves 2
    for not-PSD verdicts, so usage failures are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def _envelope(command: str, inputs: dict, outputs: dict, seed=None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
    }


def _emit_json(obj: dict, out_path: str | None = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header: list[str], rows: list[list], out_path: str | None = None) -> None:
    lines = [",".join(header)]
    lines += [",".join(str(cell) for cell in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(value, digits: int):
    """CSV cell: shortest round-trip float, or decimal string when wide."""
    encoded = number_to_json(value, digits)
    return repr(encoded) if isinstance(encoded, float) else encoded


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> _Parser:
    parser = _Parser(prog="geokernel", description=__doc__)
    parser.add_argument("--version", action="version", version=f"geokernel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pd-check", help="PSD verdict for a point-set file")
    p.add_argument("--points", required=True, help="point-set JSON file")
    p.add_argument("--lambda", dest="lam", type=str, required=True)
    p.add_argument("--space", help="optional space text; must match the file")
    p.add_argument("--precision", type=int)
    p.set_defaults(func=_cmd_pd_check)

    p = sub.add_parser("circle-spectrum", help="all circulant eigenvalues at (lambda, N)")
    p.add_argument("--lambda", dest="lam", type=str, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--precision", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_circle_spectrum)

    p = sub.add_parser("witness", help="non-PSD witness certificates")
    wsub = p.add_subparsers(dest="witness_kind", required=True, parser_class=_Parser)

    w = wsub.add_parser("circle", help="witness on the unit circle")
    w.add_argument("--lambda", dest="lam", type=str, required=True)
    w.add_argument("--max-n", type=int, default=512)
    w.add_argument("--precision", type=int)
    w.add_argument("--out")
    w.set_defaults(func=_cmd_witness_circle)

    w = wsub.add_parser("space", help="witness transferred to an embedding target")
    w.add_argument("--target", required=True)
    w.add_argument("--lambda", dest="lam", type=str, required=True)
    w.add_argument("--max-n", type=int, default=512)
    w.add_argument("--precision", type=int)
    w.add_argument("--out")
    w.set_defaults(func=_cmd_witness_space)

    p = sub.add_parser("lambda-profile", help="critical bandwidth per point count")
    p.add_argument("--n-list", required=True)
    p.add_argument("--precision", type=int, default=DOUBLE_DIGITS)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lambda_profile)

    p = sub.add_parser("theta", help="partial theta values on a parameter grid")
    p.add_argument("--mu", required=True, help="comma list")
    p.add_argument("--r", default="0", help="comma list")
    p.add_argument("--n", required=True, help="comma list")
    p.add_argument("--precision", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("bound-check", help="alternating eigenvalue vs its closed-form bound")
    p.add_argument("--mu", required=True)
    p.add_argument("--n-list", required=True)
    p.add_argument("--precision", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bound_check)

    p = sub.add_parser("stein-scan", help="probe the Stein-kernel bandwidth set")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stein_scan)

    p = sub.add_parser("embed-verify", help="max isometry deviation of a circle embedding")
    p.add_argument("--target", required=True)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_embed_verify)

    p = sub.add_parser("verify-certificate", help="recompute a certificate from raw data")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify_certificate)

    return parser


def _cmd_pd_check(args) -> int:
    with open(args.points, encoding="utf-8") as fh:
        data = json.load(fh)
    digits = args.precision
    space, points = sp.pointset_from_json(
        data, digits if digits is not None else DOUBLE_DIGITS
    )
    if args.space is not None and sp.parse_space(args.space) != space:
        raise ValueError(
            f"--space {args.space!r} does not match the file's space "
            f"{sp.space_to_json(space)}"
        )
    verdict, report, method = psd_decision(space, points, args.lam, digits)
    outputs = {
        "verdict": verdict.verdict,
        "min_eigenvalue": number_to_json(verdict.min_eigenvalue, report.precision_digits),
        "tolerance": verdict.tolerance,
        "method": method,
        "order": report.order,
        "precision_digits": report.precision_digits,
    }
    inputs = {
        "points_file": args.points,
        "lambda": args.lam,
        "space": sp.space_to_json(space),
        "precision": digits,
    }
    _emit_json(_envelope("pd-check", inputs, outputs))
    return EXIT_OK if verdict.verdict != "not_psd" else EXIT_NOT_PSD


def _cmd_circle_spectrum(args) -> int:
    digits = resolve_digits(args.precision)
    row = circulant_row(args.lam, args.n, digits)
    report = circulant_eigenvalues(row, digits)
    by_index = {}
    for pos, j in enumerate(report.fourier_indices):
        by_index[j] = report.eigenvalues[pos]
    rows = [[j, _fmt(by_index[j], digits)] for j in range(args.n)]
    _emit_csv(["j", "eigenvalue"], rows, args.out)
    return EXIT_OK


def _cmd_witness_circle(args) -> int:
    cert = circle_witness(args.lam, n_max=args.max_n, precision_digits=args.precision)
    if cert is None:
        _emit_json(
            {"found": False, "lambda": args.lam, "max_n": args.max_n,
             "schema_version": SCHEMA_VERSION}
        )
        return EXIT_EXHAUSTED
    _emit_json(cert_to_json(cert), args.out)
    return EXIT_OK


def _cmd_witness_space(args) -> int:
    target = sp.parse_space(args.target)
    cert = witness_for_target(
        target, args.lam, n_max=args.max_n, precision_digits=args.precision
    )
    if cert is None:
        _emit_json(
            {"found": False, "lambda": args.lam, "max_n": args.max_n,
             "target": sp.space_to_json(target), "schema_version": SCHEMA_VERSION}
        )
        return EXIT_EXHAUSTED
    _emit_json(cert_to_json(cert), args.out)
    return EXIT_OK


def _cmd_lambda_profile(args) -> int:
    rows = lambda_profile(_int_list(args.n_list), args.precision)
    table = [
        [row.n, repr(row.lambda_crit), repr(row.min_eig_at_probe)] for row in rows
    ]
    _emit_csv(["N", "lambda_crit", "min_eig_at_probe"], table, args.out)
    return EXIT_OK


def _cmd_theta(args) -> int:
    digits = resolve_digits(args.precision)
    rows = []
    for mu_text in args.mu.split(","):
        for r_text in args.r.split(","):
            for n in _int_list(args.n):
                result = partial_theta(
                    PartialThetaQuery(
                        mu=mu_text.strip(), r=r_text.strip(), n=n,
                        precision_digits=digits,
                    )
                )
                rows.append([
                    mu_text.strip(), r_text.strip(), n,
                    _fmt(result.value, digits),
                    _fmt(result.truncation_bound, digits),
                    digits,
                ])
    _emit_csv(["mu", "r", "N", "value", "truncation_bound", "precision"], rows, args.out)
    return EXIT_OK


def _cmd_bound_check(args) -> int:
    digits = resolve_digits(args.precision)
    mu = args.mu.strip()
    rows = []
    for n in _int_list(args.n_list):
        rows.append([
            n,
            _fmt(w_half(mu, n, digits), digits),
            _fmt(bound_rhs(mu, n, digits), digits),
            _fmt(leading_term(mu, n, digits), digits),
        ])
    _emit_csv(["N", "w_half", "bound_rhs", "leading_term"], rows, args.out)
    return EXIT_OK


def _cmd_stein_scan(args) -> int:
    report = probe(args.dim, args.lam, args.trials, args.points, args.seed)
    outputs = {
        "lambda": args.lam,
        "in_set": lambda_plus_set(args.dim).contains(args.lam),
        "witness": cert_to_json(report.witness) if report.witness else None,
        "witness_strategy": report.witness_strategy,
        "min_eig_seen": report.min_eig_seen,
        "trials_run": report.trials_run,
    }
    inputs = {
        "dim": args.dim,
        "lambda": args.lam,
        "trials": args.trials,
        "points": args.points,
        "seed": args.seed,
    }
    _emit_json(_envelope("stein-scan", inputs, outputs, seed=args.seed), args.out)
    return EXIT_OK if report.witness else EXIT_EXHAUSTED


def _cmd_embed_verify(args) -> int:
    target = sp.parse_space(args.target)
    emb = embedding_for(target)
    deviation = verify_isometry(emb, pair_count=args.pairs, seed=args.seed)
    _emit_csv(
        ["target", "pairs", "seed", "max_deviation"],
        [[args.target, args.pairs, args.seed, repr(deviation)]],
        args.out,
    )
    return EXIT_OK


def _cmd_verify_certificate(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        cert = cert_from_json(json.load(fh))
    result = verify_certificate(cert)
    digits = cert.precision_digits
    outputs = {
        "ok": result.ok,
        "recomputed": number_to_json(result.recomputed, digits),
        "stored": number_to_json(result.stored, digits),
        "detail": result.detail,
    }
    _emit_json(_envelope("verify-certificate", {"file": args.file}, outputs))
    return EXIT_OK if result.ok else EXIT_ERROR


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # numeric and IO failures map to exit 1
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
