"""Command-line front end.

Exit codes: 0 verified / success, 2 input or validation error, 3 invariant
violation (a kernel bug signal, never a property of valid input).  All
output is deterministic for a fixed command line, input files, and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    DetcsError,
    InequalityViolation,
    MatrixParseError,
    NotHermitian,
    NotPositiveDefinite,
    OracleError,
    RankDeficient,
    WrongRegime,
)
from .fuzz import ENSEMBLES, FuzzConfig, FuzzSummary, run_fuzz
from .inequality import (
    CLAUSE_TEXT,
    CaseTag,
    classify_case,
    column_norm_profile,
    det_correlation,
    enforce_equality_contract,
    gram,
    verify_inequality,
    whitened_pair,
)
from .linalg import SubspaceBasis, cholesky_hpd, log_det, qr_thin
from .matrixio import load_matrix, save_matrix
from .oracles import COFACTOR_MAX_N, det_cofactor, principal_angle_cosines


def _fmt(x: float) -> str:
    return repr(float(x))


def _load_weight(path):
    return cholesky_hpd(load_matrix(path))


def _check_gram_dets(a, b, m_fac) -> None:
    """Cross-check the LU determinant of each Gram product against the
    cofactor oracle.  Skipped silently above the oracle's size guard."""
    products = (gram(a, b, m_fac), gram(a, a, m_fac), gram(b, b, m_fac))
    for mat in products:
        if mat.shape[0] > COFACTOR_MAX_N:
            continue
        lu = log_det(mat)
        cof = det_cofactor(mat)
        if lu.zero:
            scale = max(1.0, float(abs(mat).max())) ** mat.shape[0]
            if abs(cof) > 1e-8 * scale:
                raise OracleError(
                    f"LU flags a zero determinant but the cofactor oracle gives {cof!r}"
                )
            continue
        if abs(lu.value() - cof) > 1e-9 * abs(cof):
            raise OracleError(
                f"LU determinant {lu.value()!r} disagrees with cofactor oracle {cof!r}"
            )


def _check_correlation(a, b, m_fac, correlation: float) -> None:
    """Cross-check |det(Qa*Qb)| against the product of Jacobi principal-angle
    cosines."""
    if m_fac is not None:
        a, b = whitened_pair(a, b, m_fac)
    qa = SubspaceBasis(qr_thin(a).q)
    qb = SubspaceBasis(qr_thin(b).q)
    angles = principal_angle_cosines(qa, qb)
    product = angles.correlation()
    if abs(product - correlation) > 1e-9:
        raise OracleError(
            f"cosine product {product!r} disagrees with correlation {correlation!r}"
        )


def cmd_verify(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    m_fac = _load_weight(args.m) if args.m else None
    report = verify_inequality(a, b, m_fac, tol=args.tol)
    enforce_equality_contract(report)
    if args.check:
        _check_gram_dets(a, b, m_fac)
        if report.correlation is not None:
            _check_correlation(a, b, m_fac, report.correlation)
    if args.json:
        print(json.dumps(_report_record(report), sort_keys=True))
        return 0
    print(f"case: {report.case_tag.value}")
    print(f"clause: {CLAUSE_TEXT[report.case_tag]}")
    print(f"lhs log |det(A*MB)|^2: {_log_text(report.lhs_log)}")
    print(f"rhs log det(A*MA) det(B*MB): {_log_text(report.rhs_log)}")
    print(f"relative gap: {_fmt(report.relative_gap)}")
    if report.correlation is not None:
        print(f"correlation: {_fmt(report.correlation)}")
    print(f"equality: {'yes' if report.equality else 'no'} (tol {_fmt(report.tol_used)})")
    return 0


def _log_text(d) -> str:
    if d.zero:
        return "zero"
    return _fmt(d.log_magnitude)


def _report_record(report) -> dict:
    def logdet_record(d):
        if d.zero:
            return {"zero": True, "log_magnitude": None, "phase": None}
        return {
            "zero": False,
            "log_magnitude": float(d.log_magnitude),
            "phase": [float(d.phase.real), float(d.phase.imag)],
        }

    return {
        "case": report.case_tag.value,
        "equality": report.equality,
        "relative_gap": float(report.relative_gap),
        "correlation": None if report.correlation is None else float(report.correlation),
        "lhs": logdet_record(report.lhs_log),
        "rhs": logdet_record(report.rhs_log),
        "tol": float(report.tol_used),
    }


def cmd_correlate(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    m_fac = _load_weight(args.m) if args.m else None
    correlation = det_correlation(a, b, m_fac)
    work_a, work_b = (a, b) if m_fac is None else whitened_pair(a, b, m_fac)
    qa = SubspaceBasis(qr_thin(work_a).q)
    qb = SubspaceBasis(qr_thin(work_b).q)
    profile = column_norm_profile(qa, qb)
    print(f"correlation: {_fmt(correlation)}")
    print("column norms: " + " ".join(_fmt(x) for x in profile))
    if args.check:
        angles = principal_angle_cosines(qa, qb)
        print("oracle cosines: " + " ".join(_fmt(c) for c in angles.cosines))
        product = angles.correlation()
        print(f"oracle product: {_fmt(product)}")
        if abs(product - correlation) > 1e-9:
            raise OracleError(
                f"cosine product {product!r} disagrees with correlation {correlation!r}"
            )
    return 0


def cmd_classify(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    m_fac = _load_weight(args.m) if args.m else None
    tag = classify_case(a, b, m_fac, tol=args.subspace_tol)
    print(tag.value)
    print(f"clause: {CLAUSE_TEXT[tag]}")
    return 0


def cmd_fuzz(args) -> int:
    seed = args.seed
    env_seed = os.environ.get("DETCS_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ValueError(f"DETCS_SEED must be an integer, got {env_seed!r}")
    ensembles = tuple(ENSEMBLES)
    if args.ensembles:
        ensembles = tuple(name.strip() for name in args.ensembles.split(",") if name.strip())
    config = FuzzConfig(
        trials=args.trials,
        seed=seed,
        m_max=args.m_max,
        n_max=args.n_max,
        ensembles=ensembles,
        tol=args.tol,
    )
    summary = run_fuzz(config)
    _print_summary(summary)
    if summary.passed:
        return 0
    _write_replays(summary)
    return 3


def _print_summary(summary: FuzzSummary) -> None:
    cfg = summary.config
    print(
        f"fuzz: trials={cfg.trials} seed={cfg.seed} m_max={cfg.m_max} "
        f"n_max={cfg.n_max} tol={_fmt(cfg.tol)} ensembles={','.join(cfg.ensembles)}"
    )
    for st in summary.stats:
        slack = "n/a" if st.worst_slack == float("-inf") else _fmt(st.worst_slack)
        tags = " ".join(f"{tag.value}={st.tag_counts[tag.value]}" for tag in CaseTag)
        print(
            f"{st.name}: {st.passes} passed, {st.violations} violation(s), "
            f"worst log slack {slack}, {tags}"
        )
    total = summary.total_trials
    passed = total - len(summary.violations)
    print(f"total: {passed}/{total} passed")


def _write_replays(summary: FuzzSummary) -> None:
    for v in summary.violations:
        stem = f"detcs-replay-{v.ensemble}-{v.trial}"
        save_matrix(f"{stem}-a.mat", v.instance.a)
        save_matrix(f"{stem}-b.mat", v.instance.b)
        cmd = f"detcs verify --a {stem}-a.mat --b {stem}-b.mat"
        if v.instance.m_fac is not None:
            save_matrix(f"{stem}-m.mat", v.instance.m_fac.m_matrix)
            cmd += f" --m {stem}-m.mat"
        cmd += f" --tol {_fmt(summary.config.tol)}"
        print(f"VIOLATION ensemble={v.ensemble} trial={v.trial}: {v.message}")
        print(f"replay: {cmd}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detcs",
        description=(
            "Verify the determinantal Cauchy-Schwarz inequality "
            "|det(A*MB)|^2 <= det(A*MA) det(B*MB) and classify its equality cases."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify the inequality for one (A, B, M) instance")
    p_verify.add_argument("--a", required=True, help="path to the A matrix file")
    p_verify.add_argument("--b", required=True, help="path to the B matrix file")
    p_verify.add_argument("--m", help="path to the hermitian positive definite weight M")
    p_verify.add_argument("--tol", type=float, default=1e-9, help="relative equality tolerance")
    p_verify.add_argument("--json", action="store_true", help="emit a single-line JSON record")
    p_verify.add_argument(
        "--check", action="store_true", help="also run oracle cross-checks (size-guarded)"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_corr = sub.add_parser(
        "correlate", help="determinantal correlation |det(Qa*Qb)| and column norms"
    )
    p_corr.add_argument("--a", required=True, help="path to the A matrix file")
    p_corr.add_argument("--b", required=True, help="path to the B matrix file")
    p_corr.add_argument("--m", help="path to the hermitian positive definite weight M")
    p_corr.add_argument(
        "--check", action="store_true", help="also run oracle cross-checks (size-guarded)"
    )
    p_corr.set_defaults(func=cmd_correlate)

    p_cls = sub.add_parser("classify", help="name the equality/strictness regime of (A, B, M)")
    p_cls.add_argument("--a", required=True, help="path to the A matrix file")
    p_cls.add_argument("--b", required=True, help="path to the B matrix file")
    p_cls.add_argument("--m", help="path to the hermitian positive definite weight M")
    p_cls.add_argument(
        "--subspace-tol", type=float, default=1e-8, help="span-equality tolerance on cosines"
    )
    p_cls.set_defaults(func=cmd_classify)

    p_fuzz = sub.add_parser("fuzz", help="randomized verification over seeded ensembles")
    p_fuzz.add_argument("--trials", type=int, required=True, help="trials per ensemble")
    p_fuzz.add_argument(
        "--seed", type=int, default=0, help="master seed (DETCS_SEED overrides when set)"
    )
    p_fuzz.add_argument("--m-max", type=int, default=8, help="largest row count")
    p_fuzz.add_argument("--n-max", type=int, default=8, help="largest column count")
    p_fuzz.add_argument(
        "--ensembles",
        help=f"comma-separated subset of: {', '.join(ENSEMBLES)} (default: all)",
    )
    p_fuzz.add_argument("--tol", type=float, default=1e-9, help="relative equality tolerance")
    p_fuzz.set_defaults(func=cmd_fuzz)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InequalityViolation, OracleError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except (
        MatrixParseError,
        NotHermitian,
        NotPositiveDefinite,
        RankDeficient,
        WrongRegime,
        DetcsError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(run(argv=None))
