"""Command-line interface.

Subcommands: ``model`` builds canonical detector files, ``characterize``
computes estimators and taxonomy, ``wigner`` exports a Wigner grid with a
non-classicality sidecar, ``herald`` scans two-mode squeezing toward the
retrodictive limit, ``retrodict`` computes Bayesian posteriors over a probe
ensemble, ``verify`` re-checks a saved report's internal identities.

Exit codes: 0 success, 2 validation failure, 3 numeric guard tripped,
4 I/O or parse failure.  Tolerance defaults honour ``QDETCHAR_*``
environment variables.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._version import __version__
from .config import CategoryThresholds, Tolerances
from .detectors import (
    Povm,
    complete_with_rest,
    ideal_pnr,
    lossy_pnr,
    on_off_apd,
    scaled_projector,
)
from .errors import (
    HeraldImpossibleError,
    NullOutcomeError,
    PovmFormatError,
    PovmValidationError,
    ReportValidationError,
    TailToleranceError,
    UnreachableOutcomeError,
)
from .fileio import (
    ReportFile,
    estimator_identity_residuals,
    load_ensemble,
    load_povm,
    load_report,
    nonclassicality_to_dict,
    save_povm,
    save_report,
    sha256_digest,
    write_wigner_grid,
)
from .fock import coherent_state, fock_state, squeezed_vacuum
from .herald import retrodictive_limit_scan
from .phasespace import PhaseSpaceGrid, wigner, witness_report
from .retrodiction import (
    estimator_report,
    projectivity,
    retrodict_ensemble,
    retrodicted_state,
)


def parse_target(spec: str, dim: int):
    """Parse ``fock:n``, ``coherent:re,im`` or ``squeezed:r`` into a ket."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ValueError(f"target {spec!r}: expected kind:params")
    if kind == "fock":
        return spec, fock_state(int(arg), dim)
    if kind == "coherent":
        parts = arg.split(",")
        if len(parts) != 2:
            raise ValueError(f"target {spec!r}: expected coherent:re,im")
        return spec, coherent_state(complex(float(parts[0]), float(parts[1])), dim)
    if kind == "squeezed":
        return spec, squeezed_vacuum(float(arg), dim)
    raise ValueError(f"target {spec!r}: unknown kind {kind!r}")


def cmd_model(args, tols, thresholds):
    kind = args.kind
    if kind == "ideal-pnr":
        povm = ideal_pnr(args.dim)
        meta = {"model": kind, "dim": str(args.dim)}
    elif kind == "lossy-pnr":
        if args.eta is None:
            raise ValueError("lossy-pnr requires --eta")
        povm = lossy_pnr(args.eta, args.dim)
        meta = {"model": kind, "dim": str(args.dim), "eta": repr(args.eta)}
    elif kind == "apd":
        if args.eta is None:
            raise ValueError("apd requires --eta")
        povm = on_off_apd(args.eta, args.nu, args.dim)
        meta = {
            "model": kind,
            "dim": str(args.dim),
            "eta": repr(args.eta),
            "nu": repr(args.nu),
        }
    elif kind == "scaled-projector":
        if args.target is None or args.zeta is None:
            raise ValueError("scaled-projector requires --target and --zeta")
        label, ket = parse_target(args.target, args.dim)
        element = scaled_projector(ket, args.zeta)
        povm = complete_with_rest([element], tols)
        meta = {
            "model": kind,
            "dim": str(args.dim),
            "target": label,
            "zeta": repr(args.zeta),
        }
    else:  # pragma: no cover - argparse choices guard this
        raise ValueError(f"unknown model kind {kind!r}")
    povm = Povm(povm.elements, guard_levels=povm.guard_levels, metadata=meta)
    save_povm(povm, args.out)
    print(f"wrote {kind} (dim {povm.dim}, {len(povm)} outcomes) to {args.out}")
    return 0


def cmd_characterize(args, tols, thresholds):
    povm = load_povm(args.povm, tols)
    digest = sha256_digest(args.povm)
    targets = [parse_target(t, povm.dim) for t in args.target]
    rows = []
    for element in povm:
        if element.is_null(tols.null_trace):
            print(f"skipping null outcome {element.label!r}", file=sys.stderr)
            continue
        if targets:
            for label, ket in targets:
                rows.append(
                    estimator_report(element, ket, label, thresholds, tols)
                )
        else:
            rows.append(estimator_report(element, None, None, thresholds, tols))
    witness_rows = []
    if args.witnesses:
        grid = PhaseSpaceGrid.symmetric(args.grid_radius, args.grid_points)
        for element in povm:
            if element.is_null(tols.null_trace):
                continue
            retro = retrodicted_state(element, tols)
            wg = wigner(retro.state, grid, tols)
            witness_rows.append(
                witness_report(
                    retro.state, wg, element.label, projectivity(retro), tols, thresholds
                )
            )
    report = ReportFile(
        tool_version=__version__,
        input_digest=digest,
        dim=povm.dim,
        thresholds=thresholds,
        estimators=tuple(rows),
        nonclassicality=tuple(witness_rows),
    )
    save_report(report, args.out)
    for row in rows:
        extra = ""
        if row.target is not None:
            extra = (
                f"  target={row.target}  fidelity={row.fidelity:.6f}"
                f"  detectivity={row.detectivity:.6f}"
            )
        print(
            f"{row.outcome_label}: projectivity={row.projectivity:.6f}  "
            f"ideality={row.ideality:.6f}  weight={row.trace_weight:.6f}  "
            f"{row.category.value}{extra}"
        )
    print(f"wrote report to {args.out}")
    return 0


def cmd_wigner(args, tols, thresholds):
    povm = load_povm(args.povm, tols)
    digest = sha256_digest(args.povm)
    element = povm.outcome(args.outcome)
    grid = PhaseSpaceGrid(args.xmin, args.xmax, args.pmin, args.pmax, args.nx, args.np)
    retro = retrodicted_state(element, tols)
    wg = wigner(retro.state, grid, tols)
    report = witness_report(
        retro.state, wg, element.label, projectivity(retro), tols, thresholds
    )
    write_wigner_grid(wg, args.out, source_digest=digest, outcome_label=element.label)
    sidecar = str(args.out) + ".report.json"
    doc = {
        "format_version": "1",
        "tool": "qdetchar",
        "tool_version": __version__,
        "input_digest": digest,
        "outcome": element.label,
        "witnesses": nonclassicality_to_dict(report),
    }
    Path(sidecar).write_text(json.dumps(doc, indent=2) + "\n")
    print(
        f"{element.label}: min W = {report.min_wigner:.6g}, negativity volume = "
        f"{report.negativity_volume:.6g}, squeezing = {report.squeezing_witness}, "
        f"{report.gaussianity.value}"
    )
    print(f"wrote grid to {args.out} and witnesses to {sidecar}")
    return 0


def cmd_herald(args, tols, thresholds):
    povm = load_povm(args.povm, tols)
    digest = sha256_digest(args.povm)
    element = povm.outcome(args.outcome)
    dim = args.dim if args.dim is not None else povm.dim
    if dim != povm.dim:
        raise ValueError(
            f"--dim {dim} does not match the stored measurement dim {povm.dim}"
        )
    scan = retrodictive_limit_scan(element, args.lam, dim, tols)
    lines = [
        "# qdetchar herald scan",
        f"# source: {digest} outcome: {element.label} dim: {dim}",
        f"# fidelity_monotonic: {str(scan.fidelity_monotonic).lower()}",
        "# columns: lam fidelity success_probability",
    ]
    for pt in scan.points:
        lines.append(f"{pt.lam!r} {pt.fidelity!r} {pt.success_probability!r}")
        print(
            f"lam={pt.lam}: fidelity={pt.fidelity:.9f} "
            f"success={pt.success_probability:.6g}"
        )
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote scan to {args.out}")
    print(f"fidelity monotonic: {scan.fidelity_monotonic}")
    return 0


def cmd_retrodict(args, tols, thresholds):
    povm = load_povm(args.povm, tols)
    ensemble = load_ensemble(args.ensemble, tols)
    posterior = retrodict_ensemble(povm, args.outcome, ensemble, tols)
    lines = [
        "# qdetchar retrodiction posterior",
        f"# source: {sha256_digest(args.povm)} outcome: {args.outcome}",
        f"# ensemble: {sha256_digest(args.ensemble)}",
        "# columns: label posterior",
    ]
    for label, prob in posterior:
        lines.append(f"{label} {prob!r}")
        print(f"{label}: {prob:.9f}")
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote posterior to {args.out}")
    return 0


def cmd_verify(args, tols, thresholds):
    report = load_report(args.report, validate=False)
    worst = 0.0
    failed = False
    for row in report.estimators:
        weight_res, det_res = estimator_identity_residuals(row)
        bad = weight_res > 1e-9 or (det_res is not None and det_res > 1e-9)
        failed = failed or bad
        worst = max(worst, weight_res, det_res or 0.0)
        status = "FAIL" if bad else "ok"
        detail = f", detectivity residual {det_res:.3g}" if det_res is not None else ""
        print(
            f"[{status}] {row.outcome_label}: weight residual {weight_res:.3g}{detail}"
        )
    if failed:
        print(f"verification FAILED (worst residual {worst:.3g})", file=sys.stderr)
        return 2
    print(f"verified {len(report.estimators)} rows (worst residual {worst:.3g})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdetchar",
        description="Characterize measurement devices from their POVM description.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="build a canonical detector model file")
    p.add_argument(
        "kind", choices=["ideal-pnr", "lossy-pnr", "apd", "scaled-projector"]
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--eta", type=float, help="detection efficiency in [0, 1]")
    p.add_argument("--nu", type=float, default=0.0, help="dark-count rate in [0, 1]")
    p.add_argument("--target", help="fock:n | coherent:re,im | squeezed:r")
    p.add_argument("--zeta", type=float, help="weight of the scaled projector")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("characterize", help="estimators and taxonomy per outcome")
    p.add_argument("povm")
    p.add_argument(
        "--target",
        action="append",
        default=[],
        help="fock:n | coherent:re,im | squeezed:r (repeatable)",
    )
    p.add_argument("--witnesses", action="store_true", help="add phase-space witness rows")
    p.add_argument("--grid-radius", type=float, default=6.0)
    p.add_argument("--grid-points", type=int, default=121)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("wigner", help="Wigner grid plus non-classicality sidecar")
    p.add_argument("povm")
    p.add_argument("--outcome", required=True)
    p.add_argument("--xmin", type=float, default=-6.0)
    p.add_argument("--xmax", type=float, default=6.0)
    p.add_argument("--pmin", type=float, default=-6.0)
    p.add_argument("--pmax", type=float, default=6.0)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--np", type=int, default=201)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("herald", help="two-mode squeezing scan toward the retrodictive limit")
    p.add_argument("povm")
    p.add_argument("--outcome", required=True)
    p.add_argument(
        "--lam",
        type=float,
        action="append",
        required=True,
        help="squeezing parameter in [0, 1) (repeatable)",
    )
    p.add_argument("--dim", type=int, help="must match the stored measurement dim")
    p.add_argument("--out")
    p.set_defaults(func=cmd_herald)

    p = sub.add_parser("retrodict", help="Bayesian posterior over a probe ensemble")
    p.add_argument("povm")
    p.add_argument("--outcome", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_retrodict)

    p = sub.add_parser("verify", help="re-check a saved report's identities")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        sp.add_argument(
            "--projectivity-min",
            type=float,
            help="projective-outcome threshold (default 0.99)",
        )
        sp.add_argument(
            "--ideality-min",
            type=float,
            help="ideal-outcome threshold (default 0.99)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    tols = Tolerances.from_env()
    thresholds = CategoryThresholds.from_env()
    if args.projectivity_min is not None:
        thresholds = CategoryThresholds(
            projectivity_min=args.projectivity_min,
            ideality_min=thresholds.ideality_min,
        )
    if args.ideality_min is not None:
        thresholds = CategoryThresholds(
            projectivity_min=thresholds.projectivity_min,
            ideality_min=args.ideality_min,
        )
    try:
        return args.func(args, tols, thresholds)
    except (PovmValidationError, ReportValidationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        NullOutcomeError,
        UnreachableOutcomeError,
        HeraldImpossibleError,
        TailToleranceError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PovmFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
