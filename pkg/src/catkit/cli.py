"""Command-line front door.

Subcommands compute CSV/JSON/binary artifacts from a configuration given
entirely on the command line; all lengths are expressed in units of the
inclusion radius (a = 1 internally).  Exit codes: 0 success, 1 numerical
failure, 2 usage error.

CSV conventions: RFC-4180-style rows, '.' decimal separator, one header
row, and '#'-prefixed metadata lines before the header.  The timestamp
metadata line is suppressed with --no-meta so that golden files are
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import analysis, gaussian, media, modes, overlap, scattering
from .errors import CatkitError

_FLOAT_FMT = ".12g"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), _FLOAT_FMT)


def _write_csv(path: str, header: list[str], rows, meta: dict, no_meta_ts: bool):
    lines = []
    if not no_meta_ts:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated={stamp}")
    for key, val in meta.items():
        lines.append(f"# {key}={val}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_span(text: str, what: str) -> list[int]:
    """Parse start:stop:step (inclusive stop) into a list of ints."""
    try:
        start, stop, step = (int(p) for p in text.split(":"))
        if step <= 0 or stop < start:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad {what} span {text!r}; expected start:stop:step")
    return list(range(start, stop + 1, step))


def _parse_fspan(text: str, what: str) -> list[float]:
    try:
        start, stop, step = (float(p) for p in text.split(":"))
        if step <= 0 or stop < start:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad {what} span {text!r}; expected start:stop:step")
    out = []
    v = start
    while v <= stop + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


def _medium_arg(text: str) -> media.Medium:
    try:
        return media.parse_medium(text)
    except CatkitError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(p: argparse.ArgumentParser, output=True):
    if output:
        p.add_argument("-o", "--output", required=True, help="output path")
    p.add_argument("--no-meta", action="store_true",
                   help="omit the timestamp metadata line (golden runs)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: CATKIT_THREADS or hardware)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catkit",
        description="Cavity mode spectra, scattering phase shifts, and "
                    "ground-state overlap scaling for a central polarizable sphere.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phase-shift", help="unwrapped phase-shift curve CSV")
    p.add_argument("--medium", type=_medium_arg, required=True)
    p.add_argument("--kmin", type=float, required=True)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--log-grid", action="store_true", help="log-spaced wavevector grid")
    p.add_argument("--l", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("spectrum", help="empty and perturbed wavevectors CSV")
    p.add_argument("--medium", type=_medium_arg, required=True)
    p.add_argument("--r-over-a", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("shift", "exact"), default="shift")
    _add_common(p)

    p = sub.add_parser("overlap", help="overlap matrix binary + JSON sidecar")
    p.add_argument("--medium", type=_medium_arg, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--r-over-a", type=float)
    group.add_argument("--ratio", type=float)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--source", choices=("asymptotic", "quadrature"), default="asymptotic")
    _add_common(p)

    p = sub.add_parser("scan", help="fixed-ratio determinant/overlap scaling CSV")
    p.add_argument("--medium", type=_medium_arg, required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--n-list", type=lambda t: _parse_span(t, "n-list"), required=True,
                   metavar="START:STOP:STEP")
    _add_common(p)

    p = sub.add_parser("contour", help="log|det| grid over (N, R/a) CSV")
    p.add_argument("--medium", type=_medium_arg, required=True)
    p.add_argument("--n-range", type=lambda t: _parse_span(t, "n-range"), required=True,
                   metavar="START:STOP:STEP")
    p.add_argument("--r-range", type=lambda t: _parse_fspan(t, "r-range"), required=True,
                   metavar="START:STOP:STEP")
    _add_common(p)

    p = sub.add_parser("eta-vs-delta", help="exponent vs phase shift paired-curve CSV")
    p.add_argument("--medium", type=_medium_arg, required=True)
    p.add_argument("--ratios", type=lambda t: _parse_fspan(t, "ratios"), required=True,
                   metavar="START:STOP:STEP")
    p.add_argument("--n-list", type=lambda t: _parse_span(t, "n-list"),
                   default=list(analysis._ETA_SCAN_N_LIST), metavar="START:STOP:STEP")
    _add_common(p)

    p = sub.add_parser("pc-check", help="perfect-conductor overlap vs closed form CSV")
    p.add_argument("--ratios", type=lambda t: _parse_fspan(t, "ratios"), required=True,
                   metavar="START:STOP:STEP")
    p.add_argument("--n", type=int, default=500)
    _add_common(p)

    p = sub.add_parser("fit", help="fit a power-law exponent from a scan CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column", choices=("det", "s2"), default="det")
    p.add_argument("--nmin", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--no-meta", action="store_true")

    p = sub.add_parser("selftest", help="run the built-in oracle suites")
    p.add_argument("--threads", type=int, default=None)

    return ap


def _cmd_phase_shift(args) -> int:
    if args.log_grid:
        grid = np.geomspace(args.kmin, args.kmax, args.samples)
    else:
        grid = np.linspace(args.kmin, args.kmax, args.samples)
    curve = scattering.phase_shift_curve(args.medium, args.l, 1.0, grid)
    meta = {"command": "phase-shift", "medium": media.medium_spec(args.medium), "l": args.l}
    if isinstance(args.medium, media.Drude):
        meta["kp_a"] = _fmt(args.medium.kp)
    _write_csv(args.output, ["k_a", "delta"], zip(curve.k, curve.delta), meta, args.no_meta)
    return 0


def _cmd_spectrum(args) -> int:
    g = modes.CavityGeometry(a=1.0, R=args.r_over_a)
    spec = modes.build_spectrum(g, args.medium, args.n, method=args.method)
    rows = zip(range(1, spec.N + 1), spec.q, spec.k, spec.delta)
    meta = {
        "command": "spectrum",
        "medium": media.medium_spec(args.medium),
        "R_over_a": _fmt(args.r_over_a),
        "method": args.method,
    }
    _write_csv(args.output, ["s", "q_a", "k_a", "delta"], rows, meta, args.no_meta)
    return 0


def _cmd_overlap(args) -> int:
    if args.ratio is not None:
        R = args.n / args.ratio
        ratio_or_R = {"ratio": args.ratio}
    else:
        R = args.r_over_a
        ratio_or_R = {"R_over_a": args.r_over_a}
    g = modes.CavityGeometry(a=1.0, R=R)
    spec = modes.build_spectrum(g, args.medium, args.n, method="shift")
    om = overlap.build_overlap_matrix(spec, source=args.source)
    ld, sign = gaussian.log_abs_det(om.D)
    base = Path(args.output)
    bin_path = base.with_suffix(".bin")
    json_path = base.with_suffix(".json")
    om.D.astype("<f8").tofile(bin_path)
    sidecar = {
        "n": int(spec.N),
        "medium": media.medium_spec(args.medium),
        "kp_a": getattr(args.medium, "kp", None),
        "source": args.source,
        "log_abs_det": ld,
        "sign_det": sign,
        "layout": "row-major little-endian float64",
    }
    sidecar.update(ratio_or_R)
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"log|det D| = {ld:.12g} (sign {sign:+d}); wrote {bin_path} and {json_path}")
    return 0


def _cmd_scan(args) -> int:
    run = analysis.scan_fixed_ratio(args.medium, args.ratio, args.n_list,
                                    threads=args.threads)
    meta = {
        "command": "scan",
        "medium": media.medium_spec(args.medium),
        "ratio": _fmt(args.ratio),
    }
    if isinstance(args.medium, media.Drude):
        meta["kp_a"] = _fmt(args.medium.kp)
    _write_csv(args.output, ["N", "R_over_a", "log_abs_det_D", "log_S"],
               run.rows, meta, args.no_meta)
    return 0


def _cmd_contour(args) -> int:
    rows = analysis.contour_scan(args.medium, args.n_range, args.r_range,
                                 threads=args.threads)
    meta = {"command": "contour", "medium": media.medium_spec(args.medium)}
    if isinstance(args.medium, media.Drude):
        meta["kp_a"] = _fmt(args.medium.kp)
    _write_csv(args.output, ["N", "R_over_a", "log_abs_det_D"], rows, meta, args.no_meta)
    return 0


def _cmd_eta_vs_delta(args) -> int:
    rows = analysis.exponent_vs_phase_shift(args.medium, args.ratios,
                                            N_list=args.n_list, threads=args.threads)
    meta = {"command": "eta-vs-delta", "medium": media.medium_spec(args.medium)}
    if isinstance(args.medium, media.Drude):
        meta["kp_a"] = _fmt(args.medium.kp)
    _write_csv(args.output, ["ratio", "k_a", "delta", "eta"], rows, meta, args.no_meta)
    return 0


def _cmd_pc_check(args) -> int:
    rows = []
    for r in args.ratios:
        comp, closed = analysis.pc_overlap_check(r, args.n)
        rows.append((r, comp, closed))
    meta = {"command": "pc-check", "medium": "pec", "N": args.n}
    _write_csv(args.output, ["ratio", "computed_log_S", "closed_form_log_S"],
               rows, meta, args.no_meta)
    return 0


def read_csv(path: str):
    """Read one of our CSVs: returns (meta dict, header list, rows as floats)."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, val = body.partition("=")
            if sep:
                meta[key.strip()] = val.strip()
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        rows.append([float(c) for c in line.split(",")])
    if header is None:
        raise CatkitError(f"no header row found in {path}")
    return meta, header, rows


def _cmd_fit(args) -> int:
    meta, header, rows = read_csv(args.input)
    try:
        n_i = header.index("N")
        col = header.index("log_abs_det_D" if args.column == "det" else "log_S")
    except ValueError:
        raise CatkitError(f"scan CSV must carry N and log columns, got {header}")
    pts = []
    for row in rows:
        n = row[n_i]
        if args.nmin is not None and n < args.nmin:
            continue
        if args.nmax is not None and n > args.nmax:
            continue
        val = row[col] if args.column == "det" else 2.0 * row[col]
        pts.append((n, val))
    fit = analysis.fit_power_law(pts)
    label = "log|det D|" if args.column == "det" else "log S^2"
    print(f"eta = {fit.eta:.6f} +/- {fit.stderr:.6f} "
          f"({label}, {fit.n_points} points, N in {fit.fit_window})")
    return 0


def _cmd_selftest(args) -> int:
    from . import selftest

    ok = selftest.run(threads=args.threads)
    return 0 if ok else 1


_DISPATCH = {
    "phase-shift": _cmd_phase_shift,
    "spectrum": _cmd_spectrum,
    "overlap": _cmd_overlap,
    "scan": _cmd_scan,
    "contour": _cmd_contour,
    "eta-vs-delta": _cmd_eta_vs_delta,
    "pc-check": _cmd_pc_check,
    "fit": _cmd_fit,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except CatkitError as exc:
        print(f"catkit {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
