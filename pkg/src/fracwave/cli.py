"""Command-line front end.

Usage::

    fracwave COMMAND CONFIG.toml [--format csv|json] [--out PATH] [--strict]

``COMMAND`` is one of classify, material, validate, kernel, profile,
compare, or ``run`` to use the command named in the configuration.

Exit codes: 0 success; 1 parse/validation error, including initial data too
coarse for the kernel; 2 model not admissible; 3 numerical failure, including
``front_region``/``not_converged`` points under ``--strict`` and failed
validation sections.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .admissibility import classify, scan_a2prime
from .config import COMMANDS, FORMATS, load_config
from .errors import (
    DomainError,
    GridMismatch,
    InfiniteSpeed,
    NotAdmissible,
    NumericalError,
    ParseError,
    ValidationError,
)
from .kernel import (
    PointStatus,
    check_a5_a6,
    is_degenerate,
    kernel_grid,
    kernel_mass,
    kernel_point,
    oracle_invert,
)
from .material import (
    creep_compliance,
    creep_growth_diagnostic,
    relaxation_modulus,
    summary,
    wave_speed_dimensional,
)
from .solver import ZERO, DiracAt, InitialData, Sampled, solve_profile

__all__ = ["main", "run", "EXIT_OK", "EXIT_CONFIG", "EXIT_NOT_ADMISSIBLE", "EXIT_NUMERICAL"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_ADMISSIBLE = 2
EXIT_NUMERICAL = 3

KERNEL_HEADER = ("x", "t", "value", "status", "error_estimate")
BAD_STATUSES = {PointStatus.FRONT_REGION.value, PointStatus.NOT_CONVERGED.value}


def fmt_number(value):
    """Fixed 17-significant-digit rendering used for all CSV numbers."""
    return format(float(value), ".17g")


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt_number(v) for v in row])
    return buf.getvalue()


def _json_text(payload):
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _speed_text(c):
    return "c=∞" if math.isinf(c) else f"c={c:.17g}"


# ---------------------------------------------------------------------------
# commands; each returns (text, failed)


def _cmd_classify(cfg, fmt):
    s = summary(cfg.model)
    if fmt == "json":
        return _json_text(s.as_dict()), False
    lines = [f"{s.case}, type {s.type_label}, {_speed_text(s.wave_speed)}"]
    for key, value in s.as_dict().items():
        if key not in ("case", "type"):
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n", False


def _cmd_material(cfg, fmt):
    s = summary(cfg.model)
    payload = s.as_dict()
    if cfg.modulus is not None and cfg.density is not None:
        try:
            payload["wave_speed_dimensional"] = wave_speed_dimensional(
                s.wave_speed, cfg.modulus, cfg.density)
        except InfiniteSpeed:
            payload["wave_speed_dimensional"] = math.inf
    growth = creep_growth_diagnostic(cfg.model)
    payload["creep_growth_exponent"] = growth.exponent
    t = np.asarray(cfg.t_list or (0.1, 1.0, 10.0))
    creep = creep_compliance(cfg.model, t)
    relax = relaxation_modulus(cfg.model, t)
    if fmt == "json":
        payload["t"] = t.tolist()
        payload["creep_compliance"] = creep.tolist()
        payload["relaxation_modulus"] = relax.tolist()
        return _json_text(payload), False
    rows = zip(t, creep, relax)
    return _csv_text(("t", "creep_compliance", "relaxation_modulus"), rows), False


def _interior_points(model, t_list):
    s = summary(model)
    pts = []
    for t in t_list:
        if s.slowness > 0.0:
            front = t / s.slowness
            xs = (0.1 * front, 0.3 * front, 0.5 * front)
        else:
            xs = (0.25 * t, 0.5 * t, t)
        pts.extend((x, t) for x in xs)
    return pts


def validation_report(model, t_list=(1.0,)):
    """Run every diagnostic on ``model``; returns an ordered dict of sections."""
    sections = {}
    label = classify(model)
    s = summary(model)
    sections["classification"] = {"passed": True, "case": str(label),
                                  "type": str(s.type_label), "wave_speed": s.wave_speed}
    xi = np.concatenate([[0.0], np.logspace(-2, 2, 25)])
    re, im = np.meshgrid(np.logspace(-2, 2, 15), np.linspace(-100.0, 100.0, 21))
    scan = scan_a2prime(model, xi, (re + 1j * im).ravel())
    sections["a2_scan"] = {"passed": scan.passed, "min_abs_psi": scan.min_abs_psi}
    a56 = check_a5_a6(model, [1e2, 1e4, 1e6, 1e8], [1e-2, 1e-4, 1e-6, 1e-8],
                      [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4])
    sections["a5_a6"] = {"passed": a56.passed, "a5": a56.a5_pass, "a6": a56.a6_pass,
                         **a56.details}
    growth = creep_growth_diagnostic(model)
    sections["creep_growth"] = {"passed": growth.passed, "exponent": growth.exponent}
    if is_degenerate(model):
        sections["mass"] = {"passed": True, "skipped": True}
        sections["oracle"] = {"passed": True, "skipped": True}
        return sections
    masses = [kernel_mass(model, t).mass for t in t_list]
    sections["mass"] = {"passed": all(abs(m - 1.0) <= 0.02 for m in masses),
                        "t": list(t_list), "mass": masses}
    worst = 0.0
    try:
        for x, t in _interior_points(model, t_list):
            k = kernel_point(model, x, t).value
            for method in ("gaver_stehfest", "talbot"):
                ref = oracle_invert(model, x, t, method)
                worst = max(worst, abs(k - ref) / max(abs(ref), 1e-300))
        sections["oracle"] = {"passed": worst <= 0.01, "max_rel_diff": worst}
    except NumericalError as exc:
        sections["oracle"] = {"passed": False, "error": str(exc)}
    return sections


def _cmd_validate(cfg, fmt):
    sections = validation_report(cfg.model, cfg.t_list or (1.0,))
    failed = not all(sec["passed"] for sec in sections.values())
    if fmt == "json":
        return _json_text({"passed": not failed, "sections": sections}), failed
    lines = []
    for name, sec in sections.items():
        detail = ", ".join(f"{k}={v}" for k, v in sec.items() if k != "passed")
        lines.append(f"{name}: {'PASS' if sec['passed'] else 'FAIL'} ({detail})")
    lines.append(f"overall: {'FAIL' if failed else 'PASS'}")
    return "\n".join(lines) + "\n", failed


def _rows_output(rows, fmt):
    rows = list(rows)
    if fmt == "json":
        payload = [dict(zip(KERNEL_HEADER, r)) for r in rows]
        return _json_text(payload)
    return _csv_text(KERNEL_HEADER, rows)


def _cmd_kernel(cfg, fmt):
    grid = kernel_grid(cfg.model, cfg.grid.values(), cfg.t_list, cfg.settings)
    rows = list(grid.rows())
    return _rows_output(rows, fmt), any(r[3] in BAD_STATUSES for r in rows)


def _initial_data(spec, x):
    def gaussian():
        g = np.exp(-0.5 * ((x - spec.x0) / spec.width) ** 2)
        return Sampled(x, spec.amplitude * g / (spec.width * math.sqrt(2.0 * math.pi)))

    u0 = {"dirac": lambda: DiracAt(spec.x0), "gaussian": gaussian, "zero": lambda: ZERO}[spec.u0]()
    v0 = gaussian() if spec.v0 == "gaussian" else ZERO
    return InitialData(u0, v0)


def _cmd_profile(cfg, fmt):
    x = cfg.grid.values()
    init = _initial_data(cfg.initial, x)
    rows = []
    for t in cfg.t_list:
        rows.extend(solve_profile(cfg.model, init, x, t, cfg.settings).rows())
    return _rows_output(rows, fmt), any(r[3] in BAD_STATUSES for r in rows)


def _cmd_compare(cfg, fmt):
    header = ("x", "t", "kernel", "gaver_stehfest", "talbot", "rel_diff_gaver_stehfest",
              "rel_diff_talbot", "status")
    rows = []
    failed = False
    for t in cfg.t_list:
        for x in cfg.grid.values():
            p = kernel_point(cfg.model, x, t, cfg.settings)
            refs = [math.nan, math.nan]
            status = p.status.value
            if p.status is PointStatus.INTERIOR:
                for i, method in enumerate(("gaver_stehfest", "talbot")):
                    try:
                        refs[i] = oracle_invert(cfg.model, x, t, method)
                    except (NumericalError, DomainError):
                        status = "oracle_failed"
            rel = [abs(p.value - r) / abs(r) if r else math.nan for r in refs]
            failed |= status in BAD_STATUSES or status == "oracle_failed"
            rows.append((x, t, p.value, refs[0], refs[1], rel[0], rel[1], status))
    if fmt == "json":
        return _json_text([dict(zip(header, r)) for r in rows]), failed
    return _csv_text(header, rows), failed


HANDLERS = {
    "classify": _cmd_classify,
    "material": _cmd_material,
    "validate": _cmd_validate,
    "kernel": _cmd_kernel,
    "profile": _cmd_profile,
    "compare": _cmd_compare,
}


def run(config, *, command=None, fmt=None, out=None, strict=False, stdout=None, stderr=None):
    """Execute a parsed :class:`~fracwave.config.RunConfig`; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    command = command or config.command
    fmt = fmt or config.format
    out = out or config.output
    try:
        text, flagged = HANDLERS[command](config, fmt)
    except NotAdmissible as exc:
        print(f"error: model not admissible: {exc}", file=stderr)
        return EXIT_NOT_ADMISSIBLE
    except NumericalError as exc:
        print(f"error: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except (DomainError, GridMismatch) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if command == "validate" and flagged:
        return EXIT_NUMERICAL
    if strict and flagged:
        print("error: --strict: front_region or not_converged points present", file=stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


COMMAND_HELP = {
    "classify": "print the admissibility case, type and wave speed",
    "material": "creep compliance and relaxation modulus on grid.t",
    "validate": "run the diagnostic checks and report pass/fail",
    "kernel": "fundamental solution K on the x/t grid",
    "profile": "displacement u(x, t) from the [initial] data",
    "compare": "kernel values against both inversion oracles",
    "run": "run the command named in the configuration",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracwave",
        description="Fundamental solution and material functions of distributed-order "
                    "fractional wave equations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS + ("run",):
        p = sub.add_parser(name, help=COMMAND_HELP[name])
        p.add_argument("config", help="path to the TOML run configuration")
        p.add_argument("--format", choices=FORMATS, default=None, help="output format")
        p.add_argument("--out", default=None, help="write output to PATH instead of stdout")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 if any front_region/not_converged point occurs")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    command = None if args.command == "run" else args.command
    try:
        return run(cfg, command=command, fmt=args.format, out=args.out, strict=args.strict)
    except BrokenPipeError:
        # reader closed the pipe early (e.g. `| head`); silence the final flush
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
