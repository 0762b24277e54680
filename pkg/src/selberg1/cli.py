"""Command-line front end.

Every command loads one element (descriptor files, a bundled descriptor, or
zeta by default), runs one computation and writes a JSON report that embeds
the fully resolved configuration.  Exit status: 0 success, 1 invalid input
or failed check, 2 inconsistent verdict, 3 numeric budget exhausted.

CSV output (``--format csv``) writes one table per command:
  constants      t, residual
  transform      alpha, T, route, re, im
  scan           alpha, magnitude
  extract        m, re, im, uncertainty
  identify       s_re, s_im, H_re, H_im
  verify-lemma   t, X, error
  verify-eq1     t, residual
  verify-expsum  T, quadrature_re, quadrature_im, expsum_re, expsum_im, deviation
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import errors
from .asymptotics import DEFAULT_FIT_TS, stirling_constants, verify_eq1_residual
from .detector import DEFAULT_GRID_DEN, DEFAULT_T, detect, detect_q, find_peaks, scan_support
from .identifier import identify
from .selberg import load_element
from .smoothing import lemma_error_probe, set_threads
from .transform import transform_expsum, transform_quadrature

COMMANDS = (
    "constants",
    "transform",
    "scan",
    "extract",
    "identify",
    "verify-lemma",
    "verify-eq1",
    "verify-expsum",
)
BUILTINS = ("zeta", "chi4", "chi3_shifted")

DEFAULTS = {
    "fe_file": None,
    "coeff_file": None,
    "builtin": None,
    "alpha": "1",
    "T": None,
    "route": "expsum",
    "grid_den": DEFAULT_GRID_DEN,
    "M": None,
    "tol": 1e-6,
    "ts": None,
    "Xs": None,
    "output": None,
    "format": "json",
    "seed": 0,
    "threads": None,
}
T_DEFAULT = {
    "transform": 2e3,
    "scan": DEFAULT_T,
    "extract": DEFAULT_T,
    "identify": DEFAULT_T,
    "verify-expsum": 2e3,
}
TS_DEFAULT = {
    "constants": list(DEFAULT_FIT_TS),
    "verify-eq1": [1e2, 3e2, 1e3, 3e3, 1e4],
    "verify-lemma": [20.0, 50.0],
    "verify-expsum": [1e3, 2e3, 4e3],
}
XS_DEFAULT = [1e2, 1e3, 1e4]

EXIT_OK, EXIT_INVALID, EXIT_INCONSISTENT, EXIT_BUDGET = 0, 1, 2, 3


class Inconsistent(Exception):
    pass


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (errors.ConductorMismatch, Inconsistent)):
        return EXIT_INCONSISTENT
    if isinstance(
        exc,
        (
            errors.QuadratureBudgetExceeded,
            errors.PrecisionError,
            errors.FitError,
            errors.EvaluationError,
        ),
    ):
        return EXIT_BUDGET
    return EXIT_INVALID


def _parse_alpha(text) -> Fraction | float:
    try:
        value = Fraction(str(text))
    except ValueError:
        value = float(text)
    if value <= 0:
        raise ValueError("alpha must be positive")
    return value


class _Parser(argparse.ArgumentParser):
    # usage errors are validation failures (exit 1), not argparse's exit 2
    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="selberg1",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    S = argparse.SUPPRESS
    parser.add_argument("--fe-file", dest="fe_file", default=S, help="functional-equation descriptor (JSON)")
    parser.add_argument("--coeff-file", dest="coeff_file", default=S, help="coefficient descriptor (JSON)")
    parser.add_argument("--builtin", choices=BUILTINS, default=S, help="bundled descriptor pair")
    parser.add_argument("--config", default=None, help="JSON file with any of the options below")
    parser.add_argument("--alpha", default=S, help="alpha, a fraction like 3/4 or a decimal")
    parser.add_argument("--T", dest="T", type=float, default=S)
    parser.add_argument("--route", choices=("expsum", "quadrature"), default=S)
    parser.add_argument("--grid-den", dest="grid_den", type=int, default=S)
    parser.add_argument("--M", dest="M", type=int, default=S)
    parser.add_argument("--tol", type=float, default=S)
    parser.add_argument("--ts", type=float, nargs="+", default=S, help="heights t (or T for verify-expsum)")
    parser.add_argument("--Xs", dest="Xs", type=float, nargs="+", default=S, help="smoothing lengths")
    parser.add_argument("--output", default=S, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default=S)
    parser.add_argument("--seed", type=int, default=S)
    parser.add_argument("--threads", type=int, default=S, help="worker cap for the NUFFT")
    return parser


def resolve_config(argv=None) -> dict:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config")
    cfg = dict(DEFAULTS)
    if config_path is not None:
        doc = json.loads(Path(config_path).read_text())
        doc.pop("command", None)
        extra = set(doc) - set(DEFAULTS)
        if extra:
            raise ValueError(f"unknown config key(s): {sorted(extra)}")
        cfg.update(doc)
    cfg.update(args)
    if cfg["T"] is None:
        cfg["T"] = T_DEFAULT.get(command)
    if cfg["ts"] is None:
        cfg["ts"] = TS_DEFAULT.get(command)
    if cfg["Xs"] is None:
        cfg["Xs"] = XS_DEFAULT
    cfg["alpha"] = str(_parse_alpha(cfg["alpha"]))
    for key in ("T", "tol"):
        if cfg[key] is not None and not float(cfg[key]) > 0:
            raise ValueError(f"{key} must be positive")
    for key in ("grid_den", "M", "threads"):
        if cfg[key] is not None and int(cfg[key]) < 1:
            raise ValueError(f"{key} must be >= 1")
    if cfg["format"] not in ("json", "csv"):
        raise ValueError("format must be json or csv")
    cfg["command"] = command
    return cfg


def load_from_config(cfg):
    fe_file, coeff_file = cfg["fe_file"], cfg["coeff_file"]
    if coeff_file is None:
        name = cfg["builtin"] or "zeta"
        data = resources.files("selberg1") / "data"
        coeff_file = data / f"{name}.coeffs.json"
        if fe_file is None:
            fe_file = data / f"{name}.fe.json"
    return load_element(fe_file, coeff_file)


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def run_command(cfg) -> tuple:
    """(result document, csv rows with header, exit code)."""
    cmd = cfg["command"]
    el = load_from_config(cfg)
    if cmd == "verify-eq1":
        sc = stirling_constants(el.fe)
        res = verify_eq1_residual(el.fe, sc, cfg["ts"])
        doc = {"constants": sc.to_dict(), **res.to_dict(), "K_limit": 10.0, "passed": res.K <= 10}
        rows = [("t", "residual")] + list(res.rows)
        return doc, rows, EXIT_OK if res.K <= 10 else EXIT_INVALID
    if cmd == "constants":
        sc = stirling_constants(el.fe, tuple(cfg["ts"]))
        return sc.to_dict(), [("t", "residual")] + list(sc.fit_residuals), EXIT_OK
    if cmd == "verify-lemma":
        probes = [lemma_error_probe(el, t, cfg["Xs"]) for t in cfg["ts"]]
        rows = [("t", "X", "error")] + [(p.t, X, err) for p in probes for X, err in p.rows]
        return {"probes": [p.to_dict() for p in probes]}, rows, EXIT_OK
    sc = stirling_constants(el.fe)
    alpha = _parse_alpha(cfg["alpha"])
    T = float(cfg["T"])
    if cmd == "transform":
        if cfg["route"] == "quadrature":
            sample = transform_quadrature(el, sc, alpha, T, cfg["tol"])
        else:
            sample = transform_expsum(el, alpha, T)
        v = sample.value
        return sample.to_dict(), [("alpha", "T", "route", "re", "im"), (float(alpha), T, sample.route, v.real, v.imag)], EXIT_OK
    if cmd == "verify-expsum":
        out, ks = [], []
        for Tk in cfg["ts"]:
            q = transform_quadrature(el, sc, alpha, Tk, cfg["tol"])
            x = transform_expsum(el, alpha, Tk)
            dev = abs(q.value - x.value)
            ks.append(dev / Tk**0.92)
            out.append({"T": Tk, "quadrature": q.to_dict(), "expsum": x.to_dict(), "deviation": dev,
                        "normalized_deviation": dev / Tk})
        rows = [("T", "quadrature_re", "quadrature_im", "expsum_re", "expsum_im", "deviation")] + [
            (r["T"], *r["quadrature"]["value"], *r["expsum"]["value"], r["deviation"]) for r in out
        ]
        return {"alpha": float(alpha), "rows": out, "K": max(ks)}, rows, EXIT_OK
    if cmd == "scan":
        M = cfg["M"] or 2
        profile = scan_support(el, sc, T, cfg["grid_den"], M)
        doc = {
            "support_profile": [[str(p.alpha), float(p.alpha), p.magnitude] for p in profile],
            "peaks": [str(a) for a in find_peaks(profile)],
            "q_from_constants": math.pi * sc.C * el.fe.Q**2,
        }
        rows = [("alpha", "magnitude")] + [(float(p.alpha), p.magnitude) for p in profile]
        doc["q_detected"] = detect_q(profile, sc, el.fe)
        return doc, rows, EXIT_OK
    if cmd == "extract":
        report = detect(el, sc, T, cfg["grid_den"], cfg["M"])
        rows = [("m", "re", "im", "uncertainty")] + [
            (c.m, c.value.real, c.value.imag, c.uncertainty) for c in report.coeff_table
        ]
        return report.to_dict(), rows, EXIT_OK
    if cmd == "identify":
        ident = identify(el, T, sc=sc)
        rows = [("s_re", "s_im", "H_re", "H_im")] + [(*_c(s), *_c(h)) for s, h in ident.H_samples]
        code = EXIT_OK if ident.verdict == "identified" else EXIT_INCONSISTENT
        return ident.to_dict(), rows, code
    raise ValueError(f"unknown command {cmd!r}")


def _render(cfg, doc, rows, status) -> str:
    if cfg["format"] == "csv" and rows:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    report = {"command": cfg["command"], "config": cfg, "status": status, "result": doc}
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": 1}) + "\n")
        return EXIT_INVALID
    set_threads(cfg["threads"])
    try:
        doc, rows, code = run_command(cfg)
        text = _render(cfg, doc, rows, code)
    except (errors.Selberg1Error, ValueError, KeyError, OSError) as exc:
        code = exit_code(exc)
        record = {"error": type(exc).__name__, "message": str(exc), "exit": code}
        text = _render({**cfg, "format": "json"}, record, None, code)
        sys.stderr.write(json.dumps(record) + "\n")
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
