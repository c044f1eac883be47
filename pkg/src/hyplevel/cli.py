"""hyplevel command line: trace, curvature, bounds, measures, radius, verify-all.

Exit status: 0 on success, 1 on usage or domain errors, 2 when a pointwise
curvature bound or a measure identity is violated beyond tolerance.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds, levelset, measures
from .convexity import radius_of_convexity
from .corpus import load_corpus
from .curvature import cross_validate, fd_curvature
from .dsl import parse
from .errors import DSLParseError, HyplevelError
from .levelset import TraceOptions, trace_problem
from .output import thread_count, write_csv, write_json, write_svg
from .problem import LevelProblem

COMMANDS = ("trace", "curvature", "bounds", "measures", "radius", "verify-all")
FORMATS = ("csv", "json", "svg")
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
GB_TOL = 1e-6
ISO_TOL = 1e-8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    function: str | None = None
    lam: float = 1.0
    r: float | None = None
    out_dir: str = "."
    formats: tuple = ("csv", "json")
    corpus: str | None = None
    trace: TraceOptions = field(default_factory=TraceOptions)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.lam >= 1:
            raise UsageError("--lambda must be >= 1")
        if self.r is not None and not 0 < self.r < 1:
            raise UsageError("--r must lie in (0, 1)")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise UsageError(f"unknown formats: {', '.join(sorted(bad))}")
        if self.command != "verify-all" and not self.function:
            raise UsageError(f"{self.command} needs --f")

    def problem(self) -> LevelProblem:
        f = parse(self.function)
        return LevelProblem(f, 1.0 if self.r is not None else self.lam, self.r)


def _path(cfg, name):
    return os.path.join(cfg.out_dir, name)


def _trace(cfg):
    p = cfg.problem()
    return p, trace_problem(p, cfg.trace)


def _curve_summary(p, curve):
    return {"problem": p.describe(), "closed": curve.closed, "n_samples": len(curve),
            "length": curve.length, "max_u_residual": float(np.max(np.abs(curve.u_residual)))}


def cmd_trace(cfg, out):
    p, curve = _trace(cfg)
    if "csv" in cfg.formats:
        write_csv(_path(cfg, "trace.csv"), levelset.CSV_HEADER, curve.csv_rows())
    if "json" in cfg.formats:
        write_json(_path(cfg, "trace.json"), _curve_summary(p, curve))
    if "svg" in cfg.formats:
        write_svg(_path(cfg, "trace.svg"), p, curve)
    kind = "closed" if curve.closed else "open"
    out.write(f"{kind} curve, {len(curve)} samples, max |u| = {np.max(np.abs(curve.u_residual)):.3g}\n")
    return EXIT_OK


def cmd_curvature(cfg, out):
    p, curve = _trace(cfg)
    fd = fd_curvature(curve)
    err = cross_validate(p, curve)
    rows = ((curve.s[i], curve.z[i].real, curve.z[i].imag, curve.ke[i], curve.kh[i], fd[i])
            for i in range(len(curve)))
    if "csv" in cfg.formats:
        write_csv(_path(cfg, "curvature.csv"),
                  ("s", "re_z", "im_z", "ke", "kh", "kh_fd"), rows)
    summary = dict(_curve_summary(p, curve), min_ke=float(curve.ke.min()),
                   min_kh=float(curve.kh.min()), max_kh=float(curve.kh.max()),
                   cross_validation=err)
    if "json" in cfg.formats:
        write_json(_path(cfg, "curvature.json"), summary)
    if "svg" in cfg.formats:
        write_svg(_path(cfg, "curvature.svg"), p, curve)
    out.write(f"kh in [{summary['min_kh']:.6g}, {summary['max_kh']:.6g}], "
              f"implicit vs finite differences {err:.3g}\n")
    return EXIT_OK


def _bounds_payload(p, curve):
    reports = bounds.full_report(p, curve)
    violated = [r.spec_id for r in reports if r.violated()]
    return reports, {"problem": p.describe(), "closed": curve.closed,
                     "reports": [r.summary() for r in reports], "violated": violated}


def cmd_bounds(cfg, out):
    p, curve = _trace(cfg)
    reports, payload = _bounds_payload(p, curve)
    if "csv" in cfg.formats:
        rows = (row for r in reports for row in r.rows())
        write_csv(_path(cfg, "bounds.csv"), bounds.CSV_HEADER, rows)
    if "json" in cfg.formats:
        write_json(_path(cfg, "bounds.json"), payload)
    if "svg" in cfg.formats:
        write_svg(_path(cfg, "bounds.svg"), p, curve)
    for r in reports:
        flag = "VIOLATED" if r.violated() else "ok"
        out.write(f"{r.spec_id:<10} min margin {r.min_margin: .3e}  "
                  f"equality samples {len(r.equality_samples):>4}  {flag}\n")
    return EXIT_VIOLATION if payload["violated"] else EXIT_OK


def _measures_payload(p, curve):
    if not curve.closed:
        return {"problem": p.describe(), "closed": False,
                "skipped": "open arc: hyperbolic perimeter is infinite"}, False
    rep = measures.report(p, curve)
    rep = {"problem": p.describe(), "closed": True, **rep}
    bad = (abs(rep["gauss_bonnet_residual"]) > GB_TOL
           or rep["isoperimetric_residual"] < -ISO_TOL
           or rep["method_flags"].get("error_estimate", 0) > 1e-8)
    rep["region_bound_failures"] = [c["id"] for c in rep["region_bounds"] if c["margin"] < -1e-8]
    return rep, bad


def cmd_measures(cfg, out):
    p, curve = _trace(cfg)
    rep, bad = _measures_payload(p, curve)
    if "json" in cfg.formats:
        write_json(_path(cfg, "measures.json"), rep)
    if "csv" in cfg.formats and curve.closed:
        keys = ("area_h", "perimeter_h", "total_kh", "gauss_bonnet_residual", "isoperimetric_residual")
        write_csv(_path(cfg, "measures.csv"), keys, [[rep[k] for k in keys]])
    if "svg" in cfg.formats:
        write_svg(_path(cfg, "measures.svg"), p, curve)
    if not curve.closed:
        out.write(rep["skipped"] + "\n")
        return EXIT_OK
    out.write(f"A_h = {rep['area_h']:.12g}  L_h = {rep['perimeter_h']:.12g}  "
              f"k_h = {rep['total_kh']:.12g}  Gauss-Bonnet residual {rep['gauss_bonnet_residual']:.2e}\n")
    for fid in rep["region_bound_failures"]:
        sys.stderr.write(f"warning: region bound {fid} fails on this map\n")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_radius(cfg, out):
    f = parse(cfg.function)
    res = radius_of_convexity(f, opts=cfg.trace)
    if "json" in cfg.formats:
        write_json(_path(cfg, "radius.json"), dict({"f": f.to_dsl()}, **res.as_dict()))
    cap = " (capped at the search limit)" if res.capped else ""
    out.write(f"omega = {res.omega:.6f} in [{res.lo:.9f}, {res.hi:.9f}]{cap}\n")
    if res.witness is not None:
        w = res.witness
        out.write(f"first nonconvex r = {w.r:.9f}: k_e = {w.min_ke:.3e} at "
                  f"{w.witness.real:.9f}{w.witness.imag:+.9f}i\n")
    return EXIT_OK


def _verify_entry(entry, opts):
    jp = entry.jordan_problem()
    curve = trace_problem(jp, opts)
    _, jb = _bounds_payload(jp, curve)
    mrep, mbad = _measures_payload(jp, curve)
    rec = {"id": entry.id, "kind": entry.kind, "jordan": {"bounds": jb, "measures": mrep}}
    bad = bool(jb["violated"]) or mbad
    lp = entry.level_problem()
    if lp is not None:
        _, lb = _bounds_payload(lp, trace_problem(lp, opts))
        rec["level"] = {"bounds": lb}
        bad = bad or bool(lb["violated"])
    return rec, bad


def cmd_verify_all(cfg, out):
    entries = load_corpus(None if cfg.corpus in (None, "default") else cfg.corpus)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        results = list(pool.map(lambda e: _verify_entry(e, cfg.trace), entries))
    records = [r for r, _ in results]
    failed = [r["id"] for r, bad in results if bad]
    region = sorted({(r["id"], fid) for r in records
                     for fid in r["jordan"]["measures"].get("region_bound_failures", [])})
    payload = {"n_entries": len(records), "failed": failed,
               "region_bound_failures": [list(x) for x in region], "entries": records}
    if "json" in cfg.formats:
        write_json(_path(cfg, "verify_all.json"), payload)
    out.write(f"{len(records)} corpus entries, {len(failed)} with violations\n")
    if region:
        sys.stderr.write(f"warning: {len(region)} region-bound failures "
                         f"(see region_bound_failures in the report)\n")
    return EXIT_VIOLATION if failed else EXIT_OK


HANDLERS = {"trace": cmd_trace, "curvature": cmd_curvature, "bounds": cmd_bounds,
            "measures": cmd_measures, "radius": cmd_radius, "verify-all": cmd_verify_all}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    os.makedirs(cfg.out_dir, exist_ok=True)
    return HANDLERS[cfg.command](cfg, out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyplevel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    d = TraceOptions()
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--f", dest="function", help="map in the text syntax, e.g. 'phi(0.5,0)'")
        sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
        sp.add_argument("--r", type=float, default=None, help="Jordan case: use r*f with lambda = 1")
        sp.add_argument("--out-dir", default=".")
        sp.add_argument("--formats", default="csv,json", help="comma list from csv,json,svg")
        sp.add_argument("--angle-budget", type=float, default=d.angle_budget)
        sp.add_argument("--h-min", type=float, default=d.h_min)
        sp.add_argument("--h-max", type=float, default=d.h_max)
        sp.add_argument("--corrector-tol", type=float, default=d.corrector_tol)
        sp.add_argument("--edge-margin", type=float, default=d.edge_margin)
        sp.add_argument("--max-steps", type=int, default=d.max_steps)
        if name == "verify-all":
            sp.add_argument("--corpus", default="default", help="'default' or a corpus file")
    return ap


def config_from_args(ns) -> RunConfig:
    formats = tuple(x for x in ns.formats.split(",") if x)
    opts = TraceOptions(angle_budget=ns.angle_budget, h_min=ns.h_min, h_max=ns.h_max,
                        corrector_tol=ns.corrector_tol, edge_margin=ns.edge_margin,
                        max_steps=ns.max_steps)
    return RunConfig(ns.command, ns.function, ns.lam, ns.r, ns.out_dir, formats,
                     getattr(ns, "corpus", None), opts)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except DSLParseError as exc:
        sys.stderr.write(f"hyplevel: cannot parse --f: {exc}\n")
        return EXIT_USAGE
    except (UsageError, HyplevelError, ValueError, OSError) as exc:
        sys.stderr.write(f"hyplevel: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
