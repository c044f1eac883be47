"""Euclidean convexity of Omega(rf) and the radius of convexity.

Omega(rf) is hyperbolically convex and contains 0, hence starlike about 0,
so its boundary is a polar graph rho(theta). Minimum curvature searches run
in theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .curvature import implicit_curvature
from .errors import HyplevelError, NoConvergence, SingularGradient
from .holomap import HoloMap, MaMindaK, evaluate
from .levelset import TraceOptions, resample_polar, trace_problem
from .problem import LevelProblem, level_jet

TOL = 1e-9
GOLDEN_TOL = 1e-10
R_LO, R_HI = 0.05, 1 - 1e-6
WIDTH = 1e-6
MAX_DEPTH = 60
N_SAMPLES = 1024

CONVEX, NONCONVEX, INCONCLUSIVE = "convex", "nonconvex", "inconclusive"


@dataclass(frozen=True)
class ConvexityCertificate:
    r: float
    min_ke: float
    min_kh: float
    verdict: str
    witness: complex
    n_samples: int

    def as_dict(self) -> dict:
        return {"r": self.r, "min_ke": self.min_ke, "min_kh": self.min_kh,
                "verdict": self.verdict,
                "witness": [self.witness.real, self.witness.imag]}


def _radial_point(p, theta, rho):
    e = complex(math.cos(theta), math.sin(theta))
    for _ in range(60):
        u, uzb = level_jet(p, rho * e)[:2]
        du = 2 * (uzb.conjugate() * e).real
        if abs(du) < 1e-14:
            raise SingularGradient("ray tangent to the boundary")
        step = u / du
        rho -= step
        if abs(step) < 1e-16:
            break
    return rho * e


def _curvatures_at(p, z):
    u, uzb, uzz, uzzb = level_jet(p, z)[:4]
    ke, kh, _ = implicit_curvature(z, uzb, uzz, uzzb)
    return float(ke), float(kh)


def _golden_min(fun, a, b, tol):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def _refine(p, curve, values, which):
    """Golden-section refinement of a sampled minimum in polar angle."""
    i = int(np.argmin(values))
    n = len(curve)
    th0 = float(np.angle(curve.z[i]))
    dth = 2 * math.pi / n
    rho0 = float(abs(curve.z[i]))
    cache = {}

    def fun(th):
        z = _radial_point(p, th, rho0)
        cache[th] = z
        return _curvatures_at(p, z)[which]

    th, val = _golden_min(fun, th0 - dth, th0 + dth, GOLDEN_TOL)
    if val > values[i]:
        return float(values[i]), complex(curve.z[i])
    return val, cache[th]


def certify(p: LevelProblem, opts: TraceOptions = TraceOptions(),
            n_samples: int = N_SAMPLES, tol: float = TOL) -> ConvexityCertificate:
    """Decide Euclidean convexity of Omega(rf) from the sign of min k_e.

    convex when min k_e > tol, nonconvex when min k_e < -10 tol (the
    refined minimizer is the witness), inconclusive in between.
    """
    if not p.jordan:
        raise ValueError("convexity certification needs the Jordan case (r set)")
    # Omega(rf) lies in |z| < r, so this margin never cuts a closed boundary
    opts = replace(opts, edge_margin=min(opts.edge_margin, 0.5 * (1 - p.r)))
    curve = resample_polar(p, trace_problem(p, opts), n_samples)
    min_ke, witness = _refine(p, curve, curve.ke, 0)
    min_kh, _ = _refine(p, curve, curve.kh, 1)
    if min_ke > tol:
        verdict = CONVEX
    elif min_ke < -10 * tol:
        verdict = NONCONVEX
    else:
        verdict = INCONCLUSIVE
    return ConvexityCertificate(p.r, min_ke, min_kh, verdict, witness, n_samples)


@dataclass(frozen=True)
class RadiusResult:
    omega: float
    lo: float
    hi: float
    capped: bool
    witness: ConvexityCertificate | None
    evaluations: int

    def as_dict(self) -> dict:
        return {"omega": self.omega, "bracket": [self.lo, self.hi], "capped": self.capped,
                "witness": self.witness.as_dict() if self.witness else None,
                "evaluations": self.evaluations}


def radius_of_convexity(f: HoloMap, width: float = WIDTH, lo: float = R_LO, hi: float = R_HI,
                        opts: TraceOptions = TraceOptions()) -> RadiusResult:
    """Bisection for sup{r : Omega(rf) convex}, using monotonicity in r.

    An inconclusive or failed certificate at the midpoint is retried at a
    point shifted by a quarter bracket; the search stops after MAX_DEPTH
    certificate calls.
    """
    if abs(evaluate(f, 0.0, 0)[0]) == 0:
        raise ValueError("the radius of convexity needs f(0) != 0")
    calls = 0

    def cert(r):
        nonlocal calls
        calls += 1
        try:
            return certify(LevelProblem(f, 1.0, r), opts)
        except (HyplevelError, NoConvergence):
            return None

    top = cert(hi)
    if top is not None and top.verdict == CONVEX:
        return RadiusResult(hi, hi, hi, True, None, calls)
    bottom = cert(lo)
    if bottom is None or bottom.verdict != CONVEX:
        raise NoConvergence(f"Omega(rf) not certified convex at r = {lo}")
    witness = top if top is not None and top.verdict == NONCONVEX else None
    shift = 0
    while hi - lo > width:
        if calls >= MAX_DEPTH:
            raise NoConvergence(f"radius search aborted with bracket [{lo}, {hi}]")
        mid = 0.5 * (lo + hi) + shift * 0.25 * (hi - lo)
        c = cert(mid)
        if c is None or c.verdict == INCONCLUSIVE:
            shift = -1 if shift >= 0 else 1
            continue
        shift = 0
        if c.verdict == CONVEX:
            lo = mid
        else:
            hi, witness = mid, c
    return RadiusResult(0.5 * (lo + hi), lo, hi, False, witness, calls)


def ke_at_pi_closed_form(alpha: float, r: float) -> float:
    """k_e at the boundary point psi(-r) of Omega(r f_alpha).

    Equals (k'(-r) - r k''(-r)) / (r k'(-r)^2) with k = k_alpha.
    """
    if not 0 < alpha <= 1 or not 0 < r < 1:
        raise ValueError("need alpha in (0, 1] and r in (0, 1)")
    _, k1, k2 = MaMindaK(alpha).jet(complex(-r))
    k1, k2 = k1.real, k2.real
    return (k1 - r * k2) / (r * k1 * k1)


def verdict_grid(f: HoloMap, radii, opts: TraceOptions = TraceOptions()):
    """Certificates on a grid of radii, for monotonicity checks."""
    return [certify(LevelProblem(f, 1.0, float(r)), opts) for r in radii]


__all__ = ["ConvexityCertificate", "RadiusResult", "certify", "radius_of_convexity",
           "ke_at_pi_closed_form", "verdict_grid", "CONVEX", "NONCONVEX", "INCONCLUSIVE"]
