"""Boundary seeding and predictor-corrector tracing of {u = 0}.

The traced orientation keeps the sublevel region on the left: the inward
normal is n = u_zbar / |u_zbar| and the unit tangent is t = -i n, so closed
boundaries run anticlockwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .curvature import curvature_from_jet, implicit_curvature
from .errors import (BoundaryNotFound, MaxStepsExceeded, NoConvergence,
                     OpenCurve, SingularGradient)
from .problem import LevelProblem, level_jet, u_value, u_wirtinger  # noqa: F401

N_RAYS = 64
SEED_TOL = 1e-12


@dataclass(frozen=True)
class TraceOptions:
    angle_budget: float = 0.05
    h_min: float = 1e-5
    h_max: float = 0.02
    corrector_tol: float = 1e-12
    edge_margin: float = 1e-4
    closure_dot: float = 0.99
    max_steps: int = 200_000

    def halved(self) -> "TraceOptions":
        return replace(self, angle_budget=self.angle_budget / 2,
                       h_min=self.h_min / 2, h_max=self.h_max / 2)


@dataclass(frozen=True, eq=False)
class TracedCurve:
    """Ordered samples of a level curve (or any parametrized curve).

    ``weights`` are quadrature weights for integrals against |dz|;
    ``s`` is the arc parameter and ``length`` the Euclidean length
    (including the closing segment when ``closed``).
    """

    z: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    ke: np.ndarray
    kh: np.ndarray
    s: np.ndarray
    weights: np.ndarray
    closed: bool
    length: float
    u_residual: np.ndarray
    method: str = "trace"
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.z)

    @classmethod
    def from_parametric(cls, gamma, n: int = 512, closed: bool = True,
                        t0: float = 0.0, t1: float = 2 * math.pi):
        """Sample ``gamma(t) -> (g, g', g'')`` on a uniform grid.

        Closed curves are taken as periodic on [t0, t1), which makes the
        weights a spectrally accurate trapezoid rule.
        """
        t = np.linspace(t0, t1, n, endpoint=not closed)
        g, g1, g2 = (np.asarray(a, dtype=complex) * np.ones_like(t) for a in gamma(t))
        cp = curvature_from_jet(g, g1, g2)
        speed = np.abs(g1)
        dt = (t1 - t0) / (n if closed else n - 1)
        w = speed * dt
        if not closed:
            w[0] *= 0.5
            w[-1] *= 0.5
        s = _cumulative_arclength(speed, dt, closed)
        return cls(z=g, tangent=g1 / speed, normal=cp.normal, ke=cp.ke,
                   kh=cp.kh, s=s, weights=w, closed=closed,
                   length=float(np.sum(w)), u_residual=np.zeros(n),
                   method="parametric")

    def csv_rows(self):
        for i in range(len(self.z)):
            yield (self.s[i], self.z[i].real, self.z[i].imag,
                   self.tangent[i].real, self.tangent[i].imag,
                   self.ke[i], self.kh[i], self.u_residual[i])


CSV_HEADER = ("s", "re_z", "im_z", "re_t", "im_t", "ke", "kh", "u_residual")


def _cumulative_arclength(speed, dt, closed):
    if not closed:
        seg = 0.5 * (speed[1:] + speed[:-1]) * dt
        return np.concatenate([[0.0], np.cumsum(seg)])
    # spectral antiderivative of a periodic speed
    n = len(speed)
    c = np.fft.rfft(speed)
    k = np.arange(len(c))
    period = n * dt
    theta = np.arange(n) * dt
    mean = c[0].real / n
    ck = np.zeros_like(c)
    ck[1:] = c[1:] / (1j * 2 * math.pi * k[1:] / period)
    osc = np.fft.irfft(ck, n)
    return mean * theta + osc - osc[0]


def find_boundary_seed(p: LevelProblem, n_rays: int = N_RAYS, n_radial: int = 800):
    """First boundary crossing along rays from the origin.

    Scans rays at angles 2 pi k / n_rays for a sign change of u and bisects
    the bracket down to 1e-13.
    """
    rmax = 1 - 1e-6
    radii = np.linspace(0.0, rmax, n_radial + 1)
    for k in range(n_rays):
        e = complex(math.cos(2 * math.pi * k / n_rays), math.sin(2 * math.pi * k / n_rays))
        u = level_jet(p, radii * e)[0]
        neg = np.nonzero(u <= 0)[0]
        if len(neg) == 0 or neg[0] == 0:
            continue
        j = neg[0]
        lo, hi = radii[j - 1], radii[j]
        while hi - lo > 1e-13:
            mid = 0.5 * (lo + hi)
            if level_jet(p, mid * e)[0] > 0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi) * e
    raise BoundaryNotFound("boundary empty or touches the unit circle only")


def _correct(p, z, tol, max_iter=40):
    """Newton flow along the gradient onto u = 0."""
    for _ in range(max_iter):
        u, uzb = level_jet(p, z)[:2]
        g2 = (uzb * uzb.conjugate()).real
        if g2 < 1e-20:
            raise SingularGradient(f"|u_zbar| < 1e-10 at {z}")
        dz = -u * uzb / (2 * g2)
        z = z + dz
        if abs(dz) < 1e-17:
            break
    u = level_jet(p, z)[0]
    if abs(u) > tol:
        raise NoConvergence(f"corrector stalled with |u| = {abs(u):.3g}")
    return z


def _local(p, z):
    u, uzb, uzz, uzzb, _, _ = level_jet(p, z)
    ke, kh, n = implicit_curvature(z, uzb, uzz, uzzb)
    return float(ke), n


def _march(p, z0, sign, opts, steps_left):
    """Walk from z0 in direction sign * t. Returns (points, closed)."""
    pts = [z0]
    z = z0
    ke0, n0 = _local(p, z0)
    t0 = -1j * n0 * sign
    left_seed = False
    for _ in range(steps_left):
        ke, n = _local(p, z)
        t = -1j * n * sign
        h = min(max(opts.angle_budget / max(abs(ke), 1e-300), opts.h_min), opts.h_max)
        if sign > 0:
            d = abs(z - z0)
            if not left_seed and d > 3 * h:
                left_seed = True
            if left_seed and d < 2 * h and (t * t0.conjugate()).real > opts.closure_dot:
                if d <= 1.25 * h:
                    return pts, True
                h = d / 2
        while True:
            zp = z + h * t + 0.5 * h * h * ke * n
            try:
                znew = _correct(p, zp, opts.corrector_tol)
            except (NoConvergence, SingularGradient):
                znew = None
            ok = (znew is not None and abs(znew - zp) < 0.5 * h
                  and ((znew - z) * t.conjugate()).real > 0)
            if ok:
                break
            if h <= opts.h_min:
                if znew is None:
                    raise SingularGradient(f"tracer cannot continue past {z}")
                break
            h = max(h / 2, opts.h_min)
        # stop before the step that crosses the edge; samples closer to the
        # unit circle lose kh accuracy like eps / |grad u|^2
        if abs(znew) > 1 - opts.edge_margin:
            return pts, False
        pts.append(znew)
        z = znew
    raise MaxStepsExceeded(f"no closure after {steps_left} steps")


def trace(p: LevelProblem, seed, opts: TraceOptions = TraceOptions()) -> TracedCurve:
    """Trace the boundary component through ``seed``.

    Closed components stop once the walk returns to the seed with an
    aligned tangent; arcs ending on the unit circle are walked in both
    directions until |z| > 1 - edge_margin and flagged ``closed=False``.
    """
    z0 = _correct(p, complex(seed), opts.corrector_tol)
    fwd, closed = _march(p, z0, +1, opts, opts.max_steps)
    if closed:
        pts = fwd
    else:
        back, _ = _march(p, z0, -1, opts, opts.max_steps - len(fwd))
        pts = back[:0:-1] + fwd
    return build_curve(p, np.array(pts, dtype=complex), closed)


def build_curve(p: LevelProblem, z: np.ndarray, closed: bool, method="trace") -> TracedCurve:
    """Fill tangents, curvatures, arc parameter and trapezoid weights."""
    u, uzb, uzz, uzzb, _, _ = level_jet(p, z)
    ke, kh, n = implicit_curvature(z, uzb, uzz, uzzb)
    t = -1j * n
    if closed:
        z_next, t_next = np.roll(z, -1), np.roll(t, -1)
    else:
        z_next, t_next = z[1:], t[1:]
    chord = np.abs(z_next - z[: len(z_next)])
    turn = np.abs(np.angle(t_next * np.conj(t[: len(t_next)])))
    half = 0.5 * turn
    # arc of the circle through both points tangent to the samples
    factor = np.where(half > 1e-8, half / np.sin(np.where(half > 1e-8, half, 1.0)), 1.0)
    seg = chord * factor
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if closed:
        length = float(s[-1])
        s = s[:-1]
        w = 0.5 * (seg + np.roll(seg, 1))
    else:
        length = float(s[-1])
        w = np.zeros(len(z))
        w[:-1] += 0.5 * seg
        w[1:] += 0.5 * seg
    return TracedCurve(z=z, tangent=t, normal=n, ke=np.asarray(ke, float),
                       kh=np.asarray(kh, float), s=s, weights=w, closed=closed,
                       length=length, u_residual=np.asarray(u, float), method=method)


def trace_problem(p: LevelProblem, opts: TraceOptions = TraceOptions()) -> TracedCurve:
    """Seed search followed by tracing."""
    return trace(p, find_boundary_seed(p), opts)


def is_starlike(curve: TracedCurve) -> bool:
    """True when arg(z) increases strictly along the samples."""
    ang = np.unwrap(np.angle(curve.z))
    return bool(np.all(np.diff(ang) > 0))


def resample_polar(p: LevelProblem, curve: TracedCurve, n: int,
                   theta0: float | None = None) -> TracedCurve:
    """Re-sample a closed starlike boundary at n equally spaced polar angles.

    The angles start at ``theta0`` (default: the polar angle of the first
    sample).

    Each radius is solved by Newton's method on u(rho e^{i theta}) = 0,
    starting from the traced polyline. The weights are |z'(theta)| 2 pi / n,
    a periodic trapezoid rule that converges spectrally for analytic curves.
    """
    if not curve.closed:
        raise OpenCurve("polar resampling needs a closed curve")
    ang = np.angle(curve.z)
    rad = np.abs(curve.z)
    start = ang[0] if theta0 is None else theta0
    theta = start + 2 * math.pi * np.arange(n) / n
    rho = np.interp(np.mod(theta, 2 * math.pi), np.mod(ang, 2 * math.pi), rad,
                    period=2 * math.pi)
    e = np.exp(1j * theta)
    for _ in range(60):
        u, uzb = level_jet(p, rho * e)[:2]
        du = 2 * (np.conj(uzb) * e).real
        if np.any(np.abs(du) < 1e-14):
            raise SingularGradient("ray tangent to the boundary; curve not starlike")
        step = u / du
        rho = rho - step
        if np.max(np.abs(step)) < 1e-16:
            break
    z = rho * e
    u, uzb, uzz, uzzb, _, _ = level_jet(p, z)
    if np.max(np.abs(u)) > 1e-12:
        raise NoConvergence("radial Newton did not converge")
    uz = np.conj(uzb)
    drho = -(uz * 1j * z).real / (uz * e).real
    dz = (drho + 1j * rho) * e
    speed = np.abs(dz)
    ke, kh, nn = implicit_curvature(z, uzb, uzz, uzzb)
    h = 2 * math.pi / n
    return TracedCurve(z=z, tangent=dz / speed, normal=nn, ke=np.asarray(ke, float),
                       kh=np.asarray(kh, float), s=_cumulative_arclength(speed, h, True),
                       weights=speed * h, closed=True, length=float(np.sum(speed) * h),
                       u_residual=np.asarray(u, float), method="polar",
                       meta={"n": n})
