"""Euclidean and hyperbolic curvature of curves in the unit disc.

Sign convention: the unit normal is ``n = i * gamma' / |gamma'|``; for a
level curve of u it points into {u > 0}. With that normal,

    k_h = (1 - |z|^2) k_e - 2 Re(n conj(z)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OffCurve, SingularGradient, SingularTangent
from .problem import LevelProblem, level_jet, u_value


@dataclass(frozen=True)
class CurvaturePair:
    ke: object
    kh: object
    normal: object


def curvature_from_jet(g, g1, g2) -> CurvaturePair:
    """Curvatures of a parametrized curve from position, velocity, acceleration."""
    g, g1, g2 = (np.asarray(a, dtype=complex) for a in (g, g1, g2))
    speed = np.abs(g1)
    if np.any(speed < 1e-12):
        raise SingularTangent("tangent vector vanishes")
    ke = (g2 * np.conj(g1)).imag / speed**3
    kh = ((1 - np.abs(g) ** 2) * g2 / g1 + 2 * np.conj(g) * g1).imag / speed
    n = 1j * g1 / speed
    if ke.ndim == 0:
        return CurvaturePair(float(ke), float(kh), complex(n))
    return CurvaturePair(ke, kh, n)


def kh_parametric(gamma, t) -> CurvaturePair:
    """Curvature of ``gamma`` at parameter ``t``.

    ``gamma(t)`` must return the triple ``(gamma, gamma', gamma'')``.
    """
    return curvature_from_jet(*gamma(t))


def implicit_curvature(z, u_zbar, u_zz, u_zzbar):
    """Curvature of the level curve of u through z, from Wirtinger data.

    Differentiating u(gamma(s)) = 0 twice along an arc-length
    parametrization with gamma' = -i u_zbar / |u_zbar| gives
    k_e |u_zbar| = -(Re(u_zz gamma'^2) + u_zzbar).
    Returns ``(ke, kh, n)`` with n = u_zbar / |u_zbar|.
    """
    g = np.abs(u_zbar)
    n = u_zbar / g
    t = -1j * n
    ke = -((u_zz * t * t).real + u_zzbar) / g
    kh = (1 - (z * np.conj(z)).real) * ke - 2 * (n * np.conj(z)).real
    return ke, kh, n


def kh_implicit(p: LevelProblem, z, off_tol: float = 1e-10) -> CurvaturePair:
    """Curvature of the boundary of {u > 0} at a boundary point z."""
    z = np.asarray(z, dtype=complex)
    u = u_value(p, z)
    if np.any(np.abs(u) > off_tol):
        raise OffCurve(f"|u| = {np.max(np.abs(u)):.3g} exceeds {off_tol:g}")
    _, u_zbar, u_zz, u_zzbar, _, _ = level_jet(p, z)
    if np.any(np.abs(u_zbar) < 1e-10):
        raise SingularGradient("gradient of u vanishes on the curve")
    ke, kh, n = implicit_curvature(z, u_zbar, u_zz, u_zzbar)
    if np.ndim(ke) == 0:
        return CurvaturePair(float(ke), float(kh), complex(n))
    return CurvaturePair(ke, kh, n)


def fd_weights(offsets, order):
    """Finite-difference weights for derivative ``order`` at offset 0.

    ``offsets`` has shape (m, k): one stencil of k nodes per row. Nodes may
    be unevenly spaced.
    """
    offsets = np.atleast_2d(np.asarray(offsets, dtype=float))
    scale = np.max(np.abs(offsets), axis=1, keepdims=True)
    return _unit_fd_weights(offsets / scale, order) / scale**order


def _unit_fd_weights(offsets, order):
    k = offsets.shape[1]
    powers = np.arange(k)
    # rows: monomials s^j / j!, columns: stencil nodes
    fact = np.array([np.prod(np.arange(1, j + 1)) for j in powers], dtype=float)
    V = offsets[:, None, :] ** powers[None, :, None] / fact[None, :, None]
    rhs = np.zeros((offsets.shape[0], k))
    rhs[:, order] = 1.0
    return np.linalg.solve(V, rhs[..., None])[..., 0]


def fd_along(curve, values, order):
    """Derivative of sampled ``values`` with respect to the arc parameter.

    Five-point stencils on the (possibly uneven) nodes ``curve.s``. Closed
    curves wrap periodically; open arcs return NaN at the two samples
    nearest each end.
    """
    values = np.asarray(values)
    s = curve.s
    n = len(s)
    idx = np.arange(n)[:, None] + np.arange(-2, 3)[None, :]
    if curve.closed:
        rows = np.arange(n)
        vv = values[idx % n]
        ss = s[idx % n] + np.floor_divide(idx, n) * curve.length
    else:
        rows = np.arange(2, n - 2)
        vv = values[idx[rows]]
        ss = s[idx[rows]]
    w = fd_weights(ss - ss[:, 2:3], order)
    out = np.full(n, np.nan, dtype=values.dtype if np.iscomplexobj(values) else float)
    out[rows] = np.sum(w * vv, axis=1)
    return out


def fd_curvature(curve):
    """Hyperbolic curvature from 5-point differences of the traced positions."""
    d1 = fd_along(curve, curve.z, 1)
    d2 = fd_along(curve, curve.z, 2)
    out = np.full(len(curve.z), np.nan)
    ok = np.isfinite(d1)
    out[ok] = curvature_from_jet(curve.z[ok], d1[ok], d2[ok]).kh
    return out


def cross_validate(p: LevelProblem, curve) -> float:
    """Max |k_h(implicit) - k_h(finite differences)| over the usable samples."""
    exact = kh_implicit(p, curve.z, off_tol=1e-8).kh
    approx = fd_curvature(curve)
    mask = np.isfinite(approx)
    return float(np.max(np.abs(exact[mask] - approx[mask])))
