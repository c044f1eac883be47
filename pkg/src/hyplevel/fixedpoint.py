"""Fixed-point function psi of a self-map f with f(0) != 0.

For |w| < 1, psi(w) is the unique fixed point of z -> w f(z); psi maps the
disc conformally onto {|z| < |f(z)|} with psi(0) = 0, psi'(0) = f(0), and
psi(r D) is the sublevel region of r f.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NearSingular, NoConvergence
from .holomap import HoloMap, evaluate


@dataclass(frozen=True)
class FixedPointMap:
    f: HoloMap
    max_iter: int = 400
    picard_iter: int = 200
    tol: float = 1e-14

    def __post_init__(self):
        if abs(evaluate(self.f, 0.0, 0)[0]) == 0:
            raise ValueError("the fixed-point function needs f(0) != 0")

    def __call__(self, w):
        return psi(self, w)


def _psi_scalar(m: FixedPointMap, w: complex) -> complex:
    f = m.f
    z = w * f.jet(0j)[0]
    for _ in range(m.picard_iter):
        z_new = w * f.jet(z)[0]
        if abs(z_new - z) < m.tol:
            z = z_new
            break
        z = z_new
    else:
        # linear convergence stalls as |w| -> 1; finish with Newton on w f(z) - z
        for _ in range(m.max_iter - m.picard_iter):
            f0, f1 = f.jet(z)[:2]
            step = (w * f0 - z) / (w * f1 - 1)
            z = z - step
            if abs(step) < m.tol:
                break
        else:
            raise NoConvergence(f"fixed point of w f not found for |w| = {abs(w):.6g}")
    # one Newton polish removes the Picard tail error
    f0, f1 = f.jet(z)[:2]
    return z - (w * f0 - z) / (w * f1 - 1)


def psi(m: FixedPointMap, w):
    """psi(w), for a scalar or an array of points with |w| < 1."""
    if np.ndim(w) == 0:
        w = complex(w)
        if abs(w) >= 1:
            raise ValueError("|w| must be < 1")
        if w == 0:
            return 0j
        return _psi_scalar(m, w)
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    for idx, wi in np.ndenumerate(w):
        out[idx] = psi(m, wi)
    return out


def psi_jet(m: FixedPointMap, w):
    """``(psi, psi', psi'')`` by implicit differentiation of psi = w f(psi).

    psi'  = f(psi) / (1 - w f'(psi))
    psi'' = (2 f'(psi) psi' + w f''(psi) psi'^2) / (1 - w f'(psi))
    """
    z = psi(m, w)
    w = np.asarray(w, dtype=complex) if np.ndim(w) else complex(w)
    f0, f1, f2 = m.f.jet(z)
    den = 1 - w * f1
    if np.any(np.abs(den) < 1e-10):
        raise NearSingular("1 - w f'(psi(w)) is too small")
    d1 = f0 / den
    d2 = (2 * f1 * d1 + w * f2 * d1 * d1) / den
    return z, d1, d2


def psi_prime(m: FixedPointMap, w):
    return psi_jet(m, w)[1]


def c_quantity(m: FixedPointMap, r: float, w, check_tol: float = 1e-9) -> float:
    """C_{rf, zeta} at zeta = psi(w), |w| = r.

    Computed from psi as (1 - |psi|^2) / (r |psi'|) and, independently,
    from boundary data |conj((rf)'(zeta)) (rf)(zeta) - zeta| (1-|zeta|^2) / |zeta|^2;
    the two must agree.
    """
    if not 0 < r < 1:
        raise ValueError("C is only defined for r in (0, 1)")
    w = complex(w)
    if abs(abs(w) - r) > 1e-12:
        raise ValueError("w must lie on the circle |w| = r")
    zeta, d1, _ = psi_jet(m, w)
    via_psi = (1 - abs(zeta) ** 2) / (r * abs(d1))
    via_boundary = c_from_boundary(m.f, r, zeta)
    if abs(via_psi - via_boundary) > check_tol * max(1.0, abs(via_psi)):
        raise AssertionError(f"C mismatch: {via_psi} vs {via_boundary}")
    return via_psi


def c_from_boundary(f: HoloMap, r: float, zeta):
    """C_{rf, zeta} from values of f at a boundary point of {|z| < r|f(z)|}."""
    f0, f1 = f.jet(zeta)[:2]
    az2 = np.abs(zeta) ** 2
    return np.abs(r * r * np.conj(f1) * f0 - zeta) * (1 - az2) / az2


def p_of_w(m: FixedPointMap, w):
    """p(w) = 1 + w psi''/psi' + 2 w psi' conj(psi) / (1 - |psi|^2)."""
    if np.ndim(w) == 0 and complex(w) == 0:
        return 1 + 0j
    z, d1, d2 = psi_jet(m, w)
    return 1 + w * d2 / d1 + 2 * w * d1 * np.conj(z) / (1 - np.abs(z) ** 2)


def p_via_hyperbolic(m: FixedPointMap, w):
    """Same p(w) written through the hyperbolic derivatives of psi."""
    w = complex(w)
    z, d1, d2 = psi_jet(m, w)
    aw2 = abs(w) ** 2
    dz = 1 - aw2
    dp = 1 - abs(z) ** 2
    dh1 = dz * d1 / dp
    dh2 = dz**2 * d2 / dp + 2 * dz**2 * z.conjugate() * d1**2 / dp**2 - 2 * w.conjugate() * dz * d1 / dp
    return w / dz * dh2 / dh1 + (1 + aw2) / dz


def ma_minda_gap(m: FixedPointMap, w) -> float:
    """RHS minus LHS of the Ma-Minda inequality for hyperbolically convex psi.

    |p(w) - (1+|w|^2)/(1-|w|^2)| <= 2|w|/(1-|w|^2) (1 - |D_h1 psi(w)|^2).
    """
    w = complex(w)
    z, d1, _ = psi_jet(m, w)
    aw2 = abs(w) ** 2
    dh1 = (1 - aw2) * abs(d1) / (1 - abs(z) ** 2)
    lhs = abs(p_of_w(m, w) - (1 + aw2) / (1 - aw2))
    rhs = 2 * abs(w) / (1 - aw2) * (1 - dh1**2)
    return rhs - lhs


__all__ = ["FixedPointMap", "psi", "psi_jet", "psi_prime", "c_quantity",
           "c_from_boundary", "p_of_w", "p_via_hyperbolic", "ma_minda_gap"]
