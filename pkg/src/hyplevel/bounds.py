"""Registry of pointwise curvature inequalities along traced boundaries.

Each bound is a closed-form function of the boundary point and the map's
values there. Margins are normalized so that a satisfied inequality always
has margin >= 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import RequirementMismatch
from .holomap import evaluate
from .problem import LevelProblem

EQ_TOL = 1e-7
# floor for bounds that vanish identically, e.g. geodesics with kh = 0
EQ_ABS = 1e-10
NUM_TOL = 1e-8
SMALL_ZETA = 1e-6

LOWER_KH, UPPER_KH, LOWER_KE = "lower_on_kh", "upper_on_kh", "lower_on_ke"


def _lam_ge1(p):
    return True


def _lam_eq1(p):
    return p.lam == 1


def _lam_gt1(p):
    return p.lam > 1


def _jordan(p):
    return p.jordan


_REQUIREMENTS = {
    "lambda>=1": _lam_ge1,
    "lambda=1": _lam_eq1,
    "lambda>1": _lam_gt1,
    "jordan_r<1": _jordan,
}


@dataclass(frozen=True)
class BoundSpec:
    id: str
    side: str
    requires: str
    evaluator: Callable

    def applies(self, p: LevelProblem) -> bool:
        return _REQUIREMENTS[self.requires](p)


def _values(p, z):
    f0, f1 = p.map.jet(z)[:2]
    return np.abs(z), f0, f1


def _grad_abs(p, z, f0, f1):
    return np.abs(np.conj(f1) * f0 - p.lam * z)


def _t21(p, z):
    az, f0, f1 = _values(p, z)
    lam = p.lam
    af, ad = np.abs(f0), np.abs(f1)
    num = lam**2 * (1 + az**2 - 2 * af) - ad**2 * (1 - af) ** 2
    return num / (lam * _grad_abs(p, z, f0, f1))


def _c41(p, z):
    az, f0, f1 = _values(p, z)
    lam = p.lam
    return lam * (lam - 1) * (1 - az**2) / _grad_abs(p, z, f0, f1)


def _c31(p, z):
    az, f0, f1 = _values(p, z)
    return (1 - az) ** 2 * (1 - np.abs(f1) ** 2) / _grad_abs(p, z, f0, f1)


def _c42(p, z):
    az, f0, f1 = _values(p, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1 - az) ** 2 / (2 * az) * (1 - np.abs(f1) ** 2)
    return np.where(az < SMALL_ZETA, np.nan, out)


def _c43(p, z):
    az, f0, _ = _values(p, z)
    return az - np.abs(f0)


def _c44(p, z):
    az, f0, _ = _values(p, z)
    return -(az + np.abs(f0)) / (1 - az**2)


def c_boundary(p: LevelProblem, z):
    """C_{rf, zeta} from boundary data of the scaled map rf."""
    az, f0, f1 = _values(p, z)
    return np.abs(np.conj(f1) * f0 - z) * (1 - az**2) / az**2


def _t51_upper(p, z):
    r = p.r
    c = c_boundary(p, z)
    return (1 + r) / (1 - r) * c - 2 * (1 - r * r) / (r * c)


def _t51_lower(p, z):
    r = p.r
    c = c_boundary(p, z)
    return (1 - r) / (1 + r) * c + 2 * (1 - r * r) / (r * c)


def dh1_k_alpha(alpha: float, x: float) -> float:
    """|D_h1 k_alpha(x)| for real x = +-r, in closed form."""
    if x <= 0:
        r = -x
        return alpha * (1 - r) / math.sqrt((1 + r) ** 2 - 4 * alpha**2 * r)
    return alpha * (1 + x) / math.sqrt((1 - x) ** 2 + 4 * alpha**2 * x)


def _alpha(p):
    return abs(evaluate(p.f, 0.0, 0)[0])


def _c53_upper(p, z):
    r, a = p.r, _alpha(p)
    dm = dh1_k_alpha(a, -r)
    return np.full(np.shape(z), (1 + r) ** 2 / (r * dm) - 2 * dm)


def _c53_lower(p, z):
    r, a = p.r, _alpha(p)
    dm, dp = dh1_k_alpha(a, -r), dh1_k_alpha(a, r)
    return np.full(np.shape(z), (1 - r) ** 2 / (r * dp) + 2 * dm)


SPECS = {
    s.id: s
    for s in [
        BoundSpec("T21", LOWER_KH, "lambda>=1", _t21),
        BoundSpec("C41", LOWER_KH, "lambda>1", _c41),
        BoundSpec("C31_khlb", LOWER_KH, "lambda=1", _c31),
        BoundSpec("C42_khlb2", LOWER_KH, "lambda=1", _c42),
        BoundSpec("C43_kh3", LOWER_KH, "lambda>1", _c43),
        BoundSpec("C44_kelb", LOWER_KE, "lambda>=1", _c44),
        BoundSpec("T51_lower", LOWER_KH, "jordan_r<1", _t51_lower),
        BoundSpec("T51_upper", UPPER_KH, "jordan_r<1", _t51_upper),
        BoundSpec("C53_lower", LOWER_KH, "jordan_r<1", _c53_lower),
        BoundSpec("C53_upper", UPPER_KH, "jordan_r<1", _c53_upper),
    ]
}


@dataclass(frozen=True, eq=False)
class BoundReport:
    spec_id: str
    z: np.ndarray
    actual: np.ndarray
    bound: np.ndarray
    margin: np.ndarray
    skipped: int
    eq_tol: float = EQ_TOL

    @property
    def valid(self):
        return np.isfinite(self.margin)

    @property
    def min_margin(self) -> float:
        m = self.margin[self.valid]
        return float(np.min(m)) if len(m) else math.inf

    @property
    def equality_mask(self) -> np.ndarray:
        # relative: near the unit circle kh and some bounds both decay to 0
        scale = np.maximum(np.abs(self.actual), np.abs(self.bound))
        with np.errstate(invalid="ignore"):
            tight = np.abs(self.margin) <= np.maximum(EQ_ABS, self.eq_tol * scale)
        return self.valid & tight

    @property
    def equality_samples(self) -> np.ndarray:
        return self.z[self.equality_mask]

    def violated(self, tol: float = NUM_TOL) -> bool:
        return self.min_margin < -tol

    def rows(self):
        for i in np.nonzero(self.valid)[0]:
            yield (self.spec_id, self.z[i].real, self.z[i].imag,
                   self.actual[i], self.bound[i], self.margin[i])

    def summary(self) -> dict:
        return {
            "spec_id": self.spec_id,
            "n_samples": int(np.sum(self.valid)),
            "skipped": self.skipped,
            "min_margin": self.min_margin,
            "equality_samples": [[float(z.real), float(z.imag)] for z in self.equality_samples],
        }


CSV_HEADER = ("spec_id", "re_z", "im_z", "actual", "bound", "margin")


def evaluate_bound(spec, p: LevelProblem, curve, eq_tol: float = EQ_TOL) -> BoundReport:
    """Evaluate one inequality at every sample of ``curve``."""
    if isinstance(spec, str):
        spec = SPECS[spec]
    if not spec.applies(p):
        raise RequirementMismatch(f"{spec.id} requires {spec.requires}; got {p.describe()}")
    z = curve.z
    bound = np.asarray(spec.evaluator(p, z), dtype=float)
    actual = curve.ke if spec.side == LOWER_KE else curve.kh
    if spec.side == UPPER_KH:
        margin = bound - actual
    else:
        margin = actual - bound
    skipped = int(np.sum(~np.isfinite(bound)))
    return BoundReport(spec.id, z, np.asarray(actual, float), bound, margin, skipped, eq_tol)


def applicable_specs(p: LevelProblem):
    return [s for s in SPECS.values() if s.applies(p)]


def full_report(p: LevelProblem, curve, eq_tol: float = EQ_TOL):
    """All applicable bounds, in registry order."""
    return [evaluate_bound(s, p, curve, eq_tol) for s in applicable_specs(p)]
