"""The level function u = |f|^2 - lam |z|^2 + lam - 1 and its Wirtinger data."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .holomap import HoloMap, ScalarMul, evaluate


@dataclass(frozen=True)
class LevelProblem:
    """Sublevel set {u > 0} of a self-map ``f``.

    With ``r`` set, the map used is ``r f`` and ``lam`` is forced to 1
    (the Jordan case, whose boundary stays inside r * disc).
    """

    f: HoloMap
    lam: float = 1.0
    r: Optional[float] = None

    def __post_init__(self):
        if self.r is not None:
            if not 0 < self.r < 1:
                raise ValueError("r must lie in (0, 1)")
            if self.lam != 1:
                raise ValueError("the scaled (r) problem is only defined for lam = 1")
        if self.lam < 1:
            raise ValueError("lam must be >= 1")
        if self.lam == 1 and abs(evaluate(self.f, 0.0, 0)[0]) == 0:
            raise ValueError("lam = 1 requires f(0) != 0")

    @property
    def map(self) -> HoloMap:
        """The map entering u: ``f`` itself, or ``r f`` in the Jordan case."""
        if self.r is None:
            return self.f
        return ScalarMul(self.r, self.f)

    @property
    def jordan(self) -> bool:
        return self.r is not None

    def describe(self) -> dict:
        return {"f": self.f.to_dsl(), "lambda": self.lam, "r": self.r}


def level_jet(p: LevelProblem, z):
    """``(u, u_zbar, u_zz, u_zzbar, f, f')`` at z, without domain checks."""
    f0, f1, f2 = p.map.jet(z)
    lam = p.lam
    fc = np.conj(f0) if isinstance(f0, np.ndarray) else f0.conjugate()
    f1c = np.conj(f1) if isinstance(f1, np.ndarray) else f1.conjugate()
    u = (f0 * fc).real - lam * (z * z.conjugate()).real + lam - 1
    u_zbar = f1c * f0 - lam * z
    u_zz = f2 * fc
    u_zzbar = (f1 * f1c).real - lam
    return u, u_zbar, u_zz, u_zzbar, f0, f1


def _check(z):
    if np.any(np.abs(z) >= 1):
        raise DomainError("point outside the open unit disc")


def u_value(p: LevelProblem, z):
    """u(z); z lies in the sublevel region exactly when this is positive."""
    _check(z)
    return level_jet(p, z)[0]


def u_wirtinger(p: LevelProblem, z):
    """Return ``(u_z, u_zbar, u_zz, u_zzbar)``.

    u_z = f' conj(f) - lam conj(z); the real gradient of u is 2 u_zbar.
    """
    _check(z)
    _, u_zbar, u_zz, u_zzbar, _, _ = level_jet(p, z)
    u_z = np.conj(u_zbar) if isinstance(u_zbar, np.ndarray) else u_zbar.conjugate()
    return u_z, u_zbar, u_zz, u_zzbar
