"""Closed algebra of holomorphic self-maps of the unit disc.

Every node carries closed-form first and second derivatives; composite
nodes propagate them with the chain and product rules, so no finite
differencing happens anywhere in this module.

Nodes evaluate on python complex scalars (fast path used by the tracer)
and on numpy arrays alike.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_UNIT_TOL = 1e-12


def _sqrt(x):
    if isinstance(x, np.ndarray):
        return np.sqrt(x.astype(complex))
    return cmath.sqrt(x)


def _zeros_like(z):
    return z * 0


def _mul_jets(a, b):
    f, f1, f2 = a
    g, g1, g2 = b
    return f * g, f1 * g + f * g1, f2 * g + 2 * f1 * g1 + f * g2


class HoloMap:
    """Base class. Subclasses implement ``jet(z) -> (f, f', f'')``."""

    def jet(self, z):  # pragma: no cover - abstract
        raise NotImplementedError

    def to_dsl(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def eval(self, z, order=2):
        return evaluate(self, z, order)

    def __call__(self, z):
        return evaluate(self, z, 0)[0]

    def __str__(self):
        return self.to_dsl()


def _fmt(x) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class Constant(HoloMap):
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1 + _UNIT_TOL:
            raise ValueError(f"constant {self.c} lies outside the closed disc")

    def jet(self, z):
        zero = _zeros_like(z)
        return zero + self.c, zero, zero

    def to_dsl(self):
        return f"const({_fmt(self.c.real)},{_fmt(self.c.imag)})"


@dataclass(frozen=True)
class Identity(HoloMap):
    def jet(self, z):
        zero = _zeros_like(z)
        return z, zero + 1, zero

    def to_dsl(self):
        return "id"


@dataclass(frozen=True)
class Rotation(HoloMap):
    """z -> e^{i theta} z"""

    theta: float

    def jet(self, z):
        u = cmath.exp(1j * self.theta)
        return u * z, _zeros_like(z) + u, _zeros_like(z)

    def to_dsl(self):
        return f"rot({_fmt(self.theta)})"


@dataclass(frozen=True)
class Scale(HoloMap):
    r: float

    def __post_init__(self):
        if not 0 < self.r <= 1:
            raise ValueError("scale factor must lie in (0, 1]")

    def jet(self, z):
        return self.r * z, _zeros_like(z) + self.r, _zeros_like(z)

    def to_dsl(self):
        return f"scale({_fmt(self.r)})"


@dataclass(frozen=True)
class Mobius(HoloMap):
    """The involutive automorphism (a - z) / (1 - conj(a) z)."""

    a: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if abs(self.a) >= 1:
            raise ValueError("Mobius parameter must lie in the open disc")

    def jet(self, z):
        a = self.a
        ac = a.conjugate()
        d = 1 - ac * z
        k = abs(a) ** 2 - 1
        return (a - z) / d, k / d**2, 2 * ac * k / d**3

    def to_dsl(self):
        return f"phi({_fmt(self.a.real)},{_fmt(self.a.imag)})"


@dataclass(frozen=True)
class NegMobiusNeg(HoloMap):
    """f_alpha = -phi_{-alpha}, i.e. (alpha + z) / (1 + conj(alpha) z)."""

    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if abs(self.alpha) > 1 + _UNIT_TOL:
            raise ValueError("alpha must lie in the closed disc")

    def jet(self, z):
        al = self.alpha
        ac = al.conjugate()
        d = 1 + ac * z
        k = 1 - abs(al) ** 2
        return (al + z) / d, k / d**2, -2 * ac * k / d**3

    def to_dsl(self):
        if self.alpha.imag == 0:
            return f"falpha({_fmt(self.alpha.real)})"
        return f"falpha({_fmt(self.alpha.real)},{_fmt(self.alpha.imag)})"


@dataclass(frozen=True)
class BlaschkeProduct(HoloMap):
    """sigma * prod ((z - a) / (1 - conj(a) z))^m over (a, m) in ``zeros``."""

    zeros: tuple
    sigma: complex = 1.0

    def __post_init__(self):
        zs = tuple((complex(a), int(m)) for a, m in self.zeros)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "sigma", complex(self.sigma))
        for a, m in zs:
            if abs(a) >= 1:
                raise ValueError(f"Blaschke zero {a} not in the open disc")
            if m < 1:
                raise ValueError("multiplicities must be positive")
        if abs(abs(self.sigma) - 1) > _UNIT_TOL:
            raise ValueError("Blaschke factor must be unimodular")

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def jet(self, z):
        zero = _zeros_like(z)
        acc = (zero + self.sigma, zero, zero)
        for a, m in self.zeros:
            ac = a.conjugate()
            d = 1 - ac * z
            k = 1 - abs(a) ** 2
            factor = ((z - a) / d, k / d**2, 2 * ac * k / d**3)
            for _ in range(m):
                acc = _mul_jets(acc, factor)
        return acc

    def to_dsl(self):
        zs = ",".join(f"({_fmt(a.real)},{_fmt(a.imag)},{m})" for a, m in self.zeros)
        return f"blaschke([{zs}];{_fmt(self.sigma.real)},{_fmt(self.sigma.imag)})"


@dataclass(frozen=True)
class MaMindaK(HoloMap):
    """k_alpha(z) = 2 alpha z / (1 - z + sqrt((1 - z)^2 + 4 alpha^2 z)).

    The radicand has both roots on the unit circle and never takes a
    negative real value in the disc, so the principal square root is the
    branch continuous from sqrt(1) = 1 at the origin.
    """

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    def jet(self, z):
        al = self.alpha
        s = _sqrt((1 - z) ** 2 + 4 * al * al * z)
        s1 = (z - 1 + 2 * al * al) / s
        s2 = (1 - s1 * s1) / s
        return 2 * al * z / (1 - z + s), (1 + s1) / (2 * al), s2 / (2 * al)

    def to_dsl(self):
        return f"kalpha({_fmt(self.alpha)})"


@dataclass(frozen=True)
class MaMindaG(HoloMap):
    """g_alpha(z) = z (1 + alpha z) / (alpha + z), the inverse of k_alpha.

    Not a self-map of the disc: it has a pole at -alpha and maps only the
    image k_alpha(D) back into D.
    """

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    def jet(self, z):
        al = self.alpha
        d = al + z
        if np.any(np.abs(d) < 1e-300):
            raise DomainError(f"g_alpha pole at z = {-al}")
        c = al * (1 - al * al)
        return z * (1 + al * z) / d, al + c / d**2, -2 * c / d**3

    def to_dsl(self):
        return f"galpha({_fmt(self.alpha)})"


@dataclass(frozen=True)
class Compose(HoloMap):
    """outer(inner(z))"""

    outer: HoloMap
    inner: HoloMap

    def jet(self, z):
        g, g1, g2 = self.inner.jet(z)
        f, f1, f2 = self.outer.jet(g)
        return f, f1 * g1, f2 * g1 * g1 + f1 * g2

    def to_dsl(self):
        return f"compose({self.outer.to_dsl()},{self.inner.to_dsl()})"


@dataclass(frozen=True)
class Product(HoloMap):
    left: HoloMap
    right: HoloMap

    def jet(self, z):
        return _mul_jets(self.left.jet(z), self.right.jet(z))

    def to_dsl(self):
        return f"mul({self.left.to_dsl()},{self.right.to_dsl()})"


@dataclass(frozen=True)
class ScalarMul(HoloMap):
    sigma: complex
    inner: HoloMap

    def __post_init__(self):
        object.__setattr__(self, "sigma", complex(self.sigma))
        if abs(self.sigma) > 1 + _UNIT_TOL:
            raise ValueError("scalar must lie in the closed disc")

    def jet(self, z):
        f, f1, f2 = self.inner.jet(z)
        s = self.sigma
        return s * f, s * f1, s * f2

    def to_dsl(self):
        return f"smul({_fmt(self.sigma.real)},{_fmt(self.sigma.imag)},{self.inner.to_dsl()})"


def _as_point(z):
    if np.ndim(z) == 0:
        return complex(z)
    return np.asarray(z, dtype=complex)


def evaluate(f: HoloMap, z, order: int = 2):
    """Return ``(f(z), f'(z), f''(z))`` truncated to ``order + 1`` entries.

    ``z`` may be a scalar or an array of points in the open unit disc.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    z = _as_point(z)
    if np.any(np.abs(z) >= 1):
        raise DomainError("evaluation point outside the open unit disc")
    try:
        with np.errstate(divide="raise", invalid="raise"):
            jet = f.jet(z)
    except (ZeroDivisionError, FloatingPointError) as exc:
        raise DomainError(f"pole hit while evaluating {f.to_dsl()}") from exc
    return jet[: order + 1]


def hyperbolic_derivatives(f: HoloMap, z, tol: float = 1e-14):
    """First and second hyperbolic derivatives ``(D_h1 f(z), D_h2 f(z))``.

    D_h1 f = (1-|z|^2) f' / (1-|f|^2) is the Pick-invariant derivative;
    D_h2 adds the curvature-like correction terms.
    """
    f0, f1, f2 = evaluate(f, z, 2)
    z = _as_point(z)
    dz = 1 - np.abs(z) ** 2
    df = 1 - np.abs(f0) ** 2
    if np.any(df < tol):
        raise DomainError("|f(z)| reaches the unit circle; hyperbolic density blows up")
    dh1 = dz * f1 / df
    dh2 = (
        dz**2 * f2 / df
        + 2 * dz**2 * np.conj(f0) * f1**2 / df**2
        - 2 * np.conj(z) * dz * f1 / df
    )
    if np.ndim(dh1) == 0:
        return complex(dh1), complex(dh2)
    return dh1, dh2


# convenience constructors -------------------------------------------------

def blaschke(zeros, sigma=1.0) -> BlaschkeProduct:
    """Build a Blaschke product from bare zeros or ``(zero, multiplicity)`` pairs."""
    pairs = []
    for item in zeros:
        if isinstance(item, tuple):
            pairs.append(item)
        else:
            pairs.append((item, 1))
    return BlaschkeProduct(tuple(pairs), sigma)


def f_alpha(alpha: float) -> NegMobiusNeg:
    return NegMobiusNeg(alpha)


ALPHA0 = math.sqrt(math.sqrt(2.0) + 2.0) / 2.0
