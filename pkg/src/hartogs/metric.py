"""Metric tensors on a Hartogs domain and on its totally geodesic slice.

The Kahler potential is -log(f(|z0|^2) - ||z||^2).  The Hermitian matrix
of second Wirtinger derivatives is assembled analytically; the real
Riemannian metric on real tangent vectors is 2*Re(h), the normalization
under which the slice {Im z0 = Im z1 = 0, z_j = 0} carries

    g = 2/(f - v^2)^2 * [[c, -f1*u*v], [-f1*u*v, f]],
    c = f1^2*u^2 - (f1 + f2*u^2)*(f - v^2),

with f, f1, f2 evaluated at t = u^2.  ``slice_metric`` evaluates that
closed form; ``slice_metric_generic`` restricts the full Hermitian matrix
instead and exists purely as an independent cross-check of the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import Profile

# Points closer to the boundary than this are rejected: the potential
# blows up and every downstream quantity loses its precision.
BOUNDARY_GUARD = 1e-12


class OutsideDomainError(ValueError):
    """Point on or outside the boundary of the domain or of the slice."""


@dataclass(frozen=True)
class SlicePoint:
    """Point (u, v) = (Re z0, Re z1) on the real slice surface."""

    u: float
    v: float


@dataclass(frozen=True)
class SliceMetric:
    """Symmetric 2x2 metric at a slice point."""

    g11: float
    g12: float
    g22: float

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 * self.g12

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])

    def inner(self, x, y) -> float:
        return (
            self.g11 * x[0] * y[0]
            + self.g12 * (x[0] * y[1] + x[1] * y[0])
            + self.g22 * x[1] * y[1]
        )


@dataclass(frozen=True)
class DomainPoint:
    """Point (z0, z) with z the (n-1)-vector of remaining coordinates."""

    z0: complex
    z: tuple[complex, ...]

    @property
    def n(self) -> int:
        return 1 + len(self.z)

    @staticmethod
    def origin(n: int) -> "DomainPoint":
        return DomainPoint(0j, (0j,) * (n - 1))


def domain_gap(profile: Profile, point: DomainPoint) -> float:
    """f(|z0|^2) - ||z||^2; positive inside, guards the boundary."""
    x = abs(point.z0) ** 2
    if x >= profile.b:
        raise OutsideDomainError(f"|z0|^2 = {x} exceeds the bound b = {profile.b}")
    norm_sq = sum(abs(w) ** 2 for w in point.z)
    return profile.f(x) - norm_sq


def require_inside(profile: Profile, point: DomainPoint) -> float:
    gap = domain_gap(profile, point)
    if gap < BOUNDARY_GUARD:
        raise OutsideDomainError(
            f"point effectively on the boundary (f - ||z||^2 = {gap})"
        )
    return gap


def slice_gap(profile: Profile, sp: SlicePoint) -> float:
    """f(u^2) - v^2; positive strictly inside the slice surface."""
    t = sp.u * sp.u
    if t >= profile.b:
        raise OutsideDomainError(f"u^2 = {t} exceeds the bound b = {profile.b}")
    return profile.f(t) - sp.v * sp.v


def require_inside_slice(profile: Profile, sp: SlicePoint) -> float:
    gap = slice_gap(profile, sp)
    if gap < BOUNDARY_GUARD:
        raise OutsideDomainError(
            f"slice point effectively on the boundary (f - v^2 = {gap})"
        )
    return gap


def potential(profile: Profile, point: DomainPoint) -> float:
    """Kahler potential -log(f(|z0|^2) - ||z||^2) at an interior point."""
    return -math.log(require_inside(profile, point))


def hermitian_metric(profile: Profile, point: DomainPoint) -> np.ndarray:
    """Matrix h[i][j] of second Wirtinger derivatives of the potential.

    With x = |z0|^2 and g = f(x) - ||z||^2:

        h[0][0] = -(f1 + x f2)/g + f1^2 x / g^2
        h[0][j] = -f1 conj(z0) z_j / g^2          (j >= 1)
        h[i][j] = delta_ij / g + conj(z_i) z_j / g^2

    Hermitian and positive-definite at interior points of a valid profile.
    """
    if point.n != profile.n:
        raise ValueError(f"point has {point.n} coordinates, profile expects {profile.n}")
    gap = require_inside(profile, point)
    x = abs(point.z0) ** 2
    f1 = profile.f1(x)
    f2 = profile.f2(x)
    n = profile.n
    h = np.empty((n, n), dtype=complex)
    gap2 = gap * gap
    h[0, 0] = -(f1 + x * f2) / gap + f1 * f1 * x / gap2
    z0_bar = point.z0.conjugate()
    for j, zj in enumerate(point.z, start=1):
        h[0, j] = -f1 * z0_bar * zj / gap2
        h[j, 0] = h[0, j].conjugate()
    for i, zi in enumerate(point.z, start=1):
        for j, zj in enumerate(point.z, start=1):
            h[i, j] = (1.0 if i == j else 0.0) / gap + zi.conjugate() * zj / gap2
    return h


def riemannian_inner(h: np.ndarray, x, y) -> float:
    """Real inner product 2*Re(x^T h conj(y)) of real tangents in complex form."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return float(2.0 * np.real(x @ h @ np.conj(y)))


def slice_metric(profile: Profile, sp: SlicePoint) -> SliceMetric:
    """Closed-form induced metric on the slice at (u, v)."""
    w = require_inside_slice(profile, sp)
    t = sp.u * sp.u
    f = profile.f(t)
    f1 = profile.f1(t)
    f2 = profile.f2(t)
    c = f1 * f1 * t - (f1 + f2 * t) * w
    w2 = w * w
    return SliceMetric(2.0 * c / w2, -2.0 * f1 * sp.u * sp.v / w2, 2.0 * f / w2)


def slice_metric_generic(profile: Profile, sp: SlicePoint) -> SliceMetric:
    """Slice metric obtained by restricting the full Hermitian matrix.

    Independent of the closed form: embeds (u, v) as (z0, z1) = (u, v),
    takes 2*Re of the leading 2x2 block.  Used for cross-validation only.
    """
    z = (complex(sp.v),) + (0j,) * (profile.n - 2)
    h = hermitian_metric(profile, DomainPoint(complex(sp.u), z))
    return SliceMetric(
        float(2.0 * h[0, 0].real),
        float(2.0 * h[0, 1].real),
        float(2.0 * h[1, 1].real),
    )


def beltrami_klein(x: float, y: float) -> SliceMetric:
    """Beltrami-Klein metric of curvature -1/2 on the unit disk."""
    w = 1.0 - x * x - y * y
    if w < BOUNDARY_GUARD:
        raise OutsideDomainError(f"({x}, {y}) not inside the unit disk")
    w2 = w * w
    return SliceMetric(2.0 * (1.0 - y * y) / w2, 2.0 * x * y / w2, 2.0 * (1.0 - x * x) / w2)


@dataclass(frozen=True)
class SliceMetricJet:
    """Slice metric entries with the analytic partials needed downstream.

    First derivatives feed the Christoffel symbols, the three second
    derivatives complete the data for the Gaussian curvature.  Everything
    is chained exactly through f, f1, f2, f3; no finite differences.
    """

    g11: float
    g12: float
    g22: float
    g11_u: float
    g11_v: float
    g12_u: float
    g12_v: float
    g22_u: float
    g22_v: float
    g11_vv: float
    g12_uv: float
    g22_uu: float

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 * self.g12


def slice_metric_jet(profile: Profile, sp: SlicePoint) -> SliceMetricJet:
    w = require_inside_slice(profile, sp)
    u, v = sp.u, sp.v
    t = u * u
    f = profile.f(t)
    f1 = profile.f1(t)
    f2 = profile.f2(t)
    f3 = profile.f3(t)

    w2 = w * w
    w3 = w2 * w
    w4 = w3 * w

    c = f1 * f1 * t - (f1 + f2 * t) * w
    c_u = 2.0 * u * (f1 * f2 * t - (2.0 * f2 + t * f3) * w)
    c_v = 2.0 * v * (f1 + f2 * t)
    c_vv = 2.0 * (f1 + f2 * t)

    g11 = 2.0 * c / w2
    g12 = -2.0 * f1 * u * v / w2
    g22 = 2.0 * f / w2

    g11_u = 2.0 * c_u / w2 - 8.0 * u * f1 * c / w3
    g11_v = 2.0 * c_v / w2 + 8.0 * v * c / w3
    g12_u = -2.0 * v * (f1 + 2.0 * t * f2) / w2 + 8.0 * t * f1 * f1 * v / w3
    g12_v = -2.0 * f1 * u / w2 - 8.0 * f1 * u * v * v / w3
    g22_u = 4.0 * u * f1 / w2 - 8.0 * u * f1 * f / w3
    g22_v = 8.0 * v * f / w3

    g11_vv = 2.0 * c_vv / w2 + 16.0 * v * c_v / w3 + 8.0 * c / w3 + 48.0 * v * v * c / w4
    g12_uv = (
        -2.0 * (f1 + 2.0 * t * f2) / w2
        - 8.0 * v * v * (f1 + 2.0 * t * f2) / w3
        + 8.0 * t * f1 * f1 / w3
        + 48.0 * t * f1 * f1 * v * v / w4
    )
    g22_uu = (
        4.0 * (f1 + 2.0 * t * f2) / w2
        - 32.0 * t * f1 * f1 / w3
        - 8.0 * f * (f1 + 2.0 * t * f2) / w3
        + 48.0 * t * f1 * f1 * f / w4
    )

    return SliceMetricJet(
        g11, g12, g22,
        g11_u, g11_v, g12_u, g12_v, g22_u, g22_v,
        g11_vv, g12_uv, g22_uu,
    )
