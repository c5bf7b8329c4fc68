"""The model maps into the Beltrami-Klein disk, the completeness
criterion, and the holomorphic embedding of linear profiles into the
complex hyperbolic ball.

The slice surface is isometric to a subset of the Beltrami-Klein disk of
curvature -1/2 through

    Psi(u, v) = (tanh(psi(u)), v / (cosh(psi(u)) * sqrt(f(u^2)))),
    psi(u)    = integral_0^u sqrt(-kcond(s^2)) ds.

The domain is geodesically complete exactly when psi diverges at sqrt(b),
i.e. when the improper integral of the density is infinite.  A numerical
method cannot decide divergence in general, so the classifier estimates
the tail exponent on a geometric ladder and reports "unknown", with its
evidence, whenever the estimate is too close to the critical exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from weakref import WeakKeyDictionary

from scipy.integrate import quad

from .curvature import FAMILY_HYPERBOLIC, classify_profile
from .metric import (
    DomainPoint,
    OutsideDomainError,
    SlicePoint,
    require_inside,
    require_inside_slice,
)
from .profile import Profile, kcond

VERDICT_COMPLETE = "complete"
VERDICT_INCOMPLETE = "incomplete"
VERDICT_UNKNOWN = "unknown"

# Tail exponent bands: the integral diverges at a finite endpoint when the
# integrand grows at least like 1/eps, and at infinity when it decays no
# faster than 1/u.  Estimates inside the ambiguous band give "unknown".
_FINITE_DIVERGENT_SLOPE = -0.98
_FINITE_CONVERGENT_SLOPE = -0.90
_INFINITE_DIVERGENT_SLOPE = -0.95
_INFINITE_CONVERGENT_SLOPE = -1.05
_SLOPE_SPREAD_TOL = 0.25


class ProfileFamilyError(ValueError):
    """Operation requires a profile from a specific family."""


def completeness_integrand(profile: Profile, u: float) -> float:
    """sqrt(-kcond(u^2)): the arc-length density of the u-axis, up to sqrt(2)."""
    value = -kcond(profile, u * u)
    if value < 0.0:
        raise ArithmeticError(
            f"pseudoconvexity density positive at t={u * u}; profile invalid there"
        )
    return math.sqrt(value)


def _integrand_clamped(profile: Profile, u: float) -> float:
    # Quadrature-facing variant.  Two roundoff guards: far in the tail the
    # density cancels to noise and may round marginally negative (clamp to
    # zero), and u*u may round one ulp past a finite bound when quadrature
    # nodes crowd the endpoint (pull back inside).  Validity of the profile
    # is the caller's precondition.
    t = u * u
    if t >= profile.b:
        t = math.nextafter(profile.b, 0.0)
    return math.sqrt(max(-kcond(profile, t), 0.0))


def psi(profile: Profile, u: float, *, epsabs: float = 1e-12, epsrel: float = 1e-11) -> float:
    """Odd, strictly increasing radial coordinate: quadrature of the density."""
    sqrt_b = math.sqrt(profile.b) if math.isfinite(profile.b) else math.inf
    if abs(u) >= sqrt_b:
        raise ValueError(f"|u|={abs(u)} outside (-sqrt(b), sqrt(b))")
    if u == 0.0:
        return 0.0
    value, _err = quad(
        lambda s: _integrand_clamped(profile, s),
        0.0,
        abs(u),
        epsabs=epsabs,
        epsrel=epsrel,
        limit=200,
    )
    return math.copysign(value, u)


def psi_prime(profile: Profile, u: float) -> float:
    return completeness_integrand(profile, u)


def psi_map(profile: Profile, sp: SlicePoint) -> tuple[float, float]:
    """Isometry of the slice into the Beltrami-Klein disk."""
    require_inside_slice(profile, sp)
    p = psi(profile, sp.u)
    f = profile.f(sp.u * sp.u)
    return math.tanh(p), sp.v / (math.cosh(p) * math.sqrt(f))


def psi_map_jacobian(profile: Profile, sp: SlicePoint):
    """Analytic differential of the disk map at (u, v), rows (dx, dy)."""
    require_inside_slice(profile, sp)
    p = psi(profile, sp.u)
    dp = psi_prime(profile, sp.u)
    t = sp.u * sp.u
    f = profile.f(t)
    f1 = profile.f1(t)
    sech = 1.0 / math.cosh(p)
    sqrt_f = math.sqrt(f)
    dx_du = dp * sech * sech
    dy_du = sp.v * sech * (-math.tanh(p) * dp / sqrt_f - sp.u * f1 / (f * sqrt_f))
    dy_dv = sech / sqrt_f
    return ((dx_du, 0.0), (dy_du, dy_dv))


@dataclass(frozen=True)
class CompletenessReport:
    """Divergence classification of the completeness integral with evidence."""

    verdict: str
    integral_value: float  # inf when divergent, nan when unknown
    diagnostics: dict


def _ladder_slopes(log_x: list[float], log_i: list[float]) -> list[float]:
    return [
        (log_i[j + 1] - log_i[j]) / (log_x[j + 1] - log_x[j])
        for j in range(len(log_i) - 1)
    ]


def _classify_tail(slopes: list[float], boundary: str) -> str:
    """Map tail slopes of the integrand to a verdict.

    ``boundary`` is "finite" (slopes measured against the distance to the
    endpoint) or "infinite" (slopes measured against u).
    """
    if len(slopes) < 3:
        return VERDICT_UNKNOWN
    tail = slopes[-3:]
    med = sorted(tail)[1]
    spread = max(tail) - min(tail)
    if spread > _SLOPE_SPREAD_TOL:
        return VERDICT_UNKNOWN
    if boundary == "finite":
        if med <= _FINITE_DIVERGENT_SLOPE:
            return VERDICT_COMPLETE
        if med >= _FINITE_CONVERGENT_SLOPE:
            return VERDICT_INCOMPLETE
        return VERDICT_UNKNOWN
    if med >= _INFINITE_DIVERGENT_SLOPE:
        return VERDICT_COMPLETE
    if med <= _INFINITE_CONVERGENT_SLOPE:
        return VERDICT_INCOMPLETE
    return VERDICT_UNKNOWN


def completeness(profile: Profile, *, quad_epsabs: float = 1e-10) -> CompletenessReport:
    """Classify the improper integral of the arc-length density.

    Divergent means geodesically complete.  For finite b the integrand is
    sampled on a geometric ladder approaching sqrt(b); for infinite b the
    ladder is geometric in u.  Convergent integrals are evaluated by
    adaptive quadrature (singularity-aware toward the endpoint).
    """
    diagnostics: dict = {}
    if math.isfinite(profile.b):
        sqrt_b = math.sqrt(profile.b)
        diagnostics["boundary"] = "finite"
        ladder_u = []
        ladder_i = []
        log_eps = []
        for j in range(2, 11):
            eps = sqrt_b * 10.0 ** (-j)
            u = sqrt_b - eps
            try:
                value = completeness_integrand(profile, u)
            except ArithmeticError as exc:
                diagnostics.setdefault("evaluation_failures", []).append((u, str(exc)))
                break
            if not (math.isfinite(value) and value > 0.0):
                diagnostics.setdefault("evaluation_failures", []).append((u, f"value {value}"))
                break
            ladder_u.append(u)
            ladder_i.append(value)
            log_eps.append(math.log10(eps))
        slopes = _ladder_slopes(log_eps, [math.log10(i) for i in ladder_i])
        verdict = _classify_tail(slopes, "finite")
        upper = sqrt_b
    else:
        diagnostics["boundary"] = "infinite"
        ladder_u = []
        ladder_i = []
        log_u = []
        # Past u ~ 2^20 the density is computed by catastrophic cancellation
        # and the slopes degrade into roundoff noise; stop before that.
        for j in range(0, 21):
            u = 2.0 ** j
            try:
                value = completeness_integrand(profile, u)
            except ArithmeticError as exc:
                diagnostics.setdefault("evaluation_failures", []).append((u, str(exc)))
                break
            if not (math.isfinite(value) and value > 0.0):
                diagnostics.setdefault("evaluation_failures", []).append((u, f"value {value}"))
                break
            ladder_u.append(u)
            ladder_i.append(value)
            log_u.append(math.log10(u))
        slopes = _ladder_slopes(log_u, [math.log10(i) for i in ladder_i])
        verdict = _classify_tail(slopes, "infinite")
        upper = math.inf

    diagnostics["ladder_u"] = ladder_u
    diagnostics["ladder_integrand"] = ladder_i
    diagnostics["slopes"] = slopes

    if verdict == VERDICT_COMPLETE:
        return CompletenessReport(verdict, math.inf, diagnostics)
    if verdict == VERDICT_UNKNOWN:
        diagnostics["reason"] = "tail exponent estimate inconclusive"
        return CompletenessReport(verdict, math.nan, diagnostics)

    value, err = quad(
        lambda s: _integrand_clamped(profile, s),
        0.0,
        upper,
        epsabs=quad_epsabs,
        epsrel=1e-9,
        limit=400,
    )
    diagnostics["quadrature_abserr"] = err
    return CompletenessReport(verdict, value, diagnostics)


# ---------------------------------------------------------------------------
# Embedding of the linear family into the unit ball

_HYPERBOLIC_PARAMS_CACHE: "WeakKeyDictionary[Profile, tuple[float, float]]" = WeakKeyDictionary()


def hyperbolic_params(profile: Profile) -> tuple[float, float]:
    """(c1, c2) of a linear profile c1 - c2*t, or raise ProfileFamilyError."""
    try:
        return _HYPERBOLIC_PARAMS_CACHE[profile]
    except KeyError:
        pass
    result = classify_profile(profile)
    if result.family != FAMILY_HYPERBOLIC:
        raise ProfileFamilyError(
            f"profile classified as {result.family!r}; the ball embedding "
            "exists only for linear profiles"
        )
    params = (result.params["c1"], result.params["c2"])
    _HYPERBOLIC_PARAMS_CACHE[profile] = params
    return params


def phi_embed(profile: Profile, point: DomainPoint) -> DomainPoint:
    """Rescale a point of a linear-profile domain into the unit ball.

    (z0, z_1, ..) -> (z0 / sqrt(c1/c2), z_1 / sqrt(c1), ..); a holomorphic
    isometry onto an open subset of the ball.
    """
    c1, c2 = hyperbolic_params(profile)
    require_inside(profile, point)
    scale0 = 1.0 / math.sqrt(c1 / c2)
    scale = 1.0 / math.sqrt(c1)
    image = DomainPoint(point.z0 * scale0, tuple(w * scale for w in point.z))
    norm_sq = abs(image.z0) ** 2 + sum(abs(w) ** 2 for w in image.z)
    if norm_sq >= 1.0:
        raise OutsideDomainError(f"image norm {math.sqrt(norm_sq)} not inside the unit ball")
    return image
