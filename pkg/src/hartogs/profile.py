"""Profiles: the defining function of a Hartogs domain and its validation.

A profile is a smooth positive function f on [0, b) ingested as an
expression string.  Derivatives up to third order are produced by exact
symbolic differentiation of the parsed tree, never by finite differences:
the downstream residuals need f''' and the pseudoconvexity check needs the
exact derivative of t*f'(t)/f(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .expressions import (
    Div,
    Expr,
    ExpressionEvalError,
    Mul,
    Var,
    compile_expression,
    differentiate,
    parse_expression,
    simplify,
    to_source,
)

DEFAULT_GRID_SIZE = 1024
DEFAULT_T_MAX = 50.0
_GRID_MARGIN = 1e-9


class Profile:
    """Immutable profile with compiled evaluators f, f1, f2, f3 and bound b.

    ``b`` may be ``math.inf``.  ``n`` is the complex dimension of the
    associated domain (at least 2).  Instances are safe to share across
    threads; all evaluators are pure.
    """

    def __init__(self, ast: Expr, b: float, n: int, source: str | None = None):
        b = float(b)
        if not b > 0:
            raise ValueError("domain bound b must be positive")
        n = int(n)
        if n < 2:
            raise ValueError("complex dimension n must be at least 2")
        d0 = simplify(ast)
        d1 = simplify(differentiate(d0))
        d2 = simplify(differentiate(d1))
        d3 = simplify(differentiate(d2))
        self.asts: tuple[Expr, Expr, Expr, Expr] = (d0, d1, d2, d3)
        self.b = b
        self.n = n
        self.source = source if source is not None else to_source(d0)
        self.f = compile_expression(d0)
        self.f1 = compile_expression(d1)
        self.f2 = compile_expression(d2)
        self.f3 = compile_expression(d3)

    def __repr__(self):
        return f"Profile({self.source!r}, b={self.b}, n={self.n})"

    @cached_property
    def kcond_ast(self) -> Expr:
        # d/dt (t*f1/f), assembled by the symbolic quotient/product rule.
        quotient = Div(Mul(Var(), self.asts[1]), self.asts[0])
        return simplify(differentiate(quotient))

    @cached_property
    def _kcond_fn(self):
        return compile_expression(self.kcond_ast)

    def grid_limit(self, t_max: float = DEFAULT_T_MAX) -> float:
        """Upper end of the sampling range: just inside b, or t_max if b=inf."""
        if math.isinf(self.b):
            return t_max
        return self.b * (1.0 - _GRID_MARGIN)


def parse_profile(src: str, b: float, n: int) -> Profile:
    """Parse an expression string into a Profile with symbolic derivatives.

    Raises ExpressionSyntaxError (with position) on malformed input and
    ValueError on a non-positive bound or n < 2.
    """
    return Profile(parse_expression(src), b, n, source=src)


def kcond(profile: Profile, t: float) -> float:
    """The pseudoconvexity density d/dt (t*f1(t)/f(t)) at t.

    Negative everywhere on [0, b) exactly when the domain carries a
    positive-definite metric.  Computed from the symbolic derivative tree,
    no finite differences.
    """
    _check_range(profile, t)
    return profile._kcond_fn(t)


def _check_range(profile: Profile, t: float):
    if not 0.0 <= t < profile.b:
        raise ValueError(f"t={t} outside the profile range [0, {profile.b})")


def chebyshev_grid(upper: float, size: int) -> list[float]:
    """Chebyshev-extrema points on [0, upper], denser toward both ends."""
    if size < 2:
        raise ValueError("grid size must be at least 2")
    return [0.5 * upper * (1.0 - math.cos(math.pi * j / (size - 1))) for j in range(size)]


@dataclass(frozen=True)
class ValidationReport:
    """Grid certification of positivity, monotonicity, and pseudoconvexity."""

    valid: bool
    grid_size: int
    t_upper: float
    positivity_violations: tuple[float, ...]
    monotonicity_violations: tuple[float, ...]
    pseudoconvexity_violations: tuple[float, ...]
    evaluation_failures: tuple[tuple[float, str], ...]
    monotonicity_enforced: bool

    def violation_summary(self) -> dict[str, int]:
        return {
            "positivity": len(self.positivity_violations),
            "monotonicity": len(self.monotonicity_violations),
            "pseudoconvexity": len(self.pseudoconvexity_violations),
            "evaluation": len(self.evaluation_failures),
        }


def validate(
    profile: Profile,
    grid_size: int = DEFAULT_GRID_SIZE,
    *,
    t_max: float = DEFAULT_T_MAX,
    enforce_monotone: bool = True,
) -> ValidationReport:
    """Sample-based certification of a profile on a Chebyshev grid.

    Checks f > 0, f1 <= 0 (optional, see ``enforce_monotone``), and the
    pseudoconvexity condition kcond < 0 at every grid point.  A grid can
    only certify at its samples; the report says exactly which points fail.
    """
    upper = profile.grid_limit(t_max)
    positivity: list[float] = []
    monotonicity: list[float] = []
    pseudoconvexity: list[float] = []
    failures: list[tuple[float, str]] = []
    for t in chebyshev_grid(upper, grid_size):
        try:
            ft = profile.f(t)
            f1t = profile.f1(t)
            kt = profile._kcond_fn(t)
        except ExpressionEvalError as exc:
            failures.append((t, str(exc)))
            continue
        if not (math.isfinite(ft) and math.isfinite(f1t) and math.isfinite(kt)):
            failures.append((t, "non-finite value"))
            continue
        if ft <= 0.0:
            positivity.append(t)
        if enforce_monotone and f1t > 0.0:
            monotonicity.append(t)
        if kt >= 0.0:
            pseudoconvexity.append(t)
    valid = not (positivity or monotonicity or pseudoconvexity or failures)
    return ValidationReport(
        valid=valid,
        grid_size=grid_size,
        t_upper=upper,
        positivity_violations=tuple(positivity),
        monotonicity_violations=tuple(monotonicity),
        pseudoconvexity_violations=tuple(pseudoconvexity),
        evaluation_failures=tuple(failures),
        monotonicity_enforced=enforce_monotone,
    )
