"""Leading-order resonance-width laws and their certified error envelopes.

Below the transitional barrier exponent (alpha < 1) the width is
logarithmic in the energy,

    -Im z ~ (h/2) ln|2 h^(alpha-1) Re z|,

with one-sided deviation bounded by (5/4) h^(3-2alpha) / eps^2 over the
annulus; above it (alpha > 1) the width is quadratic,

    -Im z ~ (Re z)^2 h^(2alpha-1),

with two-sided deviation bounded by 7 h^(2alpha+1) ln^2(h^(-alpha))
+ 34 h^(4alpha-3) / eps^4.  At alpha = 1 both predictions are reported
with no certified envelope.  The bounds are asymptotic statements, so a
violation at moderate h is reported as data, never raised.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import PoleError
from .resonances import ModelParams, Resonance


class Regime(enum.Enum):
    SMALL_ALPHA = "small_alpha"
    BIG_ALPHA = "big_alpha"
    TRANSITIONAL = "transitional"


def regime_of(alpha: float) -> Regime:
    if alpha < 1.0:
        return Regime.SMALL_ALPHA
    if alpha > 1.0:
        return Regime.BIG_ALPHA
    return Regime.TRANSITIONAL


LOG_CURVE = "log_width"
QUAD_CURVE = "quad_width"


def width_small_alpha(params: ModelParams, re_z: float) -> float:
    """Logarithmic width prediction (h/2) ln|2 h^(alpha-1) re_z|."""
    if re_z == 0.0:
        raise ValueError("the logarithmic width law is undefined at Re z = 0")
    return 0.5 * params.h * math.log(abs(2.0 * params.h ** (params.alpha - 1.0) * re_z))


def width_big_alpha(params: ModelParams, re_z: float) -> float:
    """Quadratic width prediction (re_z)^2 h^(2alpha-1)."""
    return re_z * re_z * params.h ** (2.0 * params.alpha - 1.0)


def small_alpha_bound(params: ModelParams) -> float:
    """Envelope for the one-sided deviation of the logarithmic law."""
    return 1.25 * params.h ** (3.0 - 2.0 * params.alpha) / params.eps ** 2


def big_alpha_bound(params: ModelParams) -> float:
    """Envelope for the two-sided deviation of the quadratic law."""
    log_term = math.log(params.h ** -params.alpha)
    return (
        7.0 * params.h ** (2.0 * params.alpha + 1.0) * log_term * log_term
        + 34.0 * params.h ** (4.0 * params.alpha - 3.0) / params.eps ** 4
    )


@dataclass(frozen=True)
class WidthApproximation:
    """Regime, prediction curve(s) mapping Re z to -Im z, and the envelope
    (None in the transitional regime, where no bound is claimed)."""

    regime: Regime
    curves: tuple[tuple[str, Callable[[float], float]], ...]
    bound: float | None


def width_approximation(params: ModelParams) -> WidthApproximation:
    regime = regime_of(params.alpha)
    log_curve = (LOG_CURVE, lambda r: width_small_alpha(params, r))
    quad_curve = (QUAD_CURVE, lambda r: width_big_alpha(params, r))
    if regime is Regime.SMALL_ALPHA:
        return WidthApproximation(regime, (log_curve,), small_alpha_bound(params))
    if regime is Regime.BIG_ALPHA:
        return WidthApproximation(regime, (quad_curve,), big_alpha_bound(params))
    return WidthApproximation(regime, (log_curve, quad_curve), None)


@dataclass(frozen=True)
class CertRow:
    """One certification row.  deviation = -Im z - predicted_width; passed
    is None in the transitional regime."""

    k: int
    re_z: float
    im_z: float
    curve: str
    predicted_width: float
    deviation: float
    bound: float
    passed: bool | None


@dataclass(frozen=True)
class CertificationReport:
    params: ModelParams
    regime: Regime
    bound: float | None
    rows: tuple[CertRow, ...]

    @property
    def all_pass(self) -> bool | None:
        """True/False for the certified regimes, None at alpha = 1."""
        if self.regime is Regime.TRANSITIONAL:
            return None
        return all(row.passed for row in self.rows)

    @property
    def violations(self) -> tuple[CertRow, ...]:
        return tuple(row for row in self.rows if row.passed is False)


def certify_bounds(
    params: ModelParams,
    resonances: list[Resonance],
    lower_slack: float = 1e-8,
) -> CertificationReport:
    """Check every in-annulus refined resonance against its regime's width
    law and envelope.

    For alpha < 1 the deviation must satisfy -lower_slack <= dev <= bound;
    for alpha > 1, |dev| <= bound; for alpha = 1 both curves' deviations
    are reported with no pass/fail.  Violations are data, not errors.
    """
    for r in resonances:
        if not r.in_annulus:
            raise ValueError(
                f"resonance k={r.k} is outside the annulus; certify only in-annulus resonances"
            )
    approx = width_approximation(params)
    bound = math.nan if approx.bound is None else approx.bound
    rows = []
    for r in sorted(resonances, key=lambda r: r.k):
        z = r.z_refined
        for curve_id, fn in approx.curves:
            predicted = fn(z.real)
            deviation = -z.imag - predicted
            if approx.regime is Regime.SMALL_ALPHA:
                passed = -lower_slack <= deviation <= bound
            elif approx.regime is Regime.BIG_ALPHA:
                passed = abs(deviation) <= bound
            else:
                passed = None
            rows.append(
                CertRow(
                    k=r.k, re_z=z.real, im_z=z.imag, curve=curve_id,
                    predicted_width=predicted, deviation=deviation,
                    bound=bound, passed=passed,
                )
            )
    return CertificationReport(
        params=params, regime=approx.regime, bound=approx.bound, rows=tuple(rows)
    )


def smallest_passing_h(
    alpha: float,
    eps: float,
    h_grid: tuple[float, ...] = (0.1, 0.05, 0.02, 0.01),
) -> tuple[float | None, dict[float, bool]]:
    """Scan a descending h grid and report which h satisfy the regime's
    envelope for every in-annulus resonance, plus the smallest passing h."""
    from .resonances import annulus_resonances

    if regime_of(alpha) is Regime.TRANSITIONAL:
        raise ValueError("no envelope is claimed at alpha = 1")
    outcomes: dict[float, bool] = {}
    for h in sorted(h_grid, reverse=True):
        params = ModelParams(h=h, alpha=alpha, eps=eps)
        report = certify_bounds(params, annulus_resonances(params))
        outcomes[h] = bool(report.all_pass)
    passing = [h for h, ok in outcomes.items() if ok]
    return (min(passing) if passing else None, outcomes)


def reflection_coefficient(h: float, alpha: float, z: complex) -> complex:
    """Reflection coefficient h^(2-2alpha) / (4 z^2 + h^(2-2alpha)) of the
    whole-line model barrier at energy z^2."""
    if not (h > 0):
        raise ValueError("h must be positive")
    z = complex(z)
    strength = h ** (2.0 - 2.0 * alpha)
    denom = 4.0 * z * z + strength
    if abs(denom) <= 1e-14 * (4.0 * abs(z) ** 2 + strength):
        raise PoleError(f"reflection coefficient pole at z = {z:g}")
    return strength / denom
