"""The physical model: resonances of -h^2 d^2/dx^2 + h^(2-alpha) delta(x-1)
on the half line with a Dirichlet wall at x = 0.

Resonances are the nonzero roots of

    F(z) = h^(-alpha) * (exp(2iz/h) - 1) + 2iz/h,

and every branch k of the large-argument Lambert W expansion yields one,

    z_k = (ih/2) * (2*pi*i*k - log((L + 2*pi*i*k) * h^alpha) + R_k),

evaluated in the cancellation-free form above (never as W_k - h^(-alpha),
which would subtract two nearly equal h^(-alpha)-sized quantities).  Each
series prediction is refined by Newton iteration on F, giving an
independent verification of the branch formula.

All functions are pure; branch sweeps are deterministic maps over k.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BranchIndexError, ConvergenceError, EmptyRangeError, ExponentOverflowError
from .lambertw import TWO_PI, LogArgument, TruncationPolicy, w_series

# Refuse exponentials beyond exp(2*300): safely inside the double range,
# far outside anything a resonance computation needs.
EXP_GUARD = 300.0


@dataclass(frozen=True)
class ModelParams:
    """The triple (h, alpha, eps): semiclassical parameter, barrier
    exponent, and annulus parameter (resonances of interest satisfy
    eps <= |z| <= 1/eps)."""

    h: float
    alpha: float
    eps: float = 0.3

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValueError(f"h must be positive and finite, got {self.h!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (0 < self.eps < 1):
            raise ValueError(f"eps must lie in (0, 1), got {self.eps!r}")

    @property
    def barrier_strength(self) -> float:
        """h^(-alpha), the coupling in front of the delta."""
        return self.h ** -self.alpha

    def log_argument(self) -> LogArgument:
        return LogArgument.from_params(self.h, self.alpha)


@dataclass(frozen=True)
class Resonance:
    """One resonance: branch index, series prediction, Newton-refined
    value, residual magnitudes, and the annulus flag.  w_tail_bound is the
    truncation certificate of the underlying branch value."""

    k: int
    z_series: complex
    z_refined: complex
    residual_series: float
    residual_refined: float
    in_annulus: bool
    w_tail_bound: float


@dataclass(frozen=True)
class ResonantState:
    """The matched wave for a resonance z: sin(zx/h) inside the barrier,
    C*exp(izx/h) outside, with the derivative-jump residual recorded."""

    z: complex
    matching_constant: complex
    samples: tuple[tuple[float, complex], ...]
    jump_residual: float


def _guard_exponent(params: ModelParams, im_z: float, span: float = 1.0) -> None:
    if abs(im_z) * span / params.h > EXP_GUARD:
        raise ExponentOverflowError(
            f"|Im z| / h = {abs(im_z) / params.h:g} exceeds the exponent guard {EXP_GUARD:g}"
        )


def residual(params: ModelParams, z: complex) -> complex:
    """F(z) = h^(-alpha) (e^{2iz/h} - 1) + 2iz/h."""
    z = complex(z)
    _guard_exponent(params, z.imag)
    strength = params.barrier_strength
    return strength * (cmath.exp(2j * z / params.h) - 1.0) + 2j * z / params.h


def residual_derivative(params: ModelParams, z: complex) -> complex:
    """F'(z) = (2i/h) (h^(-alpha) e^{2iz/h} + 1)."""
    z = complex(z)
    _guard_exponent(params, z.imag)
    strength = params.barrier_strength
    return (2j / params.h) * (strength * cmath.exp(2j * z / params.h) + 1.0)


def residual_scale(params: ModelParams, z: complex) -> float:
    """Magnitude scale of F near z; residual tolerances are relative to it."""
    return params.barrier_strength + 2.0 * abs(z) / params.h


def branch_range(params: ModelParams) -> tuple[int, int]:
    """Admissible |k| interval (k_min, k_max) for resonances in the annulus:
    eps/2 <= pi |k| h <= 2/eps, rounded inward.  k = 0 is always excluded."""
    k_min = max(1, math.ceil(params.eps / (TWO_PI * params.h)))
    k_max = math.floor(2.0 / (params.eps * math.pi * params.h))
    if k_min > k_max:
        raise EmptyRangeError(
            f"no admissible branch indices for h={params.h:g}, eps={params.eps:g} "
            f"(k_min={k_min} > k_max={k_max})"
        )
    return (k_min, k_max)


def widened_branch_range(params: ModelParams) -> tuple[int, int]:
    """branch_range widened by a factor 2 on each side, to catch resonances
    whose |z| sits near the annulus boundary at moderate h."""
    k_min = max(1, math.ceil(params.eps / (2.0 * TWO_PI * params.h)))
    k_max = math.floor(4.0 / (params.eps * math.pi * params.h))
    if k_min > k_max:
        raise EmptyRangeError(
            f"no branch indices even in the widened range for h={params.h:g}, "
            f"eps={params.eps:g}"
        )
    return (k_min, k_max)


def iter_branches(params: ModelParams, widened: bool = True):
    """All branch indices of the (widened) range, ascending, both signs."""
    k_min, k_max = widened_branch_range(params) if widened else branch_range(params)
    yield from range(-k_max, -k_min + 1)
    yield from range(k_min, k_max + 1)


def newton_refine(
    params: ModelParams,
    z0: complex,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> complex:
    """Newton iteration on F from seed z0 until |F| <= tol * scale(z)."""
    z = complex(z0)
    for _ in range(max_iter):
        f = residual(params, z)
        if abs(f) <= tol * residual_scale(params, z):
            return z
        df = residual_derivative(params, z)
        if abs(df) < 1e-14 * (2.0 / params.h) * (params.barrier_strength + 1.0):
            raise ConvergenceError(
                f"derivative near zero at z = {z:.6g}; cannot refine"
            )
        z = z - f / df
    raise ConvergenceError(
        f"Newton refinement did not converge in {max_iter} iterations from z0 = {z0:.6g}"
    )


def resonance_from_branch(
    params: ModelParams,
    k: int,
    policy: TruncationPolicy | None = None,
) -> Resonance:
    """Resonance of branch k: series prediction plus Newton refinement.

    k = 0 is rejected: that branch satisfies W_0(y) = h^(-alpha) exactly,
    i.e. z = 0, which is excluded from the resonance set.
    """
    if k == 0:
        raise BranchIndexError("k = 0 gives z = 0, which is not a resonance")
    arg = params.log_argument()
    bv = w_series(arg, k, policy)
    zeta = complex(arg.L, TWO_PI * k)
    h_alpha = params.h ** params.alpha
    z_series = (
        0.5j * params.h
        * (complex(0.0, TWO_PI * k) - cmath.log(zeta * h_alpha) + bv.remainder)
    )
    z_refined = newton_refine(params, z_series)
    in_annulus = params.eps <= abs(z_refined) <= 1.0 / params.eps
    return Resonance(
        k=k,
        z_series=z_series,
        z_refined=z_refined,
        residual_series=abs(residual(params, z_series)),
        residual_refined=abs(residual(params, z_refined)),
        in_annulus=in_annulus,
        w_tail_bound=bv.tail_bound,
    )


def sweep_branches(
    params: ModelParams,
    policy: TruncationPolicy | None = None,
    widened: bool = True,
) -> list[Resonance]:
    """Resonances for every branch of the (widened) range, ordered by k."""
    return [resonance_from_branch(params, k, policy) for k in iter_branches(params, widened)]


def annulus_resonances(
    params: ModelParams,
    policy: TruncationPolicy | None = None,
) -> list[Resonance]:
    """Refined resonances from the widened sweep that land in the annulus."""
    return [r for r in sweep_branches(params, policy) if r.in_annulus]


def default_state_grid(x_max: float = 3.0, n: int = 512) -> list[float]:
    return [i * x_max / (n - 1) for i in range(n)]


def resonant_state(
    params: ModelParams,
    z: complex,
    xs: list[float] | None = None,
    x_max: float = 3.0,
) -> ResonantState:
    """Sample the resonant wave at the points xs (defaults to a uniform
    grid on [0, x_max]).

    The incoming amplitude is fixed as sin(zx/h); the outgoing constant
    C = sin(z/h) e^{-iz/h} enforces continuity at x = 1.
    """
    z = complex(z)
    if xs is None:
        xs = default_state_grid(x_max)
    for x in xs:
        if not (0.0 <= x <= x_max):
            raise ValueError(f"sample point x = {x!r} outside [0, {x_max}]")
    _guard_exponent(params, z.imag, span=max(x_max, 1.0))

    h = params.h
    sin_at_1 = cmath.sin(z / h)
    c = sin_at_1 * cmath.exp(-1j * z / h)
    samples = tuple(
        (x, cmath.sin(z * x / h) if x <= 1.0 else c * cmath.exp(1j * z * x / h))
        for x in xs
    )
    deriv_left = (z / h) * cmath.cos(z / h)
    deriv_right = (1j * z / h) * c * cmath.exp(1j * z / h)
    jump = deriv_left - deriv_right + params.barrier_strength * sin_at_1
    return ResonantState(
        z=z, matching_constant=c, samples=samples, jump_residual=abs(jump)
    )
