"""Branches of the inverse of w * exp(w) for large positive arguments.

The arguments of interest are astronomically large (y = t * e^t with
t = h^(-alpha)), so y is never formed: everything works with L = ln(y).
Writing zeta = L + 2*pi*i*k, branch k is evaluated as

    w_k = zeta - log(zeta) + R_k,
    R_k = sum over j >= 0, m >= 1 of  c_{j,m} * log(zeta)^m / zeta^(j+m),

with the exact rational coefficients c_{j,m} from :mod:`.stirling`.  The
series is summed by total weight n = j + m.  Truncation is certified: all
c_{j,m} have sign (-1)^j, so the termwise absolute-value series

    Phi(rho, s) = sum |c_{j,m}| rho^m s^j,   rho = |log(zeta)/zeta|, s = 1/|zeta|

has the closed form Phi = -ln(1 - rho - s*Phi) (smallest positive root),
which exists iff s*(1 - ln s) <= 1 - rho.  Since the weight-n layer of Phi
is homogeneous of degree n, scaling by theta > 1 gives the rigorous
geometric closure

    sum_{n > N} (layer n of Phi) <= Phi(theta*rho, theta*s) * theta^(-N) / (theta - 1),

used here for the dropped part of the series (plus explicit layer bounds
between an early stop and the fixed depth).

An independent Halley iteration on g(w) = w + log(w) - (L + 2*pi*i*k')
provides the cross-check value; k' is the unwinding integer of the
principal log, fixed from the seed.  Everything is pure and safe to
evaluate concurrently across branches.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import BranchJumpError, ConvergenceError, RegimeError
from .stirling import series_coefficient

TWO_PI = 2.0 * math.pi

# Scale factors tried for the majorant closure; larger is sharper but has a
# smaller domain of validity.  The reported tail bound is the min over the
# feasible ones, so it is monotone under any improvement of (rho, s).
_THETA_LADDER = (2.0, 1.75, 1.5, 1.25, 1.1, 1.05)


class Provenance(enum.Enum):
    EXPLICIT_Y = "explicit_y"
    FROM_PARAMS = "from_params"


@dataclass(frozen=True)
class LogArgument:
    """A large positive argument y >= e, stored as L = ln(y).

    When built from model parameters, L = h^(-alpha) + ln(h^(-alpha)) is
    computed directly in that form (y itself overflows the double range
    already for h^(-alpha) > ~709).
    """

    L: float
    provenance: Provenance = Provenance.EXPLICIT_Y
    h: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.L):
            raise ValueError("L must be finite")
        if self.L < 1.0:
            raise ValueError(f"L = {self.L!r} < 1: the argument must satisfy y >= e")

    @classmethod
    def from_L(cls, L: float) -> "LogArgument":
        return cls(L=float(L))

    @classmethod
    def from_y(cls, y: float) -> "LogArgument":
        if not (y > 0) or not math.isfinite(y):
            raise ValueError("y must be positive and finite")
        return cls(L=math.log(y))

    @classmethod
    def from_params(cls, h: float, alpha: float) -> "LogArgument":
        if not (0 < h < 1):
            raise ValueError("h must lie in (0, 1) so that h^(-alpha) > 1")
        if not (alpha > 0):
            raise ValueError("alpha must be positive")
        t = h ** -alpha
        return cls(L=t + math.log(t), provenance=Provenance.FROM_PARAMS,
                   h=h, alpha=alpha)


@dataclass(frozen=True)
class TruncationPolicy:
    """How deep to sum the remainder series.

    Layers of total weight n = 1..n_max are accumulated; with early_stop,
    summation ends once a whole layer contributes less than rel_tol of the
    running partial sum.  The certified tail bound always covers whatever
    was not accumulated.
    """

    n_max: int = 40
    rel_tol: float = 1e-16
    early_stop: bool = True

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if not (0 <= self.rel_tol < 1):
            raise ValueError("rel_tol must lie in [0, 1)")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class BranchValue:
    """One branch value with its truncation certificate.

    remainder is the accumulated series R_k; tail_bound is a rigorous
    upper bound on the modulus of the dropped terms; terms_used records
    (max j, max m) reached; kprime is the unwinding integer for the
    log-form functional equation w + log(w) = L + 2*pi*i*kprime.
    """

    k: int
    w: complex
    remainder: complex
    tail_bound: float
    terms_used: tuple[int, int]
    kprime: int


@lru_cache(maxsize=None)
def _layers(n_max: int) -> tuple[tuple[float, ...], ...]:
    """Float coefficients grouped by weight: layer n holds c_{n-m,m} for m=1..n."""
    return tuple(
        tuple(series_coefficient(n - m, m).as_float for m in range(1, n + 1))
        for n in range(1, n_max + 1)
    )


def _majorant_sum(rho: float, s: float) -> float | None:
    """Closed-form sum of the absolute-value series, or None if it diverges.

    Solves v - s*ln(v) = 1 - rho for the root v in (s, 1] by Newton descent
    from v0 = 1 - rho (monotone for this convex function), then Phi = -ln(v).
    """
    c = 1.0 - rho
    if c <= 0.0:
        return None
    if s <= 0.0:
        return -math.log(c)
    if s * (1.0 - math.log(s)) > c * (1.0 - 1e-9):
        return None
    v = c
    for _ in range(200):
        p = v - s * math.log(v) - c
        dp = 1.0 - s / v
        if dp <= 0.0:
            return None
        step = p / dp
        v -= step
        if abs(step) <= 1e-15 * v:
            break
    if not (v > 0.0):
        return None
    # small inflation absorbs rounding of the scalar solve
    return -math.log(v) * (1.0 + 1e-9)


def _tail_closure(rho: float, s: float, n_max: int) -> float:
    best = math.inf
    for theta in _THETA_LADDER:
        phi = _majorant_sum(theta * rho, theta * s)
        if phi is None:
            continue
        best = min(best, phi * theta ** (-n_max) / (theta - 1.0))
    return best


def w_series(arg: LogArgument, k: int, policy: TruncationPolicy | None = None) -> BranchValue:
    """Evaluate branch k by the two explicit terms plus the remainder series.

    Raises RegimeError when |log(zeta)/zeta| > 1/2 (outside the series'
    proven domain) and ConvergenceError when no truncation certificate can
    be issued; callers should then fall back to :func:`w_halley`.
    """
    policy = DEFAULT_POLICY if policy is None else policy
    zeta = complex(arg.L, TWO_PI * k)
    log_zeta = cmath.log(zeta)
    tau = log_zeta / zeta
    rho = abs(tau)
    if rho > 0.5:
        raise RegimeError(
            f"|log(zeta)/zeta| = {rho:.6f} > 1/2 at branch k={k}: "
            "argument too small for the series expansion"
        )
    s = 1.0 / abs(zeta)
    closure = _tail_closure(rho, s, policy.n_max)
    if not math.isfinite(closure):
        raise ConvergenceError(
            f"absolute majorant of the remainder series diverges at branch k={k} "
            f"(L={arg.L:g}); use w_halley instead"
        )

    n_max = policy.n_max
    layers = _layers(n_max)
    sigma = 1.0 / zeta
    tau_pows = [1.0 + 0.0j]
    sigma_pows = [1.0 + 0.0j]
    rho_pows = [1.0]
    s_pows = [1.0]
    for _ in range(n_max):
        tau_pows.append(tau_pows[-1] * tau)
        sigma_pows.append(sigma_pows[-1] * sigma)
        rho_pows.append(rho_pows[-1] * rho)
        s_pows.append(s_pows[-1] * s)

    remainder = 0.0 + 0.0j
    layer_bounds = [0.0] * (n_max + 1)
    first_layer_abs = 0.0
    last_layer_abs = 0.0
    stop = n_max
    stopped_early = False
    for n in range(1, n_max + 1):
        coeffs = layers[n - 1]
        term = 0.0 + 0.0j
        bound = 0.0
        for m in range(1, n + 1):
            c = coeffs[m - 1]
            term += c * tau_pows[m] * sigma_pows[n - m]
            bound += abs(c) * rho_pows[m] * s_pows[n - m]
        remainder += term
        layer_bounds[n] = bound
        last_layer_abs = abs(term)
        if n == 1:
            first_layer_abs = last_layer_abs
        if policy.early_stop and last_layer_abs < policy.rel_tol * abs(remainder):
            stop = n
            stopped_early = True
            break
    if not stopped_early and last_layer_abs > max(first_layer_abs, 1e-300):
        raise ConvergenceError(
            f"remainder-series layers fail to decrease through n={n_max} at branch k={k}"
        )

    # explicit majorant bounds for the layers skipped by an early stop
    for n in range(stop + 1, n_max + 1):
        coeffs = layers[n - 1]
        bound = 0.0
        for m in range(1, n + 1):
            bound += abs(coeffs[m - 1]) * rho_pows[m] * s_pows[n - m]
        layer_bounds[n] = bound
    tail_bound = math.fsum(layer_bounds[stop + 1:]) + closure

    w = zeta - log_zeta + remainder
    kprime = round((w.imag + cmath.log(w).imag) / TWO_PI)
    return BranchValue(
        k=k, w=w, remainder=remainder, tail_bound=tail_bound,
        terms_used=(stop - 1, stop), kprime=kprime,
    )


def halley_seed(arg: LogArgument, k: int) -> complex:
    """Default iteration seed: the two explicit terms plus the first
    remainder term."""
    zeta = complex(arg.L, TWO_PI * k)
    log_zeta = cmath.log(zeta)
    return zeta - log_zeta + log_zeta / zeta


def w_halley(
    arg: LogArgument,
    k: int,
    seed: complex | None = None,
    tol: float = 1e-13,
    max_iter: int = 50,
) -> complex:
    """Independent branch evaluation by Halley iteration in log form.

    Iterates on g(w) = w + log(w) - (L + 2*pi*i*k'), with the unwinding
    integer k' frozen from the seed, until |g| <= tol * (1 + |w|).
    """
    if seed is None:
        seed = halley_seed(arg, k)
    w = complex(seed)
    if w == 0:
        raise ValueError("seed must be nonzero")
    kprime = round((w.imag + cmath.log(w).imag) / TWO_PI)
    target = complex(arg.L, TWO_PI * kprime)
    residual = math.inf
    for _ in range(max_iter):
        log_w = cmath.log(w)
        g = w + log_w - target
        residual = abs(g)
        if residual <= tol * (1.0 + abs(w)):
            if abs(w.imag - TWO_PI * k) > math.pi:
                raise BranchJumpError(
                    f"iteration for branch k={k} converged with Im(w) = {w.imag:g}, "
                    f"outside the strip |Im(w) - 2*pi*k| <= pi"
                )
            return w
        gp = 1.0 + 1.0 / w
        gpp = -1.0 / (w * w)
        w = w - 2.0 * g * gp / (2.0 * gp * gp - g * gpp)
        if w == 0:
            raise ConvergenceError(f"iteration for branch k={k} hit w = 0")
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations for branch k={k}; "
        f"last residual {residual:.3e}"
    )


def log_form_residual(arg: LogArgument, w: complex, kprime: int | None = None) -> tuple[float, int]:
    """|w + log(w) - (L + 2*pi*i*k')| and the k' used (inferred from w if
    not supplied)."""
    log_w = cmath.log(w)
    if kprime is None:
        kprime = round((w.imag + log_w.imag) / TWO_PI)
    return abs(w + log_w - complex(arg.L, TWO_PI * kprime)), kprime


def w_with_fallback(arg: LogArgument, k: int, policy: TruncationPolicy | None = None) -> BranchValue:
    """Series value when certifiable, otherwise the Halley value.

    On fallback the tail bound is the a-posteriori Newton-type bound
    2|g(w)| / |1 + 1/w| and terms_used is (0, 0).
    """
    try:
        return w_series(arg, k, policy)
    except (RegimeError, ConvergenceError):
        w = w_halley(arg, k)
        zeta = complex(arg.L, TWO_PI * k)
        log_zeta = cmath.log(zeta)
        residual, kprime = log_form_residual(arg, w)
        bound = 2.0 * residual / abs(1.0 + 1.0 / w)
        return BranchValue(
            k=k, w=w, remainder=w - (zeta - log_zeta), tail_bound=bound,
            terms_used=(0, 0), kprime=kprime,
        )


class TailCheck(NamedTuple):
    """(lhs, rhs, ok) for the first-term tail inequality."""

    lhs: float
    rhs: float
    ok: bool


def remainder_tail_check(arg: LogArgument, k: int, policy: TruncationPolicy | None = None) -> TailCheck:
    """Check |R_k - log(zeta)/zeta| <= 2 |log(zeta)/zeta|^2 numerically.

    lhs comes from the converged series; the comparison allows the series'
    own certified truncation slack on top of the right-hand side.
    """
    bv = w_series(arg, k, policy)
    zeta = complex(arg.L, TWO_PI * k)
    tau = cmath.log(zeta) / zeta
    lhs = abs(bv.remainder - tau)
    rhs = 2.0 * abs(tau) ** 2
    return TailCheck(lhs, rhs, lhs <= rhs + bv.tail_bound)
