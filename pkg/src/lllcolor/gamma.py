"""Palette-growth constant solver for the cycle-resampling analysis.

The step-count generating series of the coloring loop satisfies the
functional equation W = z * phi(W) with

    phi(x) = (1/g) * q**(2r-3) * (x+1)**(2r) / (1 - q**2 * (x+1)**2),
    q = 1 - exp(-1/g),

where g is the palette slack (the palette holds ceil((2+g)*(maxdeg-1))+1
colors) and 2r is the shortest cycle length the analysis has to track.
phi is analytic on [0, R) with a simple pole at R = 1/q - 1.  The
coefficients of W grow like rho**n where rho = phi(tau)/tau at the unique
root tau in (0, R) of the characteristic equation

    phi(tau) - tau * phi'(tau) = 0.

A slack g is admissible when rho < 1; ``min_gamma`` bisects for the
smallest admissible slack.  For a graph of girth girth, cycles of length
up to girth are treated as excluded, so 2r = max(6, girth + 1); r is
half-integral for even girth, and the floor at 3 reflects that
bichromatic 4-cycles are excluded by construction throughout.

Monotonicity of rho in g (and of the minimal slack in r) is checked
empirically here, not proven; each bisection spot-checks it on a coarse
grid of its own bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


class SolverError(RuntimeError):
    """Root bracketing or refinement failed."""


@dataclass(frozen=True)
class PhiParams:
    """Slack gamma plus the half-length r of the shortest tracked cycle.

    2r must be integral; half-integral r arises from even girth.
    """

    gamma: float
    r: float = 3.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.r < 3:
            raise ValueError("r must be >= 3")
        if abs(2 * self.r - round(2 * self.r)) > 1e-9:
            raise ValueError("2*r must be an integer")

    @property
    def q(self) -> float:
        return 1.0 - math.exp(-1.0 / self.gamma)

    @property
    def radius(self) -> float:
        """Pole of phi: the series around 0 converges on [0, 1/q - 1)."""
        return 1.0 / self.q - 1.0

    @property
    def min_cycle_length(self) -> int:
        return int(round(2 * self.r))


def _check_domain(x: float, params: PhiParams) -> None:
    if x < 0 or x >= params.radius:
        raise ValueError(f"x={x} outside [0, {params.radius})")


def phi(x: float, params: PhiParams) -> float:
    _check_domain(x, params)
    q, mlen = params.q, params.min_cycle_length
    return (1.0 / params.gamma) * q ** (mlen - 3) * (x + 1.0) ** mlen / (1.0 - q * q * (x + 1.0) ** 2)


def phi_prime(x: float, params: PhiParams) -> float:
    """Closed-form derivative: phi * (2r/(x+1) + 2 q^2 (x+1)/(1 - q^2 (x+1)^2))."""
    _check_domain(x, params)
    q, mlen = params.q, params.min_cycle_length
    denom = 1.0 - q * q * (x + 1.0) ** 2
    return phi(x, params) * (mlen / (x + 1.0) + 2.0 * q * q * (x + 1.0) / denom)


def _char(x: float, params: PhiParams) -> float:
    """Characteristic function phi(x) - x*phi'(x); positive at 0, negative near the pole."""
    return phi(x, params) - x * phi_prime(x, params)


def _char_deriv(x: float, params: PhiParams) -> float:
    # d/dx [phi - x phi'] = -x phi''; phi'' = phi * (u^2 + u') for u = phi'/phi.
    q, mlen = params.q, params.min_cycle_length
    denom = 1.0 - q * q * (x + 1.0) ** 2
    u = mlen / (x + 1.0) + 2.0 * q * q * (x + 1.0) / denom
    u_prime = -mlen / (x + 1.0) ** 2 + 2.0 * q * q * (denom + 2.0 * q * q * (x + 1.0) ** 2) / denom**2
    return -x * phi(x, params) * (u * u + u_prime)


@dataclass(frozen=True)
class GammaSolution:
    params: PhiParams
    tau: float
    rho: float
    residual: float


def solve_tau(params: PhiParams, tol: float = 1e-12) -> GammaSolution:
    """Root of the characteristic equation in (0, R).

    The bracket is guaranteed by sign: the characteristic function equals
    phi(0) > 0 at the origin and diverges to -infinity at the pole.
    Bisection maintains the bracket while Newton steps are taken whenever
    they stay inside it, surviving the pole at R.

    The residual |phi(tau) - tau*phi'(tau)| is accepted when it is below
    tol scaled by max(1, phi(tau)): phi grows like 1/(gamma*(1-q^2)) and
    crosses 1e9 for small gamma, where double-precision cancellation makes
    a fixed absolute residual unreachable.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, params.radius * (1.0 - 1e-9)
    if _char(lo, params) <= 0:
        raise SolverError("characteristic function not positive at 0")
    g_hi = _char(hi, params)
    while g_hi >= 0:
        hi = params.radius - (params.radius - hi) * 0.5
        g_hi = _char(hi, params)
        if params.radius - hi < 1e-15 * params.radius:
            raise SolverError("no sign change before the pole")
    x = 0.5 * (lo + hi)
    for _ in range(200):
        gx = _char(x, params)
        if gx > 0:
            lo = x
        elif gx < 0:
            hi = x
        else:
            break
        if hi - lo <= 4 * math.ulp(max(abs(x), 1e-300)):
            break
        gpx = _char_deriv(x, params)
        step = x - gx / gpx if gpx != 0 else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    residual = abs(_char(x, params))
    scale = max(1.0, phi(x, params))
    if residual > tol * scale:
        raise SolverError(f"residual {residual} above tolerance {tol} (scale {scale:.3g})")
    return GammaSolution(params, x, phi(x, params) / x, residual)


def girth_to_r(girth: int) -> float:
    """Half-length of the shortest tracked cycle for a given girth.

    Cycles of length up to the girth are treated as excluded, so the first
    tracked length is girth + 1, floored at 6 because 4-cycles (and, with
    properness, 5-cycles) are excluded by construction: r = max(3, (girth+1)/2).
    """
    if girth < 3:
        raise ValueError("girth must be >= 3")
    return max(3.0, (girth + 1) / 2.0)


@lru_cache(maxsize=None)
def _min_gamma_cached(two_r: int, tol: float) -> float:
    r = two_r / 2.0

    def rho_at(g: float) -> float:
        return solve_tau(PhiParams(g, r)).rho

    lo, hi = 0.25, 1.0
    while rho_at(lo) < 1.0:
        lo /= 2.0
        if lo < 1e-4:
            raise SolverError("failed to bracket from below")
    while rho_at(hi) >= 1.0:
        hi *= 2.0
        if hi > 64:
            raise SolverError("failed to bracket from above")
    # spot-check the assumed monotone decrease of rho on this bracket
    samples = [lo + (hi - lo) * i / 8 for i in range(9)]
    rhos = [rho_at(g) for g in samples]
    if any(r2 > r1 + 1e-9 for r1, r2 in zip(rhos, rhos[1:])):
        raise SolverError("rho is not decreasing in gamma on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rho_at(mid) < 1.0:
            hi = mid
        else:
            lo = mid
    return hi  # smallest gamma known to satisfy rho < 1, within tol


def min_gamma(r: float, tol: float = 1e-4) -> float:
    """Smallest admissible slack for tracked half-length r, to width tol."""
    if r < 3:
        raise ValueError("r must be >= 3")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _min_gamma_cached(int(round(2 * r)), tol)


def min_gamma_for_girth(girth: int, tol: float = 1e-4) -> float:
    return min_gamma(girth_to_r(girth), tol)


def colors_needed(delta: int, girth: int = 3) -> int:
    """Palette size ceil((2 + gamma_min) * (delta - 1)) + 1 for the girth class."""
    if delta < 2:
        raise ValueError("delta must be >= 2")
    g = min_gamma(girth_to_r(girth), tol=1e-6)
    return math.ceil((2.0 + g) * (delta - 1)) + 1


def cycle_prob_bounds(gamma: float, delta: int, k: int) -> dict[str, float]:
    """Bichromatic-membership bounds for a cycle of length 2k.

    ``pair_bound`` bounds the probability that two given consecutive edges
    lie on a bichromatic 2k-cycle; ``edge_bound`` multiplies by delta - 1
    to bound the probability for a single given edge.
    """
    if gamma <= 0 or delta < 2 or k < 3:
        raise ValueError("need gamma > 0, delta >= 2, k >= 3")
    q = 1.0 - math.exp(-1.0 / gamma)
    pair = q ** (2 * k - 3) / (gamma * (delta - 1))
    return {"pair_bound": pair, "edge_bound": (delta - 1) * pair}


# -- step-count series of the coloring loop ---------------------------------

def _mul_trunc(a: list[float], b: list[float], cap: int) -> list[float]:
    out = [0.0] * (cap + 1)
    for i, ai in enumerate(a[: cap + 1]):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b[: cap + 1 - i]):
            if bj != 0.0:
                out[i + j] += ai * bj
    return out


def q_coloring_series(gamma: float, r: float, n_max: int, eps: float = 1e-12) -> list[float]:
    """Q_0..Q_n_max of the cycle-resampling recurrence.

    Q_0 = 1 and, for n >= 1, Q_n sums over tracked cycle lengths
    L = 2r, 2r+2, ... the weight (1/gamma) * q**(L-3) times the L-fold
    convolution of Q at n-1.  The weights decay geometrically in L, so the
    outer sum stops once a term drops below eps times the partial sum.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if n_max > 400:
        raise ValueError("n_max exceeds the series cap of 400")
    params = PhiParams(gamma, r)
    q, base_len = params.q, params.min_cycle_length
    series = [1.0]
    for n in range(1, n_max + 1):
        cap = n - 1
        prefix = series[: cap + 1]
        power = [1.0]
        for _ in range(base_len):
            power = _mul_trunc(power, prefix, cap)
        square = _mul_trunc(prefix, prefix, cap)
        weight = q ** (base_len - 3) / gamma
        total = 0.0
        length = base_len
        while True:
            term = weight * power[cap]
            total += term
            if term <= eps * total:
                break
            length += 2
            if length > base_len + 800:
                raise SolverError("outer cycle-length sum failed to converge")
            weight *= q * q
            power = _mul_trunc(power, square, cap)
        series.append(total)
    return series


def q_coloring_recurrence(gamma: float, r: float, n: int, eps: float = 1e-12) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    return q_coloring_series(gamma, r, n, eps)[n]


def _series_inverse(a: list[float], cap: int) -> list[float]:
    if a[0] == 0.0:
        raise ValueError("series with zero constant term has no inverse")
    inv = [0.0] * (cap + 1)
    inv[0] = 1.0 / a[0]
    for n in range(1, cap + 1):
        acc = sum(a[i] * inv[n - i] for i in range(1, min(n, len(a) - 1) + 1))
        inv[n] = -acc / a[0]
    return inv


def series_fixed_point(gamma: float, r: float, n_max: int) -> list[float]:
    """Independent series oracle: iterate W <- z * phi(W) on truncated series.

    Each iteration multiplies by z, so after n_max + 1 rounds the first
    n_max + 1 coefficients are exact fixed-point values.  Returns
    Q_0..Q_n_max (the constant coefficient restored to 1).
    """
    params = PhiParams(gamma, r)
    q, base_len = params.q, params.min_cycle_length
    scale = q ** (base_len - 3) / gamma
    cap = n_max
    w = [0.0] * (cap + 1)
    for _ in range(cap + 1):
        shifted = [wi for wi in w]
        shifted[0] += 1.0  # W + 1
        power = [1.0]
        for _ in range(base_len):
            power = _mul_trunc(power, shifted, cap)
        sq = _mul_trunc(shifted, shifted, cap)
        denom = [-q * q * s for s in sq]
        denom[0] += 1.0  # 1 - q^2 (W+1)^2
        phi_w = _mul_trunc(power, _series_inverse(denom, cap), cap)
        w = [0.0] + [scale * c for c in phi_w[:cap]]
    return [1.0] + w[1:]
