"""Exact binomials, generalised binomials, entropy and monotone root solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

MAX_N = 256
_BISECT_ITERS = 200


class DomainError(ValueError):
    """Argument outside the documented domain of an operation."""


class NumericError(ArithmeticError):
    """A root solver failed to converge."""


class ResourceError(RuntimeError):
    """Instance too large for an exact method; use a bound instead."""


def binom_exact(n: int, k: int) -> int:
    """Return C(n, k) as an exact integer (0 outside 0 <= k <= n)."""
    if not 0 <= n <= MAX_N:
        raise DomainError(f"n={n} outside supported range [0, {MAX_N}]")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class LogReal:
    """A non-negative real stored as its natural log; ``is_zero`` marks exact zero."""

    log_value: float = -math.inf
    is_zero: bool = True

    @classmethod
    def from_value(cls, x: float | int) -> "LogReal":
        if x < 0:
            raise DomainError("LogReal holds non-negative values only")
        if x == 0:
            return cls()
        return cls(math.log(x), False)

    @classmethod
    def from_log(cls, log_value: float) -> "LogReal":
        if log_value == -math.inf:
            return cls()
        return cls(float(log_value), False)

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.is_zero or other.is_zero:
            return LogReal()
        return LogReal(self.log_value + other.log_value, False)

    def value(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_value)

    def __float__(self) -> float:
        return self.value()


def log_binom(n: float, k: float) -> float:
    """Natural log of C(n, k) via log-gamma; -inf when the coefficient is zero."""
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def gen_binom(x: float, r: int) -> float:
    """Generalised binomial x(x-1)...(x-r+1)/r!."""
    if r < 0:
        raise DomainError("r must be non-negative")
    out = 1.0
    for i in range(r):
        out *= (x - i) / (i + 1)
    return out


def solve_binom_x(m: float, r: int) -> float:
    """Unique x >= r-1 with gen_binom(x, r) == m, by bisection.

    When m is exactly C(X, r) for an integer X the integer is returned, so
    equality cases of Kruskal-Katona come out exact.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    if m < 1 - 1e-12:
        raise DomainError("m must be >= 1")
    lo = float(r - 1)
    hi = float(r)
    while gen_binom(hi, r) < m:
        lo, hi = hi, 2.0 * hi
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gen_binom(mid, r) < m:
            lo = mid
        else:
            hi = mid
    else:
        if hi - lo > 1e-9:
            raise NumericError(f"bisection did not converge for m={m}, r={r}")
    x = 0.5 * (lo + hi)
    nearest = round(x)
    if abs(x - nearest) < 1e-7 and float(m).is_integer() and math.comb(nearest, r) == int(m):
        return float(nearest)
    return x


def entropy(x: float) -> float:
    """Natural-log binary entropy, 0 at both endpoints."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"entropy argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log1p(-x)


def theta_residual(t: float) -> float:
    return 3 * (1 - t) * entropy(t / (1 - t)) - 2 * entropy(t)


def solve_theta() -> float:
    """Root in (0, 1/2) of 3(1-t) H(t/(1-t)) = 2 H(t); about 0.362."""
    grid = [i / 200 for i in range(1, 100)]
    brackets = [
        (lo, hi) for lo, hi in zip(grid, grid[1:])
        if theta_residual(lo) > 0 >= theta_residual(hi)
    ]
    if len(brackets) != 1:
        raise NumericError(f"expected one sign change, found {len(brackets)}")
    lo, hi = brackets[0]
    return brentq(theta_residual, lo, hi, xtol=1e-14, rtol=4 * 2.0**-52)
