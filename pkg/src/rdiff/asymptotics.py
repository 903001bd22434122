"""Leading-order asymptotics for partitions into polynomial part sets.

For parts P(1), P(2), ... with P(x) = A x^d + B x^{d-1} + ... = A prod (x + rho_j),

    p_S(n) ~ c n^{-kappa - 1/2} exp{(1 + d) C n^{1/(d+1)}},

    kappa = (A d + B) / (A (d + 1))
    C     = (A^{-1/d} d^{-1} zeta(1 + 1/d) Gamma(1 + 1/d))^{d/(d+1)}
    c     = prod Gamma(1 + rho_j) C^{1+B/(Ad)} A^{1/2+B/(Ad)} (1 + 1/d)^{-1/2} (2 pi)^{-(d+1)/2}

The binomial parts C(l+r, r) are P(x) = C(x+r-1, r): d = r, A = 1/r!,
rho_j = j - 1.  The average number of distinct parts with multiplicity >= m
behaves like m^{-1/r} A_mean n^{1/(r+1)} with
A_mean = Gamma(1 + 1/r) (r!)^{1/r} C^{-1/r}.

All n-dependent estimates are formed in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import special

from .counting import log_int

__all__ = [
    "zeta", "gamma", "PolynomialPartSet", "AsymptoticConstants",
    "constants_binomial", "constants_polynomial", "log_asym_pr", "asym_pr",
    "log_asym_ps", "asym_delta", "tilt_parameter", "ratio_to_exact",
    "variance_constant", "point_mass_limit",
]


def zeta(s: float) -> float:
    """Riemann zeta for real s > 1."""
    if not s > 1:
        raise ValueError(f"zeta requires s > 1, got {s}")
    return float(special.zeta(s))


def gamma(x: float) -> float:
    """Gamma function for real x > 0."""
    if not x > 0:
        raise ValueError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class PolynomialPartSet:
    """P(x) = A prod_j (x + roots[j]) with next coefficient B = A sum roots."""

    d: int
    A: float
    B: float
    roots: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(float(x) for x in self.roots))
        if self.d < 1 or len(self.roots) != self.d:
            raise ValueError(f"need d >= 1 and exactly d roots, got d={self.d}, "
                             f"{len(self.roots)} roots")
        if not self.A > 0:
            raise ValueError(f"leading coefficient must be positive, got {self.A}")
        expected_B = self.A * sum(self.roots)
        if abs(self.B - expected_B) > 1e-9 * max(1.0, abs(expected_B)):
            raise ValueError(f"B={self.B} inconsistent with A*sum(roots)={expected_B}")
        xs = [1 + 0.25 * i for i in range(200)]
        vals = [self(x) for x in xs]
        if vals[0] <= 0 or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("P must be positive and increasing on x >= 1")

    @classmethod
    def binomial(cls, r: int) -> "PolynomialPartSet":
        """P(x) = C(x+r-1, r)."""
        A = 1 / math.factorial(r)
        roots = tuple(float(j) for j in range(r))
        return cls(r, A, A * sum(roots), roots)

    def __call__(self, x):
        out = self.A
        for rho in self.roots:
            out *= x + rho
        return out

    def parts(self, cap: int) -> list[int]:
        """Integer values P(1), P(2), ... not exceeding cap."""
        out = []
        x = 1
        while (v := self(x)) <= cap + 0.5:
            iv = round(v)
            if abs(v - iv) > 1e-6 * max(1.0, v):
                raise ValueError(f"P({x}) = {v} is not an integer")
            out.append(iv)
            x += 1
        return out


@dataclass(frozen=True)
class AsymptoticConstants:
    C: float
    c: float
    kappa: float
    A_mean: float

    @property
    def exponent(self) -> float:
        """Power of n in the prefactor: n^{-exponent}."""
        return self.kappa + 0.5


def constants_polynomial(ps: PolynomialPartSet) -> AsymptoticConstants:
    d, A, B = ps.d, ps.A, ps.B
    if any(rho <= -1 for rho in ps.roots):
        raise ValueError("all rho_j must exceed -1")
    kappa = (A * d + B) / (A * (d + 1))
    C = (A ** (-1 / d) / d * zeta(1 + 1 / d) * gamma(1 + 1 / d)) ** (d / (d + 1))
    b = B / (A * d)
    log_c = (sum(math.lgamma(1 + rho) for rho in ps.roots)
             + (1 + b) * math.log(C)
             + (0.5 + b) * math.log(A)
             - 0.5 * math.log(1 + 1 / d)
             - (d + 1) / 2 * math.log(2 * math.pi))
    A_mean = gamma(1 + 1 / d) * A ** (-1 / d) * C ** (-1 / d)
    return AsymptoticConstants(C, math.exp(log_c), kappa, A_mean)


@lru_cache(maxsize=64)
def constants_binomial(r: int) -> AsymptoticConstants:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    fact = math.factorial(r)
    C = (fact ** (1 / r) / r * zeta(1 + 1 / r) * gamma(1 + 1 / r)) ** (r / (r + 1))
    log_c = ((r + 1) / 2 * math.log(C / (2 * math.pi))
             - r / 2 * math.log(fact)
             - 0.5 * math.log(1 + 1 / r)
             + sum(math.lgamma(j + 1) for j in range(r)))
    A_mean = gamma(1 + 1 / r) * fact ** (1 / r) * C ** (-1 / r)
    return AsymptoticConstants(C, math.exp(log_c), r / 2, A_mean)


def log_asym_ps(n: float, consts: AsymptoticConstants, d: int) -> float:
    """log of c n^{-kappa-1/2} exp{(1+d) C n^{1/(1+d)}}."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (math.log(consts.c) - consts.exponent * math.log(n)
            + (1 + d) * consts.C * n ** (1 / (1 + d)))


def log_asym_pr(n: float, r: int) -> float:
    return log_asym_ps(n, constants_binomial(r), r)


def asym_pr(n: float, r: int) -> float:
    """Leading-order estimate of p_r(n); inf when it exceeds the double range."""
    try:
        return math.exp(log_asym_pr(n, r))
    except OverflowError:
        return math.inf


def ratio_to_exact(log_estimate: float, exact: int) -> float:
    """estimate / exact computed without overflow."""
    return math.exp(log_estimate - log_int(exact))


def asym_delta(n: float, r: int, m: int = 1) -> float:
    """m^{-1/r} A_mean n^{1/(r+1)}."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return m ** (-1 / r) * constants_binomial(r).A_mean * n ** (1 / (r + 1))


def tilt_parameter(n: float, r: int) -> float:
    """q_n = exp(-C n^{-r/(r+1)})."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.exp(-constants_binomial(r).C * n ** (-r / (r + 1)))


def variance_constant(r: int) -> float:
    """K_r with var X_n ~ K_r n^{(2r+1)/(r+1)} at q = q_n.

    K_r = (r!)^{1/r} r^{-1} Gamma(2 + 1/r) zeta(1 + 1/r) C^{-(2r+1)/r}.
    """
    C = constants_binomial(r).C
    return (math.factorial(r) ** (1 / r) / r * gamma(2 + 1 / r) * zeta(1 + 1 / r)
            * C ** (-(2 * r + 1) / r))


def point_mass_limit(r: int) -> float:
    """lim n^{(2r+1)/(2(r+1))} P(X_n = n) = 1 / sqrt(2 pi K_r)."""
    return 1 / math.sqrt(2 * math.pi * variance_constant(r))
