"""Deformed arithmetic at a fixed root of unity q = exp(2*pi*i/(k+2)).

Everything downstream (fusion rules, recoupling symbols, braiding phases,
modular weights) is built from the handful of primitives defined here:
q-integers, q-factorials, quantum dimensions, Casimir exponents, and the
modular constants alpha and mu_j.

Phases are tracked as exact rationals multiplying 2*pi/(k+2) until the final
complex evaluation, so unimodularity is exact to machine precision.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Spin",
    "QContext",
    "ColorRangeError",
    "casimir",
    "default_tol",
    "ENGINE_K_MAX",
]

DEFAULT_TOL = 1e-9
# Pure q-arithmetic stays well-conditioned far beyond the engine range; the
# large headroom exists for classical-limit cross-checks of the q-6j.
K_MIN, K_MAX = 1, 2048
# Braid evolution, color sums and circuit layouts refuse k above this.
ENGINE_K_MAX = 64


class ColorRangeError(ValueError):
    """A spin label lies outside the allowed color set {0, 1/2, ..., k/2}."""


def default_tol() -> float:
    """Default comparison tolerance, overridable via the QTOP_TOL env var."""
    raw = os.environ.get("QTOP_TOL")
    if raw is None:
        return DEFAULT_TOL
    return float(raw)


@dataclass(frozen=True, order=True)
class Spin:
    """A half-integer spin stored as its doubled (always integral) value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int):
            raise TypeError(f"Spin.twice must be int, got {type(self.twice)!r}")
        if self.twice < 0:
            raise ValueError(f"Spin.twice must be non-negative, got {self.twice}")

    @classmethod
    def parse(cls, text: str) -> "Spin":
        """Parse "1/2", "3/2", "1", "0" into a Spin."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            f = Fraction(int(num), int(den))
        else:
            f = Fraction(int(text))
        twice = f * 2
        if twice.denominator != 1 or twice < 0:
            raise ValueError(f"not a non-negative half-integer: {text!r}")
        return cls(int(twice))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


ZERO = Spin(0)
HALF = Spin(1)


def casimir(j: Spin) -> Fraction:
    """Quadratic Casimir j(j+1) as an exact rational."""
    t = j.twice
    return Fraction(t * (t + 2), 4)


@dataclass(frozen=True)
class QContext:
    """Evaluation context for a fixed integer coupling k.

    level = k + 2 and q = exp(2*pi*i/level).  All colors are restricted to
    {0, 1/2, ..., k/2}.
    """

    k: int
    tol: float = field(default_factory=default_tol)

    def __post_init__(self):
        if not (K_MIN <= self.k <= K_MAX):
            raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {self.k}")

    @property
    def level(self) -> int:
        return self.k + 2

    @property
    def q_phase(self) -> float:
        return 2.0 * math.pi / self.level

    @property
    def q(self) -> complex:
        return self.q_power(1)

    def allowed_colors(self) -> tuple[Spin, ...]:
        return tuple(Spin(t) for t in range(self.k + 1))

    def is_allowed(self, j: Spin) -> bool:
        return 0 <= j.twice <= self.k

    def check_color(self, j: Spin) -> None:
        if not self.is_allowed(j):
            raise ColorRangeError(f"color {j} exceeds k/2 = {self.k}/2")

    # -- deformed integers -------------------------------------------------

    def q_integer(self, x: int) -> float:
        """[x]_q = sin(pi x / (k+2)) / sin(pi / (k+2))."""
        ell = self.level
        return math.sin(math.pi * x / ell) / math.sin(math.pi / ell)

    def q_factorial(self, x: int) -> float:
        """[x]_q! = [x]_q [x-1]_q ... [1]_q, with [0]_q! = 1."""
        if x < 0:
            raise ValueError(f"q-factorial undefined for negative argument {x}")
        return _qfact_cached(self.k, x)

    def q_dimension(self, j: Spin) -> float:
        """[2j+1]_q, the invariant of the 0-framed j-colored unknot."""
        self.check_color(j)
        return self.q_integer(j.twice + 1)

    # -- modular data ------------------------------------------------------

    def mu(self, j: Spin) -> float:
        """mu_j = sqrt(2/(k+2)) * sin(pi (2j+1)/(k+2))."""
        self.check_color(j)
        ell = self.level
        return math.sqrt(2.0 / ell) * math.sin(math.pi * (j.twice + 1) / ell)

    @property
    def alpha(self) -> complex:
        """alpha = exp(3 pi i k / (4(k+2))), the signature correction phase."""
        return self.q_power(Fraction(3 * self.k, 8))

    def q_power(self, r) -> complex:
        """q^r = exp(2 pi i r/(k+2)) for an exact rational exponent r."""
        r = Fraction(r)
        ell = self.level
        frac = (r / ell) % 1  # exact rational in [0, 1)
        return cmath.exp(2j * math.pi * float(frac))

    def half_twist_denominator(self) -> complex:
        """q^{1/2} - q^{-1/2} = 2i sin(pi/(k+2))."""
        return self.q_power(Fraction(1, 2)) - self.q_power(Fraction(-1, 2))


@lru_cache(maxsize=None)
def _qfact_cached(k: int, x: int) -> float:
    if x <= 0:
        return 1.0
    ell = k + 2
    s0 = math.sin(math.pi / ell)
    out = 1.0
    for i in range(1, x + 1):
        out *= math.sin(math.pi * i / ell) / s0
    return out
