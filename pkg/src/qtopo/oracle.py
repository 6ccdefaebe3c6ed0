"""Independent brute-force oracles.

These validate the braid engine and the volume-trend experiment.  They share
no code with the main engine beyond the root-of-unity arithmetic: the
bracket state sum re-derives loop counts, orientations, and writhe from the
diagram on its own.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .braid import PlatBraid
from .qnum import QContext, Spin

__all__ = [
    "kauffman_bracket",
    "kauffman_ambient",
    "oracle_writhe",
    "kashaev_41",
    "lobachevsky",
]

MAX_CROSSINGS = 16


def kauffman_bracket(plat: PlatBraid, ctx: QContext) -> complex:
    """Bracket state sum of the plat diagram at A = q^(-1/4).

    Sums over the 2^kappa smoothings; a positive letter weights the
    straight-through smoothing with A and the cup-cap smoothing with 1/A
    (reversed for negative letters).  Each closed loop contributes
    delta = -A^2 - A^(-2).  The empty diagram counts 1, so the 0-crossing
    unknot evaluates to delta itself.
    """
    if plat.colors is not None:
        for c in plat.colors:
            if c != Spin(1):
                raise ValueError("the bracket oracle handles color 1/2 only")
    word = plat.word
    kappa = len(word)
    if kappa > MAX_CROSSINGS:
        raise ValueError(f"bracket oracle capped at {MAX_CROSSINGS} crossings")

    a_pow = ctx.q_power(Fraction(-1, 4))
    delta = -a_pow ** 2 - a_pow ** -2
    m = word.strands

    total = 0.0j
    for mask in range(1 << kappa):
        # DSU over live arc endpoints
        parent = list(range(m + kappa + m))
        # node ids: 0..m-1 top caps anchors, then one fresh node per cup
        # smoothing, then bottom anchors

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra == rb:
                return True
            parent[ra] = rb
            return False

        current = [0] * m
        for i in range(0, m, 2):
            node = i  # one anchor per top cap
            current[i] = node
            current[i + 1] = node
        loops = 0
        weight = 1.0 + 0.0j
        fresh = m
        for pos, (idx, sign) in enumerate(word.letters):
            bit = (mask >> pos) & 1
            straight = (bit == 0)
            if sign > 0:
                weight *= a_pow if straight else a_pow ** -1
            else:
                weight *= a_pow ** -1 if straight else a_pow
            if straight:
                continue
            a, b = idx - 1, idx
            if union(current[a], current[b]):
                loops += 1
            current[a] = fresh
            current[b] = fresh
            fresh += 1
        for i in range(0, m, 2):
            if union(current[i], current[i + 1]):
                loops += 1
        total += weight * delta ** loops
    return total


def oracle_writhe(plat: PlatBraid) -> int:
    """Diagram writhe recomputed on the oracle's side: sum of letter signs."""
    return sum(sign for _idx, sign in plat.word.letters)


def kauffman_ambient(plat: PlatBraid, ctx: QContext) -> complex:
    """Writhe-normalized bracket, made comparable to the engine's
    ambient-normalized Jones value: multiply by (-1)^w q^(-3w/4) (the
    bracket's own twist factor is -A^(+-3)) and divide by q^(1/2)-q^(-1/2).
    """
    w = oracle_writhe(plat)
    raw = kauffman_bracket(plat, ctx)
    sign = -1.0 if w % 2 else 1.0
    return (raw * sign * ctx.q_power(Fraction(-3 * w, 4))
            / ctx.half_twist_denominator())


# -- volume-conjecture oracle ---------------------------------------------------

def kashaev_41(n_color: int) -> float:
    """|J_N| of the figure-eight knot at q = exp(2 pi i/N) via the closed
    sum over products of |1 - q^l|^2."""
    if n_color < 2:
        raise ValueError("need N >= 2")
    total = 0.0
    product = 1.0
    for m in range(n_color):
        if m > 0:
            z = 1.0 - complex(math.cos(2 * math.pi * m / n_color),
                              math.sin(2 * math.pi * m / n_color))
            product *= abs(z) ** 2
        total += product
    return total


def lobachevsky(theta: float, tol: float = 1e-12) -> float:
    """Lobachevsky function via -integral of log|2 sin t| on [0, theta].

    The log singularity at 0 is split off analytically; the remainder is a
    smooth integrand handled by Gauss-Legendre quadrature.
    """
    if theta == 0.0:
        return 0.0
    import numpy as np

    sign = 1.0
    if theta < 0:
        theta, sign = -theta, -1.0
    # integral of log(2 sin t) = integral log(2t) + integral log(sin t / t)
    analytic = theta * math.log(2.0 * theta) - theta
    xs, ws = np.polynomial.legendre.leggauss(80)
    ts = 0.5 * theta * (xs + 1.0)
    vals = np.log(np.sinc(ts / math.pi))
    smooth = 0.5 * theta * float(np.dot(ws, vals))
    return sign * (-(analytic + smooth))
