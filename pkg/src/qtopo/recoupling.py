"""Fusion rules, q-6j symbols, conformal-block bases, and duality matrices.

The singlet space of 2n colored punctures carries two distinguished bases:

* odd-coupled: strands are fused in adjacent pairs (1,2），(3,4), ... with
  channels p_0..p_{n-1}; the pair channels are then fused left to right
  through chain labels t_1..t_{n-3}, the last chain label being forced equal
  to p_{n-1} by the total-singlet condition.
* even-coupled: strand 1 is kept aside, pairs (2,3), (4,5), ...,
  (2n-2, 2n-1) carry channels q_1..q_{n-1}, fused left to right through
  chain labels d_1..d_{n-2}; the final chain label is forced equal to the
  color of strand 2n.

The change of basis decomposes into exactly 2n-3 elementary recoupling
moves for n >= 2 (a single move for n = 2), each weighted by one q-6j
symbol.  The move schedule is shared with the circuit compiler, which turns
each move into a multiplexor gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qnum import QContext, Spin

__all__ = [
    "is_admissible",
    "fusion_channels",
    "delta_factor",
    "q6j",
    "classical_6j",
    "elementary_duality",
    "OddBasisState",
    "EvenBasisState",
    "enumerate_odd_basis",
    "enumerate_even_basis",
    "DualityMatrix",
    "duality_matrix",
    "duality_move_plan",
    "DualityMove",
]


# -- fusion rules -----------------------------------------------------------

def _admissible_twice(ta: int, tb: int, tc: int, k: int) -> bool:
    if (ta + tb + tc) % 2 != 0:
        return False
    if not (abs(ta - tb) <= tc <= ta + tb):
        return False
    return ta + tb + tc <= 2 * k


def is_admissible(a: Spin, b: Spin, c: Spin, ctx: QContext) -> bool:
    """Level-k truncated triangle rule: |a-b| <= c <= a+b, a+b+c integral
    and a+b+c <= k."""
    return _admissible_twice(a.twice, b.twice, c.twice, ctx.k)


def fusion_channels(a: Spin, b: Spin, ctx: QContext) -> tuple[Spin, ...]:
    """All c with (a, b, c) admissible at level k, ascending."""
    ta, tb, k = a.twice, b.twice, ctx.k
    lo = abs(ta - tb)
    hi = min(ta + tb, 2 * k - ta - tb)
    return tuple(Spin(t) for t in range(lo, hi + 1, 2))


# -- q-6j symbol ------------------------------------------------------------

def delta_factor(a: Spin, b: Spin, c: Spin, ctx: QContext) -> float:
    """Triangle weight sqrt([-a+b+c]! [a-b+c]! [a+b-c]! / [a+b+c+1]!)."""
    if not is_admissible(a, b, c, ctx):
        raise ValueError(f"inadmissible triple ({a}, {b}, {c}) at k={ctx.k}")
    ta, tb, tc = a.twice, b.twice, c.twice
    num = (
        ctx.q_factorial((-ta + tb + tc) // 2)
        * ctx.q_factorial((ta - tb + tc) // 2)
        * ctx.q_factorial((ta + tb - tc) // 2)
    )
    den = ctx.q_factorial((ta + tb + tc) // 2 + 1)
    return math.sqrt(num / den)


def q6j(j1: Spin, j2: Spin, j12: Spin, j3: Spin, j: Spin, j23: Spin,
        ctx: QContext) -> float:
    """q-deformed 6j symbol {j1 j2 j12; j3 j j23} at level k.

    Evaluates the alternating single sum over the integers z for which all
    q-factorial arguments are non-negative.  Inadmissible label combinations
    yield 0 rather than an error, so callers can treat the symbol as absent.
    """
    return _q6j_cached(ctx.k, j1.twice, j2.twice, j12.twice,
                       j3.twice, j.twice, j23.twice)


@lru_cache(maxsize=200_000)
def _q6j_cached(k: int, t1: int, t2: int, t12: int, t3: int, t: int,
                t23: int) -> float:
    ctx = QContext(k)
    triples = (
        (t1, t2, t12),
        (t3, t, t12),
        (t1, t, t23),
        (t2, t3, t23),
    )
    for ta, tb, tc in triples:
        if not _admissible_twice(ta, tb, tc, k):
            return 0.0
    prefactor = 1.0
    for ta, tb, tc in triples:
        prefactor *= delta_factor(Spin(ta), Spin(tb), Spin(tc), ctx)

    lower = [(ta + tb + tc) // 2 for ta, tb, tc in triples]
    upper = [
        (t1 + t2 + t3 + t) // 2,
        (t1 + t3 + t12 + t23) // 2,
        (t2 + t + t12 + t23) // 2,
    ]
    total = 0.0
    for z in range(max(lower), min(upper) + 1):
        num = ctx.q_factorial(z + 1)
        if num == 0.0:
            continue
        den = 1.0
        for tl in lower:
            den *= ctx.q_factorial(z - tl)
        for tu in upper:
            den *= ctx.q_factorial(tu - z)
        term = num / den
        total += -term if z % 2 else term
    return prefactor * total


def classical_6j(j1: Spin, j2: Spin, j12: Spin, j3: Spin, j: Spin,
                 j23: Spin) -> float:
    """Undeformed Racah-Wigner 6j symbol of SU(2); the k->infinity oracle.

    Shares no code with the deformed symbol: plain integer factorials.
    """
    return _classical_6j_cached(j1.twice, j2.twice, j12.twice,
                                j3.twice, j.twice, j23.twice)


def _triangle_ok(ta: int, tb: int, tc: int) -> bool:
    return (ta + tb + tc) % 2 == 0 and abs(ta - tb) <= tc <= ta + tb


@lru_cache(maxsize=200_000)
def _classical_6j_cached(t1: int, t2: int, t12: int, t3: int, t: int,
                         t23: int) -> float:
    triples = (
        (t1, t2, t12),
        (t3, t, t12),
        (t1, t, t23),
        (t2, t3, t23),
    )
    for ta, tb, tc in triples:
        if not _triangle_ok(ta, tb, tc):
            return 0.0

    fact = math.factorial

    def delta(ta, tb, tc):
        return math.sqrt(
            fact((-ta + tb + tc) // 2) * fact((ta - tb + tc) // 2)
            * fact((ta + tb - tc) // 2) / fact((ta + tb + tc) // 2 + 1)
        )

    prefactor = 1.0
    for ta, tb, tc in triples:
        prefactor *= delta(ta, tb, tc)

    lower = [(ta + tb + tc) // 2 for ta, tb, tc in triples]
    upper = [
        (t1 + t2 + t3 + t) // 2,
        (t1 + t3 + t12 + t23) // 2,
        (t2 + t + t12 + t23) // 2,
    ]
    total = 0.0
    for z in range(max(lower), min(upper) + 1):
        den = 1.0
        for tl in lower:
            den *= fact(z - tl)
        for tu in upper:
            den *= fact(tu - z)
        term = fact(z + 1) / den
        total += -term if z % 2 else term
    return prefactor * total


def elementary_duality(j1: Spin, j2: Spin, j3: Spin, j: Spin, j12: Spin,
                       j23: Spin, ctx: QContext) -> float:
    """Single recoupling coefficient relating ((j1 j2)_{j12} j3)_j and
    (j1 (j2 j3)_{j23})_j:

        (-1)^(j1+j2+j3+j) * sqrt([2 j12+1]_q [2 j23+1]_q) * {6j}_q

    Real by construction; 0 for inadmissible labels.
    """
    symbol = q6j(j1, j2, j12, j3, j, j23, ctx)
    if symbol == 0.0:
        return 0.0
    total = j1.twice + j2.twice + j3.twice + j.twice
    # admissibility of the four coupling triples forces an integer exponent
    if total % 2 != 0:
        raise AssertionError(
            f"half-integral recoupling phase for ({j1},{j2},{j3},{j})")
    sign = -1.0 if (total // 2) % 2 else 1.0
    dims = ctx.q_integer(j12.twice + 1) * ctx.q_integer(j23.twice + 1)
    return sign * math.sqrt(dims) * symbol


# -- conformal-block bases ---------------------------------------------------

@dataclass(frozen=True)
class OddBasisState:
    """Pair channels p and chain labels for the odd coupling tree.

    ``r`` stores the free chain labels t_1..t_{n-3} followed by the forced
    closing label (equal to p_{n-1}); it is empty for n <= 2.
    """

    j: tuple[Spin, ...]
    p: tuple[Spin, ...]
    r: tuple[Spin, ...]

    @property
    def free_labels(self) -> tuple[int, ...]:
        n = len(self.p)
        ts = self.r[: max(0, n - 3)]
        return tuple(s.twice for s in self.p) + tuple(s.twice for s in ts)

    def __str__(self) -> str:
        return f"|p={','.join(map(str, self.p))};r={','.join(map(str, self.r))}>"


@dataclass(frozen=True)
class EvenBasisState:
    """Pair channels q_1..q_{n-1} plus the forced closing label, and the
    free chain labels s = (d_1..d_{n-2})."""

    j: tuple[Spin, ...]
    q_labels: tuple[Spin, ...]
    s: tuple[Spin, ...]

    @property
    def free_labels(self) -> tuple[int, ...]:
        n = len(self.j) // 2
        qs = self.q_labels[: max(0, n - 1)]
        return tuple(x.twice for x in qs) + tuple(x.twice for x in self.s)


def enumerate_odd_basis(colors, ctx: QContext) -> list[OddBasisState]:
    """All admissible odd-coupled singlet states, ordered lexicographically
    by the free label tuple (p_0..p_{n-1}, t_1..t_{n-3})."""
    colors = tuple(colors)
    if len(colors) % 2 or not colors:
        raise ValueError("need an even, positive number of strand colors")
    for c in colors:
        ctx.check_color(c)
    n = len(colors) // 2

    if n == 1:
        if colors[0] == colors[1]:
            return [OddBasisState(colors, (Spin(0),), ())]
        return []

    pair_opts = [fusion_channels(colors[2 * i], colors[2 * i + 1], ctx)
                 for i in range(n)]
    states: list[OddBasisState] = []

    if n == 2:
        for p0 in pair_opts[0]:
            if p0 in pair_opts[1]:
                states.append(OddBasisState(colors, (p0, p0), ()))
    else:
        def extend(i: int, chain: Spin, ps: tuple, ts: tuple):
            # chain holds the fusion of pairs 0..i-1
            if i == n - 1:
                if chain in pair_opts[i]:
                    r = ts + (chain,)
                    states.append(OddBasisState(colors, ps + (chain,), r))
                return
            for p in pair_opts[i]:
                for c_new in fusion_channels(chain, p, ctx):
                    new_ts = ts + (c_new,) if i < n - 2 else ts
                    # the chain label after the last free pair is p_{n-1}
                    extend(i + 1, c_new, ps + (p,), new_ts)

        for p0 in pair_opts[0]:
            extend(1, p0, (p0,), ())

    states.sort(key=lambda s: s.free_labels)
    return states


def enumerate_even_basis(colors, ctx: QContext) -> list[EvenBasisState]:
    """All admissible even-coupled singlet states, ordered lexicographically
    by (q_1..q_{n-1}, d_1..d_{n-2})."""
    colors = tuple(colors)
    if len(colors) % 2 or not colors:
        raise ValueError("need an even, positive number of strand colors")
    for c in colors:
        ctx.check_color(c)
    n = len(colors) // 2

    if n == 1:
        if colors[0] == colors[1]:
            return [EvenBasisState(colors, (), ())]
        return []

    pair_opts = [fusion_channels(colors[2 * i + 1], colors[2 * i + 2], ctx)
                 for i in range(n - 1)]
    states: list[EvenBasisState] = []
    closer = colors[2 * n - 1]

    def walk(i: int, chain: Spin, qs: tuple, ds: tuple):
        if i == n - 1:
            for q in pair_opts[n - 2]:
                if is_admissible(chain, q, closer, ctx):
                    states.append(
                        EvenBasisState(colors, qs + (q, closer), ds))
            return
        for q in pair_opts[i - 1]:
            for d in fusion_channels(chain, q, ctx):
                walk(i + 1, d, qs + (q,), ds + (d,))

    if n == 2:
        for q in pair_opts[0]:
            if is_admissible(colors[0], q, closer, ctx):
                states.append(EvenBasisState(colors, (q, closer), ()))
    else:
        walk(1, colors[0], (), ())

    states.sort(key=lambda s: s.free_labels)
    return states


# -- duality matrix ----------------------------------------------------------

Slot = tuple[str, int]
Source = tuple[str, object]


@dataclass(frozen=True)
class DualityMove:
    """One elementary recoupling step acting on a stored label.

    ``target`` is the slot being rewritten.  ``a_source`` and ``f_source``
    are either ("slot", slot) or ("strand", index) references; ``b_strand``
    and ``c_strand`` are 0-based strand indices.  For kind "unpack" the 6j's
    j12 entry is the new value and j23 the old one; for "pack" the roles are
    reversed.
    """

    kind: str
    target: Slot
    a_source: Source
    b_strand: int
    c_strand: int
    f_source: Source


def _chain_slot(i: int, n: int) -> Slot:
    """Slot holding the odd chain label c_i (1 <= i <= n-1)."""
    if i == 1:
        return ("p", 0)
    if i <= n - 2:
        return ("t", i - 1)
    return ("p", n - 1)


@lru_cache(maxsize=None)
def duality_move_plan(n: int) -> tuple[DualityMove, ...]:
    """The 2n-3 elementary moves taking the odd tree to the even tree.

    The final (root-level) re-association is omitted: its coefficient is
    identically +1 and its output label is fixed by the closing strand, so
    the last pack move reads that strand directly.
    """
    if n < 2:
        return ()
    moves: list[DualityMove] = []
    for i in range(1, n - 1):
        moves.append(DualityMove(
            kind="unpack",
            target=("p", i),
            a_source=("slot", _chain_slot(i, n)),
            b_strand=2 * i,
            c_strand=2 * i + 1,
            f_source=("slot", _chain_slot(i + 1, n)),
        ))
        moves.append(_pack_move(i, n))
    moves.append(_pack_move(n - 1, n))
    return tuple(moves)


def _pack_move(i: int, n: int) -> DualityMove:
    if i == 1:
        target: Slot = ("p", 0)
    elif i <= n - 2:
        target = ("t", i - 1)
    else:
        target = ("p", n - 1)
    a_source: Source = ("strand", 0) if i == 1 else ("slot", ("p", i - 1))
    f_source: Source = (("slot", ("p", i)) if i <= n - 2
                        else ("strand", 2 * n - 1))
    return DualityMove(
        kind="pack",
        target=target,
        a_source=a_source,
        b_strand=2 * i - 1,
        c_strand=2 * i,
        f_source=f_source,
    )


def even_readout_map(n: int) -> dict[str, Slot]:
    """Where each canonical even label sits after the move schedule runs."""
    out: dict[str, Slot] = {}
    if n < 2:
        return out
    out["q1"] = ("p", 0)
    for jj in range(2, n - 1):
        out[f"q{jj}"] = ("t", jj - 1)
    if n >= 3:
        out[f"q{n-1}"] = ("p", n - 1)
    for i in range(1, n - 1):
        out[f"d{i}"] = ("p", i)
    return out


def _odd_slots(state: OddBasisState, n: int) -> dict[Slot, int]:
    slots: dict[Slot, int] = {}
    for i, p in enumerate(state.p):
        slots[("p", i)] = p.twice
    for idx in range(max(0, n - 3)):
        slots[("t", idx + 1)] = state.r[idx].twice
    return slots


def _read(source: Source, slots: dict[Slot, int], colors) -> int:
    kind, ref = source
    if kind == "strand":
        return colors[ref].twice
    return slots[ref]


def move_block(move: DualityMove, a_twice: int, b_twice: int, c_twice: int,
               f_twice: int, old_twice: int, new_twice: int,
               ctx: QContext) -> float:
    """Coefficient of the move taking stored value old -> new under the
    given controls."""
    a, b, c, f = Spin(a_twice), Spin(b_twice), Spin(c_twice), Spin(f_twice)
    if move.kind == "unpack":
        return elementary_duality(a, b, c, f, Spin(new_twice),
                                  Spin(old_twice), ctx)
    return elementary_duality(a, b, c, f, Spin(old_twice),
                              Spin(new_twice), ctx)


@dataclass
class DualityMatrix:
    """Unitary change of basis A with |odd_o> = sum_e A[e, o] |even_e>."""

    odd_basis: list[OddBasisState]
    even_basis: list[EvenBasisState]
    entries: np.ndarray  # shape (len(even), len(odd)), real

    def unitarity_defect(self) -> float:
        a = self.entries
        eye = np.eye(a.shape[1])
        return float(np.max(np.abs(a.T @ a - eye))) if a.size else 0.0


_DUALITY_CACHE: dict = {}


def duality_matrix(colors, ctx: QContext) -> DualityMatrix:
    """Assemble the odd -> even change of basis from elementary moves.

    Results are cached per (k, colors) and must be treated as read-only.
    """
    colors = tuple(colors)
    key = (ctx.k, tuple(c.twice for c in colors))
    hit = _DUALITY_CACHE.get(key)
    if hit is not None:
        return hit
    out = _duality_matrix_uncached(colors, ctx)
    _DUALITY_CACHE[key] = out
    return out


def _duality_matrix_uncached(colors, ctx: QContext) -> DualityMatrix:
    n = len(colors) // 2
    odd = enumerate_odd_basis(colors, ctx)
    even = enumerate_even_basis(colors, ctx)
    if len(odd) != len(even):
        raise AssertionError(
            f"basis cardinality mismatch: {len(odd)} odd vs {len(even)} even")

    if n == 1:
        return DualityMatrix(odd, even, np.eye(len(odd)))

    even_index = {st.free_labels: idx for idx, st in enumerate(even)}
    readout = even_readout_map(n)
    plan = duality_move_plan(n)
    allowed = [s.twice for s in ctx.allowed_colors()]

    entries = np.zeros((len(even), len(odd)))
    for o_idx, state in enumerate(odd):
        wave: dict[tuple, float] = {}
        base = _odd_slots(state, n)
        keys = sorted(base)
        wave[tuple(base[kk] for kk in keys)] = 1.0

        for move in plan:
            t_pos = keys.index(move.target)
            new_wave: dict[tuple, float] = {}
            for assignment, amp in wave.items():
                slots = dict(zip(keys, assignment))
                a = _read(move.a_source, slots, colors)
                b = colors[move.b_strand].twice
                c = colors[move.c_strand].twice
                f = _read(move.f_source, slots, colors)
                old = assignment[t_pos]
                for new in allowed:
                    coeff = move_block(move, a, b, c, f, old, new, ctx)
                    if coeff == 0.0:
                        continue
                    nxt = assignment[:t_pos] + (new,) + assignment[t_pos + 1:]
                    new_wave[nxt] = new_wave.get(nxt, 0.0) + amp * coeff
            wave = new_wave

        for assignment, amp in wave.items():
            slots = dict(zip(keys, assignment))
            free = tuple(slots[readout[f"q{jj}"]] for jj in range(1, n)) + \
                tuple(slots[readout[f"d{i}"]] for i in range(1, n - 1))
            e_idx = even_index.get(free)
            if e_idx is None:
                raise AssertionError(
                    f"duality produced a label set outside the even basis: {free}")
            entries[e_idx, o_idx] += amp

    return DualityMatrix(odd, even, entries)
