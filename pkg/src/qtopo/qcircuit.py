"""Compilation of the braid evolution onto a simulated qubit register.

Register layout: one field of ceil(log2(k+1)) qubits per stored label, a
label being the doubled spin value.  Fields are ordered j_1..j_2n followed
by the free internal labels (p_0..p_{n-1}, t_1..t_{n-3}); the forced
closing label is not stored, giving (4n-3) fields for n >= 2.

Odd braid letters become a field SWAP plus a channel-controlled phase.
Even letters become the odd->even duality (2n-3 multiplexor gates whose
blocks are elementary recoupling matrices keyed by the j-register, then a
reordering SWAP network), the diagonal even braiding phase, and the
inverse duality.  Because every block is keyed by the j-register values,
one compiled circuit serves every coloring, including superpositions.

Simulation is exact dense statevector evolution, organized field-wise.
`hadamard_test` samples the ancilla statistics of the controlled-circuit
interference experiment; the controlled application happens at the
whole-unitary level, which is equivalent for simulation purposes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .braid import BraidWord, plat_components
from .braidrep import DEFAULT_CONVENTION, braiding_eigenvalue
from .qnum import ENGINE_K_MAX, QContext, Spin, casimir
from .recoupling import (OddBasisState, duality_move_plan,
                         even_readout_map, is_admissible, move_block)
from .surgery import FramedLink, linking_matrix, signature

__all__ = [
    "RegisterLayout",
    "Gate",
    "Circuit",
    "QubitBudgetError",
    "layout",
    "encode",
    "decode",
    "compile_odd",
    "compile_duality",
    "compile_braid",
    "prepare_superposition",
    "simulate",
    "expectation",
    "hadamard_test",
    "HadamardEstimate",
    "circuit_invariant",
    "InvariantEstimate",
]

MAX_QUBITS = 26


class QubitBudgetError(RuntimeError):
    """The register would exceed the desk-scale simulation cap."""


# -- layout -------------------------------------------------------------------

@dataclass(frozen=True)
class RegisterLayout:
    n: int
    k: int

    @property
    def bits_per_label(self) -> int:
        return max(1, math.ceil(math.log2(self.k + 1)))

    @property
    def field_dim(self) -> int:
        return 1 << self.bits_per_label

    @property
    def num_j_fields(self) -> int:
        return 2 * self.n

    @property
    def num_internal_fields(self) -> int:
        return max(0, 2 * self.n - 3)

    @property
    def num_fields(self) -> int:
        return self.num_j_fields + self.num_internal_fields

    @property
    def total_qubits(self) -> int:
        return self.num_fields * self.bits_per_label

    def j_field(self, strand: int) -> int:
        if not 0 <= strand < 2 * self.n:
            raise IndexError(f"strand {strand} out of range")
        return strand

    def internal_field(self, m: int) -> int:
        if not 0 <= m < self.num_internal_fields:
            raise IndexError(f"internal label {m} out of range")
        return 2 * self.n + m

    def slot_field(self, slot: tuple[str, int]) -> int:
        """Field storing a duality-plan slot.  p_i sits at internal index i,
        t_jj at internal index n-1+jj-1."""
        kind, idx = slot
        n = self.n
        if kind == "p":
            if n >= 3 or idx == 0:
                return self.internal_field(idx)
            raise KeyError(f"slot {slot} is not stored for n={n}")
        return self.internal_field(n - 1 + idx - 1)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "bits_per_label": self.bits_per_label,
            "fields": self.num_fields,
            "total_qubits": self.total_qubits,
        }


def layout(n: int, ctx: QContext) -> RegisterLayout:
    if n < 1:
        raise ValueError("need at least one strand pair")
    if ctx.k > ENGINE_K_MAX:
        raise ValueError(f"circuit compilation supports k <= {ENGINE_K_MAX}")
    lay = RegisterLayout(n, ctx.k)
    if lay.total_qubits > MAX_QUBITS:
        raise QubitBudgetError(
            f"{lay.total_qubits} qubits exceed the cap of {MAX_QUBITS}")
    return lay


def encode(state: OddBasisState, lay: RegisterLayout) -> int:
    """Pack an odd-basis state into the register bitstring (int)."""
    values = _field_values(state, lay)
    b = lay.bits_per_label
    out = 0
    for f, v in enumerate(values):
        if v > lay.k:
            raise ValueError(f"label {v}/2 exceeds k/2")
        out |= v << (f * b)
    return out


def _field_values(state: OddBasisState, lay: RegisterLayout) -> list[int]:
    n = lay.n
    values = [s.twice for s in state.j]
    if n == 1:
        return values
    if n == 2:
        values.append(state.p[0].twice)
        return values
    values.extend(s.twice for s in state.p)
    values.extend(s.twice for s in state.r[: n - 3])
    return values


def decode(bits: int, colors, lay: RegisterLayout) -> OddBasisState:
    """Inverse of encode; the forced closing label is reconstructed."""
    b = lay.bits_per_label
    mask = lay.field_dim - 1
    values = [(bits >> (f * b)) & mask for f in range(lay.num_fields)]
    n = lay.n
    js = tuple(Spin(v) for v in values[: 2 * n])
    if n == 1:
        return OddBasisState(js, (Spin(0),), ())
    if n == 2:
        p0 = Spin(values[2 * n])
        return OddBasisState(js, (p0, p0), ())
    ps = tuple(Spin(v) for v in values[2 * n: 2 * n + n])
    ts = tuple(Spin(v) for v in values[2 * n + n:])
    return OddBasisState(js, ps, ts + (ps[-1],))


# -- gates ---------------------------------------------------------------------

@dataclass
class Gate:
    """A field-level gate.

    kinds:
      swap        fields=(a, b)
      phase       fields=controls, data={value-tuple: complex}
      multiplexor fields=(*controls, target), data={control-values: block}
      prepare     fields=(target,), data=unitary matrix
      copy        fields=(src, dst)  (xor-copy permutation)
    """

    kind: str
    fields: tuple[int, ...]
    data: object = None
    label: str = ""

    def adjoint(self) -> "Gate":
        if self.kind in ("swap", "copy"):
            return Gate(self.kind, self.fields, self.data, self.label)
        if self.kind == "phase":
            return Gate("phase", self.fields,
                        {k: np.conj(v) for k, v in self.data.items()},
                        self.label)
        if self.kind == "multiplexor":
            return Gate("multiplexor", self.fields,
                        {k: b.conj().T for k, b in self.data.items()},
                        self.label)
        if self.kind == "prepare":
            return Gate("prepare", self.fields, self.data.conj().T, self.label)
        raise ValueError(f"unknown gate kind {self.kind}")

    def qubit_targets(self, lay: RegisterLayout) -> list[int]:
        b = lay.bits_per_label
        out = []
        for f in self.fields:
            out.extend(range(f * b, (f + 1) * b))
        return out

    def dump_line(self, lay: RegisterLayout) -> str:
        targets = ",".join(map(str, self.qubit_targets(lay)))
        if self.kind == "swap":
            data = "-"
        elif self.kind == "phase":
            data = f"table[{len(self.data)}]"
        elif self.kind == "multiplexor":
            data = f"blocks[{len(self.data)}]"
        elif self.kind == "prepare":
            data = f"unitary[{self.data.shape[0]}]"
        else:
            data = "xor"
        tag = f" {self.label}" if self.label else ""
        return f"{self.kind.upper()} {targets} {data}{tag}"


@dataclass
class Circuit:
    lay: RegisterLayout
    gates: list[Gate] = field(default_factory=list)

    def extend(self, gates) -> "Circuit":
        self.gates.extend(gates)
        return self

    def adjoint(self) -> "Circuit":
        return Circuit(self.lay, [g.adjoint() for g in reversed(self.gates)])

    def gate_count(self, kind: str | None = None) -> int:
        if kind is None:
            return len(self.gates)
        return sum(1 for g in self.gates if g.kind == kind)

    def dump(self) -> str:
        return "\n".join(g.dump_line(self.lay) for g in self.gates)


# -- compilation ----------------------------------------------------------------

def _phase_table_odd(lay: RegisterLayout, ctx: QContext, sign: int,
                     convention: str) -> dict:
    """Phase keyed by (j_a, j_b, channel) doubled values; inadmissible
    patterns stay at phase 1 so the gate is unitary on the whole register."""
    table = {}
    for ja in range(lay.k + 1):
        for jb in range(lay.k + 1):
            for t in range(lay.k + 1):
                if is_admissible(Spin(ja), Spin(jb), Spin(t), ctx):
                    table[(ja, jb, t)] = braiding_eigenvalue(
                        Spin(ja), Spin(jb), Spin(t), sign, ctx, convention)
    return table


def compile_odd(letter: tuple[int, int], lay: RegisterLayout, ctx: QContext,
                convention: str = DEFAULT_CONVENTION) -> list[Gate]:
    """Odd generator: SWAP the two color fields, then a channel-controlled
    phase on (j_a, j_b, p_l)."""
    idx, sign = letter
    if idx % 2 == 0:
        raise ValueError("compile_odd expects an odd generator index")
    i0 = idx - 1
    ja, jb = lay.j_field(i0), lay.j_field(i0 + 1)
    gates = [Gate("swap", (ja, jb), label=f"sigma{idx}")]
    if lay.n == 1:
        # the only channel is 0; phase keyed by the (equal) pair colors
        table = {}
        for j in range(lay.k + 1):
            table[(j, j)] = braiding_eigenvalue(Spin(j), Spin(j), Spin(0),
                                                sign, ctx, convention)
        gates.append(Gate("phase", (ja, jb), table, label=f"sigma{idx}"))
        return gates
    pair = i0 // 2
    if lay.n == 2 and pair == 1:
        # p_1 is not stored: on the singlet sector it equals p_0
        channel_field = lay.internal_field(0)
    else:
        channel_field = lay.internal_field(pair)
    table = _phase_table_odd(lay, ctx, sign, convention)
    gates.append(Gate("phase", (ja, jb, channel_field), table,
                      label=f"sigma{idx}"))
    return gates


def _even_reorder_swaps(lay: RegisterLayout) -> list[Gate]:
    """Field permutation aligning the move outputs with the canonical even
    layout (q_1..q_{n-1}, d_1..d_{n-2}) on the internal fields."""
    n = lay.n
    if n <= 2:
        return []
    # content -> destination (internal indices)
    perm = {}
    readout = even_readout_map(n)
    canonical = [f"q{jj}" for jj in range(1, n)] + \
                [f"d{i}" for i in range(1, n - 1)]
    for dest, name in enumerate(canonical):
        src = lay.slot_field(readout[name]) - 2 * n
        perm[src] = dest
    gates = []
    # decompose into transpositions
    placed = list(range(lay.num_internal_fields))
    for src in sorted(perm):
        dest = perm[src]
        cur = placed.index(src)
        if cur != dest:
            placed[cur], placed[dest] = placed[dest], placed[cur]
            gates.append(Gate("swap",
                              (lay.internal_field(cur),
                               lay.internal_field(dest)),
                              label="reorder"))
    return gates


def _duality_multiplexors(lay: RegisterLayout, ctx: QContext) -> list[Gate]:
    n = lay.n
    gates: list[Gate] = []
    dim = lay.field_dim
    for move in duality_move_plan(n):
        control_fields = []
        for source in (move.a_source, ("strand", move.b_strand),
                       ("strand", move.c_strand), move.f_source):
            kind, ref = source
            if kind == "strand":
                control_fields.append(lay.j_field(ref))
            else:
                control_fields.append(lay.slot_field(ref))
        target = lay.slot_field(move.target)
        blocks = {}
        for a in range(lay.k + 1):
            for b in range(lay.k + 1):
                for c in range(lay.k + 1):
                    for f in range(lay.k + 1):
                        block = _move_block_matrix(move, a, b, c, f, lay, ctx)
                        if block is not None:
                            blocks[(a, b, c, f)] = block
        gates.append(Gate("multiplexor", (*control_fields, target), blocks,
                          label=f"{move.kind}->{move.target}"))
    return gates


def _move_block_matrix(move, a, b, c, f, lay, ctx) -> np.ndarray | None:
    """Block for one control pattern: recoupling coefficients on the active
    old/new label sets, identity on the complement; None when the pattern
    touches nothing (the simulator then skips it)."""
    dim = lay.field_dim
    olds = []
    news = []
    for v in range(lay.k + 1):
        if move.kind == "unpack":
            old_ok = (is_admissible(Spin(b), Spin(c), Spin(v), ctx)
                      and is_admissible(Spin(a), Spin(v), Spin(f), ctx))
            new_ok = (is_admissible(Spin(a), Spin(b), Spin(v), ctx)
                      and is_admissible(Spin(v), Spin(c), Spin(f), ctx))
        else:
            old_ok = (is_admissible(Spin(a), Spin(b), Spin(v), ctx)
                      and is_admissible(Spin(v), Spin(c), Spin(f), ctx))
            new_ok = (is_admissible(Spin(b), Spin(c), Spin(v), ctx)
                      and is_admissible(Spin(a), Spin(v), Spin(f), ctx))
        if old_ok:
            olds.append(v)
        if new_ok:
            news.append(v)
    if not olds and not news:
        return None
    if len(olds) != len(news):
        raise AssertionError(
            f"non-square recoupling block for controls {(a, b, c, f)}")
    # Recoupling on the active sets; the never-reached complement is carried
    # along by a fixed permutation (the identity whenever the two active
    # sets coincide) so the gate is unitary on the whole field space.
    out = np.zeros((dim, dim))
    old_rest = [v for v in range(dim) if v not in olds]
    new_rest = [v for v in range(dim) if v not in news]
    for old, new in zip(old_rest, new_rest):
        out[new, old] = 1.0
    for old in olds:
        for new in news:
            out[new, old] = move_block(move, a, b, c, f, old, new, ctx)
    defect = np.max(np.abs(out.T @ out - np.eye(dim)))
    if defect > 1e-10:
        raise AssertionError(f"non-unitary multiplexor block ({defect:.2e})")
    return out


def compile_duality(direction: str, lay: RegisterLayout, ctx: QContext) -> list[Gate]:
    """The odd->even basis change ('forward') or its inverse as gates."""
    mux = _duality_multiplexors(lay, ctx)
    swaps = _even_reorder_swaps(lay)
    if direction == "forward":
        return mux + swaps
    if direction == "inverse":
        return [g.adjoint() for g in reversed(swaps)] + \
               [g.adjoint() for g in reversed(mux)]
    raise ValueError("direction must be 'forward' or 'inverse'")


def _phase_table_even(lay: RegisterLayout, ctx: QContext, sign: int,
                      convention: str) -> dict:
    return _phase_table_odd(lay, ctx, sign, convention)


def compile_braid(word: BraidWord, lay: RegisterLayout, ctx: QContext,
                  convention: str = DEFAULT_CONVENTION) -> Circuit:
    """Concatenate the per-letter gate blocks for the whole word."""
    if word.strands != 2 * lay.n:
        raise ValueError("word and layout disagree on strand count")
    circ = Circuit(lay)
    fwd = None
    for letter in word.letters:
        idx, sign = letter
        if idx % 2:
            circ.extend(compile_odd(letter, lay, ctx, convention))
            continue
        if fwd is None:
            fwd = compile_duality("forward", lay, ctx)
            inv = compile_duality("inverse", lay, ctx)
        pair = idx // 2  # 1-based even pair
        ja, jb = lay.j_field(idx - 1), lay.j_field(idx)
        qfield = lay.internal_field(pair - 1)
        circ.extend(fwd)
        circ.extend([
            Gate("swap", (ja, jb), label=f"sigma{idx}"),
            Gate("phase", (ja, jb, qfield),
                 _phase_table_even(lay, ctx, sign, convention),
                 label=f"sigma{idx}"),
        ])
        circ.extend(inv)
    return circ


# -- simulation -----------------------------------------------------------------

def _zero_state(lay: RegisterLayout) -> np.ndarray:
    shape = (lay.field_dim,) * lay.num_fields
    state = np.zeros(shape, dtype=complex)
    state[(0,) * lay.num_fields] = 1.0
    return state


def _basis_state(bits: int, lay: RegisterLayout) -> np.ndarray:
    b = lay.bits_per_label
    mask = lay.field_dim - 1
    idx = tuple((bits >> (f * b)) & mask for f in range(lay.num_fields))
    state = np.zeros((lay.field_dim,) * lay.num_fields, dtype=complex)
    state[idx] = 1.0
    return state


def _apply_gate(state: np.ndarray, gate: Gate, lay: RegisterLayout) -> np.ndarray:
    nf = lay.num_fields
    dim = lay.field_dim
    if gate.kind == "swap":
        a, b = gate.fields
        return np.swapaxes(state, a, b)
    if gate.kind == "phase":
        controls = gate.fields
        table = np.ones((dim,) * len(controls), dtype=complex)
        for key, val in gate.data.items():
            table[key] = val
        moved = np.moveaxis(state, controls, range(len(controls)))
        moved = moved * table.reshape(table.shape + (1,) * (nf - len(controls)))
        return np.moveaxis(moved, range(len(controls)), controls)
    if gate.kind == "multiplexor":
        *controls, target = gate.fields
        order = list(controls) + [target]
        moved = np.moveaxis(state, order, range(len(order)))
        lead = moved.shape[: len(controls)]
        rest = moved.shape[len(order):]
        flat = moved.reshape(lead + (dim, -1))
        out = flat.copy()
        for key, block in gate.data.items():
            out[key] = block @ flat[key]
        out = out.reshape(lead + (dim,) + rest)
        return np.moveaxis(out, range(len(order)), order)
    if gate.kind == "prepare":
        (target,) = gate.fields
        moved = np.moveaxis(state, target, 0)
        out = np.tensordot(gate.data, moved, axes=([1], [0]))
        return np.moveaxis(out, 0, target)
    if gate.kind == "copy":
        src, dst = gate.fields
        moved = np.moveaxis(state, (src, dst), (0, 1))
        out = np.empty_like(moved)
        for x in range(dim):
            for z in range(dim):
                out[x, z] = moved[x, z ^ x]
        return np.moveaxis(out, (0, 1), (src, dst))
    raise ValueError(f"unknown gate kind {gate.kind}")


def simulate(circuit: Circuit, input_bits: int = 0) -> np.ndarray:
    """Exact amplitude evolution; returns the flat statevector."""
    lay = circuit.lay
    if lay.total_qubits > MAX_QUBITS:
        raise QubitBudgetError(f"{lay.total_qubits} qubits exceed the cap")
    state = _basis_state(input_bits, lay)
    for gate in circuit.gates:
        state = _apply_gate(state, gate, lay)
    return state.reshape(-1)


def _flat_index(bits: int, lay: RegisterLayout) -> int:
    # state tensor axes are field 0 first, so field 0 is the slowest index
    b = lay.bits_per_label
    mask = lay.field_dim - 1
    out = 0
    for f in range(lay.num_fields):
        out = out * lay.field_dim + ((bits >> (f * b)) & mask)
    return out


def expectation(circuit: Circuit, bra_bits: int, ket_bits: int) -> complex:
    """<bra| U |ket> for computational-basis register states."""
    vec = simulate(circuit, ket_bits)
    return complex(vec[_flat_index(bra_bits, circuit.lay)])


# -- Hadamard test ----------------------------------------------------------------

@dataclass
class HadamardEstimate:
    estimate: float
    shots: int
    eta: float
    seed: int
    part: str

    @property
    def confidence(self) -> float:
        return 0.75


def hoeffding_eta(shots: int, confidence: float = 0.75) -> float:
    """Accuracy eta with pr{|Z - truth| <= eta} >= confidence for a +-1
    sample mean: 2 exp(-shots eta^2/2) = 1 - confidence."""
    fail = 1.0 - confidence
    return math.sqrt(2.0 * math.log(2.0 / fail) / shots)


def shots_for_eta(eta: float, confidence: float = 0.75) -> int:
    fail = 1.0 - confidence
    return math.ceil(2.0 * math.log(2.0 / fail) / eta ** 2)


def hadamard_test(circuit: Circuit, ket_bits: int, shots: int,
                  part: str = "real", rng_seed: int = 0) -> HadamardEstimate:
    """Estimate Re (or Im) of <ket|U|ket> from +-1 ancilla outcomes.

    The ancilla-controlled unitary is applied at the whole-circuit level:
    the ancilla statistics are Bernoulli with p(0) = (1 + Re<U>)/2 (the
    imaginary part uses the quarter-phased ancilla).
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    amp = expectation(circuit, ket_bits, ket_bits)
    target = amp.real if part == "real" else amp.imag
    p0 = min(1.0, max(0.0, (1.0 + target) / 2.0))
    rng = np.random.default_rng(rng_seed)
    zeros = int(rng.binomial(shots, p0))
    estimate = (2.0 * zeros - shots) / shots
    return HadamardEstimate(estimate, shots, hoeffding_eta(shots),
                            rng_seed, part)


# -- color superposition and the invariant estimator --------------------------------

def _complete_unitary(first_column: np.ndarray) -> np.ndarray:
    dim = first_column.shape[0]
    m = np.eye(dim, dtype=complex)
    m[:, 0] = first_column
    # Gram-Schmidt against the fixed first column
    for col in range(1, dim):
        v = m[:, col]
        for prev in range(col):
            v = v - m[:, prev] * np.vdot(m[:, prev], v)
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            raise AssertionError("degenerate completion")
        m[:, col] = v / norm
    return m


def prepare_superposition(structure, ctx: QContext, lay: RegisterLayout,
                          weights: str = "mu") -> tuple[Circuit, float]:
    """Prepare each component's strand fields in the normalized weighted
    superposition over colors (weights mu_j by default) and copy the lead
    field to the component's other strands.

    Returns (circuit, total weight normalization N = prod_s sum_j w_s(j)).
    """
    if isinstance(structure, int):
        comp_strands = [[2 * s, 2 * s + 1] for s in range(structure)]
    else:
        comp_strands = [[] for _ in range(structure.components)]
        for strand, comp in enumerate(structure.strand_to_component):
            comp_strands[comp].append(strand)

    circ = Circuit(lay)
    total_norm = 1.0
    for strands in comp_strands:
        caps = len(strands) // 2
        w = np.zeros(lay.field_dim)
        for j in ctx.allowed_colors():
            if weights == "mu":
                w[j.twice] = ctx.mu(j)
            elif weights == "mu_dim":
                w[j.twice] = ctx.mu(j) * ctx.q_dimension(j) ** caps
            else:
                raise ValueError(f"unknown weight scheme {weights!r}")
        norm = float(np.sum(w))
        total_norm *= norm
        amps = np.sqrt(w / norm).astype(complex)
        lead = strands[0]
        circ.gates.append(Gate("prepare", (lay.j_field(lead),),
                               _complete_unitary(amps), label="prep"))
        for other in strands[1:]:
            circ.gates.append(Gate("copy",
                                   (lay.j_field(lead), lay.j_field(other)),
                               label="spread"))
    return circ, total_norm


@dataclass
class InvariantEstimate:
    value_re: float
    value_im: float
    shots: int
    eta: float
    seed: int
    exact_reference: complex | None = None


def circuit_invariant(link: FramedLink, ctx: QContext, shots: int,
                      rng_seed: int = 0,
                      convention: str = DEFAULT_CONVENTION) -> InvariantEstimate:
    """Additive approximation of the surgery invariant via the compiled
    circuit: prepare the color superposition, run the braiding circuit,
    undo the strand permutation, apply framing twists, and Hadamard-test
    the return amplitude.  Classical factors: the preparation norm and
    alpha^(-sigma)."""
    if link is None:
        return InvariantEstimate(1.0, 0.0, shots, 0.0, rng_seed, 1 + 0j)

    struct = plat_components(link.plat)
    n = link.plat.n_pairs
    lay = layout(n, ctx)

    prep, norm = prepare_superposition(struct, ctx, lay, weights="mu_dim")

    # framing twists, keyed by the lead strand color of each component
    twists = Circuit(lay)
    leads = {}
    for strand, comp in enumerate(struct.strand_to_component):
        leads.setdefault(comp, strand)
    for comp, lead in sorted(leads.items()):
        table = {}
        for j in ctx.allowed_colors():
            table[(j.twice,)] = ctx.q_power(link.framings[comp] * casimir(j))
        twists.gates.append(Gate("phase", (lay.j_field(lead),), table,
                                 label=f"framing{comp}"))

    word_circ = compile_braid(link.plat.word, lay, ctx, convention)
    unswap_gates = _permutation_swaps(link.plat.word.permutation(), lay)

    tested = Circuit(lay)
    tested.extend(prep.gates)
    tested.extend(twists.gates)
    tested.extend(word_circ.gates)
    tested.extend(unswap_gates)
    tested.extend(prep.adjoint().gates)

    re_est = hadamard_test(tested, 0, shots, "real", rng_seed)
    im_est = hadamard_test(tested, 0, shots, "imag", rng_seed + 1)

    sigma = signature(linking_matrix(link))
    alpha_factor = ctx.alpha ** (-sigma)
    raw = complex(re_est.estimate, im_est.estimate) * norm
    value = raw * alpha_factor

    from .surgery import manifold_invariant
    exact = manifold_invariant(link, ctx, convention).value
    return InvariantEstimate(value.real, value.imag, shots, re_est.eta * norm,
                             rng_seed, exact)


def _permutation_swaps(perm: list[int], lay: RegisterLayout) -> list[Gate]:
    """Swap gates returning j-fields permuted by the word to their
    original order: field at position perm[s] holds strand s's color."""
    m = len(perm)
    current = [0] * m
    for strand in range(m):
        current[perm[strand]] = strand  # position -> strand after the word
    gates = []
    for want in range(m):
        pos = current.index(want)
        if pos != want:
            current[pos], current[want] = current[want], current[pos]
            gates.append(Gate("swap", (lay.j_field(pos), lay.j_field(want)),
                              label="unbraid"))
    return gates
