import itertools
import math

import numpy as np
import pytest

from qtopo.qnum import QContext, Spin
from qtopo.recoupling import (classical_6j, delta_factor, duality_matrix,
                              elementary_duality, enumerate_even_basis,
                              enumerate_odd_basis, fusion_channels,
                              is_admissible, q6j)

H = Spin(1)  # spin 1/2


def test_admissibility():
    assert is_admissible(H, H, Spin(0), QContext(2))
    assert not is_admissible(H, H, Spin(2), QContext(1))  # sum exceeds level
    assert is_admissible(Spin(2), Spin(2), Spin(2), QContext(3))
    assert not is_admissible(H, H, Spin(1), QContext(3))  # half-integer sum


def test_delta_factor():
    ctx = QContext(3)
    assert delta_factor(Spin(0), Spin(0), Spin(0), ctx) == pytest.approx(1.0)
    v = delta_factor(H, H, Spin(0), ctx)
    assert v == pytest.approx(1 / math.sqrt(ctx.q_integer(2)), abs=1e-10)
    assert v == pytest.approx(0.7861513778, abs=1e-9)
    w = delta_factor(H, H, Spin(2), QContext(2))
    assert w > 0 and np.isfinite(w)
    with pytest.raises(ValueError):
        delta_factor(H, H, Spin(1), ctx)


def test_q6j_zero_entry_closed_form():
    # {a a 0; b b e} = (-1)^(a+b+e)/sqrt([2a+1][2b+1]); at k=3 with
    # a=b=1/2, e=1 the exponent is 2, so the value is +1/[2]
    ctx = QContext(3)
    got = q6j(H, H, Spin(0), H, H, Spin(2), ctx)
    assert got == pytest.approx(1 / ctx.q_integer(2), abs=1e-12)
    for k in (2, 3, 5):
        c = QContext(k)
        for at in range(k + 1):
            for bt in range(k + 1):
                for et in fusion_channels(Spin(at), Spin(bt), c):
                    if not is_admissible(Spin(at), Spin(at), Spin(0), c):
                        continue
                    got = q6j(Spin(at), Spin(at), Spin(0), Spin(bt), Spin(bt),
                              et, c)
                    expo = (at + bt + et.twice) // 2
                    want = (-1.0) ** expo / math.sqrt(
                        c.q_integer(at + 1) * c.q_integer(bt + 1))
                    assert got == pytest.approx(want, abs=1e-10)


def test_q6j_trivial_and_inadmissible():
    ctx = QContext(3)
    assert q6j(*([Spin(0)] * 6), ctx) == pytest.approx(1.0)
    assert q6j(H, H, Spin(1), H, H, Spin(0), ctx) == 0.0


def test_classical_6j_values():
    assert classical_6j(H, H, Spin(0), H, H, Spin(0)) == pytest.approx(-0.5)
    assert classical_6j(*[Spin(2)] * 6) == pytest.approx(1 / 6, abs=1e-12)
    # zero-entry closed form
    for bt, ct in itertools.product(range(4), repeat=2):
        for et in range(abs(bt - ct), bt + ct + 1, 2):
            got = classical_6j(Spin(bt), Spin(bt), Spin(0), Spin(ct), Spin(ct),
                               Spin(et))
            want = (-1.0) ** ((bt + ct + et) // 2) / math.sqrt(
                (bt + 1) * (ct + 1))
            assert got == pytest.approx(want, abs=1e-12)


def test_classical_limit():
    big = QContext(2000)
    for tw in itertools.product(range(5), repeat=6):
        spins = [Spin(t) for t in tw]
        assert abs(q6j(*spins, big) - classical_6j(*spins)) < 1e-4


def test_elementary_duality_orthogonality():
    ctx = QContext(2)
    # the 2x2 block for four spin-1/2 objects is real orthogonal
    m = np.zeros((2, 2))
    for i, j23 in enumerate((Spin(0), Spin(2))):
        for jj, j12 in enumerate((Spin(0), Spin(2))):
            m[i, jj] = elementary_duality(H, H, H, H, j12, j23, ctx)
    assert np.allclose(m @ m.T, np.eye(2), atol=1e-12)
    assert elementary_duality(H, H, H, H, Spin(1), Spin(0), ctx) == 0.0


def test_enumerate_odd_basis_examples():
    ctx = QContext(2)
    two = enumerate_odd_basis((H, H), ctx)
    assert len(two) == 1 and two[0].p == (Spin(0),)

    four = enumerate_odd_basis((H, H, H, H), ctx)
    assert [s.free_labels for s in four] == [(0,) * 2, (2,) * 2]

    only = enumerate_odd_basis((H, H, H, H), QContext(1))
    assert [s.free_labels for s in only] == [(0, 0)]

    assert enumerate_odd_basis((H, Spin(2)), ctx) == []


def test_basis_count_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(30):
        k = int(rng.integers(1, 7))
        n = int(rng.integers(1, 4))
        ctx = QContext(k)
        colors = []
        for _ in range(n):
            j = Spin(int(rng.integers(0, k + 1)))
            colors.extend((j, j))
        odd = enumerate_odd_basis(tuple(colors), ctx)
        even = enumerate_even_basis(tuple(colors), ctx)
        assert len(odd) == len(even)


def test_duality_matrix_n2_single_block():
    ctx = QContext(3)
    dm = duality_matrix((H, H, H, H), ctx)
    want = np.zeros((2, 2))
    for e, j23 in enumerate((Spin(0), Spin(2))):
        for o, j12 in enumerate((Spin(0), Spin(2))):
            want[e, o] = elementary_duality(H, H, H, H, j12, j23, ctx)
    assert np.allclose(dm.entries, want, atol=1e-12)


@pytest.mark.parametrize("colors,k", [
    ((H, H, H, H), 3),
    ((Spin(2), Spin(2), H, H, H, H), 4),
    ((H, H, H, H, H, H, H, H), 3),
    ((Spin(2), Spin(2), Spin(4), Spin(4), Spin(2), Spin(2)), 5),
])
def test_duality_matrix_unitary(colors, k):
    ctx = QContext(k)
    dm = duality_matrix(colors, ctx)
    assert dm.unitarity_defect() < 1e-9


def test_duality_round_trip():
    ctx = QContext(3)
    colors = (H, H, Spin(2), Spin(2), H, H)
    dm = duality_matrix(colors, ctx)
    rng = np.random.default_rng(5)
    v = rng.normal(size=dm.entries.shape[1]) + \
        1j * rng.normal(size=dm.entries.shape[1])
    v /= np.linalg.norm(v)
    back = dm.entries.T @ (dm.entries @ v)
    assert np.max(np.abs(back - v)) < 1e-12


def test_duality_n1_identity():
    ctx = QContext(2)
    dm = duality_matrix((H, H), ctx)
    assert dm.entries.shape == (1, 1)
    assert dm.entries[0, 0] == pytest.approx(1.0)
