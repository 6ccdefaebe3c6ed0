import numpy as np
import pytest

from qtopo.braid import BraidWord, PlatBraid, parse_braid, writhe
from qtopo.braidrep import (RepContext, accept_probability, ambient_normalize,
                        apply_generator, braiding_eigenvalue,
                        colored_polynomial, complexity_audit, evolve,
                        initial_state, plat_matrix_element, rep_matrix,
                        step_count)
from qtopo.qnum import QContext, Spin

H = Spin(1)


def test_braiding_eigenvalue_conventions():
    ctx = QContext(3)
    q34 = ctx.q_power(0.75)
    # the two sign readings differ by (-1)^(2 min(j, j')) on the pair
    assert braiding_eigenvalue(H, H, Spin(0), 1, ctx, "unoriented") == \
        pytest.approx(q34, abs=1e-12)
    assert braiding_eigenvalue(H, H, Spin(0), 1, ctx, "oriented") == \
        pytest.approx(-q34, abs=1e-12)
    with pytest.raises(ValueError):
        braiding_eigenvalue(H, H, Spin(1), 1, ctx)
    with pytest.raises(ValueError):
        braiding_eigenvalue(H, H, Spin(0), 2, ctx)


def test_braiding_eigenvalue_unimodular_and_inverse():
    rng = np.random.default_rng(0)
    for _ in range(50):
        k = int(rng.integers(1, 9))
        ctx = QContext(k)
        ja = Spin(int(rng.integers(0, k + 1)))
        jb = Spin(int(rng.integers(0, k + 1)))
        from qtopo.recoupling import fusion_channels
        channels = fusion_channels(ja, jb, ctx)
        if not channels:
            continue
        t = channels[int(rng.integers(len(channels)))]
        lp = braiding_eigenvalue(ja, jb, t, 1, ctx)
        lm = braiding_eigenvalue(ja, jb, t, -1, ctx)
        assert abs(abs(lp) - 1) < 1e-14
        assert lp * lm == pytest.approx(1.0, abs=1e-12)


def test_identity_word_and_inverse_letter():
    ctx = QContext(3)
    rep = RepContext(ctx, (H, H, H, H))
    state = initial_state(rep)
    same = evolve(BraidWord(4, ()), rep)
    assert np.allclose(state.amps, same.amps)

    for idx in (1, 2, 3):
        word = BraidWord(4, ((idx, 1), (idx, -1)))
        back = evolve(word, rep)
        assert np.max(np.abs(back.amps - state.amps)) < 1e-12


def test_norm_preserved():
    ctx = QContext(5)
    rep = RepContext(ctx, (H, H, Spin(2), Spin(2)))
    state = initial_state(rep)
    for letter in ((1, 1), (2, 1), (3, -1), (2, -1), (1, 1)):
        state = apply_generator(state, letter, rep)
        assert state.norm() == pytest.approx(1.0, abs=1e-9)


def test_braid_relation_on_states():
    ctx = QContext(4)
    colors = (H, H, Spin(2), Spin(2), H, H)
    m1 = rep_matrix(BraidWord(6, ((2, 1), (3, 1), (2, 1))),
                    RepContext(ctx, colors))
    m2 = rep_matrix(BraidWord(6, ((3, 1), (2, 1), (3, 1))),
                    RepContext(ctx, colors))
    assert np.max(np.abs(m1 - m2)) < 1e-9


def test_unknot_value():
    for k in range(1, 9):
        ctx = QContext(k)
        for t in range(k + 1):
            j = Spin(t)
            plat = PlatBraid(parse_braid("", 2), (j, j))
            assert colored_polynomial(plat, ctx) == pytest.approx(
                ctx.q_dimension(j), abs=1e-12)


def test_ambient_normalization_kink_independence():
    # presentations of the unknot differing by kinks agree after the
    # writhe correction
    ctx = QContext(5)
    vals = []
    for word, strands in [("", 2), ("1", 2), ("-1", 2), ("1 1 -1", 2)]:
        plat = PlatBraid(parse_braid(word, strands), (H,) * strands)
        v = ambient_normalize(colored_polynomial(plat, ctx), writhe(plat), ctx)
        vals.append(v)
    for v in vals[1:]:
        assert v == pytest.approx(vals[0], abs=1e-9)


def test_ambient_normalization_trefoil_presentations():
    ctx = QContext(5)
    vals = []
    for word in ("2 2 2", "1 2 2 2", "2 2 2 3"):
        plat = PlatBraid(parse_braid(word, 4), (H,) * 4)
        vals.append(ambient_normalize(colored_polynomial(plat, ctx),
                                      writhe(plat), ctx))
    assert vals[1] == pytest.approx(vals[0], abs=1e-9)
    assert vals[2] == pytest.approx(vals[0], abs=1e-9)


def test_accept_probability():
    ctx = QContext(3)
    rep = RepContext(ctx, (H, H, H, H))
    assert accept_probability(BraidWord(4, ()), rep) == pytest.approx(1.0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        letters = tuple((int(rng.integers(1, 4)), 1 if rng.random() < .5 else -1)
                        for _ in range(int(rng.integers(0, 10))))
        word = BraidWord(4, letters)
        p = accept_probability(word, RepContext(ctx, (H, H, H, H)))
        assert -1e-12 <= p <= 1 + 1e-12
        # identity linking the recognizer to the normalized polynomial
        poly = colored_polynomial(PlatBraid(word, (H, H, H, H)), ctx)
        dims = ctx.q_dimension(H) ** 2
        assert p == pytest.approx(abs(poly / dims) ** 2, abs=1e-12)


def test_step_count_and_audit():
    assert step_count(BraidWord(6, ()), 3) == 0
    word = BraidWord(6, ((1, 1), (3, 1), (5, -1)))
    assert step_count(word, 3) == 3  # pure odd words cost one step each
    even = BraidWord(6, ((2, 1),))
    assert step_count(even, 3) == 2 * 3 + 1  # 2(2n-3)+1 with n=3
    mixed = BraidWord(6, ((2, 1), (1, 1), (4, -1)))
    assert step_count(mixed, 3) == 7 + 1 + 7
    report = complexity_audit(mixed, 3)
    assert report.within_bound
    assert report.steps <= len(mixed.letters) * (2 * 3 + 1)


def test_no_singlet_sector():
    ctx = QContext(1)
    with pytest.raises(ValueError):
        colored_polynomial(PlatBraid(parse_braid("", 2), (H, Spin(0))), ctx)
