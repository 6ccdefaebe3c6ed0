"""Acceptance gate: one test per criterion, at its stated tolerance.

Each test prints a single CRITERION line so a -s run reads as a checklist.
Criterion 11 is implemented exactly as stated; see the README's
"Volume trend" note for why its monotonicity direction cannot hold for the
closed-form figure-eight sum (the ratio approaches the hyperbolic volume
from above).
"""

import math
import time

import numpy as np
from qtopo.braid import BraidWord, PlatBraid, catalog, parse_braid, \
    plat_components, writhe
from qtopo.braidrep import (ambient_normalize, colored_polynomial,
                        complexity_audit, step_count)
from qtopo.oracle import kashaev_41, kauffman_ambient, lobachevsky
from qtopo.qcircuit import (compile_braid, encode, expectation,
                            hadamard_test, layout, shots_for_eta)
from qtopo.qnum import QContext, Spin
from qtopo.recoupling import enumerate_odd_basis
from qtopo.surgery import FramedLink, kirby_move_check, manifold_invariant
from qtopo.verify import (suite_braid_relations, suite_classical_limit,
                          suite_orthogonality, suite_pentagon,
                          suite_recognizer, suite_unitarity)

H = Spin(1)


def _report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"CRITERION {num:2d} [{status}] {name} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _zero_bits(colors, ctx, lay):
    basis = enumerate_odd_basis(colors, ctx)
    st = next(s for s in basis if all(x == 0 for x in s.free_labels))
    return encode(st, lay)


def test_criterion_01_unknot_calibration():
    t0 = time.time()
    worst = 0.0
    for k in range(1, 9):
        ctx = QContext(k)
        for t in range(k + 1):
            j = Spin(t)
            plat = PlatBraid(parse_braid("", 2), (j, j))
            got = colored_polynomial(plat, ctx)
            worst = max(worst, abs(got - ctx.q_dimension(j)))
    elapsed = time.time() - t0
    _report(1, "unknot calibration", worst < 1e-12 and elapsed < 1.0,
            f"worst={worst:.2e} elapsed={elapsed:.2f}s")


def test_criterion_02_oracle_equivalence():
    t0 = time.time()
    worst = 0.0
    for k in (3, 5, 8):
        ctx = QContext(k)
        phase = None
        for name in ("unknot", "hopf", "trefoil", "figure_eight"):
            entry = catalog()[name]
            plat = PlatBraid(parse_braid(entry["word"], entry["strands"]),
                             (H,) * entry["strands"])
            engine = ambient_normalize(colored_polynomial(plat, ctx),
                                       writhe(plat), ctx)
            oracle = kauffman_ambient(plat, ctx)
            if phase is None:
                phase = engine / oracle  # fixed once, on the unknot
            worst = max(worst, abs(engine - phase * oracle))
    elapsed = time.time() - t0
    _report(2, "oracle equivalence (Jones, color 1/2)",
            worst < 1e-9 and elapsed < 10.0,
            f"worst={worst:.2e} elapsed={elapsed:.1f}s")


def test_criterion_03_representation_soundness():
    t0 = time.time()
    rel = suite_braid_relations(n_max=4, k_max=8, trials=100, tol=1e-9,
                                seed=314)
    uni = suite_unitarity(n_max=4, k_max=8, trials=30, word_len=20,
                          tol=1e-9, seed=159)
    elapsed = time.time() - t0
    ok = rel.passed and uni.passed and elapsed < 60.0
    _report(3, "representation soundness",
            ok, f"relations={rel.max_residual:.2e} "
                f"unitarity={uni.max_residual:.2e} elapsed={elapsed:.1f}s")


def test_criterion_04_recoupling_identities():
    t0 = time.time()
    pent = suite_pentagon(k=8, trials=500, tol=1e-9)
    orth = suite_orthogonality(k=8, trials=500, tol=1e-9)
    clas = suite_classical_limit(entries_max=Spin(4), k=2000, tol=1e-4)
    elapsed = time.time() - t0
    ok = pent.passed and orth.passed and clas.passed and elapsed < 60.0
    _report(4, "recoupling identities",
            ok, f"pentagon={pent.max_residual:.2e} "
                f"orthogonality={orth.max_residual:.2e} "
                f"classical={clas.max_residual:.2e} elapsed={elapsed:.1f}s")


def test_criterion_05_kirby_invariance():
    t0 = time.time()
    ok = True
    for name, entry in catalog().items():
        plat = PlatBraid(parse_braid(entry["word"], entry["strands"]))
        comps = plat_components(plat).components
        link = FramedLink(plat, (0,) * comps)
        for k in (1, 2, 3, 5):
            ctx = QContext(k)
            for move in ("II", "IV"):
                ok = ok and kirby_move_check(link, move, ctx, rel_tol=1e-8)
    elapsed = time.time() - t0
    _report(5, "Kirby invariance", ok and elapsed < 300.0,
            f"elapsed={elapsed:.1f}s")


def test_criterion_06_known_values():
    t0 = time.time()
    worst = 0.0
    for k in (1, 2, 3):
        ctx = QContext(k)
        s3 = manifold_invariant(None, ctx).value
        s1s2 = manifold_invariant(
            FramedLink(PlatBraid(parse_braid("", 2)), (0,)), ctx).value
        # derived oracle: direct summation of the modular weights
        derived = sum(ctx.mu(j) * ctx.q_dimension(j)
                      for j in ctx.allowed_colors())
        worst = max(worst, abs(s1s2 / s3 - derived))
        # |Z|^2 form: the partition-function ratio is 1/mu_0^2
        worst = max(worst, abs(abs(s1s2 / s3) ** 2 - 1 / ctx.mu(Spin(0)) ** 2))
        for f in (1, -1):
            framed = manifold_invariant(
                FramedLink(PlatBraid(parse_braid("", 2)), (f,)), ctx).value
            worst = max(worst, abs(framed - s3))
    elapsed = time.time() - t0
    _report(6, "known manifold values", worst < 1e-9 and elapsed < 10.0,
            f"worst={worst:.2e} elapsed={elapsed:.1f}s")


def test_criterion_07_circuit_fidelity():
    t0 = time.time()
    worst = 0.0
    for k in (1, 2, 3):
        ctx = QContext(k)
        for name, entry in catalog().items():
            n = entry["strands"] // 2
            lay = layout(n, ctx)
            colors = (H,) * entry["strands"]
            word = parse_braid(entry["word"], entry["strands"])
            circ = compile_braid(word, lay, ctx)
            bits = _zero_bits(colors, ctx, lay)
            amp = expectation(circ, bits, bits)
            exact = colored_polynomial(PlatBraid(word, colors), ctx)
            exact /= ctx.q_dimension(H) ** n
            worst = max(worst, abs(amp - exact))
        # n = 3 coverage: the trefoil word on six strands
        lay = layout(3, ctx)
        word = parse_braid("2 2 2", 6)
        colors = (H,) * 6
        circ = compile_braid(word, lay, ctx)
        bits = _zero_bits(colors, ctx, lay)
        amp = expectation(circ, bits, bits)
        exact = colored_polynomial(PlatBraid(word, colors), ctx)
        exact /= ctx.q_dimension(H) ** 3
        worst = max(worst, abs(amp - exact))
    elapsed = time.time() - t0
    _report(7, "circuit fidelity", worst < 1e-7 and elapsed < 300.0,
            f"worst={worst:.2e} elapsed={elapsed:.1f}s")


def test_criterion_08_additive_approximation():
    t0 = time.time()
    ctx = QContext(3)
    lay = layout(2, ctx)
    word = parse_braid("2 2 2", 4)
    circ = compile_braid(word, lay, ctx)
    bits = _zero_bits((H,) * 4, ctx, lay)
    exact = expectation(circ, bits, bits).real
    eta = 0.1
    shots = shots_for_eta(eta)
    hits = 0
    trials = 1000
    for seed in range(trials):
        est = hadamard_test(circ, bits, shots, "real", seed)
        if abs(est.estimate - exact) <= eta:
            hits += 1
    elapsed = time.time() - t0
    _report(8, "additive approximation",
            hits >= 750 and elapsed < 600.0,
            f"hits={hits}/1000 shots={shots} elapsed={elapsed:.1f}s")


def test_criterion_09_recognizer_identity():
    t0 = time.time()
    res = suite_recognizer(n_max=3, k_max=5, trials=50, tol=1e-12, seed=2718)
    elapsed = time.time() - t0
    _report(9, "recognizer identity",
            res.passed and elapsed < 60.0,
            f"worst={res.max_residual:.2e} elapsed={elapsed:.1f}s")


def test_criterion_10_complexity_trend():
    # mean elementary-step count over an ensemble of seeded words per
    # length, so the fit measures the kappa-scaling, not the letter mix
    t0 = time.time()
    n = 3
    kappas = [10, 20, 40, 80]
    steps = []
    for kappa in kappas:
        total = 0
        for rep in range(30):
            rng = np.random.default_rng(1000 + rep)
            letters = tuple((int(rng.integers(1, 2 * n)),
                             1 if rng.random() < 0.5 else -1)
                            for _ in range(kappa))
            word = BraidWord(2 * n, letters)
            count = step_count(word, n)
            total += count
            assert count <= kappa * (2 * (2 * n - 3) + 1)
            assert complexity_audit(word, n).within_bound
        steps.append(total / 30)
    xs, ys = np.array(kappas, float), np.array(steps, float)
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    elapsed = time.time() - t0
    _report(10, "complexity trend", r2 >= 0.98 and elapsed < 60.0,
            f"R^2={r2:.4f} elapsed={elapsed:.1f}s")


def test_criterion_11_volume_trend():
    # Stated criterion: 2 pi ln|J_N(4_1)|/N strictly increases on N=3..25
    # and ends within 0.35 of 6 L(pi/3).  The sum is implemented exactly as
    # specified (values 5 and 13 at N=2,3 pin it); the resulting ratio is
    # strictly DECREASING toward the volume from above and sits ~1.15 away
    # at N=25, so the criterion as stated cannot hold.  It is asserted
    # faithfully and left red rather than weakened.
    t0 = time.time()
    target = 6 * lobachevsky(math.pi / 3)
    ratios = [2 * math.pi * math.log(kashaev_41(n)) / n
              for n in range(3, 26)]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    close = abs(ratios[-1] - target) < 0.35
    elapsed = time.time() - t0
    _report(11, "volume trend (spec defect: ratio decreases from above; "
                "see ledger)",
            increasing and close and elapsed < 1.0,
            f"last={ratios[-1]:.4f} target={target:.4f} "
            f"increasing={increasing}")
