"""Pure request -> response functions behind the endpoints.

The CLI calls these in-process; the FastAPI app wires them to routes.
Errors surface as ServiceError with the exit-code taxonomy: 2 parse,
3 admissibility/color, 4 qubit budget.
"""

from __future__ import annotations

import math
import time

import numpy as np

from ..braid import (BraidSyntaxError, PlatBraid, BraidWord, catalog,
                     catalog_plat, parse_braid, plat_components, writhe)
from ..braidrep import (ambient_normalize, colored_polynomial, complexity_audit,
                    step_count)
from ..oracle import kashaev_41, lobachevsky
from ..qnum import ColorRangeError, QContext, Spin, default_tol
from ..surgery import FramedLink, linking_matrix, manifold_invariant, signature
from ..verify import run_suite
from .models import (BenchRequest, BenchResponse, BenchRow, CatalogResponse,
                     InvariantRequest, InvariantResponse, PolyRequest,
                     PolyResponse, VerifyRequest, VerifyResponse,
                     VolumeRow, VolumeScanRequest, VolumeScanResponse)

PARSE_ERROR, ADMISSIBILITY_ERROR, QUBIT_ERROR = 2, 3, 4

VOLUME_TARGET = 6 * lobachevsky(math.pi / 3)


class ServiceError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _sig12(x: float) -> float:
    """Decimal with 12 significant digits, deterministically."""
    return float(f"{x:.12g}")


def _parse_color(text: str, twice: bool) -> Spin:
    try:
        if twice:
            return Spin(int(text))
        return Spin.parse(text)
    except (ValueError, TypeError) as exc:
        raise ServiceError(f"bad color {text!r}: {exc}", PARSE_ERROR) from exc


def _resolve_plat(req: PolyRequest) -> PlatBraid:
    if req.catalog:
        try:
            entry = catalog()[req.catalog]
        except KeyError as exc:
            raise ServiceError(str(exc), PARSE_ERROR) from exc
        word_text, strands = entry["word"], entry["strands"]
    else:
        if req.strands is None or req.braid is None:
            raise ServiceError("need --catalog or both --braid and --strands",
                               PARSE_ERROR)
        word_text, strands = req.braid, req.strands
    try:
        word = parse_braid(word_text, strands)
        if strands % 2:
            raise BraidSyntaxError("a plat needs an even strand count")
    except BraidSyntaxError as exc:
        raise ServiceError(str(exc), PARSE_ERROR) from exc

    n = strands // 2
    if req.colors is not None:
        if len(req.colors) != n:
            raise ServiceError(f"need {n} cap colors, got {len(req.colors)}",
                               PARSE_ERROR)
        caps = [_parse_color(c, req.twice) for c in req.colors]
    else:
        caps = [_parse_color(req.color, req.twice)] * n
    colors = []
    for c in caps:
        colors.extend((c, c))
    try:
        return PlatBraid(word, tuple(colors))
    except ValueError as exc:
        raise ServiceError(str(exc), ADMISSIBILITY_ERROR) from exc


def handle_poly(req: PolyRequest) -> PolyResponse:
    plat = _resolve_plat(req)
    ctx = QContext(req.k, tol=default_tol())
    try:
        value = colored_polynomial(plat, ctx, req.convention)
    except ColorRangeError as exc:
        raise ServiceError(str(exc), ADMISSIBILITY_ERROR) from exc
    except ValueError as exc:
        raise ServiceError(str(exc), ADMISSIBILITY_ERROR) from exc
    w = writhe(plat)
    if req.normalize:
        value = ambient_normalize(value, w, ctx)
    from ..recoupling import enumerate_odd_basis
    basis_dim = len(enumerate_odd_basis(plat.colors, ctx))
    return PolyResponse(
        value_re=_sig12(value.real),
        value_im=_sig12(value.imag),
        writhe=w,
        basis_dim=basis_dim,
        steps=step_count(plat.word, plat.n_pairs),
        normalized=req.normalize,
        k=req.k,
    )


def _resolve_link(req: InvariantRequest) -> FramedLink | None:
    spec = req.link
    if spec.strands == 0 and not spec.word:
        return None
    try:
        word = parse_braid(spec.word, spec.strands)
        plat = PlatBraid(word, None,
                         tuple(spec.orientations) if spec.orientations else None)
    except (BraidSyntaxError, ValueError) as exc:
        raise ServiceError(str(exc), PARSE_ERROR) from exc
    try:
        return FramedLink(plat, tuple(spec.framings))
    except ValueError as exc:
        raise ServiceError(str(exc), PARSE_ERROR) from exc


def handle_invariant(req: InvariantRequest) -> InvariantResponse:
    link = _resolve_link(req)
    ctx = QContext(req.k, tol=default_tol())
    if req.circuit:
        from ..qcircuit import QubitBudgetError, circuit_invariant
        try:
            est = circuit_invariant(link, ctx, req.shots, req.seed,
                                    req.convention)
        except QubitBudgetError as exc:
            raise ServiceError(str(exc), QUBIT_ERROR) from exc
        except ColorRangeError as exc:
            raise ServiceError(str(exc), ADMISSIBILITY_ERROR) from exc
        sig = 0 if link is None else signature(linking_matrix(link))
        comps = 0 if link is None else link.components
        return InvariantResponse(
            value_re=_sig12(est.value_re), value_im=_sig12(est.value_im),
            normalized_re=_sig12(est.value_re),
            normalized_im=_sig12(est.value_im),
            signature=sig, components=comps,
            colorings=(ctx.k + 1) ** comps, k=req.k, mode="circuit",
            shots=est.shots, eta=_sig12(est.eta), seed=est.seed)
    workers = req.workers
    if workers is None and link is not None:
        # machine parallelism once the color sum is big enough to matter
        import os
        if (ctx.k + 1) ** link.components > 32:
            workers = os.cpu_count()
    try:
        result = manifold_invariant(link, ctx, req.convention, workers)
    except ColorRangeError as exc:
        raise ServiceError(str(exc), ADMISSIBILITY_ERROR) from exc
    return InvariantResponse(
        value_re=_sig12(result.value.real), value_im=_sig12(result.value.imag),
        normalized_re=_sig12(result.normalized.real),
        normalized_im=_sig12(result.normalized.imag),
        signature=result.signature, components=result.components,
        colorings=result.colorings, k=req.k, mode="exact")


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    kwargs = {}
    if req.k is not None:
        kwargs["k"] = req.k
    if req.trials is not None:
        kwargs["trials"] = req.trials
    try:
        result = run_suite(req.suite, **kwargs)
    except KeyError as exc:
        raise ServiceError(str(exc), PARSE_ERROR) from exc
    except TypeError:
        result = run_suite(req.suite)
    return VerifyResponse(
        name=result.name, passed=result.passed,
        max_residual=_sig12(result.max_residual),
        checks=result.checks, tolerance=result.tolerance,
        details=[str(d) for d in result.details])


def handle_volume_scan(req: VolumeScanRequest) -> VolumeScanResponse:
    if req.nmax < 2:
        raise ServiceError("need Nmax >= 2", PARSE_ERROR)
    rows = []
    ratios = []
    for n in range(2, req.nmax + 1):
        value = kashaev_41(n)
        ratio = 2 * math.pi * math.log(value) / n if n >= 3 else None
        rows.append(VolumeRow(n=n, kashaev=_sig12(value),
                              ratio=None if ratio is None else _sig12(ratio),
                              target=_sig12(VOLUME_TARGET)))
        if ratio is not None:
            ratios.append(ratio)
    inc = dec = None
    if len(ratios) >= 2:
        inc = all(b > a for a, b in zip(ratios, ratios[1:]))
        dec = all(b < a for a, b in zip(ratios, ratios[1:]))
    return VolumeScanResponse(rows=rows, target=_sig12(VOLUME_TARGET),
                              monotone_increasing=inc, monotone_decreasing=dec)


def _bench_word(n: int, kappa: int, seed: int) -> BraidWord:
    # same seed for every kappa: the benchmark words are nested prefixes,
    # so the step count scales with kappa rather than with the word mix
    rng = np.random.default_rng(seed)
    letters = []
    for _ in range(kappa):
        idx = int(rng.integers(1, 2 * n))
        letters.append((idx, 1 if rng.random() < 0.5 else -1))
    return BraidWord(2 * n, tuple(letters))


def handle_bench(req: BenchRequest) -> BenchResponse:
    half = Spin(1)
    ctx = QContext(req.k, tol=default_tol())
    rows = []
    audit_ok = True
    for kappa in req.kappas:
        word = _bench_word(req.n, kappa, req.seed)
        plat = PlatBraid(word, (half,) * (2 * req.n))
        t0 = time.perf_counter()
        from ..braidrep import RepContext, evolve
        evolve(word, RepContext(ctx, plat.colors))
        dt = time.perf_counter() - t0
        steps = step_count(word, req.n)
        audit = complexity_audit(word, req.n)
        audit_ok = audit_ok and audit.within_bound
        rows.append(BenchRow(kappa=kappa, steps=steps, seconds=_sig12(dt)))
    r_squared = None
    if len(rows) >= 2:
        xs = np.array([r.kappa for r in rows], dtype=float)
        ys = np.array([r.steps for r in rows], dtype=float)
        slope, intercept = np.polyfit(xs, ys, 1)
        pred = slope * xs + intercept
        ss_res = float(np.sum((ys - pred) ** 2))
        ss_tot = float(np.sum((ys - ys.mean()) ** 2))
        r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
        r_squared = _sig12(r_squared)
    from ..braidrep import AUDIT_CONSTANT
    return BenchResponse(rows=rows, r_squared=r_squared,
                         step_bound_constant=AUDIT_CONSTANT,
                         within_bound=audit_ok)


def handle_catalog() -> CatalogResponse:
    return CatalogResponse(links=catalog())
