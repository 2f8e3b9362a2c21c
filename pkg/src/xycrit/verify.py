"""Self-verification suite behind ``xycrit verify``.

Each check compares an analytic statement with an independent numerical
route and returns a JSON-ready record. Everything is driven by one seeded
generator, so two runs with the same arguments give identical output.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from . import analytic
from .bases import CriterionParams, correlation_matrix, scale_correlation
from .criteria import (
    criterion_handle,
    detection_threshold_numeric,
    enhanced_realignment,
    isotropic_family,
    named_criterion,
    ppt_test,
    realignment_via_vectorization,
    xy_criterion,
    xy_handle,
)
from .states import IsotropicParams, isotropic, random_separable, random_state
from .tensor_core import BipartiteShape, hermitian_spectrum, realign, singular_values, trace_norm

DEFAULT_SIZES = ((2, 2), (2, 3), (3, 3), (2, 5), (3, 4))
WITNESS_P = 0.383


def _record(name: str, passed: bool, **detail) -> dict:
    out = {"check": name, "passed": bool(passed)}
    for k, v in detail.items():
        out[k] = float(v) if isinstance(v, (np.floating, float)) else v
    return out


def check_threshold_agreement(shapes, n_grid=3, tol=1e-8) -> dict:
    worst = 0.0
    for sh in shapes:
        pts = np.linspace(0, np.sqrt(sh.d2 + 1), n_grid)
        for x in pts:
            for y in pts:
                cp = CriterionParams(float(x), float(y))
                num = detection_threshold_numeric(isotropic_family(sh), xy_handle(cp))
                worst = max(worst, abs(num - analytic.p_xy_threshold(sh, cp)))
    return _record("threshold_analytic_vs_bisection", worst <= tol, max_error=worst, tolerance=tol)


def _random_tuples(shapes, rng, n):
    for sh in shapes:
        for _ in range(n):
            p = float(rng.uniform(0, 1))
            x, y = (float(v) for v in rng.uniform(0, np.sqrt(sh.d2 + 1) * 1.2, 2))
            yield sh, p, CriterionParams(x, y)


def check_norm_and_spectrum(shapes, rng, n, tol=1e-10) -> list[dict]:
    worst_norm = worst_spec = 0.0
    for sh, p, cp in _random_tuples(shapes, rng, n):
        c = scale_correlation(correlation_matrix(isotropic(IsotropicParams(sh, p))), cp.x, cp.y).entries
        worst_norm = max(worst_norm, abs(trace_norm(c) - analytic.analytic_cxy_norm(sh, cp, p)))
        spec = hermitian_spectrum(c @ c.conj().T)
        worst_spec = max(worst_spec, float(np.max(np.abs(spec - analytic.analytic_cxy_spectrum(sh, cp, p)))))
    return [
        _record("closed_norm_identity", worst_norm <= tol, max_error=worst_norm, tolerance=tol),
        _record("spectrum_identity", worst_spec <= tol, max_error=worst_spec, tolerance=tol),
    ]


def check_no_false_positives(shapes, rng, n) -> dict:
    names = ("dV", "CCNR", "Fei", "ESIC", "ER", "PPT")
    detections = 0
    worst_margin = -np.inf
    for sh in shapes:
        for _ in range(n):
            rho = random_separable(sh, rng)
            for w in names:
                rep = criterion_handle(w)(rho)
                detections += rep.detected
                worst_margin = max(worst_margin, rep.margin)
    return _record(
        "no_false_positives", detections == 0,
        detections=int(detections), max_margin=None if np.isinf(worst_margin) else worst_margin,
    )


def check_ppt_boundary(shapes, tol=1e-10) -> dict:
    worst = 0.0
    for sh in shapes:
        num = detection_threshold_numeric(isotropic_family(sh), ppt_test)
        worst = max(worst, abs(num - analytic.p_ppt(sh)))
    return _record("ppt_boundary", worst <= tol, max_error=worst, tolerance=tol)


def check_min_equals_er(shapes, tol=1e-12) -> dict:
    worst = max(abs(analytic.p_min_from_gamma(sh) - analytic.p_er(sh)) for sh in shapes)
    return _record("p_min_equals_p_er", worst <= tol, max_error=worst, tolerance=tol)


def check_er_numeric(shapes, tol=1e-8) -> dict:
    worst = 0.0
    for sh in shapes:
        num = detection_threshold_numeric(isotropic_family(sh), enhanced_realignment)
        worst = max(worst, abs(num - analytic.p_er(sh)))
    return _record("er_threshold_bisection", worst <= tol, max_error=worst, tolerance=tol)


def check_ordering_polynomials(shapes, tol=1e-10) -> dict:
    ok = True
    worst = 0.0
    for sh in shapes:
        if sh.d2 <= sh.d1:
            continue
        poly = analytic.ordering_polynomials(sh)
        t = analytic.named_thresholds(sh)
        worst = max(worst, abs(poly.f_r(t.p_r)), abs(poly.f_e(t.p_e)), abs(poly.difference(poly.x0)))
        beyond = np.linspace(poly.x0, 1, 50)[1:]
        ok &= bool(np.all(poly.f_e(beyond) < poly.f_r(beyond)))
        ok &= t.p_e < t.p_r
    return _record("ordering_polynomials", ok and worst <= tol, max_error=worst, tolerance=tol)


def check_basis_invariance(shapes, rng, n, tol=1e-10) -> dict:
    worst = 0.0
    for sh in shapes:
        for _ in range(n):
            rho = random_state(sh, rng)
            s1 = singular_values(correlation_matrix(rho).entries, cutoff=None)
            s2 = singular_values(realign(rho.matrix, sh), cutoff=None)
            worst = max(worst, float(np.max(np.abs(s1 - s2))))
            x, y = (float(v) for v in rng.uniform(0, 3, 2))
            cp = CriterionParams(x, y)
            worst = max(worst, abs(xy_criterion(rho, cp).lhs - realignment_via_vectorization(rho, cp)))
    return _record("basis_invariance", worst <= tol, max_error=worst, tolerance=tol)


def check_witness(p: float = WITNESS_P) -> dict:
    sh = BipartiteShape(2, 3)
    rho = isotropic(IsotropicParams(sh, p))
    esic = named_criterion(rho, "ESIC")
    ccnr = named_criterion(rho, "CCNR")
    return _record(
        "esic_beats_ccnr_witness",
        esic.detected and not ccnr.detected,
        p=p, esic_margin=esic.margin, ccnr_margin=ccnr.margin,
    )


def run_all(
    seed: int = 0,
    sizes: Iterable[tuple[int, int]] = DEFAULT_SIZES,
    samples: int = 20,
    witness_p: float = WITNESS_P,
    progress: Callable[[dict], None] | None = None,
) -> dict:
    rng = np.random.default_rng(seed)
    shapes = [BipartiteShape(*s).require_ordered() for s in sizes]
    small = [sh for sh in shapes if sh.dim <= 12]

    records: list[dict] = []

    def add(rec):
        records.append(rec)
        if progress is not None:
            progress(rec)

    add(check_threshold_agreement(shapes))
    for rec in check_norm_and_spectrum(shapes, rng, samples):
        add(rec)
    add(check_no_false_positives(small, rng, samples))
    add(check_ppt_boundary(shapes))
    add(check_min_equals_er(shapes))
    add(check_er_numeric(shapes))
    add(check_ordering_polynomials(shapes))
    add(check_basis_invariance(shapes, rng, max(1, samples // 4)))
    add(check_witness(witness_p))
    return {
        "meta": {
            "command": "verify",
            "seed": seed,
            "sizes": [[sh.d1, sh.d2] for sh in shapes],
            "samples": samples,
        },
        "rows": records,
        "passed": all(r["passed"] for r in records),
    }

