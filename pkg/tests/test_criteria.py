import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xycrit import analytic as an
from xycrit.bases import CriterionParams
from xycrit.criteria import (
    CriterionReport,
    NoSignChangeError,
    criterion_handle,
    detection_threshold_numeric,
    enhanced_realignment,
    isotropic_family,
    named_criterion,
    ppt_test,
    xy_criterion,
    xy_handle,
)
from xycrit.states import (
    DensityMatrix,
    IsotropicParams,
    WernerParams,
    isotropic,
    random_density_matrix,
    random_separable,
    werner_like,
    werner_q_range,
)
from xycrit.tensor_core import BipartiteShape, hermitian_spectrum, partial_transpose

S23 = BipartiteShape(2, 3)


def iso(d1, d2, p):
    return isotropic(IsotropicParams(BipartiteShape(d1, d2), p))


def product_state(shape, rng):
    a = random_density_matrix(shape.d1, rng)
    b = random_density_matrix(shape.d2, rng)
    m = np.kron(a, b)
    return DensityMatrix((m + m.conj().T) / 2, shape)


def test_report_semantics():
    r = CriterionReport("x", lhs=1.0 + 2e-9, rhs=1.0)
    assert r.detected and not r.boundary and r.verdict == "entangled"
    r = CriterionReport("x", lhs=1.0 + 5e-10, rhs=1.0)
    assert not r.detected and r.boundary
    assert r.as_dict()["margin"] == pytest.approx(5e-10)


def test_product_state_passes(rng):
    rho = product_state(S23, rng)
    assert not xy_criterion(rho, CriterionParams(1, 1)).detected
    er = enhanced_realignment(rho)
    assert er.lhs == pytest.approx(0, abs=1e-12)
    assert not er.detected


def test_ccnr_detects_above_ppt_point():
    assert xy_criterion(iso(3, 3, 0.30), CriterionParams(1, 1)).detected


def test_hyperbola_point_switches_at_p_min():
    curve, p_min = an.hyperbola_and_min(S23)
    assert p_min == pytest.approx(0.37796, abs=1e-5)
    cp = curve.points(1.5, 4)[2]
    assert not xy_criterion(iso(2, 3, 0.37), cp).detected
    assert xy_criterion(iso(2, 3, 0.38), cp).detected


def test_ccnr_boundary_qubits():
    assert named_criterion(iso(2, 2, 1 / 3), "CCNR").margin == pytest.approx(0, abs=1e-10)


def test_dv_on_separable_mixture(rng):
    rho = random_separable(S23, rng, n_terms=10)
    assert not named_criterion(rho, "dV").detected


def test_esic_beats_ccnr():
    t = an.named_thresholds(S23)
    assert t.p_e == pytest.approx(0.3819660112501051, abs=1e-12)
    p = 0.383
    assert t.p_e < p < t.p_r
    rho = iso(2, 3, p)
    assert named_criterion(rho, "ESIC").detected
    assert not named_criterion(rho, "CCNR").detected
    # 0.386 lies above p_R, so both criteria fire there
    rho = iso(2, 3, 0.386)
    assert named_criterion(rho, "ESIC").detected and named_criterion(rho, "CCNR").detected


def test_enhanced_realignment_boundary():
    assert enhanced_realignment(iso(2, 3, 1 / np.sqrt(7))).margin == pytest.approx(0, abs=1e-10)
    assert enhanced_realignment(iso(2, 3, 0.38)).detected


def test_enhanced_realignment_lhs_matches_spectrum():
    # only d1**2 - 1 singular values p/d1 survive after subtracting the marginals
    for dims, p in [((2, 3), 0.3), ((3, 5), 0.7)]:
        rep = enhanced_realignment(iso(*dims, p))
        d1 = dims[0]
        assert rep.lhs == pytest.approx((d1 * d1 - 1) * p / d1, abs=1e-12)


def test_ppt_examples():
    assert not ppt_test(iso(3, 3, 0.24)).detected
    assert ppt_test(iso(3, 3, 0.26)).detected
    rho = iso(2, 5, 1 / 6)
    assert hermitian_spectrum(partial_transpose(rho.matrix, rho.shape))[0] == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize(
    "dims, which, expected",
    [((3, 3), "CCNR", 0.25), ((2, 3), "CCNR", 5 / 13), ((2, 3), "ER", 1 / np.sqrt(7))],
)
def test_numeric_thresholds(dims, which, expected):
    p = detection_threshold_numeric(isotropic_family(BipartiteShape(*dims)), criterion_handle(which))
    assert p == pytest.approx(expected, abs=1e-8)


def test_numeric_threshold_no_sign_change():
    fam = isotropic_family(S23)
    with pytest.raises(NoSignChangeError, match="never"):
        detection_threshold_numeric(fam, criterion_handle("CCNR"), bracket=(0.0, 0.3))
    with pytest.raises(NoSignChangeError, match="always"):
        detection_threshold_numeric(fam, criterion_handle("CCNR"), bracket=(0.5, 1.0))


def test_unknown_criterion():
    with pytest.raises(ValueError):
        criterion_handle("reduction")


@pytest.mark.parametrize("which", ["dV", "CCNR", "Fei", "ESIC", "ER", "PPT"])
def test_margin_monotone_in_p(which, shape):
    crit = criterion_handle(which)
    margins = [crit(isotropic(IsotropicParams(shape, p))).margin for p in np.linspace(0, 1, 101)]
    assert np.all(np.diff(margins) >= -1e-12)


@settings(max_examples=60, deadline=None)
@given(
    dims=st.sampled_from([(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)]),
    u=st.floats(0, 1), v=st.floats(0, 1),
    seed=st.integers(0, 2**32 - 1),
)
def test_no_false_positives_xy(dims, u, v, seed):
    shape = BipartiteShape(*dims)
    top = np.sqrt(shape.d2 + 1)
    rho = random_separable(shape, np.random.default_rng(seed))
    assert not xy_criterion(rho, CriterionParams(u * top, v * top)).detected


@pytest.mark.parametrize("dims", [(2, 3), (3, 3)])
def test_enhanced_realignment_is_xy_minimum(dims):
    shape = BipartiteShape(*dims)
    fam = isotropic_family(shape)
    er = detection_threshold_numeric(fam, enhanced_realignment)
    pts = np.linspace(0, np.sqrt(shape.d2 + 1), 4)
    grid = [CriterionParams(x, y) for x in pts for y in pts]
    curve, _ = an.hyperbola_and_min(shape)
    candidates = grid + curve.points(pts[-1], 3)
    xy = [detection_threshold_numeric(fam, xy_handle(cp)) for cp in candidates]
    assert min(xy) == pytest.approx(er, abs=1e-6)
    assert min(xy[: len(grid)]) >= er - 1e-8


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 4)])
def test_werner_like_reports(dims):
    shape = BipartiteShape(*dims)
    lo, hi = werner_q_range(shape)
    for q in np.linspace(lo, hi, 5):
        rho = werner_like(WernerParams(shape, q))
        for which in ("dV", "CCNR", "Fei", "ESIC", "ER", "PPT"):
            rep = criterion_handle(which)(rho)
            assert rep.detected == (rep.lhs - rep.rhs > rep.tolerance)
            assert np.isfinite(rep.lhs) and rep.rhs >= 0
    # PT(rho_q) = (1-q)/(d1 d2) I + q |psi+><psi+|, negative at the lower end of the range
    assert ppt_test(werner_like(WernerParams(shape, lo))).detected
