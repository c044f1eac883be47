import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import circle_problem
from hyplevel.bounds import (CSV_HEADER, EQ_TOL, SPECS, applicable_specs, dh1_k_alpha,
                             evaluate_bound, full_report)
from hyplevel.errors import RequirementMismatch
from hyplevel.holomap import MaMindaK, Mobius, ScalarMul, blaschke, hyperbolic_derivatives
from hyplevel.levelset import TracedCurve, trace_problem
from hyplevel.problem import LevelProblem


def traced(f, lam=1.0, r=None):
    p = LevelProblem(f, lam, r)
    return p, trace_problem(p)


def test_t51_equality_for_unimodular():
    p, c = traced(circle_problem(0.4).f, 1.0, 0.4)
    for sid in ("T51_lower", "T51_upper"):
        rep = evaluate_bound(sid, p, c)
        assert np.allclose(rep.actual, 2.9, atol=1e-12)
        assert np.max(np.abs(rep.margin)) < 1e-10
        assert len(rep.equality_samples) == len(c)


def test_c41_equality_for_automorphism():
    p, c = traced(Mobius(0.5), 1.2)
    rep = evaluate_bound("C41", p, c)
    assert np.max(np.abs(rep.margin)) < 1e-8
    assert len(rep.equality_samples) == len(c)


@pytest.mark.parametrize("a", [0.5, 0.3 + 0.4j, -0.6j])
def test_c43_equality_at_most_one_point(a):
    p = LevelProblem(Mobius(a), 1 / (1 - abs(a) ** 2))
    c = trace_problem(p)
    rep = evaluate_bound("C43_kh3", p, c)
    assert rep.min_margin > -1e-12
    assert len(rep.equality_samples) <= 1


def test_c43_equality_sample_is_arc_midpoint():
    p = LevelProblem(Mobius(0.5), 4 / 3)
    c = trace_problem(p)
    rep = evaluate_bound("C43_kh3", p, c)
    eq = rep.equality_samples
    assert len(eq) == 1
    assert abs(eq[0].imag) < 1e-12 and eq[0].real > 0


def test_c31_vanishes_for_automorphism():
    p, c = traced(Mobius(0.3 - 0.5j))
    rep = evaluate_bound("C31_khlb", p, c)
    assert np.max(np.abs(rep.bound)) < 1e-12
    assert np.max(np.abs(rep.actual)) < 1e-8


def test_requirement_mismatch():
    p, c = traced(Mobius(0.5))
    with pytest.raises(RequirementMismatch):
        evaluate_bound("C41", p, c)
    with pytest.raises(RequirementMismatch):
        evaluate_bound("T51_upper", p, c)


def _ids(p):
    return {s.id for s in applicable_specs(p)}


def test_applicability():
    f = blaschke([0.3, 0.5j])
    assert _ids(LevelProblem(f)) == {"T21", "C31_khlb", "C42_khlb2", "C44_kelb"}
    assert _ids(LevelProblem(f, 1.5)) == {"T21", "C41", "C43_kh3", "C44_kelb"}
    assert _ids(LevelProblem(f, 1.0, 0.5)) == {
        "T21", "C31_khlb", "C42_khlb2", "C44_kelb",
        "T51_lower", "T51_upper", "C53_lower", "C53_upper"}


def test_report_order_and_summary():
    p, c = traced(blaschke([0.3, 0.5j]), 1.5)
    reps = full_report(p, c)
    assert [r.spec_id for r in reps] == [s for s in SPECS if SPECS[s].applies(p)]
    s = reps[0].summary()
    assert set(s) == {"spec_id", "n_samples", "skipped", "min_margin", "equality_samples"}
    rows = list(reps[0].rows())
    assert len(rows) == len(c) and len(rows[0]) == len(CSV_HEADER)


def test_small_zeta_skipped():
    def gamma(t):
        e = np.exp(1j * t)
        return 0.3 + 0.3 * e, 0.3j * e, -0.3 * e
    curve = TracedCurve.from_parametric(gamma, 64)
    p = LevelProblem(blaschke([0.3]))
    rep = evaluate_bound("C42_khlb2", p, curve)
    assert rep.skipped == 1
    assert np.isfinite(rep.min_margin)


def test_margin_sign_convention():
    p, c = traced(ScalarMul(0.8, blaschke([0.4])), 1.0, 0.6)
    up = evaluate_bound("T51_upper", p, c)
    lo = evaluate_bound("T51_lower", p, c)
    assert np.allclose(up.margin, up.bound - up.actual)
    assert np.allclose(lo.margin, lo.actual - lo.bound)
    assert up.min_margin >= 0 and lo.min_margin >= 0


@pytest.mark.parametrize("alpha", [0.3, 0.9])
@pytest.mark.parametrize("r", [0.25, 0.75])
def test_dh1_closed_form(alpha, r):
    k = MaMindaK(alpha)
    assert dh1_k_alpha(alpha, -r) == pytest.approx(abs(hyperbolic_derivatives(k, -r)[0]))
    assert dh1_k_alpha(alpha, r) == pytest.approx(abs(hyperbolic_derivatives(k, r)[0]))


@settings(max_examples=15)
@given(st.floats(0.1, 0.85), st.floats(0, 2 * math.pi), st.floats(0.25, 0.9))
def test_bounds_hold_on_random_automorphism_jordan_problems(rho, theta, r):
    a = rho * complex(math.cos(theta), math.sin(theta))
    p, c = traced(Mobius(a), 1.0, r)
    for rep in full_report(p, c):
        assert rep.min_margin >= -1e-8, rep.spec_id


def test_c42_weaker_than_c31(corpus_jordan, corpus_level):
    for _, p, c in corpus_jordan + corpus_level:
        if p.lam != 1:
            continue
        b31 = evaluate_bound("C31_khlb", p, c).bound
        b42 = evaluate_bound("C42_khlb2", p, c).bound
        ok = np.isfinite(b42)
        assert np.all(b42[ok] <= b31[ok] + 1e-12)


def test_t51_gaps_vanish_only_for_unimodular(corpus_jordan):
    for e, p, c in corpus_jordan:
        lo = evaluate_bound("T51_lower", p, c)
        up = evaluate_bound("T51_upper", p, c)
        both = lo.equality_mask & up.equality_mask
        if e.kind == "unimodular":
            assert both.all()
        else:
            assert not both.any(), e.id


def test_default_tolerance():
    assert EQ_TOL == 1e-7
