import math

import numpy as np
import pytest

from src.backend.expr import parse, print_canonical
from src.backend.harness import (_hk_draw, generate, independent_alpha_log_alpha_root, independent_neg_log_log_root,
                                 paper_examples, paper_integral_note, summarize, sweep)
from src.backend.levelset import detect_shape, probe
from src.backend.models import (FamilyName, FamilySpec, HypothesisFlag, IneqId, IneqReport, Interval, Shape,
                                TrialResult)
from src.common.errors import InvalidInputError, RejectionBudgetError

DOMAIN = Interval(0.0, 5.0)


# ---------- 函数族 ----------
@pytest.mark.parametrize("family", [f for f in FamilyName])
def test_generate_is_seeded_and_certified(family):
    spec = FamilySpec(family, 4, seed=42)
    members = generate(spec)
    assert len(members) == 4
    assert [print_canonical(e) for e in members] == [print_canonical(e) for e in generate(spec)]
    for e in members:
        assert detect_shape(e, DOMAIN, 1024) is Shape.NONDECREASING


def test_shifted_members_are_at_least_one():
    for e in generate(FamilySpec(FamilyName.SHIFTED, 5, seed=3, base=FamilyName.POWER_INCREASING)):
        _, values, ok = probe(e, DOMAIN, 1024)
        assert ok.all() and (values >= 1.0).all()


def test_different_seeds_differ():
    a = generate(FamilySpec(FamilyName.AFFINE_INCREASING, 3, seed=1))
    b = generate(FamilySpec(FamilyName.AFFINE_INCREASING, 3, seed=2))
    assert a != b


def test_rejection_budget():
    spec = FamilySpec(FamilyName.AFFINE_INCREASING, 2, seed=0, ranges={"a": (-2.0, -1.0)})
    with pytest.raises(RejectionBudgetError):
        generate(spec)


def test_bad_range():
    with pytest.raises(InvalidInputError):
        generate(FamilySpec(FamilyName.AFFINE_INCREASING, 2, seed=0, ranges={"a": (3.0, 1.0)}))


def test_hk_draw_is_deterministic_and_inside_domain():
    domain = Interval(0.0, 10.0)
    for index in range(20):
        phi, a, b = _hk_draw(9, index, domain)
        assert (phi, a, b) == _hk_draw(9, index, domain)
        assert 0.1 <= a < b <= 10.0
        assert print_canonical(phi) == "exp(x)" or print_canonical(phi).startswith("(x ^ ")


# ---------- 批量校验 ----------
def test_pk1_sweep_has_no_violations():
    report = sweep(IneqId.PK1, FamilySpec(FamilyName.AFFINE_INCREASING, 5, seed=7), DOMAIN)
    assert report.trials == 5
    assert report.errors == 0
    assert report.violations == 0
    assert report.min_slack >= -1e-6
    assert report.worst_case["slack"] == report.min_slack
    assert "f" in report.worst_case


def test_pk2_sweep_on_shifted_family():
    report = sweep(IneqId.PK2, FamilySpec(FamilyName.SHIFTED, 4, seed=8), DOMAIN)
    assert (report.trials, report.errors, report.violations) == (4, 0, 0)


def test_hk_sweep_on_shifted_family():
    domain = Interval(0.0, 10.0)
    spec = FamilySpec(FamilyName.SHIFTED, 3, seed=9, probe_domain=(0.0, 10.0))
    report = sweep(IneqId.HK, spec, domain)
    assert (report.trials, report.errors, report.violations) == (3, 0, 0)
    assert "phi" in report.worst_case


def test_jensen_sweep_counts_trials():
    report = sweep(IneqId.JENSEN_PROBE, FamilySpec(FamilyName.AFFINE_INCREASING, 3, seed=10), DOMAIN)
    assert report.trials == 3
    assert report.errors == 0


def test_sweep_is_reproducible_and_independent_of_jobs():
    spec = FamilySpec(FamilyName.PIECEWISE_LINEAR_INCREASING, 4, seed=123)
    first = sweep(IneqId.PK1, spec, DOMAIN).to_dict()
    assert sweep(IneqId.PK1, spec, DOMAIN).to_dict() == first
    assert sweep(IneqId.PK1, spec, DOMAIN, jobs=2).to_dict() == first


def test_unsupported_sweep():
    with pytest.raises(InvalidInputError):
        sweep(IneqId.GPK1, FamilySpec(FamilyName.AFFINE_INCREASING, 2, seed=0), DOMAIN)


def test_summarize_records_errors():
    ok = IneqReport(IneqId.PK1, 1.0, 2.0, 1.0, True, [HypothesisFlag("positive", True)])
    bad = IneqReport(IneqId.PK1, 2.0, 1.0, -1.0, False)
    trials = [
        TrialResult(0, {"f": "x"}, report=ok),
        TrialResult(1, {"f": "ln(x)"}, error="越界"),
        TrialResult(2, {"f": "1/x"}, report=bad),
    ]
    report = summarize(IneqId.PK1, FamilySpec(FamilyName.AFFINE_INCREASING, 3, seed=0), trials)
    assert (report.trials, report.violations, report.errors) == (3, 1, 1)
    assert report.min_slack == -1.0
    assert report.worst_case["index"] == 2
    assert report.error_messages == ["#1: 越界"]


# ---------- 独立 oracle ----------
def test_independent_roots():
    root = independent_alpha_log_alpha_root(1.0)
    assert root * math.log(root) == pytest.approx(1.0, abs=1e-14)
    assert independent_alpha_log_alpha_root(-0.5) is None
    r = independent_neg_log_log_root()
    assert r + math.log(math.log(r)) == pytest.approx(0.0, abs=1e-12)
    assert r == pytest.approx(1.3098, abs=1e-3)


# ---------- 文献算例审计 ----------
def test_paper_examples():
    first, second = paper_examples()
    e = math.e
    assert first.holds and second.holds
    assert first.lhs == pytest.approx(5 / (1 + 2 * e), abs=1e-6)
    assert first.details["audit"]["paper_lhs"] == 0.781
    assert "0.781" in first.notes
    assert second.lhs == pytest.approx(independent_alpha_log_alpha_root(1.0), abs=1e-6)
    assert second.rhs == pytest.approx(e * independent_alpha_log_alpha_root(1.0), abs=1e-5)
    assert second.details["audit"]["paper_lhs"] == e
    assert repr(independent_alpha_log_alpha_root(1.0)) in second.notes


def test_paper_integral_note():
    note = paper_integral_note(parse("x/(2*exp(1))"), DOMAIN, 0.7768)
    assert "0.781" in note
    assert paper_integral_note(parse("x/3"), DOMAIN, 1.0) == ""
    assert paper_integral_note(parse("x/2"), Interval(0.0, 4.0), 1.0) == ""


# ---------- 长时间批量校验 ----------
@pytest.mark.slow
def test_jensen_long_sweep_runs():
    report = sweep(IneqId.JENSEN_PROBE, FamilySpec(FamilyName.POWER_INCREASING, 200, seed=104), DOMAIN, jobs=4)
    assert report.trials == 200
    assert np.isfinite(report.min_slack)
