"""Layout quality scoring and best-of-k selection."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tableplan.model import Inventory
from tableplan.planner import CandidateSet
from tableplan.scorer import (
    DEFAULT_WEIGHTS,
    ScoreBreakdown,
    ScoreWeights,
    s_boundary,
    s_count,
    s_overlap,
    score,
    select_best,
)
from conftest import make_layout, make_obj


TABLE = make_obj("table", 0.02, 0.02, 0.98, 0.98)
INV = Inventory({"table": 1, "plate": 2})


def _tidy_layout():
    return make_layout(
        TABLE,
        make_obj("plate", 0.41, 0.06, 0.59, 0.24),
        make_obj("plate", 0.41, 0.76, 0.59, 0.94),
    )


# ---------------------------------------------------------------------------
# components


def test_s_count_is_the_count_f1():
    # layout has 1 of 2 plates: P = (1+1)/2, R = (1+1)/3 with the table
    lay = make_layout(TABLE, make_obj("plate", 0.4, 0.4, 0.6, 0.6))
    assert s_count(lay, INV) == pytest.approx(2 * (1.0 * (2 / 3)) / (1.0 + 2 / 3))


def test_s_count_perfect_match_is_one():
    assert s_count(_tidy_layout(), INV) == 1.0


def test_s_count_degenerate_zero():
    lay = make_layout(make_obj("zither", 0.1, 0.1, 0.2, 0.2))
    assert s_count(lay, Inventory({"plate": 1})) == 0.0


def test_s_overlap_ignores_the_table():
    assert s_overlap(_tidy_layout()) == 0.0


def test_s_overlap_needs_two_objects():
    assert s_overlap(make_layout(TABLE)) == 0.0
    assert s_overlap(make_layout(TABLE, make_obj("plate", 0.4, 0.4, 0.6, 0.6))) == 0.0


def test_s_overlap_of_identical_boxes_is_one():
    lay = make_layout(
        make_obj("plate", 0.4, 0.4, 0.6, 0.6),
        make_obj("plate", 0.4, 0.4, 0.6, 0.6),
    )
    assert s_overlap(lay) == 1.0


def test_s_overlap_averages_all_pairs():
    # three boxes: two identical (iou 1), one disjoint (iou 0 with both)
    lay = make_layout(
        make_obj("plate", 0.1, 0.1, 0.3, 0.3),
        make_obj("plate", 0.1, 0.1, 0.3, 0.3),
        make_obj("cup", 0.6, 0.6, 0.8, 0.8),
    )
    assert s_overlap(lay) == pytest.approx(1 / 3)


def test_s_boundary_zero_when_everything_fits():
    assert s_boundary(_tidy_layout()) == 0.0


def test_s_boundary_half_out_box():
    lay = make_layout(make_obj("plate", -0.1, 0.0, 0.1, 1.0))
    assert s_boundary(lay) == pytest.approx(0.5)


def test_s_boundary_empty_layout_is_zero():
    assert s_boundary(make_layout()) == 0.0


# ---------------------------------------------------------------------------
# aggregate


def test_breakdown_combines_components_with_the_default_weights():
    bd = ScoreBreakdown.from_components(0.9, 0.2, 0.1, DEFAULT_WEIGHTS)
    assert bd.total == pytest.approx(1.0 * 0.9 - 0.5 * 0.2 - 0.3 * 0.1, abs=1e-12)
    assert bd.total_pct == pytest.approx(bd.total * 100.0)


def test_custom_weights_change_the_total():
    weights = ScoreWeights(alpha=2.0, beta=0.0, gamma=0.0)
    bd = ScoreBreakdown.from_components(0.5, 0.9, 0.9, weights)
    assert bd.total == pytest.approx(1.0)


def test_score_is_scale_free():
    small = _tidy_layout()
    big = make_layout(*small.objects, canvas_px=2048)
    assert score(small, INV).total == score(big, INV).total


def test_breakdown_json_shape():
    bd = score(_tidy_layout(), INV)
    data = bd.to_json_dict()
    assert set(data) == {"s_count", "s_overlap", "s_boundary", "total", "total_pct"}
    assert data["total"] == bd.total


# ---------------------------------------------------------------------------
# selection


def test_select_best_prefers_the_cleaner_layout():
    messy = make_layout(
        TABLE,
        make_obj("plate", 0.40, 0.40, 0.60, 0.60),
        make_obj("plate", 0.45, 0.45, 0.65, 0.65),  # big overlap
    )
    best, bd = select_best([messy, _tidy_layout()], INV)
    assert best == _tidy_layout()
    assert bd.total == 1.0


def test_select_best_ties_keep_the_first_candidate():
    a = _tidy_layout()
    b = make_layout(*a.objects, source_tag="second")
    best, _ = select_best([a, b], INV)
    assert best is a


def test_select_best_accepts_a_candidate_set():
    candidates = CandidateSet(candidates=(_tidy_layout(),), failures=())
    best, bd = select_best(candidates, INV)
    assert best == _tidy_layout()


def test_select_best_rejects_empty_input():
    with pytest.raises(ValueError):
        select_best([], INV)


# ---------------------------------------------------------------------------
# property: penalties only ever lower the default-weight total


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_total_is_monotone_in_each_component(c, o, b):
    base = ScoreBreakdown.from_components(c, o, b, DEFAULT_WEIGHTS).total
    assert ScoreBreakdown.from_components(min(c + 0.1, 1.0), o, b, DEFAULT_WEIGHTS).total >= base - 1e-12
    assert ScoreBreakdown.from_components(c, min(o + 0.1, 1.0), b, DEFAULT_WEIGHTS).total <= base + 1e-12
    assert ScoreBreakdown.from_components(c, o, min(b + 0.1, 1.0), DEFAULT_WEIGHTS).total <= base + 1e-12
