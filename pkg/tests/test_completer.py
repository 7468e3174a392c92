"""Rule-based completion: edge frames, place settings, shared items."""

from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tableplan.completer import (
    DEFAULT_MEDIAN_SIZES,
    DEFAULT_TEMPLATE,
    Edge,
    MedianSizeTable,
    PlaceSettingTemplate,
    TemplateItem,
    assign_edge,
    complete_layout,
    expand_place,
    load_completer_config,
)
from tableplan.model import BBox, Inventory, ObjectClass, Provenance
from conftest import make_layout, make_obj


def _plate(cx, cy, size=0.18):
    return make_obj("plate", cx - size / 2, cy - size / 2, cx + size / 2, cy + size / 2)


TABLE = make_obj("table", 0.02, 0.02, 0.98, 0.98)


# ---------------------------------------------------------------------------
# edge assignment


@pytest.mark.parametrize(
    "center, edge",
    [
        ((0.5, 0.9), Edge.BOTTOM),
        ((0.5, 0.1), Edge.TOP),
        ((0.1, 0.5), Edge.LEFT),
        ((0.9, 0.5), Edge.RIGHT),
    ],
)
def test_assign_edge_picks_the_nearest_edge(center, edge):
    assert assign_edge(_plate(*center).box) is edge


def test_assign_edge_breaks_ties_toward_the_bottom():
    assert assign_edge(_plate(0.5, 0.5).box) is Edge.BOTTOM


def test_assign_edge_top_beats_left_on_a_corner_tie():
    # equidistant from the top and left edges
    assert assign_edge(_plate(0.2, 0.2).box) is Edge.TOP


# ---------------------------------------------------------------------------
# place-setting expansion


def test_expand_place_matches_hand_computed_positions():
    plate = _plate(0.5, 0.85)
    items = expand_place(plate, DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES)
    by_class = {}
    for obj in items:
        by_class.setdefault(obj.cls.label, []).append(obj)

    fork = by_class["fork"][0]
    knife = by_class["knife"][0]
    # offsets of +/-0.85 plate widths: 0.5 -/+ 0.85 * 0.18 = 0.347 / 0.653
    assert fork.box.center[0] == pytest.approx(0.347, abs=1e-12)
    assert knife.box.center[0] == pytest.approx(0.653, abs=1e-12)
    assert fork.box.center[1] == pytest.approx(0.85, abs=1e-12)

    # first glass: right 0.75, forward 0.9 (toward the table center, i.e. up)
    glass = by_class["glass"][0]
    assert glass.box.center[0] == pytest.approx(0.635, abs=1e-12)
    assert glass.box.center[1] == pytest.approx(0.688, abs=1e-12)

    # bowl ahead of the plate
    bowl = by_class["bowl"][0]
    assert bowl.box.center[0] == pytest.approx(0.5, abs=1e-12)
    assert bowl.box.center[1] == pytest.approx(0.85 - 0.85 * 0.18, abs=1e-12)

    assert all(obj.provenance is Provenance.INSERTED for obj in items)


def test_expand_place_mirrors_for_a_top_edge_plate():
    items = expand_place(_plate(0.5, 0.15), DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES)
    fork = next(o for o in items if o.cls.label == "fork")
    knife = next(o for o in items if o.cls.label == "knife")
    # diner sits above the table top edge, so their right hand is at larger x
    assert fork.box.center[0] > 0.5
    assert knife.box.center[0] < 0.5
    bowl = next(o for o in items if o.cls.label == "bowl")
    assert bowl.box.center[1] > 0.15


def test_expand_place_swaps_extents_for_side_plates():
    items = expand_place(_plate(0.15, 0.5), DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES)
    fork = next(o for o in items if o.cls.label == "fork")
    # a fork is long and thin; for a left-edge diner it lies horizontally
    assert fork.box.width == pytest.approx(0.20)
    assert fork.box.height == pytest.approx(0.05)
    assert fork.box.center[1] < 0.5  # diner's right hand, facing +x


def test_expand_place_requires_a_plate():
    with pytest.raises(ValueError):
        expand_place(make_obj("cup", 0.4, 0.4, 0.6, 0.6), DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES)


def test_expand_place_reports_unknown_sizes():
    template = PlaceSettingTemplate(items=(TemplateItem("candelabra", 0.0, 0.9),))
    with pytest.raises(KeyError):
        expand_place(_plate(0.5, 0.85), template, DEFAULT_MEDIAN_SIZES)


# ---------------------------------------------------------------------------
# full-layout completion


def _core(n):
    """A core layout with n plates around the table, no jitter."""
    from tableplan.dsl import Mode
    from tableplan.planner import mock_plan

    inv = Inventory({"table": 1, "plate": n})
    return mock_plan(inv, Mode.PLATES_ONLY, seed=0, jitter=0.0)


def test_complete_layout_inserts_exactly_the_missing_objects():
    inv = Inventory(
        {"table": 1, "plate": 2, "fork": 2, "knife": 2, "spoon": 2, "glass": 4, "bowl": 2}
    )
    completed = complete_layout(_core(2), inv)
    counts = {cls.label: n for cls, n in completed.class_counts().items()}
    assert counts == {
        "table": 1,
        "plate": 2,
        "fork": 2,
        "knife": 2,
        "spoon": 2,
        "glass": 4,
        "bowl": 2,
    }
    inserted = [o for o in completed.objects if o.provenance is Provenance.INSERTED]
    assert len(inserted) == 12


def test_complete_layout_keeps_core_objects_in_place():
    core = _core(2)
    completed = complete_layout(core, Inventory({"table": 1, "plate": 2, "fork": 2}))
    assert completed.objects[: len(core.objects)] == core.objects


def test_complete_layout_is_idempotent():
    inv = Inventory({"table": 1, "plate": 2, "fork": 2, "glass": 4})
    once = complete_layout(_core(2), inv)
    twice = complete_layout(once, inv)
    assert twice == once


def test_complete_layout_rejects_overfull_core():
    inv = Inventory({"table": 1, "plate": 1})
    with pytest.raises(ValueError):
        complete_layout(_core(2), inv)


def test_complete_layout_distributes_round_robin():
    # 3 glasses over 2 plates: plate 0 gets 2, plate 1 gets 1
    inv = Inventory({"table": 1, "plate": 2, "glass": 3})
    completed = complete_layout(_core(2), inv)
    plates = [o.box.center for o in completed.of_class("plate")]
    glasses = [o.box.center for o in completed.of_class("glass")]

    def nearest_plate(pt):
        return min(range(len(plates)), key=lambda i: math.dist(plates[i], pt))

    owners = sorted(nearest_plate(g) for g in glasses)
    assert owners == [0, 0, 1]


def test_shared_items_line_up_on_the_center_row():
    inv = Inventory({"table": 1, "plate": 2, "pot": 1})
    completed = complete_layout(_core(2), inv)
    (pot,) = completed.of_class("pot")
    assert pot.box.center == (pytest.approx(0.5), pytest.approx(0.5))


def test_shared_row_spacing_scales_with_width():
    inv = Inventory({"table": 1, "plate": 2, "pot": 2})
    completed = complete_layout(_core(2), inv)
    xs = sorted(o.box.center[0] for o in completed.of_class("pot"))
    w = DEFAULT_MEDIAN_SIZES.get("pot")[0]
    assert xs[1] - xs[0] == pytest.approx(1.2 * w)
    assert sum(xs) / 2 == pytest.approx(0.5)
    ys = {round(o.box.center[1], 9) for o in completed.of_class("pot")}
    assert ys == {0.5}


def test_place_setting_cores_become_plates():
    from tableplan.dsl import Mode
    from tableplan.planner import mock_plan

    core = mock_plan(Inventory({"table": 1, "plate": 2}), Mode.PLACE_SETTINGS_ONLY, seed=0)
    inv = Inventory({"table": 1, "plate": 2, "fork": 2})
    completed = complete_layout(core, inv)
    assert not completed.of_class("place_setting")
    assert len(completed.of_class("plate")) == 2
    # replacement plates take the median plate footprint
    w, h = DEFAULT_MEDIAN_SIZES.get("plate")
    for plate in completed.of_class("plate"):
        assert plate.box.width == pytest.approx(w)
        assert plate.box.height == pytest.approx(h)


def test_seat_items_without_plates_is_an_error():
    bare = make_layout(TABLE)
    with pytest.raises(ValueError):
        complete_layout(bare, Inventory({"table": 1, "fork": 2}))


def test_inserted_objects_may_leave_the_canvas():
    # a plate jammed into the corner pushes its cutlery outside; nothing clamps
    core = make_layout(TABLE, _plate(0.02, 0.5))
    inv = Inventory({"table": 1, "plate": 1, "fork": 1})
    completed = complete_layout(core, inv)
    (fork,) = completed.of_class("fork")
    assert fork.box.y_min < 0.5
    assert min(fork.box.x_min, fork.box.y_min) < 0.1


# ---------------------------------------------------------------------------
# size table and config


def test_median_size_table_lookup_and_merge():
    base = MedianSizeTable({"plate": (0.2, 0.2)})
    merged = base.merged(MedianSizeTable({"plate": (0.3, 0.3), "cup": (0.1, 0.1)}))
    assert merged.get("plate") == (0.3, 0.3)
    assert merged.get("cup") == (0.1, 0.1)
    assert base.get("plate") == (0.2, 0.2)


def test_median_size_table_rejects_bad_dims():
    with pytest.raises(ValueError):
        MedianSizeTable({"plate": (0.0, 0.2)})
    with pytest.raises(ValueError):
        MedianSizeTable({"plate": (0.2, 1.5)})


def test_median_size_table_unknown_class_message():
    with pytest.raises(KeyError) as exc:
        DEFAULT_MEDIAN_SIZES.get("zither")
    assert "zither" in str(exc.value)


def test_median_size_table_json_round_trip():
    table = MedianSizeTable({"plate": (0.18, 0.18), "cup": (0.08, 0.08)})
    data = table.to_json_dict()
    assert MedianSizeTable.from_json_dict(data).get("cup") == (0.08, 0.08)


def test_load_completer_config(tmp_path):
    path = tmp_path / "completer.json"
    path.write_text(
        json.dumps(
            {
                "sizes": {"plate": [0.25, 0.25]},
                "template": [
                    {"class": "fork", "offset_r": -1.0, "offset_f": 0.0},
                    {"class": "cup", "offset_r": 1.0, "offset_f": 0.5},
                ],
            }
        )
    )
    template, sizes = load_completer_config(path)
    assert sizes.get("plate") == (0.25, 0.25)
    assert sizes.get("fork") == DEFAULT_MEDIAN_SIZES.get("fork")
    assert [item.cls.label for item in template.items] == ["fork", "cup"]


def test_load_completer_config_partial(tmp_path):
    path = tmp_path / "sizes_only.json"
    path.write_text(json.dumps({"sizes": {"pot": [0.3, 0.3]}}))
    template, sizes = load_completer_config(path)
    assert sizes.get("pot") == (0.3, 0.3)
    assert template == DEFAULT_TEMPLATE


def test_default_template_contents():
    labels = [item.cls.label for item in DEFAULT_TEMPLATE.items]
    assert labels == ["fork", "knife", "spoon", "bowl", "glass", "glass"]
    assert DEFAULT_TEMPLATE.slots(ObjectClass("glass")) == (
        TemplateItem("glass", 0.75, 0.9),
        TemplateItem("glass", 1.15, 0.9),
    )


# ---------------------------------------------------------------------------
# property: cutlery lands on the correct side for every edge


centers = st.floats(min_value=0.08, max_value=0.92)


@given(centers, centers)
@settings(max_examples=60, deadline=None)
def test_fork_left_knife_right_of_the_diner(cx, cy):
    plate = _plate(cx, cy)
    edge = assign_edge(plate.box)
    items = expand_place(plate, DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES)
    fork = next(o for o in items if o.cls.label == "fork")
    knife = next(o for o in items if o.cls.label == "knife")

    # the diner's right-hand direction for each table edge
    r_by_edge = {
        Edge.BOTTOM: (1.0, 0.0),
        Edge.TOP: (-1.0, 0.0),
        Edge.LEFT: (0.0, 1.0),
        Edge.RIGHT: (0.0, -1.0),
    }
    rx, ry = r_by_edge[edge]

    def r_coord(obj):
        dx = obj.box.center[0] - cx
        dy = obj.box.center[1] - cy
        return dx * rx + dy * ry

    assert r_coord(fork) < 0
    assert r_coord(knife) > 0
