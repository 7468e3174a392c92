"""Segmentation rendering, grounding export, and the inference recipe."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tableplan.conditioner import (
    DEFAULT_PALETTE,
    INFERENCE_META,
    GroundingSpec,
    export_grounding,
    load_palette,
    render_segmentation,
)
from tableplan.model import BBox, Inventory
from conftest import make_layout, make_obj


TABLE = make_obj("table", 0.02, 0.02, 0.98, 0.98)


def _two_plate_layout():
    return make_layout(
        TABLE,
        make_obj("plate", 0.41, 0.06, 0.59, 0.24),
        make_obj("plate", 0.41, 0.76, 0.59, 0.94),
    )


# ---------------------------------------------------------------------------
# rendering


def test_full_bleed_plate_owns_every_pixel():
    lay = make_layout(make_obj("plate", 0.0, 0.0, 1.0, 1.0))
    seg = render_segmentation(lay, size_px=256)
    counts = seg.color_counts()
    assert counts[DEFAULT_PALETTE["plate"]] == 256 * 256


def test_small_objects_paint_over_large_ones():
    lay = make_layout(TABLE, make_obj("plate", 0.25, 0.25, 0.75, 0.75))
    seg = render_segmentation(lay, size_px=128)
    # the plate center pixel shows plate, not table
    assert tuple(seg.pixels[64, 64]) == DEFAULT_PALETTE["plate"]
    assert tuple(seg.pixels[5, 5]) == DEFAULT_PALETTE["table"]


def test_background_fills_unclaimed_pixels():
    lay = make_layout(make_obj("plate", 0.4, 0.4, 0.6, 0.6))
    seg = render_segmentation(lay, size_px=64)
    assert tuple(seg.pixels[0, 0]) == DEFAULT_PALETTE["background"]


def test_boxes_are_clamped_to_the_image():
    lay = make_layout(make_obj("plate", -0.5, -0.5, 0.25, 0.25))
    seg = render_segmentation(lay, size_px=64)
    counts = seg.color_counts()
    assert counts[DEFAULT_PALETTE["plate"]] == 16 * 16
    assert sum(counts.values()) == 64 * 64


def test_z_order_is_area_descending():
    # equal-area boxes: the later object wins the contested pixels only
    # because ties keep input order stable
    a = make_obj("fork", 0.0, 0.0, 0.5, 0.5)
    b = make_obj("knife", 0.25, 0.25, 0.75, 0.75)
    seg = render_segmentation(make_layout(a, b), size_px=64)
    assert tuple(seg.pixels[20, 20]) == DEFAULT_PALETTE["knife"]


def test_render_rejects_unknown_classes():
    lay = make_layout(make_obj("zither", 0.1, 0.1, 0.2, 0.2))
    with pytest.raises(ValueError):
        render_segmentation(lay, size_px=64)


def test_render_rejects_tiny_sizes():
    with pytest.raises(ValueError):
        render_segmentation(_two_plate_layout(), size_px=32)


def test_png_bytes_are_stable_within_a_process():
    a = render_segmentation(_two_plate_layout(), size_px=128).to_png_bytes()
    b = render_segmentation(_two_plate_layout(), size_px=128).to_png_bytes()
    assert a == b
    assert a[:8] == b"\x89PNG\r\n\x1a\n"


def test_pixels_are_read_only():
    seg = render_segmentation(_two_plate_layout(), size_px=64)
    with pytest.raises(ValueError):
        seg.pixels[0, 0] = (1, 2, 3)


@given(st.integers(min_value=64, max_value=200))
@settings(max_examples=10, deadline=None)
def test_every_pixel_is_painted_once(size):
    seg = render_segmentation(_two_plate_layout(), size_px=size)
    assert sum(seg.color_counts().values()) == size * size


def test_save_writes_a_png(tmp_path):
    path = tmp_path / "seg.png"
    render_segmentation(_two_plate_layout(), size_px=64).save(path)
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# ---------------------------------------------------------------------------
# palette


def test_default_palette_covers_all_known_classes():
    for label in (
        "background",
        "table",
        "plate",
        "glass",
        "fork",
        "knife",
        "spoon",
        "bowl",
        "cup",
        "bottle",
        "large_serving_bowl",
        "pot",
    ):
        assert label in DEFAULT_PALETTE


def test_load_palette_merges_overrides(tmp_path):
    path = tmp_path / "palette.json"
    path.write_text(json.dumps({"plate": [1, 2, 3], "zither": [9, 9, 9]}))
    palette = load_palette(path)
    assert palette["plate"] == (1, 2, 3)
    assert palette["zither"] == (9, 9, 9)
    assert palette["table"] == DEFAULT_PALETTE["table"]


def test_load_palette_rejects_bad_colors(tmp_path):
    path = tmp_path / "palette.json"
    path.write_text(json.dumps({"plate": [300, 0, 0]}))
    with pytest.raises(ValueError):
        load_palette(path)


def test_render_without_background_color_is_an_error():
    lay = make_layout(make_obj("plate", 0.4, 0.4, 0.6, 0.6))
    with pytest.raises(ValueError):
        render_segmentation(lay, size_px=64, palette={"plate": (255, 255, 255)})


# ---------------------------------------------------------------------------
# grounding


def test_grounding_entities_match_the_layout():
    spec = export_grounding(_two_plate_layout(), Inventory({"table": 1, "plate": 2}))
    assert [e.phrase for e in spec.entities] == ["table", "plate", "plate"]
    assert spec.entities[1].box == (0.41, 0.06, 0.59, 0.24)


def test_grounding_clamps_out_of_frame_boxes():
    lay = make_layout(make_obj("plate", -0.1, 0.0, 0.5, 1.2))
    spec = export_grounding(lay, Inventory({"plate": 1}))
    assert spec.entities[0].box == (0.0, 0.0, 0.5, 1.0)


def test_grounding_phrases_use_spaces():
    lay = make_layout(make_obj("large_serving_bowl", 0.2, 0.2, 0.5, 0.5))
    spec = export_grounding(lay, Inventory({"large_serving_bowl": 1}))
    assert spec.entities[0].phrase == "large serving bowl"


def test_grounding_caption_comes_from_the_inventory():
    inv = Inventory({"table": 1, "plate": 2})
    spec = export_grounding(_two_plate_layout(), inv)
    assert spec.caption == "A laid table. On the table are 2 plates."


def test_grounding_json_shape_and_save(tmp_path):
    inv = Inventory({"table": 1, "plate": 2})
    spec = export_grounding(_two_plate_layout(), inv)
    data = spec.to_json_dict()
    assert set(data) == {"caption", "entities", "inference_meta"}
    assert data["inference_meta"] == dict(INFERENCE_META)
    assert data["entities"][0] == {
        "phrase": "table",
        "box": [0.02, 0.02, 0.98, 0.98],
    }
    path = tmp_path / "grounding.json"
    spec.save(path)
    assert json.loads(path.read_text()) == data


def test_inference_meta_recipe():
    assert INFERENCE_META["grounding_strength"] == 1.0
    assert INFERENCE_META["sampler"] == "ddim"
    assert INFERENCE_META["steps"] == 50
    assert INFERENCE_META["guidance_scale"] == 7.5
