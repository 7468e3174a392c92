"""Shared helpers for the test suite."""

from __future__ import annotations

import pytest

from tableplan.model import BBox, Layout, PlacedObject, Provenance


def make_obj(label, x0, y0, x1, y1, provenance=Provenance.GENERATED):
    return PlacedObject(label, BBox(x0, y0, x1, y1), provenance)


def make_layout(*objects, canvas_px=512, source_tag=""):
    return Layout(objects=tuple(objects), canvas_px=canvas_px, source_tag=source_tag)


@pytest.fixture
def two_plate_layout():
    return make_layout(
        make_obj("table", 0.02, 0.02, 0.98, 0.98),
        make_obj("plate", 0.41, 0.06, 0.59, 0.24),
        make_obj("plate", 0.41, 0.76, 0.59, 0.94),
    )
