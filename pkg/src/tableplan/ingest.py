"""Turning polygon annotations into normalized layouts and median sizes.

Annotation tools export per-image JSON with labeled polygons (LabelMe
style: ``shapes`` with ``label``, ``points``, ``shape_type``). Ingestion
reduces each shape to its axis-aligned bounding box, optionally crops,
and normalizes into the unit square. The per-class median box sizes of an
ingested corpus are what the completion rules use as object dimensions.
"""

from __future__ import annotations

import json
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from .completer import MedianSizeTable
from .model import (
    BBox,
    DEFAULT_LABEL_SYNONYMS,
    Layout,
    ObjectClass,
    PlacedObject,
    Provenance,
    normalize_label,
)

__all__ = [
    "AnnotationRecord",
    "AnnotationShape",
    "compute_median_sizes",
    "load_labelme",
    "polygon_to_bbox",
    "record_to_layout",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnotationShape:
    label: str
    points: tuple[tuple[float, float], ...]
    kind: str = "polygon"

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple((float(x), float(y)) for x, y in self.points))


@dataclass(frozen=True)
class AnnotationRecord:
    image_width: int
    image_height: int
    shapes: tuple[AnnotationShape, ...]
    tag: str = ""

    def __post_init__(self) -> None:
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError(
                f"image dimensions must be positive, got {self.image_width}x{self.image_height}"
            )
        object.__setattr__(self, "shapes", tuple(self.shapes))


def load_labelme(source: Union[str, Path, Mapping]) -> AnnotationRecord:
    """Read one LabelMe-style JSON document (path or already-parsed dict)."""
    if isinstance(source, (str, Path)):
        payload = json.loads(Path(source).read_text())
        tag = Path(source).stem
    else:
        payload = source
        tag = str(payload.get("imagePath", ""))
    shapes = []
    for raw in payload.get("shapes", []):
        points = [(float(x), float(y)) for x, y in raw["points"]]
        kind = raw.get("shape_type", "polygon")
        if kind == "rectangle":
            # Rectangles come as two diagonal corners; expand to all four.
            (x0, y0), (x1, y1) = points
            points = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        shapes.append(AnnotationShape(label=raw["label"], points=tuple(points), kind=kind))
    return AnnotationRecord(
        image_width=int(payload["imageWidth"]),
        image_height=int(payload["imageHeight"]),
        shapes=tuple(shapes),
        tag=tag,
    )


def polygon_to_bbox(points: Sequence[tuple[float, float]]) -> BBox:
    """Tight axis-aligned pixel box around polygon vertices."""
    if not points:
        raise ValueError("polygon has no points")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if min(xs) == max(xs) or min(ys) == max(ys):
        raise ValueError(f"polygon has zero extent: {list(points)!r}")
    return BBox(min(xs), min(ys), max(xs), max(ys))


def record_to_layout(
    record: AnnotationRecord,
    crop: Optional[BBox] = None,
    synonyms: Mapping[str, str] = DEFAULT_LABEL_SYNONYMS,
) -> Layout:
    """Normalize an annotation record into a unit-square layout.

    With a pixel-space ``crop``, boxes are clipped to it, shifted to its
    origin, and scaled by its side lengths; shapes left with no area are
    dropped with a warning. Without one, boxes are scaled by the image
    dimensions per axis. Labels are lowercased with spaces folded to
    underscores, then passed through the synonym map.
    """
    objects = []
    for shape in record.shapes:
        pixel_box = polygon_to_bbox(shape.points)
        if crop is not None:
            x0 = max(pixel_box.x_min, crop.x_min)
            y0 = max(pixel_box.y_min, crop.y_min)
            x1 = min(pixel_box.x_max, crop.x_max)
            y1 = min(pixel_box.y_max, crop.y_max)
            if x1 <= x0 or y1 <= y0:
                logger.warning(
                    "dropping %r in %s: no area left after crop", shape.label, record.tag or "?"
                )
                continue
            box = BBox(
                (x0 - crop.x_min) / crop.width,
                (y0 - crop.y_min) / crop.height,
                (x1 - crop.x_min) / crop.width,
                (y1 - crop.y_min) / crop.height,
            )
        else:
            box = BBox(
                pixel_box.x_min / record.image_width,
                pixel_box.y_min / record.image_height,
                pixel_box.x_max / record.image_width,
                pixel_box.y_max / record.image_height,
            )
        label = normalize_label(shape.label)
        label = synonyms.get(label, label)
        objects.append(
            PlacedObject(cls=ObjectClass(label), box=box, provenance=Provenance.GENERATED)
        )
    canvas_px = (
        round(max(crop.width, crop.height)) if crop is not None
        else max(record.image_width, record.image_height)
    )
    return Layout(objects=tuple(objects), canvas_px=canvas_px, source_tag=record.tag)


def compute_median_sizes(layouts: Sequence[Layout]) -> MedianSizeTable:
    """Per-class median (width, height) across a corpus of layouts.

    Widths and heights are medianed independently; an even number of
    occurrences averages the two middle values. Only classes that actually
    occur appear in the result, so callers merge it over a default table.
    """
    widths: dict[ObjectClass, list[float]] = {}
    heights: dict[ObjectClass, list[float]] = {}
    for layout in layouts:
        for obj in layout.objects:
            widths.setdefault(obj.cls, []).append(obj.box.width)
            heights.setdefault(obj.cls, []).append(obj.box.height)
    if not widths:
        raise ValueError("no objects in any layout; cannot compute medians")
    sizes = {
        cls: (statistics.median(widths[cls]), statistics.median(heights[cls]))
        for cls in widths
    }
    return MedianSizeTable(sizes=sizes)
