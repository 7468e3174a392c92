"""Core layout types and axis-aligned box geometry.

All coordinates live in a normalized unit square with the origin at the
top-left corner and y increasing downward. Pixel spaces (dataset crops,
rendered conditioning maps) are views of this square at a declared
resolution, so annotations at one resolution and renders at another share
a single representation. Boxes are allowed to leave the unit square:
out-of-bounds placement is a scoring concern, not a validity one. Only
zero or negative extent makes a box invalid.

Every type here is an immutable value, safe to share between pipeline
stages without copying.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Union

__all__ = [
    "CANONICAL_LABELS",
    "CANONICAL_ORDER",
    "DEFAULT_LABEL_SYNONYMS",
    "UNIT_BOX",
    "BBox",
    "Inventory",
    "Layout",
    "ObjectClass",
    "PlacedObject",
    "Provenance",
    "area",
    "canonical_sort_key",
    "inside_fraction",
    "intersection_area",
    "inventory_of",
    "iou",
    "layout_from_json",
    "layout_to_json",
    "load_layout",
    "normalize_label",
    "round_half_up",
    "save_layout",
]

#: Classes the pipeline knows how to size, place, and color out of the box.
#: Layouts may carry other labels; they just need explicit config entries.
CANONICAL_LABELS = frozenset(
    {
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
    }
)

#: Listing order for captions and other class-ordered output. The table is
#: deliberately absent: it is the substrate the caption already names, not
#: an item on it. Classes outside this tuple sort alphabetically after it.
CANONICAL_ORDER = (
    "plate",
    "glass",
    "cup",
    "fork",
    "knife",
    "spoon",
    "bowl",
    "large_serving_bowl",
    "pot",
    "bottle",
)

#: Dataset and prompt label variants folded onto canonical labels.
DEFAULT_LABEL_SYNONYMS: Mapping[str, str] = MappingProxyType(
    {
        "large_bowl": "large_serving_bowl",
        "serving_bowl": "large_serving_bowl",
        "big_bowl": "large_serving_bowl",
        "wine_glass": "glass",
        "water_glass": "glass",
        "dinner_plate": "plate",
        "dish": "plate",
    }
)


def round_half_up(value: float) -> int:
    """Round to the nearest integer, with .5 going toward +infinity."""
    return math.floor(value + 0.5)


def normalize_label(raw: str) -> str:
    """Lowercase a label and join internal whitespace with underscores."""
    return "_".join(raw.strip().lower().split())


@dataclass(frozen=True)
class ObjectClass:
    """A named object category, normalized to a canonical label form.

    Construction lowercases the label and folds spaces to underscores, so
    comparison is case-insensitive: ObjectClass("Large Serving Bowl") equals
    ObjectClass("large_serving_bowl").
    """

    label: str

    def __post_init__(self) -> None:
        canonical = normalize_label(self.label)
        if not canonical:
            raise ValueError("object class label must be non-empty")
        object.__setattr__(self, "label", canonical)

    @property
    def is_canonical(self) -> bool:
        return self.label in CANONICAL_LABELS

    @property
    def phrase(self) -> str:
        """The label with underscores as spaces, for natural-language use."""
        return self.label.replace("_", " ")

    def __str__(self) -> str:
        return self.label


TABLE = ObjectClass("table")
PLATE = ObjectClass("plate")
#: Pseudo-class used when a layout sketches whole place settings as single
#: boxes that later get replaced by a plate and expanded.
PLACE_SETTING = ObjectClass("place_setting")


def canonical_sort_key(cls: ObjectClass) -> tuple:
    """Sort key: canonical listing order first, then extras alphabetically."""
    try:
        return (0, CANONICAL_ORDER.index(cls.label), cls.label)
    except ValueError:
        return (1, 0, cls.label)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box as (x_min, y_min, x_max, y_max) unit-square fractions.

    Values may exceed [0, 1]; only non-positive extent is rejected.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        for name in ("x_min", "y_min", "x_max", "y_max"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"box coordinate {name} is not finite: {v!r}")
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError(
                "box must have positive extent, got "
                f"({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)

    @classmethod
    def from_center(cls, cx: float, cy: float, width: float, height: float) -> "BBox":
        return cls(cx - width / 2.0, cy - height / 2.0, cx + width / 2.0, cy + height / 2.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


UNIT_BOX = BBox(0.0, 0.0, 1.0, 1.0)


def area(box: BBox) -> float:
    """Area of a box in square unit-canvas fractions."""
    return box.width * box.height


def intersection_area(a: BBox, b: BBox) -> float:
    """Area of the overlap of two boxes, 0.0 when they are disjoint."""
    w = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    h = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if w <= 0.0 or h <= 0.0:
        return 0.0
    return w * h


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes, in [0, 1]."""
    inter = intersection_area(a, b)
    if inter == 0.0:
        return 0.0
    return inter / (area(a) + area(b) - inter)


def inside_fraction(box: BBox, region: BBox) -> float:
    """Fraction of ``box``'s area that lies inside ``region``."""
    return intersection_area(box, region) / area(box)


class Provenance(Enum):
    """Whether an object came from the planning stage or rule completion."""

    GENERATED = "generated"
    INSERTED = "inserted"


@dataclass(frozen=True)
class PlacedObject:
    """One object instance: class, box, and where it came from."""

    cls: ObjectClass
    box: BBox
    provenance: Provenance = Provenance.GENERATED

    def __post_init__(self) -> None:
        if isinstance(self.cls, str):
            object.__setattr__(self, "cls", ObjectClass(self.cls))


@dataclass(frozen=True)
class Layout:
    """An ordered collection of placed objects on one canvas.

    ``canvas_px`` is a rendering hint only; geometry stays normalized.
    """

    objects: tuple[PlacedObject, ...]
    canvas_px: int = 512
    source_tag: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        if int(self.canvas_px) != self.canvas_px or self.canvas_px <= 0:
            raise ValueError(f"canvas_px must be a positive integer, got {self.canvas_px!r}")
        object.__setattr__(self, "canvas_px", int(self.canvas_px))

    def __len__(self) -> int:
        return len(self.objects)

    def class_counts(self) -> dict[ObjectClass, int]:
        counts: dict[ObjectClass, int] = {}
        for obj in self.objects:
            counts[obj.cls] = counts.get(obj.cls, 0) + 1
        return counts

    def of_class(self, cls: Union[ObjectClass, str]) -> tuple[PlacedObject, ...]:
        if isinstance(cls, str):
            cls = ObjectClass(cls)
        return tuple(obj for obj in self.objects if obj.cls == cls)


@dataclass(frozen=True)
class Inventory:
    """Required object counts by class. Counts must be at least 1."""

    entries: Mapping[Union[ObjectClass, str], int]

    def __post_init__(self) -> None:
        normalized: dict[ObjectClass, int] = {}
        for key, count in dict(self.entries).items():
            cls = ObjectClass(key) if isinstance(key, str) else key
            if cls in normalized:
                raise ValueError(f"duplicate inventory class {cls.label!r}")
            if int(count) != count or count < 1:
                raise ValueError(f"inventory count for {cls.label!r} must be >= 1, got {count!r}")
            normalized[cls] = int(count)
        object.__setattr__(self, "entries", MappingProxyType(normalized))

    def count(self, cls: Union[ObjectClass, str]) -> int:
        if isinstance(cls, str):
            cls = ObjectClass(cls)
        return self.entries.get(cls, 0)

    def total(self) -> int:
        return sum(self.entries.values())

    def classes(self) -> tuple[ObjectClass, ...]:
        return tuple(self.entries.keys())

    def __len__(self) -> int:
        return len(self.entries)

    def to_json_dict(self) -> dict:
        ordered = sorted(self.entries.items(), key=lambda kv: canonical_sort_key(kv[0]))
        # Table first when present: it frames the rest of the listing.
        ordered.sort(key=lambda kv: kv[0] != TABLE)
        return {cls.label: count for cls, count in ordered}

    @classmethod
    def from_json_dict(cls, payload: Mapping[str, int]) -> "Inventory":
        return cls(dict(payload))


def inventory_of(layout: Layout, *, exclude: Iterable[Union[ObjectClass, str]] = ()) -> Inventory:
    """Inventory implied by a layout's object counts.

    Classes in ``exclude`` are dropped, which is how callers leave the table
    out when deriving an item list.
    """
    skip = {ObjectClass(c) if isinstance(c, str) else c for c in exclude}
    counts = {cls: n for cls, n in layout.class_counts().items() if cls not in skip}
    if not counts:
        raise ValueError("layout has no countable objects after exclusions")
    return Inventory(counts)


# ---------------------------------------------------------------------------
# JSON wire format
#
# {"canvas_px": 512, "source_tag": "...", "objects": [
#     {"class": "plate", "box": [x_min, y_min, x_max, y_max],
#      "provenance": "generated"}]}
# ---------------------------------------------------------------------------


def layout_to_json(layout: Layout) -> dict:
    return {
        "canvas_px": layout.canvas_px,
        "source_tag": layout.source_tag,
        "objects": [
            {
                "class": obj.cls.label,
                "box": list(obj.box.as_tuple()),
                "provenance": obj.provenance.value,
            }
            for obj in layout.objects
        ],
    }


def layout_from_json(payload: Mapping) -> Layout:
    try:
        raw_objects = payload["objects"]
    except KeyError:
        raise ValueError("layout JSON is missing the 'objects' field") from None
    objects = []
    for entry in raw_objects:
        box = entry["box"]
        if len(box) != 4:
            raise ValueError(f"box must have 4 elements, got {box!r}")
        objects.append(
            PlacedObject(
                cls=ObjectClass(entry["class"]),
                box=BBox(*(float(v) for v in box)),
                provenance=Provenance(entry.get("provenance", "generated")),
            )
        )
    return Layout(
        objects=tuple(objects),
        canvas_px=int(payload.get("canvas_px", 512)),
        source_tag=str(payload.get("source_tag", "")),
    )


def save_layout(layout: Layout, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(layout_to_json(layout), indent=2) + "\n")


def load_layout(path: Union[str, Path]) -> Layout:
    return layout_from_json(json.loads(Path(path).read_text()))
