"""Rule-based completion of partial layouts into full table settings.

The planning stage only has to get the plates (or place-setting boxes)
right. Everything else follows dining convention: each plate is assigned
to the canvas edge its diner sits at, a local frame is built there, and
missing items are placed at fixed offsets in that frame. Fork left of the
plate, knife and spoon right of it, glasses diagonally toward the table
center, one bowl past the plate. Items that belong to the whole table
rather than one seat (serving bowls, pots, bottles) go to the center.

Offsets are expressed in plate widths and heights, so the same template
works for any plate size. Inserted objects are never clamped to the
canvas; letting a crowded setting spill over the edge keeps the scorer
able to see the problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence, Union

from .model import (
    BBox,
    Inventory,
    Layout,
    ObjectClass,
    PLACE_SETTING,
    PLATE,
    PlacedObject,
    Provenance,
    canonical_sort_key,
)

__all__ = [
    "DEFAULT_MEDIAN_SIZES",
    "DEFAULT_TEMPLATE",
    "Edge",
    "MedianSizeTable",
    "PlaceSettingTemplate",
    "TemplateItem",
    "assign_edge",
    "complete_layout",
    "expand_place",
    "load_completer_config",
]


class Edge(Enum):
    TOP = "top"
    BOTTOM = "bottom"
    LEFT = "left"
    RIGHT = "right"


# Edge -> (f, r) where f is the unit normal pointing from the diner toward
# the canvas center and r is f rotated a quarter turn so that it points to
# the diner's right. Note y grows downward, so a diner at the bottom edge
# faces (0, -1) and their right hand is at (+1, 0).
_FRAMES: Mapping[Edge, tuple[tuple[float, float], tuple[float, float]]] = MappingProxyType(
    {
        Edge.BOTTOM: ((0.0, -1.0), (1.0, 0.0)),
        Edge.TOP: ((0.0, 1.0), (-1.0, 0.0)),
        Edge.LEFT: ((1.0, 0.0), (0.0, 1.0)),
        Edge.RIGHT: ((-1.0, 0.0), (0.0, -1.0)),
    }
)

# Preference when a plate center is equidistant from several edges.
_EDGE_PREFERENCE = (Edge.BOTTOM, Edge.TOP, Edge.LEFT, Edge.RIGHT)


def assign_edge(plate_box: BBox) -> Edge:
    """Edge of the unit canvas nearest to the box center.

    Ties go bottom, top, left, right in that order, so a dead-center plate
    reads as a bottom-edge diner.
    """
    cx, cy = plate_box.center
    distances = {
        Edge.TOP: cy,
        Edge.BOTTOM: 1.0 - cy,
        Edge.LEFT: cx,
        Edge.RIGHT: 1.0 - cx,
    }
    return min(_EDGE_PREFERENCE, key=lambda e: distances[e])


@dataclass(frozen=True)
class TemplateItem:
    """One item of a place setting, in seat-local plate units.

    ``offset_r`` counts plate widths along the diner's right, ``offset_f``
    plate heights toward the table center, both measured center to center
    from the plate.
    """

    cls: ObjectClass
    offset_r: float
    offset_f: float

    def __post_init__(self) -> None:
        if isinstance(self.cls, str):
            object.__setattr__(self, "cls", ObjectClass(self.cls))


@dataclass(frozen=True)
class PlaceSettingTemplate:
    items: tuple[TemplateItem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("place-setting template must not be empty")

    def classes(self) -> tuple[ObjectClass, ...]:
        """Distinct item classes in first-appearance order."""
        seen: list[ObjectClass] = []
        for item in self.items:
            if item.cls not in seen:
                seen.append(item.cls)
        return tuple(seen)

    def slots(self, cls: ObjectClass) -> tuple[TemplateItem, ...]:
        return tuple(item for item in self.items if item.cls == cls)


DEFAULT_TEMPLATE = PlaceSettingTemplate(
    items=(
        TemplateItem(ObjectClass("fork"), -0.85, 0.0),
        TemplateItem(ObjectClass("knife"), +0.85, 0.0),
        TemplateItem(ObjectClass("spoon"), +1.25, 0.0),
        TemplateItem(ObjectClass("bowl"), 0.0, +0.85),
        TemplateItem(ObjectClass("glass"), +0.75, +0.9),
        TemplateItem(ObjectClass("glass"), +1.15, +0.9),
    )
)


@dataclass(frozen=True)
class MedianSizeTable:
    """Per-class (width, height) in unit-canvas fractions."""

    sizes: Mapping[Union[ObjectClass, str], tuple[float, float]]

    def __post_init__(self) -> None:
        normalized: dict[ObjectClass, tuple[float, float]] = {}
        for key, dims in dict(self.sizes).items():
            cls = ObjectClass(key) if isinstance(key, str) else key
            w, h = (float(d) for d in dims)
            if not (0.0 < w < 1.0 and 0.0 < h < 1.0):
                raise ValueError(f"size for {cls.label!r} must be in (0, 1), got {dims!r}")
            normalized[cls] = (w, h)
        object.__setattr__(self, "sizes", MappingProxyType(normalized))

    def get(self, cls: Union[ObjectClass, str]) -> tuple[float, float]:
        if isinstance(cls, str):
            cls = ObjectClass(cls)
        try:
            return self.sizes[cls]
        except KeyError:
            raise KeyError(f"no size entry for class {cls.label!r}") from None

    def __contains__(self, cls: object) -> bool:
        if isinstance(cls, str):
            cls = ObjectClass(cls)
        return cls in self.sizes

    def merged(self, override: "MedianSizeTable") -> "MedianSizeTable":
        """New table with ``override`` entries replacing this table's."""
        merged = dict(self.sizes)
        merged.update(override.sizes)
        return MedianSizeTable(merged)

    def to_json_dict(self) -> dict:
        ordered = sorted(self.sizes.items(), key=lambda kv: kv[0].label)
        return {cls.label: [w, h] for cls, (w, h) in ordered}

    @classmethod
    def from_json_dict(cls, payload: Mapping[str, Sequence[float]]) -> "MedianSizeTable":
        return cls({label: tuple(dims) for label, dims in payload.items()})


DEFAULT_MEDIAN_SIZES = MedianSizeTable(
    sizes={
        "plate": (0.18, 0.18),
        "fork": (0.05, 0.20),
        "knife": (0.05, 0.20),
        "spoon": (0.05, 0.18),
        "glass": (0.06, 0.06),
        "cup": (0.08, 0.08),
        "bowl": (0.10, 0.10),
        "large_serving_bowl": (0.22, 0.22),
        "pot": (0.22, 0.22),
        "bottle": (0.07, 0.20),
    }
)


def _place_item(
    plate: PlacedObject, edge: Edge, item: TemplateItem, sizes: MedianSizeTable
) -> PlacedObject:
    f, r = _FRAMES[edge]
    cx, cy = plate.box.center
    w_plate = plate.box.width
    h_plate = plate.box.height
    x = cx + item.offset_r * w_plate * r[0] + item.offset_f * h_plate * f[0]
    y = cy + item.offset_r * w_plate * r[1] + item.offset_f * h_plate * f[1]
    w, h = sizes.get(item.cls)
    # Elongated items (cutlery) lie along the seat's forward axis, which is
    # horizontal for diners at the left or right edge.
    if edge in (Edge.LEFT, Edge.RIGHT):
        w, h = h, w
    return PlacedObject(
        cls=item.cls,
        box=BBox.from_center(x, y, w, h),
        provenance=Provenance.INSERTED,
    )


def expand_place(
    plate: PlacedObject,
    template: PlaceSettingTemplate = DEFAULT_TEMPLATE,
    sizes: MedianSizeTable = DEFAULT_MEDIAN_SIZES,
) -> list[PlacedObject]:
    """All template items for one plate, in template order.

    The plate decides the seat: its nearest canvas edge orients the local
    frame, and its dimensions scale the offsets.
    """
    if plate.cls != PLATE:
        raise ValueError(f"expand_place needs a plate, got {plate.cls.label!r}")
    edge = assign_edge(plate.box)
    return [_place_item(plate, edge, item, sizes) for item in template.items]


def _replace_place_settings(core: Layout, sizes: MedianSizeTable) -> Layout:
    """Swap place-setting sketch boxes for median-size plates at their centers."""
    if not core.of_class(PLACE_SETTING):
        return core
    w, h = sizes.get(PLATE)
    objects = []
    for obj in core.objects:
        if obj.cls == PLACE_SETTING:
            cx, cy = obj.box.center
            obj = PlacedObject(
                cls=PLATE, box=BBox.from_center(cx, cy, w, h), provenance=obj.provenance
            )
        objects.append(obj)
    return Layout(objects=tuple(objects), canvas_px=core.canvas_px, source_tag=core.source_tag)


def _shared_row(
    needs: Sequence[tuple[ObjectClass, int]], sizes: MedianSizeTable
) -> list[PlacedObject]:
    """Communal items on a horizontal line through the table center.

    Consecutive centers sit 1.2 item-widths apart (0.6 of each neighbor),
    and the whole row is centered at x = 0.5.
    """
    queue: list[ObjectClass] = []
    for cls, n in needs:
        queue.extend([cls] * n)
    if not queue:
        return []
    widths = [sizes.get(cls)[0] for cls in queue]
    xs = [0.0]
    for i in range(1, len(queue)):
        xs.append(xs[-1] + 0.6 * widths[i - 1] + 0.6 * widths[i])
    shift = 0.5 - (xs[0] + xs[-1]) / 2.0
    placed = []
    for cls, x in zip(queue, xs):
        w, h = sizes.get(cls)
        placed.append(
            PlacedObject(
                cls=cls,
                box=BBox.from_center(x + shift, 0.5, w, h),
                provenance=Provenance.INSERTED,
            )
        )
    return placed


def complete_layout(
    core: Layout,
    inventory: Inventory,
    template: PlaceSettingTemplate = DEFAULT_TEMPLATE,
    sizes: MedianSizeTable = DEFAULT_MEDIAN_SIZES,
) -> Layout:
    """Fill a core layout up to the exact counts an inventory requires.

    Place-setting boxes become plates first. Classes the template knows are
    dealt round-robin across plates in layout order, cycling through the
    template's slots for that class; other required classes are treated as
    communal and placed along the table's center line. Core objects are
    never moved or removed, and completion is idempotent: a layout that
    already satisfies the inventory comes back unchanged apart from the
    place-setting swap.

    Raises ValueError if the inventory asks for fewer of a class than the
    core already contains, or if items must attach to plates and there are
    none.
    """
    core = _replace_place_settings(core, sizes)
    have = core.class_counts()

    overfull = [
        cls.label
        for cls in inventory.classes()
        if have.get(cls, 0) > inventory.count(cls)
    ]
    if overfull:
        raise ValueError(
            "core already exceeds the required count for: " + ", ".join(sorted(overfull))
        )

    needs = [
        (cls, inventory.count(cls) - have.get(cls, 0))
        for cls in sorted(inventory.classes(), key=canonical_sort_key)
    ]
    needs = [(cls, n) for cls, n in needs if n > 0]

    plates = core.of_class(PLATE)
    edges = [assign_edge(p.box) for p in plates]

    template_classes = set(template.classes())
    inserted: list[PlacedObject] = []
    for cls in template.classes():
        need = dict(needs).get(cls, 0)
        if need == 0:
            continue
        if not plates:
            raise ValueError(
                f"cannot place {cls.label!r} at a seat: the core layout has no plates"
            )
        slots = template.slots(cls)
        for j in range(need):
            plate_idx = j % len(plates)
            slot = slots[(j // len(plates)) % len(slots)]
            inserted.append(_place_item(plates[plate_idx], edges[plate_idx], slot, sizes))

    shared_needs = [(cls, n) for cls, n in needs if cls not in template_classes]
    inserted.extend(_shared_row(shared_needs, sizes))

    return Layout(
        objects=core.objects + tuple(inserted),
        canvas_px=core.canvas_px,
        source_tag=core.source_tag,
    )


def load_completer_config(path: Union[str, Path]) -> tuple[PlaceSettingTemplate, MedianSizeTable]:
    """Read a template and size table from one JSON file.

    Schema::

        {"sizes": {"plate": [0.18, 0.18], ...},
         "template": [{"class": "fork", "offset_r": -0.85, "offset_f": 0.0}, ...]}

    Either key may be omitted to keep the built-in default.
    """
    payload = json.loads(Path(path).read_text())
    template = DEFAULT_TEMPLATE
    sizes = DEFAULT_MEDIAN_SIZES
    if "template" in payload:
        template = PlaceSettingTemplate(
            items=tuple(
                TemplateItem(
                    cls=ObjectClass(entry["class"]),
                    offset_r=float(entry["offset_r"]),
                    offset_f=float(entry["offset_f"]),
                )
                for entry in payload["template"]
            )
        )
    if "sizes" in payload:
        sizes = DEFAULT_MEDIAN_SIZES.merged(MedianSizeTable.from_json_dict(payload["sizes"]))
    return template, sizes
