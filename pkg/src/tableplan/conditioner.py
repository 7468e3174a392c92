"""Diffusion-conditioning exports: segmentation maps and grounding JSON.

A layout becomes two conditioning signals. The semantic segmentation map
is a flat-color raster: every object paints its box in its class color,
with larger boxes drawn first so that, for example, a fork on the table
stays visible on top of it. The grounding spec is the box-level signal:
a caption naming the item counts plus one (phrase, box) entity per
object, boxes clamped to the unit square on the way out, and the fixed
sampler settings downstream generation expects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from io import BytesIO
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Union

import numpy as np
from PIL import Image

from .dsl import caption_from_inventory
from .model import Inventory, Layout, area, round_half_up

__all__ = [
    "DEFAULT_PALETTE",
    "INFERENCE_META",
    "GroundingEntity",
    "GroundingSpec",
    "SegmentationMap",
    "caption_from_inventory",
    "export_grounding",
    "load_palette",
    "render_segmentation",
]

#: Flat colors per class, plus the canvas background. RGB, 8-bit.
DEFAULT_PALETTE: Mapping[str, tuple[int, int, int]] = MappingProxyType(
    {
        "background": (0, 0, 0),
        "table": (140, 100, 60),
        "plate": (255, 255, 255),
        "glass": (80, 180, 255),
        "fork": (200, 200, 0),
        "knife": (255, 80, 80),
        "spoon": (255, 160, 60),
        "bowl": (160, 60, 200),
        "cup": (60, 200, 160),
        "bottle": (0, 120, 60),
        "large_serving_bowl": (120, 120, 255),
        "pot": (90, 90, 90),
    }
)

MIN_RENDER_SIZE = 64


def load_palette(path: Union[str, Path]) -> Mapping[str, tuple[int, int, int]]:
    """Load palette overrides from JSON, merged over DEFAULT_PALETTE.

    The file maps labels to [r, g, b] lists; classes it does not mention
    keep their default color.
    """
    payload = json.loads(Path(path).read_text())
    palette = dict(DEFAULT_PALETTE)
    for label, rgb in payload.items():
        r, g, b = (int(v) for v in rgb)
        for v in (r, g, b):
            if not 0 <= v <= 255:
                raise ValueError(f"palette color for {label!r} out of range: {rgb!r}")
        palette[label] = (r, g, b)
    return MappingProxyType(palette)


@dataclass(frozen=True)
class SegmentationMap:
    """Rendered class-color raster. ``pixels`` is HxWx3 uint8, read-only."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )
        self.pixels.setflags(write=False)

    def to_png_bytes(self) -> bytes:
        buf = BytesIO()
        Image.fromarray(self.pixels, mode="RGB").save(buf, format="PNG")
        return buf.getvalue()

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_bytes(self.to_png_bytes())

    def color_counts(self) -> dict[tuple[int, int, int], int]:
        flat = self.pixels.reshape(-1, 3)
        colors, counts = np.unique(flat, axis=0, return_counts=True)
        return {tuple(int(c) for c in color): int(n) for color, n in zip(colors, counts)}


def render_segmentation(
    layout: Layout,
    size_px: int = 512,
    palette: Mapping[str, tuple[int, int, int]] = DEFAULT_PALETTE,
) -> SegmentationMap:
    """Rasterize a layout to a size_px x size_px flat-color map.

    Objects are drawn in order of descending box area (ties keep layout
    order), so smaller items overwrite larger ones. Box corners are scaled
    and rounded half-up, then clipped to the canvas; out-of-bounds area is
    simply not drawn. Unknown classes are an error rather than a silent
    default color.
    """
    if size_px < MIN_RENDER_SIZE:
        raise ValueError(f"render size must be at least {MIN_RENDER_SIZE}px, got {size_px}")
    missing = sorted(
        {obj.cls.label for obj in layout.objects if obj.cls.label not in palette}
    )
    if missing:
        raise ValueError("palette has no color for: " + ", ".join(missing))
    if "background" not in palette:
        raise ValueError("palette must define a 'background' color")

    pixels = np.empty((size_px, size_px, 3), dtype=np.uint8)
    pixels[:, :] = palette["background"]
    order = sorted(layout.objects, key=lambda obj: -area(obj.box))
    for obj in order:
        x0 = min(max(round_half_up(obj.box.x_min * size_px), 0), size_px)
        y0 = min(max(round_half_up(obj.box.y_min * size_px), 0), size_px)
        x1 = min(max(round_half_up(obj.box.x_max * size_px), 0), size_px)
        y1 = min(max(round_half_up(obj.box.y_max * size_px), 0), size_px)
        if x1 > x0 and y1 > y0:
            pixels[y0:y1, x0:x1] = palette[obj.cls.label]
    return SegmentationMap(width=size_px, height=size_px, pixels=pixels)


#: Generation settings shipped alongside the grounding boxes.
INFERENCE_META: Mapping[str, object] = MappingProxyType(
    {
        "grounding_strength": 1.0,
        "sampler": "ddim",
        "steps": 50,
        "guidance_scale": 7.5,
    }
)


@dataclass(frozen=True)
class GroundingEntity:
    phrase: str
    box: tuple[float, float, float, float]


@dataclass(frozen=True)
class GroundingSpec:
    caption: str
    entities: tuple[GroundingEntity, ...]
    inference_meta: Mapping[str, object] = INFERENCE_META

    def to_json_dict(self) -> dict:
        return {
            "caption": self.caption,
            "entities": [
                {"phrase": e.phrase, "box": list(e.box)} for e in self.entities
            ],
            "inference_meta": dict(self.inference_meta),
        }

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")


def export_grounding(layout: Layout, inventory: Inventory) -> GroundingSpec:
    """Box-grounding spec for a layout: caption, entities, sampler settings.

    One entity per object in layout order. Phrases are class labels with
    underscores as spaces; boxes are clamped to [0, 1] per coordinate.
    """
    entities = []
    for obj in layout.objects:
        clamped = tuple(min(max(v, 0.0), 1.0) for v in obj.box.as_tuple())
        entities.append(GroundingEntity(phrase=obj.cls.phrase, box=clamped))
    return GroundingSpec(
        caption=caption_from_inventory(inventory),
        entities=tuple(entities),
        inference_meta=INFERENCE_META,
    )
