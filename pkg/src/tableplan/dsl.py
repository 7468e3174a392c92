"""CSS-like layout statements and few-shot prompt assembly.

A layout serializes to one statement per object::

    plate {width: 120px; height: 120px; left: 100px; top: 200px}

``left``/``top`` give the top-left corner, all values are integer pixels
on a square canvas (512px unless told otherwise). Parsing is the inverse
and is deliberately forgiving: language models wrap layouts in prose,
reorder properties, and occasionally emit junk, so anything that is not
a well-formed statement is skipped and reported instead of failing the
whole response.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import (
    BBox,
    Inventory,
    Layout,
    ObjectClass,
    PLACE_SETTING,
    PLATE,
    PlacedObject,
    Provenance,
    TABLE,
    canonical_sort_key,
    round_half_up,
)

__all__ = [
    "DEFAULT_CANVAS_PX",
    "Mode",
    "ParseReport",
    "PromptSpec",
    "build_prompt",
    "caption_from_inventory",
    "default_system_instruction",
    "mode_inventory",
    "parse_layout_text",
    "pluralize_label",
    "serialize_layout",
]

DEFAULT_CANVAS_PX = 512


class Mode(Enum):
    """How much of the scene the planning stage is asked to produce."""

    FULL = "full"
    PLATES_ONLY = "plates_only"
    PLACE_SETTINGS_ONLY = "place_settings_only"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize_layout(layout: Layout, canvas_px: Optional[int] = None) -> str:
    """Render a layout as one statement per object, in object order.

    Normalized coordinates are scaled by ``canvas_px`` and rounded half-up
    to integer pixels. No clamping happens here; a box that pokes past the
    canvas serializes to coordinates past the canvas.
    """
    px = layout.canvas_px if canvas_px is None else canvas_px
    lines = []
    for obj in layout.objects:
        w = round_half_up(obj.box.width * px)
        h = round_half_up(obj.box.height * px)
        left = round_half_up(obj.box.x_min * px)
        top = round_half_up(obj.box.y_min * px)
        lines.append(
            f"{obj.cls.label} {{width: {w}px; height: {h}px; left: {left}px; top: {top}px}}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_STATEMENT_RE = re.compile(
    r"^\s*(?P<cls>[A-Za-z_][A-Za-z0-9_ ]*?)\s*\{(?P<body>[^{}]*)\}\s*$"
)
_PROPERTY_RE = re.compile(
    r"^\s*(?P<name>width|height|left|top)\s*:\s*(?P<value>-?\d+)\s*px\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class ParseReport:
    """Parsed layout plus the lines that did not make it in."""

    layout: Layout
    skipped_lines: tuple[tuple[int, str], ...]

    @property
    def clean(self) -> bool:
        return not self.skipped_lines


def _parse_statement_body(body: str) -> Optional[dict[str, int]]:
    props: dict[str, int] = {}
    for chunk in body.split(";"):
        if not chunk.strip():
            continue
        match = _PROPERTY_RE.match(chunk)
        if match is None:
            continue  # unknown property, tolerated
        props[match.group("name").lower()] = int(match.group("value"))
    if {"width", "height", "left", "top"} <= props.keys():
        return props
    return None


def parse_layout_text(
    text: str,
    canvas_px: int = DEFAULT_CANVAS_PX,
    source_tag: str = "",
) -> ParseReport:
    """Extract every parseable layout statement from free-form text.

    Never raises on content: prose, malformed statements, and degenerate
    boxes are recorded in ``skipped_lines`` as (1-based line number, reason)
    and skipped. Blank lines are ignored silently. Pixel values are mapped
    back to unit-square fractions by dividing by ``canvas_px``.
    """
    if canvas_px <= 0:
        raise ValueError(f"canvas_px must be positive, got {canvas_px!r}")
    objects: list[PlacedObject] = []
    skipped: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        match = _STATEMENT_RE.match(line)
        if match is None:
            skipped.append((lineno, "no layout statement"))
            continue
        props = _parse_statement_body(match.group("body"))
        if props is None:
            skipped.append((lineno, "missing required property"))
            continue
        if props["width"] <= 0 or props["height"] <= 0:
            skipped.append((lineno, "degenerate box"))
            continue
        objects.append(
            PlacedObject(
                cls=ObjectClass(match.group("cls")),
                box=BBox(
                    props["left"] / canvas_px,
                    props["top"] / canvas_px,
                    (props["left"] + props["width"]) / canvas_px,
                    (props["top"] + props["height"]) / canvas_px,
                ),
                provenance=Provenance.GENERATED,
            )
        )
    layout = Layout(objects=tuple(objects), canvas_px=canvas_px, source_tag=source_tag)
    return ParseReport(layout=layout, skipped_lines=tuple(skipped))


# ---------------------------------------------------------------------------
# Captions and inventory sentences
# ---------------------------------------------------------------------------

_IRREGULAR_PLURALS = {
    "knife": "knives",
    "glass": "glasses",
    "dish": "dishes",
}


def pluralize_label(label: str) -> str:
    """Plural phrase for a class label: 'large_serving_bowl' -> 'large serving bowls'."""
    words = label.split("_")
    last = words[-1]
    if last in _IRREGULAR_PLURALS:
        words[-1] = _IRREGULAR_PLURALS[last]
    elif last.endswith(("s", "x", "ch", "sh")):
        words[-1] = last + "es"
    else:
        words[-1] = last + "s"
    return " ".join(words)


def caption_from_inventory(inventory: Inventory) -> str:
    """Caption sentence for an item list: 'A laid table. On the table are ...'.

    Items follow the canonical listing order with extras alphabetical at the
    end. The table itself never appears; 'A laid table.' already names it.
    """
    items = [(cls, n) for cls, n in inventory.entries.items() if cls != TABLE]
    if not items:
        raise ValueError("inventory has no items to caption")
    items.sort(key=lambda kv: canonical_sort_key(kv[0]))
    parts = []
    for cls, n in items:
        phrase = pluralize_label(cls.label) if n > 1 else cls.phrase
        parts.append(f"{n} {phrase}")
    return "A laid table. On the table are " + ", ".join(parts) + "."


# ---------------------------------------------------------------------------
# Prompts
# ---------------------------------------------------------------------------


def default_system_instruction(canvas_px: int = DEFAULT_CANVAS_PX) -> str:
    return (
        "You arrange objects on a table seen from directly above. "
        "Reply with one line per object in exactly this form: "
        "classname {width: Wpx; height: Hpx; left: Xpx; top: Ypx}. "
        f"All values are integer pixels on a {canvas_px} by {canvas_px} canvas "
        "whose origin is the top-left corner. Multi-word class names use "
        "underscores. Output layout statements only, with no other text."
    )


@dataclass(frozen=True)
class PromptSpec:
    """Everything needed to build one planning prompt, deterministically.

    ``examples`` holds (inventory, layout) pairs shown few-shot before the
    query. The same spec always renders to the same prompt string.
    """

    query: Inventory
    examples: tuple[tuple[Inventory, Layout], ...]
    mode: Mode = Mode.FULL
    system_instruction: Optional[str] = None
    dsl_canvas_px: int = DEFAULT_CANVAS_PX

    def __post_init__(self) -> None:
        object.__setattr__(self, "examples", tuple(tuple(pair) for pair in self.examples))
        if not self.examples:
            raise ValueError("prompt needs at least one few-shot example")
        if self.dsl_canvas_px <= 0:
            raise ValueError("dsl_canvas_px must be positive")
        if self.system_instruction is None:
            object.__setattr__(
                self, "system_instruction", default_system_instruction(self.dsl_canvas_px)
            )


def mode_inventory(inventory: Inventory, mode: Mode) -> Inventory:
    """The inventory a given mode actually asks the planner for.

    Decomposed modes reduce the request to n plates (or place settings)
    plus the table; the full mode passes the inventory through.
    """
    if mode is Mode.FULL:
        return inventory
    n = inventory.count(PLATE)
    if n < 1:
        raise ValueError(f"{mode.value} mode needs a plate entry in the inventory")
    core = PLATE if mode is Mode.PLATES_ONLY else PLACE_SETTING
    return Inventory({TABLE: 1, core: n})


def _filter_example(
    inventory: Inventory, layout: Layout, mode: Mode
) -> tuple[Inventory, Layout]:
    if mode is Mode.FULL:
        return inventory, layout
    kept = []
    for obj in layout.objects:
        if obj.cls == TABLE:
            kept.append(obj)
        elif obj.cls == PLATE:
            if mode is Mode.PLACE_SETTINGS_ONLY:
                obj = PlacedObject(cls=PLACE_SETTING, box=obj.box, provenance=obj.provenance)
            kept.append(obj)
    filtered = Layout(objects=tuple(kept), canvas_px=layout.canvas_px, source_tag=layout.source_tag)
    n = len(layout.of_class(PLATE))
    core = PLATE if mode is Mode.PLATES_ONLY else PLACE_SETTING
    reduced = Inventory({core: max(n, 1)})
    return reduced, filtered


def build_prompt(spec: PromptSpec) -> str:
    """Assemble the few-shot prompt for a planning request.

    Layout: system instruction, then one block per example (inventory
    sentence above its serialized layout), then the query sentence. In
    plates-only mode the query reads 'Generate a layout for n plates on a
    table.' and examples are cut down to plates and the table; the place-
    settings mode is the same with plates relabeled. Output is byte-stable
    for a given spec.
    """
    blocks = [spec.system_instruction]
    for inv, layout in spec.examples:
        ex_inv, ex_layout = _filter_example(inv, layout, spec.mode)
        sentence = caption_from_inventory(ex_inv)
        serialized = serialize_layout(ex_layout, spec.dsl_canvas_px)
        blocks.append(f"{sentence}\n{serialized}".rstrip("\n"))
    if spec.mode is Mode.FULL:
        blocks.append(caption_from_inventory(spec.query))
    else:
        n = spec.query.count(PLATE)
        if n < 1:
            raise ValueError(f"{spec.mode.value} query needs a plate entry in the inventory")
        noun = "plates" if spec.mode is Mode.PLATES_ONLY else "place settings"
        blocks.append(f"Generate a layout for {n} {noun} on a table.")
    return "\n\n".join(blocks)
