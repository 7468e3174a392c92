"""
Exporting diffusion-conditioning artifacts
==========================================

A finished layout conditions an image generator in two ways: densely, as a
flat-color segmentation map for ControlNet-style models, and discretely,
as caption-plus-boxes grounding for GLIGEN-style models. Both exports are
deterministic, so regenerating them from the same layout is byte-stable.
"""

import json
from pathlib import Path

from tableplan import Inventory, inventory_of
from tableplan.completer import complete_layout
from tableplan.conditioner import (
    DEFAULT_PALETTE,
    export_grounding,
    render_segmentation,
)
from tableplan.dsl import Mode, caption_from_inventory
from tableplan.planner import mock_plan

out_dir = Path(__file__).resolve().parent / "demo_output"
out_dir.mkdir(exist_ok=True)

inventory = Inventory(
    {"table": 1, "plate": 2, "fork": 2, "knife": 2, "glass": 4, "bowl": 2}
)
core = mock_plan(Inventory({"table": 1, "plate": 2}), Mode.PLATES_ONLY,
                 seed=12, jitter=0.02)
layout = complete_layout(core, inventory)

# Dense conditioning: each pixel's color names the class that owns it.
segmentation = render_segmentation(layout, size_px=512)
png_path = out_dir / "segmentation.png"
segmentation.save(png_path)
print("wrote", png_path)

for color, count in sorted(segmentation.color_counts().items(),
                           key=lambda kv: -kv[1]):
    label = next((k for k, v in DEFAULT_PALETTE.items() if v == color), "?")
    print(f"  {label:10s} {color}  {count:7d} px")

# Discrete conditioning: one (phrase, box) pair per object plus a caption
# and the sampler settings an image model run would use.
grounding = export_grounding(layout, inventory)
grounding_path = out_dir / "grounding.json"
grounding.save(grounding_path)
print("\nwrote", grounding_path)
print("caption:", grounding.caption)
print("entities:", len(grounding.entities))
print("inference meta:", json.dumps(dict(grounding.inference_meta)))

# The caption can also be derived straight from a layout by counting it.
derived = caption_from_inventory(inventory_of(layout))
assert derived == grounding.caption
