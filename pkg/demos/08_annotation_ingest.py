"""
Ingesting annotated photographs
===============================

Real training layouts come from annotation tools, which store labeled
polygons in pixel coordinates. Ingestion converts those to normalized
layouts: polygons collapse to their bounding boxes, labels fold through a
synonym map, and an optional crop window remaps everything to a region of
interest. Per-class median sizes extracted from a corpus drive how big
inserted objects are during rule-based completion.
"""

import json
from pathlib import Path

from tableplan.completer import DEFAULT_MEDIAN_SIZES
from tableplan.ingest import compute_median_sizes, load_labelme, record_to_layout
from tableplan.model import BBox

# A hand-written stand-in for an annotation tool's JSON export. Note the
# informal labels and the polygon that is not axis-aligned.
annotation = {
    "imageWidth": 1440,
    "imageHeight": 1080,
    "shapes": [
        {
            "label": "Table",
            "shape_type": "polygon",
            "points": [[80, 60], [1380, 75], [1370, 1020], [70, 1015]],
        },
        {
            "label": "dinner plate",
            "shape_type": "polygon",
            "points": [[600, 700], [840, 690], [850, 930], [590, 935]],
        },
        {
            "label": "Wine Glass",
            "shape_type": "rectangle",
            "points": [[880, 620], [960, 720]],
        },
    ],
}

record = load_labelme(annotation)
layout = record_to_layout(record)
print("ingested classes:", [obj.cls.label for obj in layout.objects])
for obj in layout.objects:
    x0, y0, x1, y1 = (round(v, 3) for v in obj.box.as_tuple())
    print(f"  {obj.cls.label:8s} ({x0}, {y0}) .. ({x1}, {y1})")

# Cropping to the table region drops or clips shapes outside the window
# and renormalizes the survivors to the crop.
cropped = record_to_layout(record, crop=BBox(70, 60, 1380, 1020))
print("\nafter cropping to the table:",
      [obj.cls.label for obj in cropped.objects])
print("canvas hint:", cropped.canvas_px, "px")

# Median sizes come from a corpus of such layouts. With a single record
# the medians are just the observed sizes, but the mechanics are the same.
sizes = compute_median_sizes([layout])
print("\nmedian sizes from this corpus:")
print(json.dumps(sizes.to_json_dict(), indent=2))

# The built-in defaults were chosen the same way, from larger corpora:
print("default plate size:", DEFAULT_MEDIAN_SIZES.get("plate"))
