"""
Boxes, overlap, and the unit canvas
===================================

Every layout in this package lives on a normalized square: x grows to the
right, y grows downward, and (0, 0) is the top-left corner of the canvas.
Boxes are allowed to poke past the edges; staying inside is a quality
question, not a validity one.
"""

from tableplan import BBox, UNIT_BOX, area, inside_fraction, iou

# A box is four coordinates, min corner then max corner.
plate = BBox(0.25, 0.25, 0.75, 0.75)
print("plate:", plate.as_tuple())
print("width x height:", plate.width, "x", plate.height)
print("center:", plate.center)
print("area:", area(plate))

# from_center is often more natural when placing things.
cup = BBox.from_center(0.7, 0.3, 0.08, 0.08)
print("\ncup:", cup.as_tuple())

# Intersection-over-union is the workhorse overlap measure. Two boxes
# sharing half their footprint score 1/3: half the union is shared.
a = BBox(0.0, 0.0, 1.0, 1.0)
b = BBox(0.5, 0.0, 1.5, 1.0)
print("\niou of half-overlapping unit boxes:", iou(a, b))
print("iou of the plate with itself:", iou(plate, plate))
print("iou of the plate and the cup:", iou(plate, cup))

# inside_fraction asks how much of a box sits inside another box,
# usually the unit canvas. It drives the boundary penalty in scoring.
half_out = BBox(-0.25, 0.2, 0.25, 0.8)
print("\nfraction of a straddling box inside the canvas:",
      inside_fraction(half_out, UNIT_BOX))

# Degenerate boxes are rejected at construction, so downstream code
# never has to guard against zero-extent geometry.
try:
    BBox(0.5, 0.2, 0.5, 0.8)
except ValueError as exc:
    print("\nzero-width box rejected:", exc)
