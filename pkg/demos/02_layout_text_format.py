"""
The layout text format
======================

Layouts travel to and from the language model as CSS-like statements, one
object per line. The parser is deliberately forgiving: model replies often
wrap the useful lines in prose, so anything that is not a statement is
skipped with a reason instead of failing the whole reply.
"""

from tableplan import BBox, Layout, PlacedObject
from tableplan.dsl import parse_layout_text, serialize_layout

layout = Layout(
    objects=(
        PlacedObject("table", BBox(0.02, 0.02, 0.98, 0.98)),
        PlacedObject("plate", BBox(0.41, 0.06, 0.59, 0.24)),
        PlacedObject("plate", BBox(0.41, 0.76, 0.59, 0.94)),
    ),
    canvas_px=512,
)

text = serialize_layout(layout)
print("serialized layout:")
print(text)

# Round-tripping loses at most half a pixel per coordinate: positions are
# written as integers on the 512 px canvas.
report = parse_layout_text(text, canvas_px=512)
print("\nparsed objects:", len(report.layout.objects))
print("skipped lines:", report.skipped_lines)

# Now a reply the way a chatty model actually produces one.
noisy_reply = """Sure! Here is a layout for your table:

table {width: 492px; height: 492px; left: 10px; top: 10px}
plate {width: 92px; height: 92px; left: 210px; top: 31px}
plate {width: 92px; left: 210px; top: 389px}

Let me know if you want the plates moved.
"""

report = parse_layout_text(noisy_reply, canvas_px=512)
print("\nfrom the noisy reply:")
print("kept:", [obj.cls.label for obj in report.layout.objects])
for lineno, reason in report.skipped_lines:
    print(f"  line {lineno} skipped: {reason}")

# The third plate statement lost its height property and was dropped;
# the prose lines were skipped as non-statements; blank lines are ignored
# silently. Nothing raises.
