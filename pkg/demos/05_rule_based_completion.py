"""
Completing a core layout by rules
=================================

The planner only decides where the plates go. Everything else follows
table-setting convention, so it is inserted deterministically: each plate
is assigned to its nearest table edge, a local frame is set up pointing
from that edge toward the table center, and cutlery lands at fixed offsets
in that frame. Forks go to the diner's left, knives and spoons to the
right, glasses ahead and to the right. Items that belong to the table as a
whole, like a pot, line up along the center row.
"""

from tableplan import Inventory
from tableplan.completer import complete_layout
from tableplan.dsl import Mode
from tableplan.model import Provenance
from tableplan.planner import mock_plan

inventory = Inventory(
    {
        "table": 1,
        "plate": 2,
        "fork": 2,
        "knife": 2,
        "spoon": 2,
        "glass": 4,
        "bowl": 2,
        "pot": 1,
    }
)

core = mock_plan(Inventory({"table": 1, "plate": 2}), Mode.PLATES_ONLY,
                 seed=4, jitter=0.0)
print("core objects:", [obj.cls.label for obj in core.objects])

completed = complete_layout(core, inventory)
inserted = [obj for obj in completed.objects if obj.provenance is Provenance.INSERTED]
print("inserted:", sorted(obj.cls.label for obj in inserted))

# A coarse character map of the finished table. One character per class,
# drawn large-to-small so small items stay visible.
GLYPHS = {"table": ".", "plate": "O", "fork": "f", "knife": "k",
          "spoon": "s", "glass": "g", "bowl": "b", "pot": "P"}
COLS, ROWS = 48, 24

grid = [[" "] * COLS for _ in range(ROWS)]
by_size = sorted(completed.objects,
                 key=lambda obj: -(obj.box.width * obj.box.height))
for obj in by_size:
    glyph = GLYPHS[obj.cls.label]
    c0 = max(0, int(obj.box.x_min * COLS))
    c1 = min(COLS, max(c0 + 1, int(obj.box.x_max * COLS)))
    r0 = max(0, int(obj.box.y_min * ROWS))
    r1 = min(ROWS, max(r0 + 1, int(obj.box.y_max * ROWS)))
    for r in range(r0, r1):
        for c in range(c0, c1):
            grid[r][c] = glyph

print()
for row in grid:
    print("".join(row))

# Completion is idempotent: running it again changes nothing, because the
# layout already satisfies the inventory.
assert complete_layout(completed, inventory) == completed
print("\nre-completion is a no-op")
