"""
Drawing candidates and keeping the best one
===========================================

Language models place objects unevenly, so the pipeline samples several
candidate layouts and keeps the one with the best heuristic score. The
score rewards matching the requested object counts and punishes overlap
between objects and anything hanging off the table.

This demo runs offline: the mock planner stands in for the LLM, and its
jitter knob plays the role of sampling temperature.
"""

from tableplan import Inventory
from tableplan.dsl import Mode, PromptSpec
from tableplan.planner import PlannerConfig, generate_candidates, mock_plan
from tableplan.scorer import score, select_best

inventory = Inventory({"table": 1, "plate": 4})

example = mock_plan(inventory, Mode.PLATES_ONLY, seed=99, jitter=0.0)
spec = PromptSpec(query=inventory, examples=((inventory, example),),
                  mode=Mode.PLATES_ONLY)

# High jitter makes visibly bad candidates likely, which is the point here.
cfg = PlannerConfig(num_candidates=5, seed=21, jitter=0.12, mode=Mode.PLATES_ONLY)
result = generate_candidates(inventory, spec, cfg)
print(f"requested {result.requested} candidates, got {len(result.candidates)}")

for i, candidate in enumerate(result.candidates):
    breakdown = score(candidate, inventory)
    print(
        f"  candidate {i}: count={breakdown.s_count:.3f} "
        f"overlap={breakdown.s_overlap:.3f} boundary={breakdown.s_boundary:.3f} "
        f"-> total {breakdown.total_pct:.1f}%"
    )

best_layout, best_breakdown = select_best(result, inventory)
best_index = list(result.candidates).index(best_layout)
print(f"\nselected candidate {best_index} at {best_breakdown.total_pct:.1f}%")

# The components are interpretable on their own:
#   s_count    count F1 against the inventory, 1.0 when counts match exactly
#   s_overlap  mean pairwise IoU among non-table objects, 0.0 when clean
#   s_boundary mean out-of-canvas fraction, 0.0 when everything fits
# total = 1.0 * s_count - 0.5 * s_overlap - 0.3 * s_boundary
