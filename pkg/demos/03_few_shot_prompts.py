"""
Assembling few-shot prompts
===========================

A planning prompt has three parts: a system instruction describing the
output format, a handful of worked examples, and the query sentence. The
prompt changes with the task mode. Asking for plates only keeps prompts
short and the generation problem easy; the rest of the table is inserted
later by rules.
"""

from tableplan import Inventory
from tableplan.dsl import Mode, PromptSpec, build_prompt
from tableplan.planner import mock_plan

# Examples come from anywhere layouts come from; here the deterministic
# mock planner provides two clean ones.
example_inv = Inventory({"table": 1, "plate": 2})
examples = tuple(
    (example_inv, mock_plan(example_inv, Mode.PLATES_ONLY, seed=s, jitter=0.0))
    for s in (0, 1)
)

query = Inventory({"table": 1, "plate": 4})
spec = PromptSpec(query=query, examples=examples, mode=Mode.PLATES_ONLY)

prompt = build_prompt(spec)
print(prompt)

print("\n" + "-" * 60)

# The same spec in place-settings mode relabels the plates. A downstream
# completer will replace each place_setting box with a plate of median
# size before inserting cutlery around it.
spec_ps = PromptSpec(query=query, examples=examples, mode=Mode.PLACE_SETTINGS_ONLY)
last_block = build_prompt(spec_ps).split("\n\n")[-1]
print("place-settings query sentence:", last_block)

# Prompts are byte-stable: the same spec always renders the same string,
# which keeps cached or recorded LLM sessions comparable.
assert build_prompt(spec) == build_prompt(spec)
