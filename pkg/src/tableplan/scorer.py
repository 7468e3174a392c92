"""Heuristic layout quality scoring and best-of-k selection.

A layout is scored as a weighted sum of three components:

    total = alpha * s_count + beta * s_overlap + gamma * s_boundary

where s_count is the F1 of count precision and recall against the required
inventory, s_overlap is the mean pairwise IoU over non-table objects, and
s_boundary is the mean fraction of object area hanging outside the unit
canvas. With the default weights (1.0, -0.5, -0.3) a complete, untangled,
in-bounds layout scores 1.0. Scores depend only on normalized geometry,
never on the canvas resolution hint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .model import BBox, Inventory, Layout, TABLE, UNIT_BOX, inside_fraction, iou
from .evaluator import precision_recall

__all__ = [
    "DEFAULT_WEIGHTS",
    "ScoreBreakdown",
    "ScoreWeights",
    "s_boundary",
    "s_count",
    "s_overlap",
    "score",
    "select_best",
]


@dataclass(frozen=True)
class ScoreWeights:
    alpha: float = 1.0
    beta: float = -0.5
    gamma: float = -0.3

    def total(self, count: float, overlap: float, boundary: float) -> float:
        return self.alpha * count + self.beta * overlap + self.gamma * boundary


DEFAULT_WEIGHTS = ScoreWeights()


@dataclass(frozen=True)
class ScoreBreakdown:
    """Component values plus the weighted total they produced."""

    s_count: float
    s_overlap: float
    s_boundary: float
    total: float
    total_pct: float

    @classmethod
    def from_components(
        cls, count: float, overlap: float, boundary: float, weights: ScoreWeights
    ) -> "ScoreBreakdown":
        total = weights.total(count, overlap, boundary)
        return cls(
            s_count=count,
            s_overlap=overlap,
            s_boundary=boundary,
            total=total,
            total_pct=total * 100.0,
        )

    def to_json_dict(self) -> dict:
        return {
            "s_count": self.s_count,
            "s_overlap": self.s_overlap,
            "s_boundary": self.s_boundary,
            "total": self.total,
            "total_pct": self.total_pct,
        }


def s_count(layout: Layout, inventory: Inventory) -> float:
    """F1 of count precision and recall against the inventory, in [0, 1]."""
    report = precision_recall(layout, inventory)
    p, r = report.precision, report.recall
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def s_overlap(layout: Layout) -> float:
    """Mean pairwise IoU over unordered pairs of non-table objects.

    The table is excluded because everything legitimately sits on it.
    Returns 0.0 when fewer than two objects qualify.
    """
    boxes: list[BBox] = [obj.box for obj in layout.objects if obj.cls != TABLE]
    if len(boxes) < 2:
        return 0.0
    pair_total = 0.0
    n_pairs = 0
    for a, b in combinations(boxes, 2):
        pair_total += iou(a, b)
        n_pairs += 1
    return pair_total / n_pairs


def s_boundary(layout: Layout) -> float:
    """Mean out-of-canvas area fraction over all objects.

    0.0 when every object is fully inside the unit canvas; an object
    entirely outside contributes 1. Empty layouts score 0.0.
    """
    if not layout.objects:
        return 0.0
    overflow = [1.0 - inside_fraction(obj.box, UNIT_BOX) for obj in layout.objects]
    return sum(overflow) / len(overflow)


def score(
    layout: Layout, inventory: Inventory, weights: ScoreWeights = DEFAULT_WEIGHTS
) -> ScoreBreakdown:
    return ScoreBreakdown.from_components(
        count=s_count(layout, inventory),
        overlap=s_overlap(layout),
        boundary=s_boundary(layout),
        weights=weights,
    )


def select_best(
    candidates,
    inventory: Inventory,
    weights: ScoreWeights = DEFAULT_WEIGHTS,
) -> tuple[Layout, ScoreBreakdown]:
    """Pick the highest-scoring candidate layout.

    Accepts a CandidateSet or any sequence of layouts. Ties keep the lowest
    index, so a run of identical candidates selects the first. Raises
    ValueError when nothing qualifies.
    """
    layouts = list(getattr(candidates, "candidates", candidates))
    if not layouts:
        raise ValueError("no candidates to select from")
    best = None
    best_breakdown = None
    for layout in layouts:
        breakdown = score(layout, inventory, weights)
        if best_breakdown is None or breakdown.total > best_breakdown.total:
            best, best_breakdown = layout, breakdown
    return best, best_breakdown
