"""Count-based evaluation, suite aggregation, and paired significance.

Precision and recall here are over object counts, not box positions: a
generated layout is judged on how many of the required instances of each
class it produced. Per class c with required count n_c and generated
count y_c, the matched count is min(n_c, y_c);

    precision = sum(matched) / sum(y_c)      (0 when nothing was generated)
    recall    = sum(matched) / sum(n_c)

Classes that were generated but never required still inflate the
precision denominator. The Wilcoxon signed-rank test compares paired
per-case metrics between two configurations; it is exact for up to 25
non-zero differences and falls back to a tie-corrected normal
approximation beyond that.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .model import Inventory, Layout, ObjectClass, canonical_sort_key

__all__ = [
    "ClassCount",
    "EvalReport",
    "SuiteCase",
    "SuiteReport",
    "WilcoxonResult",
    "curate_examples",
    "evaluate_suite",
    "precision_recall",
    "wilcoxon_signed_rank",
]


@dataclass(frozen=True)
class ClassCount:
    required: int
    generated: int
    matched: int


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    per_class: Mapping[ObjectClass, ClassCount]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_class", MappingProxyType(dict(self.per_class)))

    def to_json_dict(self) -> dict:
        ordered = sorted(self.per_class.items(), key=lambda kv: canonical_sort_key(kv[0]))
        return {
            "precision": self.precision,
            "recall": self.recall,
            "per_class": {
                cls.label: {
                    "required": cc.required,
                    "generated": cc.generated,
                    "matched": cc.matched,
                }
                for cls, cc in ordered
            },
        }


def precision_recall(generated: Layout, required: Inventory) -> EvalReport:
    """Count precision and recall of a layout against required counts."""
    if len(required) == 0:
        raise ValueError("required inventory is empty")
    counts = generated.class_counts()
    per_class: dict[ObjectClass, ClassCount] = {}
    for cls in set(counts) | set(required.classes()):
        n = required.count(cls)
        y = counts.get(cls, 0)
        per_class[cls] = ClassCount(required=n, generated=y, matched=min(n, y))
    sum_matched = sum(cc.matched for cc in per_class.values())
    sum_generated = sum(cc.generated for cc in per_class.values())
    sum_required = sum(cc.required for cc in per_class.values())
    precision = sum_matched / sum_generated if sum_generated else 0.0
    recall = sum_matched / sum_required
    return EvalReport(precision=precision, recall=recall, per_class=per_class)


# ---------------------------------------------------------------------------
# Suite evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteCase:
    """One evaluated case; ``error`` is set instead of metrics on failure."""

    tag: str
    precision_pct: Optional[float]
    recall_pct: Optional[float]
    score_pct: Optional[float]
    error: Optional[str] = None


@dataclass(frozen=True)
class SuiteReport:
    cases: tuple[SuiteCase, ...]
    mean_precision_pct: Optional[float]
    mean_recall_pct: Optional[float]
    mean_score_pct: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "cases": [
                {
                    "case": c.tag,
                    "precision_pct": c.precision_pct,
                    "recall_pct": c.recall_pct,
                    "score_pct": c.score_pct,
                    "error": c.error,
                }
                for c in self.cases
            ],
            "mean_precision_pct": self.mean_precision_pct,
            "mean_recall_pct": self.mean_recall_pct,
            "mean_score_pct": self.mean_score_pct,
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["case", "precision_pct", "recall_pct", "score_pct", "error"])
        for c in self.cases:
            writer.writerow([c.tag, c.precision_pct, c.recall_pct, c.score_pct, c.error or ""])
        writer.writerow(
            ["mean", self.mean_precision_pct, self.mean_recall_pct, self.mean_score_pct, ""]
        )
        return buf.getvalue()


def evaluate_suite(cases: Sequence[tuple[Layout, Inventory]], weights=None) -> SuiteReport:
    """Evaluate (generated layout, required inventory) pairs as one suite.

    Emits per-case precision, recall, and heuristic score as percentages
    plus unweighted means. A case that fails to evaluate is kept in the
    table with its error message and left out of the means.
    """
    from .scorer import DEFAULT_WEIGHTS, score

    if not cases:
        raise ValueError("no cases to evaluate")
    if weights is None:
        weights = DEFAULT_WEIGHTS
    rows: list[SuiteCase] = []
    for idx, (layout, inventory) in enumerate(cases):
        tag = layout.source_tag or f"case-{idx}"
        try:
            report = precision_recall(layout, inventory)
            breakdown = score(layout, inventory, weights)
        except ValueError as exc:
            rows.append(
                SuiteCase(tag=tag, precision_pct=None, recall_pct=None, score_pct=None,
                          error=str(exc))
            )
            continue
        rows.append(
            SuiteCase(
                tag=tag,
                precision_pct=report.precision * 100.0,
                recall_pct=report.recall * 100.0,
                score_pct=breakdown.total_pct,
            )
        )
    ok = [c for c in rows if c.error is None]
    def mean(values):
        return sum(values) / len(values) if values else None
    return SuiteReport(
        cases=tuple(rows),
        mean_precision_pct=mean([c.precision_pct for c in ok]),
        mean_recall_pct=mean([c.recall_pct for c in ok]),
        mean_score_pct=mean([c.score_pct for c in ok]),
    )


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    statistic: float
    p_value: float
    significant: bool


def _average_ranks(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1, with tied values sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_cdf_at(ranks: Sequence[float], w: float) -> float:
    """P(W+ <= w) under random sign assignment of the given ranks.

    Counts sign assignments by convolving over doubled ranks (average ranks
    are half-integers, so doubling makes them integers). This walks the same
    distribution as enumerating all 2^n assignments, just without the 2^n.
    """
    doubled = [int(round(2.0 * r)) for r in ranks]
    total = sum(doubled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for d in doubled:
        for s in range(total, d - 1, -1):
            counts[s] += counts[s - d]
    threshold = int(math.floor(2.0 * w + 1e-9))
    at_most = sum(counts[: threshold + 1])
    return at_most / (2 ** len(ranks))


_EXACT_LIMIT = 25


def wilcoxon_signed_rank(
    a: Sequence[float], b: Sequence[float], alpha: float = 0.05
) -> WilcoxonResult:
    """Two-sided paired Wilcoxon signed-rank test.

    Zero differences are dropped; ties among the remaining absolute
    differences share average ranks. The statistic is min(W+, W-). Up to
    25 effective pairs the p-value is exact over all sign assignments;
    beyond that a normal approximation with continuity and tie correction
    is used. Raises ValueError on mismatched lengths or when every pair
    is tied.
    """
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    diffs = [x - y for x, y in zip(a, b) if x - y != 0.0]
    n = len(diffs)
    if n == 0:
        raise ValueError("all paired differences are zero; the test is undefined")
    magnitudes = [abs(d) for d in diffs]
    ranks = _average_ranks(magnitudes)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    w = min(w_plus, w_minus)

    if n <= _EXACT_LIMIT:
        p = min(1.0, 2.0 * _exact_cdf_at(ranks, w))
    else:
        mu = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0
        # Tie correction: each group of t tied magnitudes removes
        # (t^3 - t) / 48 from the variance.
        seen: dict[float, int] = {}
        for m in magnitudes:
            seen[m] = seen.get(m, 0) + 1
        var -= sum(t**3 - t for t in seen.values()) / 48.0
        if var <= 0:
            raise ValueError("zero variance in signed-rank approximation")
        z = (w - mu + 0.5) / math.sqrt(var)
        p = min(1.0, math.erfc(-z / math.sqrt(2.0)))

    return WilcoxonResult(
        n_effective=n, statistic=w, p_value=p, significant=p < alpha
    )


# ---------------------------------------------------------------------------
# Few-shot example curation
# ---------------------------------------------------------------------------


def curate_examples(
    layouts: Sequence[Layout],
    inventories: Sequence[Inventory],
    weights=None,
    top_n: Optional[int] = None,
) -> list[tuple[Inventory, Layout]]:
    """Best-scoring (inventory, layout) pairs for few-shot prompting.

    Pairs are ranked by heuristic score, highest first, with input order
    breaking ties so curation is stable. ``top_n`` of None keeps everything.
    """
    from .scorer import DEFAULT_WEIGHTS, score

    if len(layouts) != len(inventories):
        raise ValueError(
            f"layouts and inventories differ in length: {len(layouts)} vs {len(inventories)}"
        )
    if weights is None:
        weights = DEFAULT_WEIGHTS
    if top_n is None:
        top_n = len(layouts)
    if top_n > len(layouts):
        raise ValueError(f"asked for {top_n} examples but only {len(layouts)} are available")
    totals = [score(l, i, weights).total for l, i in zip(layouts, inventories)]
    order = sorted(range(len(layouts)), key=lambda idx: (-totals[idx], idx))
    return [(inventories[i], layouts[i]) for i in order[:top_n]]
