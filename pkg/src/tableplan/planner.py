"""Layout candidate generation, from a live endpoint or the offline mock.

The real path sends one chat-completions request per candidate (n=1,
temperature as configured) and parses whatever comes back with the
tolerant DSL parser. One bad response only costs that candidate: the
remaining ones still land, and every failure is recorded with its index
and reason.

The mock path exists so the whole pipeline can run hermetically. It
distributes plates of median size along the table edges with optional
seeded jitter, which is enough to exercise scoring, selection, and
completion without a network in sight.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, replace
from typing import Optional
from urllib.parse import urlparse

import requests

from .completer import DEFAULT_MEDIAN_SIZES, DEFAULT_TEMPLATE, MedianSizeTable, complete_layout
from .dsl import Mode, PromptSpec, build_prompt, parse_layout_text
from .model import (
    BBox,
    Inventory,
    Layout,
    PLACE_SETTING,
    PLATE,
    PlacedObject,
    Provenance,
    TABLE,
)

__all__ = [
    "API_KEY_ENV",
    "CandidateSet",
    "MOCK_ENDPOINT",
    "PlannerConfig",
    "PlannerError",
    "generate_candidates",
    "mock_plan",
]

API_KEY_ENV = "LAYOUT_LLM_API_KEY"
MOCK_ENDPOINT = "mock"

#: Box every mock layout puts the table in.
MOCK_TABLE_BOX = BBox(0.02, 0.02, 0.98, 0.98)

#: Distance of edge-seat plate centers from their canvas edge.
_EDGE_BAND = 0.15

_MOCK_MAX_PLATES = 8


class PlannerError(RuntimeError):
    """Configuration problem that makes the whole request impossible."""


@dataclass(frozen=True)
class PlannerConfig:
    endpoint: str = MOCK_ENDPOINT
    model_name: str = "gpt-3.5-turbo"
    temperature: float = 0.7
    num_candidates: int = 5
    mode: Mode = Mode.PLATES_ONLY
    request_timeout: float = 30.0
    retries: int = 0
    seed: int = 0
    jitter: float = 0.03

    def __post_init__(self) -> None:
        if self.num_candidates < 1:
            raise ValueError("num_candidates must be at least 1")
        if self.temperature < 0.0:
            raise ValueError("temperature must be non-negative")
        if self.jitter < 0.0:
            raise ValueError("jitter must be non-negative")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")


@dataclass(frozen=True)
class CandidateSet:
    """Layouts that parsed plus (index, reason) for the ones that did not."""

    candidates: tuple[Layout, ...]
    failures: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "failures", tuple(self.failures))

    @property
    def requested(self) -> int:
        return len(self.candidates) + len(self.failures)


# ---------------------------------------------------------------------------
# Mock planning
# ---------------------------------------------------------------------------


def _plate_centers(n: int) -> list[tuple[float, float]]:
    """Seat n plates around the table: pairs on the long edges, leftovers
    on the sides, everything evenly spaced within its edge."""
    per_long_edge = n // 2
    remainder = n - 2 * per_long_edge
    centers = []
    for k, y in ((per_long_edge, _EDGE_BAND), (per_long_edge, 1.0 - _EDGE_BAND)):
        for i in range(k):
            centers.append(((i + 1) / (k + 1), y))
    for i in range(remainder):
        x = _EDGE_BAND if i % 2 == 0 else 1.0 - _EDGE_BAND
        centers.append((x, 0.5))
    return centers


def mock_plan(
    inventory: Inventory,
    mode: Mode,
    seed: int,
    jitter: float = 0.0,
    *,
    sizes: MedianSizeTable = DEFAULT_MEDIAN_SIZES,
) -> Layout:
    """Deterministic stand-in for the planning model.

    Always includes the table. Plates (or place-setting boxes) of median
    plate size go along the table edges, each center perturbed by a
    uniform draw in [-jitter, +jitter] per axis from random.Random(seed).
    In full mode the remaining inventory is filled in with the default
    completion rules and relabeled as generated output.
    """
    n = inventory.count(PLATE)
    if mode is not Mode.FULL and not 1 <= n <= _MOCK_MAX_PLATES:
        raise ValueError(
            f"mock planning in {mode.value} mode supports 1..{_MOCK_MAX_PLATES} plates, got {n}"
        )
    rng = random.Random(seed)
    w, h = sizes.get(PLATE)
    cls = PLACE_SETTING if mode is Mode.PLACE_SETTINGS_ONLY else PLATE
    objects = [PlacedObject(cls=TABLE, box=MOCK_TABLE_BOX, provenance=Provenance.GENERATED)]
    for cx, cy in _plate_centers(n):
        cx += rng.uniform(-jitter, jitter)
        cy += rng.uniform(-jitter, jitter)
        objects.append(
            PlacedObject(
                cls=cls,
                box=BBox.from_center(cx, cy, w, h),
                provenance=Provenance.GENERATED,
            )
        )
    layout = Layout(
        objects=tuple(objects),
        source_tag=f"mock-{mode.value}-seed{seed}",
    )
    if mode is Mode.FULL:
        completed = complete_layout(layout, inventory, DEFAULT_TEMPLATE, sizes)
        layout = Layout(
            objects=tuple(
                replace(obj, provenance=Provenance.GENERATED) for obj in completed.objects
            ),
            canvas_px=completed.canvas_px,
            source_tag=layout.source_tag,
        )
    return layout


# ---------------------------------------------------------------------------
# Endpoint transport
# ---------------------------------------------------------------------------


def _completions_url(endpoint: str) -> str:
    parsed = urlparse(endpoint)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise PlannerError(
            f"endpoint must be 'mock' or an http(s) URL, got {endpoint!r}"
        )
    if endpoint.rstrip("/").endswith("/chat/completions"):
        return endpoint.rstrip("/")
    return endpoint.rstrip("/") + "/chat/completions"


def _request_completion(url: str, payload: dict, timeout: float, api_key: str) -> str:
    """POST one chat-completions request and return the reply text.

    Split out so tests can swap the transport without a network.
    """
    response = requests.post(
        url,
        json=payload,
        timeout=timeout,
        headers={"Authorization": f"Bearer {api_key}"},
    )
    response.raise_for_status()
    data = response.json()
    return data["choices"][0]["message"]["content"]


def _endpoint_candidate(url: str, cfg: PlannerConfig, prompt: str, api_key: str) -> str:
    payload = {
        "model": cfg.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature,
        "n": 1,
    }
    attempts = cfg.retries + 1
    last_error: Optional[Exception] = None
    for _ in range(attempts):
        try:
            return _request_completion(url, payload, cfg.request_timeout, api_key)
        except requests.RequestException as exc:
            last_error = exc
    raise last_error


def generate_candidates(
    inventory: Inventory, prompt_spec: PromptSpec, cfg: PlannerConfig
) -> CandidateSet:
    """Produce cfg.num_candidates layout candidates for one inventory.

    Candidate i is independent: the mock derives it from seed + i, the
    endpoint path issues its own request. Per-candidate failures (transport
    errors, responses with no parseable statements) end up in ``failures``;
    configuration problems such as a bad endpoint URL or missing API key
    raise PlannerError instead.
    """
    if prompt_spec.mode is not cfg.mode:
        raise ValueError(
            f"prompt mode {prompt_spec.mode.value} does not match planner mode {cfg.mode.value}"
        )

    if cfg.endpoint == MOCK_ENDPOINT:
        candidates = []
        for i in range(cfg.num_candidates):
            layout = mock_plan(inventory, cfg.mode, cfg.seed + i, cfg.jitter)
            candidates.append(replace(layout, source_tag=f"mock-candidate-{i}"))
        return CandidateSet(candidates=tuple(candidates), failures=())

    url = _completions_url(cfg.endpoint)
    api_key = os.environ.get(API_KEY_ENV, "")
    if not api_key:
        raise PlannerError(
            f"no API key: set {API_KEY_ENV} to call endpoint {cfg.endpoint!r}"
        )
    prompt = build_prompt(prompt_spec)

    candidates = []
    failures = []
    for i in range(cfg.num_candidates):
        try:
            text = _endpoint_candidate(url, cfg, prompt, api_key)
        except requests.RequestException as exc:
            failures.append((i, f"transport: {exc}"))
            continue
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            failures.append((i, f"malformed response: {exc}"))
            continue
        report = parse_layout_text(
            text, prompt_spec.dsl_canvas_px, source_tag=f"llm-candidate-{i}"
        )
        if not report.layout.objects:
            failures.append((i, "no parseable layout statements in response"))
            continue
        candidates.append(report.layout)
    return CandidateSet(candidates=tuple(candidates), failures=tuple(failures))
