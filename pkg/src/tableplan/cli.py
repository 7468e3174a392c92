"""Command-line front end for the layout pipeline.

Subcommands cover the individual stages (prompt, candidates, complete,
score, eval, render, ground, ingest) plus two orchestrations: ``plan``
runs inventory -> candidates -> selection -> completion -> conditioning
artifacts, and ``bench`` runs a mock evaluation suite comparing first
candidate against best-of-k selection.

Exit codes: 0 on success, 1 on stage failure (with an error JSON on
stdout), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .completer import (
    DEFAULT_MEDIAN_SIZES,
    DEFAULT_TEMPLATE,
    MedianSizeTable,
    PlaceSettingTemplate,
    complete_layout,
    load_completer_config,
)
from .conditioner import (
    DEFAULT_PALETTE,
    export_grounding,
    load_palette,
    render_segmentation,
)
from .dsl import (
    DEFAULT_CANVAS_PX,
    Mode,
    PromptSpec,
    build_prompt,
    caption_from_inventory,
    mode_inventory,
)
from .evaluator import evaluate_suite, precision_recall
from .ingest import compute_median_sizes, load_labelme, record_to_layout
from .model import (
    BBox,
    DEFAULT_LABEL_SYNONYMS,
    Inventory,
    Layout,
    inventory_of,
    layout_from_json,
    layout_to_json,
    normalize_label,
    save_layout,
)
from .planner import PlannerConfig, generate_candidates, mock_plan
from .scorer import ScoreWeights, score, select_best

__all__ = [
    "build_parser",
    "default_examples",
    "main",
    "parse_inventory",
    "person_inventory",
    "run_pipeline",
]


class UsageError(ValueError):
    """Bad command-line input; reported on stderr with exit code 2."""


# ---------------------------------------------------------------------------
# Inventory phrases
# ---------------------------------------------------------------------------

_PHRASE_RE = re.compile(r"^\s*(\d+)\s+([A-Za-z][A-Za-z _]*?)\s*$")

_IRREGULAR_SINGULARS = {
    "glasses": "glass",
    "knives": "knife",
    "dishes": "dish",
}


def _singular(name: str) -> str:
    words = name.split()
    last = words[-1]
    if last in _IRREGULAR_SINGULARS:
        words[-1] = _IRREGULAR_SINGULARS[last]
    elif last.endswith("s") and not last.endswith("ss"):
        words[-1] = last[:-1]
    return " ".join(words)


def parse_inventory(text: str) -> Inventory:
    """Parse '4 plates, 4 forks, 1 large bowl' into an Inventory.

    Phrases are comma-separated '<count> <class name>' pairs. Matching is
    case-insensitive, plural forms are reduced, and common label variants
    fold onto canonical classes. Repeated classes accumulate.
    """
    counts: dict[str, int] = {}
    phrases = [p for p in text.split(",")]
    if not any(p.strip() for p in phrases):
        raise UsageError("empty inventory")
    for phrase in phrases:
        if not phrase.strip():
            continue
        match = _PHRASE_RE.match(phrase.lower())
        if match is None:
            raise UsageError(
                f"cannot parse inventory phrase {phrase.strip()!r}; "
                "expected '<count> <class>'"
            )
        count = int(match.group(1))
        if count < 1:
            raise UsageError(f"count must be at least 1 in {phrase.strip()!r}")
        label = normalize_label(_singular(" ".join(match.group(2).split())))
        label = DEFAULT_LABEL_SYNONYMS.get(label, label)
        counts[label] = counts.get(label, 0) + count
    return Inventory(counts)


def person_inventory(persons: int) -> Inventory:
    """A standard table setting for n diners, table included."""
    if persons < 1:
        raise ValueError("persons must be at least 1")
    return Inventory(
        {
            "table": 1,
            "plate": persons,
            "fork": persons,
            "knife": persons,
            "spoon": persons,
            "glass": 2 * persons,
            "bowl": persons,
        }
    )


# ---------------------------------------------------------------------------
# Few-shot examples
# ---------------------------------------------------------------------------

_EXAMPLE_SEED_BASE = 9000


def default_examples() -> list[tuple[Inventory, Layout]]:
    """Built-in few-shot set: 8 two-person and 8 four-person mock layouts.

    Deterministic, so prompts built from it are byte-stable.
    """
    examples = []
    for block, persons in enumerate((2, 4)):
        inv = person_inventory(persons)
        for i in range(8):
            layout = mock_plan(
                inv, Mode.FULL, seed=_EXAMPLE_SEED_BASE + 100 * block + i, jitter=0.02
            )
            examples.append((inv, layout))
    return examples


def load_examples_file(path: str) -> list[tuple[Inventory, Layout]]:
    """Read few-shot examples: JSON list of {"inventory": ..., "layout": ...}."""
    payload = json.loads(Path(path).read_text())
    return [
        (Inventory.from_json_dict(entry["inventory"]), layout_from_json(entry["layout"]))
        for entry in payload
    ]


def read_layout_file(path: str) -> Layout:
    """Read a layout file, unwrapping plan artifacts like selected.json.

    Accepts bare layout JSON and the {"layout": ..., "score": ...} envelopes
    the plan subcommand writes, so its outputs feed straight back into
    complete/score/render/ground.
    """
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, dict) and "objects" not in payload and isinstance(
        payload.get("layout"), dict
    ):
        payload = payload["layout"]
    return layout_from_json(payload)


# ---------------------------------------------------------------------------
# Pipeline orchestration
# ---------------------------------------------------------------------------


def run_pipeline(
    inventory: Inventory,
    out_dir: Path,
    planner_cfg: PlannerConfig,
    weights: ScoreWeights = ScoreWeights(),
    template: PlaceSettingTemplate = DEFAULT_TEMPLATE,
    sizes: MedianSizeTable = DEFAULT_MEDIAN_SIZES,
    palette=DEFAULT_PALETTE,
    render_size: int = 512,
    examples: Optional[Sequence[tuple[Inventory, Layout]]] = None,
) -> dict:
    """Inventory to conditioning artifacts in one pass.

    Candidates are scored against the mode-reduced inventory (what the
    planner was actually asked for); the selected one is completed and then
    evaluated against the full inventory. Artifacts land in ``out_dir``:
    candidates/, selected.json, completed.json, segmentation.png,
    grounding.json, caption.txt, report.json. Files are written as stages
    finish, so a failed run leaves its partial artifacts for inspection.
    """
    timings: dict[str, float] = {}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cand_dir = out_dir / "candidates"
    cand_dir.mkdir(exist_ok=True)

    spec = PromptSpec(
        query=inventory,
        examples=tuple(examples if examples is not None else default_examples()),
        mode=planner_cfg.mode,
        dsl_canvas_px=DEFAULT_CANVAS_PX,
    )

    t0 = time.perf_counter()
    candidates = generate_candidates(inventory, spec, planner_cfg)
    timings["generate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    reduced = mode_inventory(inventory, planner_cfg.mode)
    breakdowns = [score(c, reduced, weights) for c in candidates.candidates]
    for i, (layout, breakdown) in enumerate(zip(candidates.candidates, breakdowns)):
        payload = {"layout": layout_to_json(layout), "score": breakdown.to_json_dict()}
        (cand_dir / f"candidate_{i:02d}.json").write_text(
            json.dumps(payload, indent=2) + "\n"
        )
    selected, selected_score = select_best(candidates, reduced, weights)
    selected_index = list(candidates.candidates).index(selected)
    timings["select"] = time.perf_counter() - t0
    (out_dir / "selected.json").write_text(
        json.dumps(
            {
                "index": selected_index,
                "layout": layout_to_json(selected),
                "score": selected_score.to_json_dict(),
            },
            indent=2,
        )
        + "\n"
    )

    t0 = time.perf_counter()
    completed = complete_layout(selected, inventory, template, sizes)
    timings["complete"] = time.perf_counter() - t0
    save_layout(completed, out_dir / "completed.json")

    t0 = time.perf_counter()
    seg = render_segmentation(completed, render_size, palette)
    seg.save(out_dir / "segmentation.png")
    grounding = export_grounding(completed, inventory)
    grounding.save(out_dir / "grounding.json")
    (out_dir / "caption.txt").write_text(caption_from_inventory(inventory) + "\n")
    timings["condition"] = time.perf_counter() - t0

    eval_report = precision_recall(completed, inventory)
    report = {
        "inventory": inventory.to_json_dict(),
        "mode": planner_cfg.mode.value,
        "endpoint": planner_cfg.endpoint,
        "seed": planner_cfg.seed,
        "requested_candidates": planner_cfg.num_candidates,
        "failures": [list(f) for f in candidates.failures],
        "candidate_scores": [b.total for b in breakdowns],
        "selected_index": selected_index,
        "selected_score": selected_score.to_json_dict(),
        "precision": eval_report.precision,
        "recall": eval_report.recall,
        "eval": eval_report.to_json_dict(),
        "timings": timings,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return report


# ---------------------------------------------------------------------------
# Shared argument plumbing
# ---------------------------------------------------------------------------


def _add_planner_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--endpoint", default="mock",
                     help="chat-completions base URL, or 'mock' for offline planning")
    sub.add_argument("--model", default="gpt-3.5-turbo", help="model name sent to the endpoint")
    sub.add_argument("--temperature", type=float, default=0.7)
    sub.add_argument("--candidates", type=int, default=5, dest="num_candidates",
                     help="layout candidates to draw (best one is kept)")
    sub.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PLATES_ONLY.value)
    sub.add_argument("--seed", type=int, default=0, help="base seed for mock planning")
    sub.add_argument("--jitter", type=float, default=0.03,
                     help="mock plate-center jitter, unit-canvas fractions")
    sub.add_argument("--retries", type=int, default=0,
                     help="extra attempts per candidate on transport errors")
    sub.add_argument("--timeout", type=float, default=30.0, help="per-request timeout, seconds")
    sub.add_argument("--examples", help="few-shot examples JSON file")


def _add_weight_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", type=float, default=1.0, help="count-term weight")
    sub.add_argument("--beta", type=float, default=-0.5, help="overlap-term weight")
    sub.add_argument("--gamma", type=float, default=-0.3, help="boundary-term weight")


def _planner_config(args: argparse.Namespace) -> PlannerConfig:
    return PlannerConfig(
        endpoint=args.endpoint,
        model_name=args.model,
        temperature=args.temperature,
        num_candidates=args.num_candidates,
        mode=Mode(args.mode),
        request_timeout=args.timeout,
        retries=args.retries,
        seed=args.seed,
        jitter=args.jitter,
    )


def _weights(args: argparse.Namespace) -> ScoreWeights:
    return ScoreWeights(alpha=args.alpha, beta=args.beta, gamma=args.gamma)


def _completer_setup(args: argparse.Namespace) -> tuple[PlaceSettingTemplate, MedianSizeTable]:
    if getattr(args, "completer_config", None):
        return load_completer_config(args.completer_config)
    return DEFAULT_TEMPLATE, DEFAULT_MEDIAN_SIZES


def _examples_arg(args: argparse.Namespace) -> Optional[list]:
    if getattr(args, "examples", None):
        return load_examples_file(args.examples)
    return None


_CROP_RE = re.compile(r"^(\d+)x(\d+)\+(\d+)\+(\d+)$")


def _parse_crop(text: str) -> BBox:
    match = _CROP_RE.match(text)
    if match is None:
        raise UsageError(f"crop must look like 720x720+360+180, got {text!r}")
    w, h, x, y = (int(g) for g in match.groups())
    if w == 0 or h == 0:
        raise UsageError("crop must have positive size")
    return BBox(x, y, x + w, y + h)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def cmd_plan(args: argparse.Namespace) -> int:
    inventory = parse_inventory(args.inventory)
    palette = load_palette(args.palette) if args.palette else DEFAULT_PALETTE
    template, sizes = _completer_setup(args)
    report = run_pipeline(
        inventory=inventory,
        out_dir=Path(args.out),
        planner_cfg=_planner_config(args),
        weights=_weights(args),
        template=template,
        sizes=sizes,
        palette=palette,
        render_size=args.render_size,
        examples=_examples_arg(args),
    )
    print(json.dumps({k: report[k] for k in ("selected_index", "precision", "recall")}))
    return 0


def cmd_prompt(args: argparse.Namespace) -> int:
    inventory = parse_inventory(args.inventory)
    examples = _examples_arg(args) or default_examples()
    spec = PromptSpec(
        query=inventory,
        examples=tuple(examples),
        mode=Mode(args.mode),
        dsl_canvas_px=args.canvas,
    )
    print(build_prompt(spec))
    return 0


def cmd_candidates(args: argparse.Namespace) -> int:
    inventory = parse_inventory(args.inventory)
    spec = PromptSpec(
        query=inventory,
        examples=tuple(_examples_arg(args) or default_examples()),
        mode=Mode(args.mode),
        dsl_canvas_px=DEFAULT_CANVAS_PX,
    )
    result = generate_candidates(inventory, spec, _planner_config(args))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, layout in enumerate(result.candidates):
        save_layout(layout, out_dir / f"candidate_{i:02d}.json")
    (out_dir / "failures.json").write_text(
        json.dumps([list(f) for f in result.failures], indent=2) + "\n"
    )
    print(json.dumps({"written": len(result.candidates), "failed": len(result.failures)}))
    return 0


def cmd_complete(args: argparse.Namespace) -> int:
    layout = read_layout_file(args.layout)
    inventory = parse_inventory(args.inventory)
    template, sizes = _completer_setup(args)
    completed = complete_layout(layout, inventory, template, sizes)
    if args.out:
        save_layout(completed, args.out)
    else:
        print(json.dumps(layout_to_json(completed), indent=2))
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    layout = read_layout_file(args.layout)
    inventory = parse_inventory(args.inventory)
    breakdown = score(layout, inventory, _weights(args))
    print(json.dumps(breakdown.to_json_dict(), indent=2))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    generated_dir = Path(args.generated)
    reference_dir = Path(args.reference)
    cases = []
    for gen_path in sorted(generated_dir.glob("*.json")):
        generated = read_layout_file(gen_path)
        if not generated.source_tag:
            generated = Layout(
                objects=generated.objects,
                canvas_px=generated.canvas_px,
                source_tag=gen_path.stem,
            )
        ref_path = reference_dir / gen_path.name
        if not ref_path.exists():
            raise FileNotFoundError(f"no reference layout for {gen_path.name}")
        required = inventory_of(read_layout_file(ref_path))
        cases.append((generated, required))
    if not cases:
        raise FileNotFoundError(f"no layout JSON files in {generated_dir}")
    report = evaluate_suite(cases, _weights(args))
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    if args.csv_out:
        Path(args.csv_out).write_text(report.to_csv_text())
    print(f"{'case':<28} {'precision':>9} {'recall':>7} {'score':>7}")
    for case in report.cases:
        if case.error is not None:
            print(f"{case.tag:<28} error: {case.error}")
        else:
            print(
                f"{case.tag:<28} {case.precision_pct:>9.1f} "
                f"{case.recall_pct:>7.1f} {case.score_pct:>7.1f}"
            )
    if report.mean_precision_pct is not None:
        print(
            f"{'mean':<28} {report.mean_precision_pct:>9.1f} "
            f"{report.mean_recall_pct:>7.1f} {report.mean_score_pct:>7.1f}"
        )
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    layout = read_layout_file(args.layout)
    palette = load_palette(args.palette) if args.palette else DEFAULT_PALETTE
    seg = render_segmentation(layout, args.size, palette)
    seg.save(args.out)
    return 0


def cmd_ground(args: argparse.Namespace) -> int:
    layout = read_layout_file(args.layout)
    if args.inventory:
        inventory = parse_inventory(args.inventory)
    else:
        inventory = inventory_of(layout, exclude=("table",))
    spec = export_grounding(layout, inventory)
    if args.out:
        spec.save(args.out)
    else:
        print(json.dumps(spec.to_json_dict(), indent=2))
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    crop = _parse_crop(args.crop) if args.crop else None
    in_dir = Path(args.input)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    layouts = []
    paths = sorted(in_dir.glob("*.json"))
    if not paths:
        raise FileNotFoundError(f"no annotation JSON files in {in_dir}")
    for path in paths:
        record = load_labelme(path)
        layout = record_to_layout(record, crop=crop)
        layouts.append(layout)
        save_layout(layout, out_dir / path.name)
    sizes = compute_median_sizes(layouts)
    (out_dir / "median_sizes.json").write_text(
        json.dumps(sizes.to_json_dict(), indent=2) + "\n"
    )
    print(json.dumps({"ingested": len(layouts), "classes": len(sizes.sizes)}))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    weights = _weights(args)
    mode = Mode(args.mode)
    rows = []
    for persons in args.persons:
        inventory = person_inventory(persons)
        sums = {"first": [0.0, 0.0, 0.0, 0.0], "best": [0.0, 0.0, 0.0, 0.0]}
        for r in range(args.runs):
            cfg = PlannerConfig(
                endpoint="mock",
                mode=mode,
                num_candidates=args.num_candidates,
                seed=args.seed + 1000 * persons + r,
                jitter=args.jitter,
            )
            spec = PromptSpec(
                query=inventory, examples=tuple(default_examples()), mode=mode
            )
            candidates = generate_candidates(inventory, spec, cfg)
            reduced = mode_inventory(inventory, mode)
            best, _ = select_best(candidates, reduced, weights)
            for key, core in (("first", candidates.candidates[0]), ("best", best)):
                completed = complete_layout(core, inventory)
                rep = precision_recall(completed, inventory)
                sc = score(completed, inventory, weights)
                sums[key][0] += rep.precision * 100.0
                sums[key][1] += rep.recall * 100.0
                sums[key][2] += sc.total_pct
                sums[key][3] += score(core, reduced, weights).total_pct
        for key, label in (("first", "first-candidate"), ("best", f"best-of-{args.num_candidates}")):
            p, rcl, s, cs = (v / args.runs for v in sums[key])
            rows.append(
                {"approach": label, "persons": persons, "precision_pct": p,
                 "recall_pct": rcl, "score_pct": s, "core_score_pct": cs}
            )
    print(
        f"{'approach':<18} {'persons':>7} {'precision':>9} {'recall':>7} "
        f"{'score':>7} {'core score':>11}"
    )
    for row in rows:
        print(
            f"{row['approach']:<18} {row['persons']:>7} {row['precision_pct']:>9.1f} "
            f"{row['recall_pct']:>7.1f} {row['score_pct']:>7.1f} {row['core_score_pct']:>11.1f}"
        )
    if args.out:
        Path(args.out).write_text(json.dumps(rows, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tableplan",
        description="Plan table-setting layouts and export diffusion-conditioning artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("plan", help="full pipeline: inventory to conditioning artifacts")
    p.add_argument("inventory", help="e.g. '4 plates, 4 forks, 4 glasses, 1 large bowl'")
    _add_planner_flags(p)
    _add_weight_flags(p)
    p.add_argument("--out", "-o", default="plan_out", help="artifact directory")
    p.add_argument("--render-size", type=int, default=512, dest="render_size")
    p.add_argument("--palette", help="palette JSON file")
    p.add_argument("--completer-config", dest="completer_config",
                   help="template and size table JSON file")
    p.add_argument("--config", help="JSON file of flag defaults")
    p.set_defaults(func=cmd_plan)
    # kept for --config default injection; subparser defaults would win over
    # set_defaults() on the top-level parser
    parser.plan_parser = p

    p = sub.add_parser("prompt", help="print the few-shot planning prompt")
    p.add_argument("inventory")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PLATES_ONLY.value)
    p.add_argument("--canvas", type=int, default=DEFAULT_CANVAS_PX)
    p.add_argument("--examples", help="few-shot examples JSON file")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("candidates", help="generate and save layout candidates")
    p.add_argument("inventory")
    _add_planner_flags(p)
    p.add_argument("--out", "-o", default="candidates_out")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("complete", help="fill a core layout up to an inventory")
    p.add_argument("inventory")
    p.add_argument("--layout", required=True, help="core layout JSON")
    p.add_argument("--completer-config", dest="completer_config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("score", help="score a layout against an inventory")
    p.add_argument("inventory")
    p.add_argument("--layout", required=True)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="evaluate generated layouts against references")
    p.add_argument("--generated", required=True, help="directory of generated layout JSON")
    p.add_argument("--reference", required=True,
                   help="directory of reference layouts with matching filenames")
    _add_weight_flags(p)
    p.add_argument("--json", dest="json_out", help="write the report as JSON")
    p.add_argument("--csv", dest="csv_out", help="write the report as CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="render a layout to a segmentation PNG")
    p.add_argument("--layout", required=True)
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--palette")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("ground", help="export grounding JSON for a layout")
    p.add_argument("--layout", required=True)
    p.add_argument("inventory", nargs="?", default=None,
                   help="caption inventory; omitted = derive from the layout")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("ingest", help="normalize annotation JSON into layouts")
    p.add_argument("--input", required=True, help="directory of LabelMe-style JSON")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--crop", help="pixel crop as WxH+X+Y, e.g. 720x720+360+180")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("bench", help="mock-planner evaluation suite")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--persons", type=int, nargs="+", default=[2, 4])
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PLATES_ONLY.value)
    p.add_argument("--candidates", type=int, default=5, dest="num_candidates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=float, default=0.08)
    _add_weight_flags(p)
    p.add_argument("--out", help="write rows as JSON")
    p.set_defaults(func=cmd_bench)

    return parser


def _apply_config_defaults(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Let --config supply defaults that explicit flags still override."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        config_path = argv[idx + 1]
    except IndexError:
        return argv  # argparse will report the missing value
    defaults = json.loads(Path(config_path).read_text())
    renames = {"candidates": "num_candidates"}
    cleaned = {}
    for key, value in defaults.items():
        dest = key.replace("-", "_")
        cleaned[renames.get(dest, dest)] = value
    parser.plan_parser.set_defaults(**cleaned)
    return argv


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv and argv[0] == "plan":
        argv = _apply_config_defaults(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - single reporting point for stage failures
        print(
            json.dumps(
                {"error": {"stage": args.command, "type": type(exc).__name__,
                           "message": str(exc)}}
            )
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
