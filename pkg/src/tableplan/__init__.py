"""Table-setting layout planning, completion, scoring, and conditioning.

The pipeline turns an object inventory ("4 plates, 4 forks, ...") into a
complete overhead table layout and the conditioning artifacts an image
generator consumes. A language model (or the offline mock) proposes plate
positions, deterministic rules fill in the rest of each place setting,
a heuristic score picks the best of several candidates, and the result
exports as a semantic segmentation map plus box-grounding JSON.
"""

from .model import (
    BBox,
    Inventory,
    Layout,
    ObjectClass,
    PlacedObject,
    Provenance,
    UNIT_BOX,
    area,
    inside_fraction,
    inventory_of,
    iou,
    layout_from_json,
    layout_to_json,
    load_layout,
    save_layout,
)
from .dsl import (
    Mode,
    ParseReport,
    PromptSpec,
    build_prompt,
    caption_from_inventory,
    mode_inventory,
    parse_layout_text,
    serialize_layout,
)
from .planner import CandidateSet, PlannerConfig, PlannerError, generate_candidates, mock_plan
from .completer import (
    DEFAULT_MEDIAN_SIZES,
    DEFAULT_TEMPLATE,
    Edge,
    MedianSizeTable,
    PlaceSettingTemplate,
    TemplateItem,
    assign_edge,
    complete_layout,
    expand_place,
)
from .scorer import (
    DEFAULT_WEIGHTS,
    ScoreBreakdown,
    ScoreWeights,
    s_boundary,
    s_count,
    s_overlap,
    score,
    select_best,
)
from .evaluator import (
    EvalReport,
    SuiteReport,
    WilcoxonResult,
    curate_examples,
    evaluate_suite,
    precision_recall,
    wilcoxon_signed_rank,
)
from .conditioner import (
    DEFAULT_PALETTE,
    GroundingSpec,
    SegmentationMap,
    export_grounding,
    render_segmentation,
)
from .ingest import (
    AnnotationRecord,
    compute_median_sizes,
    load_labelme,
    polygon_to_bbox,
    record_to_layout,
)

__version__ = "0.1.0"
