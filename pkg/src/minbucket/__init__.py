"""MinBucket triangle enumeration on erased-configuration-model graphs."""
from .bounds import (
    BoundReport,
    LimitConstant,
    limit_constant,
    minbucket_bound,
    power_law_predictions,
    trivial_bound,
)
from .degrees import (
    DegreeSequence,
    DivergenceError,
    PowerLawParams,
    ReferenceDistribution,
    moment,
    power_law_sequence,
    sample_iid_degrees,
    validate_truncation,
)
from .graph import GenerationTrace, SimpleGraph, generate_chung_lu, generate_ecm, load_graph, save_graph
from .harness import ExperimentConfig, ExperimentResult, compare_bounds, run_experiment
from .triangles import (
    WorkReport,
    closed_wedge_check,
    minbucket_enumerate,
    oracle_triangles,
    trivial_enumerate,
)

__version__ = "0.1.0"
