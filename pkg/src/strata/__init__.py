"""Deterministic layout engine and analysis toolkit for historical social
networks: unconstrained force-directed layout, generation-constrained
force-layered layout, structural quality metrics, exploration queries, and
serialization for a browser viewer."""

from . import errors
from .analysis import (
    ComparisonResult,
    QualityReport,
    bridge_nodes,
    build_report,
    common_neighbors,
    compare_report,
    edge_crossings,
    layer_violation,
    most_connected,
    node_overlaps,
    snapshot_at_year,
    stress,
)
from .engine import (
    Layout,
    LayoutConfig,
    LayoutMode,
    PositionState,
    config_from_dict,
    config_to_dict,
    init_positions,
    pin,
    repulsion_bh,
    repulsion_brute,
    run,
    tick,
    unpin,
)
from .generator import GeneratorSpec, synth_family
from .layering import (
    CyclePolicy,
    HierarchySpec,
    LayerAssignment,
    assign_layers,
    co_level_clusters,
    compact_layers,
)
from .model import (
    GODPARENT_OF,
    PARENT_OF,
    SPOUSE_OF,
    GraphDataset,
    Person,
    Relation,
    Violation,
    parse_dataset,
    register_relation_kind,
    serialize_dataset,
    validate,
)
from .render import (
    StyleSpec,
    export_layout_json,
    export_trace,
    import_layout_json,
    to_svg,
)
from .rng import Lcg

__version__ = "0.1.0"
