"""Random triangulations of the p-gon with simple boundary: encodings,
samplers, distance machinery and scaling-limit checks."""

from .map_core import (
    CombMap,
    Disconnected,
    MalformedRotation,
    MapError,
    NotInnerVertex,
    build_map,
    dumps_record,
    from_record,
    loads_record,
    to_record,
)
from .forest import (
    CyclicForest,
    PlaneTree,
    ProcessTrace,
    contour_exploration,
    contour_function,
    cyclic_interval,
    height_function,
    ulam_harris,
)
from .blossom import (
    ArityMismatch,
    BlossomError,
    BlossomForest,
    ClosureStuck,
    InvalidBlossoming,
    NotValidlyLabeled,
    ValidLabeledForest,
    closure,
    find_vstar,
    from_valid_labeled,
    label_corners,
    successor,
    to_valid_labeled,
)
from .orient import Orientation, is_3_orientation, is_minimal, out_degree
from .sampler import (
    Bridge,
    BudgetExceeded,
    NotTypeII,
    RecursionBudgetExceeded,
    assemble_forest,
    bf_edge_darts,
    cut_root_edge,
    glue,
    rng_stream,
    sample_B,
    sample_G,
    sample_blossom_tree,
    sample_bol2,
    sample_bol2_2gon,
    sample_bol2_2gon_sizes,
    sample_bol2_sizes,
    sample_bol3,
    sample_bol3_marked,
    sample_bridge,
    sample_forest,
    seal_root_edge,
    simple_core,
    trivial_2gon,
    two_connected_core,
    unmark,
)

__version__ = "0.1.0"

__all__ = [
    "CombMap",
    "MapError",
    "MalformedRotation",
    "Disconnected",
    "NotInnerVertex",
    "build_map",
    "to_record",
    "from_record",
    "dumps_record",
    "loads_record",
    "PlaneTree",
    "CyclicForest",
    "ProcessTrace",
    "ulam_harris",
    "contour_exploration",
    "height_function",
    "contour_function",
    "cyclic_interval",
    "BlossomForest",
    "ValidLabeledForest",
    "BlossomError",
    "InvalidBlossoming",
    "ClosureStuck",
    "NotValidlyLabeled",
    "ArityMismatch",
    "label_corners",
    "successor",
    "closure",
    "find_vstar",
    "to_valid_labeled",
    "from_valid_labeled",
    "Orientation",
    "is_3_orientation",
    "is_minimal",
    "out_degree",
    "Bridge",
    "BudgetExceeded",
    "RecursionBudgetExceeded",
    "NotTypeII",
    "rng_stream",
    "sample_G",
    "sample_B",
    "sample_bridge",
    "sample_blossom_tree",
    "assemble_forest",
    "sample_forest",
    "sample_bol3_marked",
    "sample_bol3",
    "unmark",
    "trivial_2gon",
    "glue",
    "cut_root_edge",
    "seal_root_edge",
    "bf_edge_darts",
    "sample_bol2_2gon",
    "sample_bol2",
    "simple_core",
    "two_connected_core",
    "sample_bol2_2gon_sizes",
    "sample_bol2_sizes",
    "__version__",
]
