"""Classification toolkit for q-ary MDS codes under coordinate/symbol
permutation equivalence."""

from .core import (
    Code,
    LabeledPartition,
    MdsProfile,
    cross_distance,
    direct_sum,
    extend_with_partition,
    full_space,
    glued_sum,
    induced_partition,
    is_mds,
    load_mds,
    min_distance,
    puncture,
    read_mds,
    save_mds,
    shorten,
    write_mds,
)
from .symmetry import (
    CanonicalForm,
    Isometry,
    apply_isometry,
    canonical_form,
    encode_graph,
    find_isomorphism,
    full_group_order,
    isometry_coset,
)

__all__ = [
    "CanonicalForm",
    "Code",
    "Isometry",
    "LabeledPartition",
    "MdsProfile",
    "apply_isometry",
    "canonical_form",
    "cross_distance",
    "direct_sum",
    "encode_graph",
    "extend_with_partition",
    "find_isomorphism",
    "full_group_order",
    "full_space",
    "glued_sum",
    "induced_partition",
    "is_mds",
    "isometry_coset",
    "load_mds",
    "min_distance",
    "puncture",
    "read_mds",
    "save_mds",
    "shorten",
    "write_mds",
]

__version__ = "0.1.0"
