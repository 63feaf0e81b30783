"""Exact computations on finite coarse spaces.

Relation algebra, finitely generated coarse structures, property-C witness
checking and construction (including products), and sFCDC certificates.
"""

from .covers import (
    ConstructionError,
    EntourageSequence,
    Family,
    PropertyCWitness,
    ProviderError,
    WitnessProvider,
    WitnessReport,
    brute_force_witness,
    check_witness,
    components_witness,
    is_disjoint,
    is_uniformly_bounded,
    squares_union,
)
from .decomposition import (
    CadProvider,
    Decomposition,
    DecompositionReport,
    SfcdcCertificate,
    SfcdcReport,
    cad_to_sfcdc,
    check_decomposition,
    check_sfcdc_certificate,
    closure_class_cad_provider,
    find_decomposition,
    refine_chain,
    refine_to_partition,
)
from .products import (
    ColumnWitnessRecord,
    ProductWitnessTrace,
    array_index,
    array_position,
    column_witness,
    factor_sequences,
    monotonize,
    product_witness,
    product_witness_trace,
)
from .relations import (
    GroundSet,
    Pair,
    ProductGroundSet,
    Relation,
    product_relation,
    project,
    union_all,
)
from .spaces import (
    CoarseStructure,
    FiniteMetric,
    generate,
    max_metric_product,
    metric_entourage,
    product_structure,
    structure_from_metric,
)

__version__ = "0.1.0"

__all__ = [
    "CadProvider",
    "CoarseStructure",
    "ColumnWitnessRecord",
    "ConstructionError",
    "Decomposition",
    "DecompositionReport",
    "EntourageSequence",
    "Family",
    "FiniteMetric",
    "GroundSet",
    "Pair",
    "ProductGroundSet",
    "ProductWitnessTrace",
    "PropertyCWitness",
    "ProviderError",
    "Relation",
    "SfcdcCertificate",
    "SfcdcReport",
    "WitnessProvider",
    "WitnessReport",
    "array_index",
    "array_position",
    "brute_force_witness",
    "cad_to_sfcdc",
    "check_decomposition",
    "check_sfcdc_certificate",
    "check_witness",
    "closure_class_cad_provider",
    "column_witness",
    "components_witness",
    "factor_sequences",
    "find_decomposition",
    "generate",
    "is_disjoint",
    "is_uniformly_bounded",
    "max_metric_product",
    "metric_entourage",
    "monotonize",
    "product_relation",
    "product_structure",
    "product_witness",
    "product_witness_trace",
    "project",
    "refine_chain",
    "refine_to_partition",
    "squares_union",
    "structure_from_metric",
    "union_all",
    "__version__",
]
