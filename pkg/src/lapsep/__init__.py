"""Normalized graph Laplacians as density matrices: separability tests,
entangling labelings and separable certificates for graph products."""

__version__ = "0.1.0"

from .constructions import (
    bipartite_entangling_labeling,
    bipartite_separable_labeling,
    entangling_labeling_general,
    entangling_labeling_max_degree,
    entangling_labeling_min_degree,
    find_entangling_labeling,
)
from .decomposition import (
    JointDecomposition,
    SeparableCertificate,
    joint_decompose,
    kron_separable_certificate,
    verify_certificate,
)
from .entanglement import (
    Verdict,
    degree_criterion,
    degree_criterion_multipartite,
    edge_count_sufficient,
    ppt_min_eigenvalue,
    verdict,
)
from .graph_core import (
    DensityMatrix,
    GeneralizedLaplacian,
    Graph,
    complement,
    degree,
    density_of,
    laplacian,
    normalize_density,
    row_sum_diag,
)
from .labeling import (
    Bipartition,
    VertexLabeling,
    apply_labeling,
    decode,
    encode,
    partial_transpose_graph,
    reduced_labelings,
)
from .products import (
    ProductMask,
    complement_mask,
    named_mask,
    product_adjacency,
    product_chain,
    product_laplacian_certificate,
)
