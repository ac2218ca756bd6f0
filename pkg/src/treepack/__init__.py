"""treepack: packing edge-disjoint tree factors into random and
pseudo-random graphs, with certifiers, oracles, and bound calculators."""

from .blowup import (
    BlowupGraph,
    PairRegularityReport,
    PermutationLayout,
    build_blowup,
    build_layout,
    certify_blowup,
    crossing_probability,
)
from .bounds import TailBound, chernoff_tail, permutation_tail
from .errors import (
    ConfigError,
    DivisibilityError,
    FormatError,
    TreepackError,
    VerificationError,
)
from .graphs import (
    Graph,
    RegularityReport,
    certify_regular,
    generate_bipartite,
    generate_gnp,
    generate_regular_bipartite,
    read_edge_list,
    write_edge_list,
)
from .labeling import (
    KappaSummary,
    LabeledFamily,
    build_labeled_family,
    kappa_report,
    kappa_value,
    r_value,
)
from .matching import (
    MatchingFamily,
    RandomPairSlack,
    fk_pseudo_target,
    fk_random_delta,
    pack_matchings,
)
from .pipeline import (
    BootstrapPlan,
    FeasibilityReport,
    LossBreakdown,
    PackingResult,
    check_feasibility,
    coverage_of,
    make_bootstrap_plan,
    pack_bootstrap,
    pack_pseudo,
    pack_random,
)
from .trees import (
    FactorVerdict,
    TFactor,
    TreeTemplate,
    ahu_isomorphic,
    assemble_factor,
    read_tree,
    verify_tfactor,
    write_tree,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupGraph",
    "BootstrapPlan",
    "ConfigError",
    "DivisibilityError",
    "FactorVerdict",
    "FeasibilityReport",
    "FormatError",
    "Graph",
    "KappaSummary",
    "LabeledFamily",
    "LossBreakdown",
    "MatchingFamily",
    "PackingResult",
    "PairRegularityReport",
    "PermutationLayout",
    "RandomPairSlack",
    "RegularityReport",
    "TFactor",
    "TailBound",
    "TreeTemplate",
    "TreepackError",
    "VerificationError",
    "ahu_isomorphic",
    "assemble_factor",
    "build_blowup",
    "build_labeled_family",
    "build_layout",
    "certify_blowup",
    "certify_regular",
    "chernoff_tail",
    "check_feasibility",
    "coverage_of",
    "crossing_probability",
    "fk_pseudo_target",
    "fk_random_delta",
    "generate_bipartite",
    "generate_gnp",
    "generate_regular_bipartite",
    "kappa_report",
    "kappa_value",
    "make_bootstrap_plan",
    "pack_bootstrap",
    "pack_matchings",
    "pack_pseudo",
    "pack_random",
    "permutation_tail",
    "r_value",
    "read_edge_list",
    "read_tree",
    "verify_tfactor",
    "write_edge_list",
    "write_tree",
]
