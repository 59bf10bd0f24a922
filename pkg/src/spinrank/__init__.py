"""Social Position key-user extraction for directed interaction networks."""
from .centrality import (
    CentralityScores,
    betweenness,
    closeness,
    degree,
    degree_prestige,
    influence_domain,
    proximity_prestige,
)
from .commitment import (
    ActivityMatrix,
    TimeDecayConfig,
    commitment_network,
    redistribute_inactive,
    relationship_commitment,
    time_decayed_commitment,
)
from .graph import SocialNetwork, ValidationReport, build_network, neighbors, validate_commitment
from .netgen import GenSpec, generate
from .ranking import (
    DistributionReport,
    DuplicateReport,
    Ranking,
    duplicate_stats,
    kendall,
    make_ranking,
    sp_distribution,
)
from .spin import (
    SpinConfig,
    SpinResult,
    SpVector,
    check_stop,
    iterate_once,
    spin,
    spin_edges,
    spin_hybrid,
    spin_nodes,
)

__version__ = "0.1.0"
