"""Exact solvers and reductions for the Generalized Noah's Ark Problem and
Multiple-Choice Knapsack."""

from .core import (Decision, Edge, GnapInstance, ParameterProfile, PhyloTree, PreconditionError, Project,
                   WorkCapExceeded, is_ultrametric, phylo_diversity, preprocess, profile, project_list,
                   validate)
from .gnap import (gnap_auto, gnap_bruteforce, gnap_dp_budget_counts, gnap_dp_counts,
                   gnap_enumerate_budget, gnap_height1)
from .mckp import MckpInstance, mckp_auto, mckp_preprocess
from .penaltysum import PenaltySumInstance, psum_bruteforce
from .textformat import FormatError, parse_instance, render_instance

__all__ = [
    "Decision", "Edge", "GnapInstance", "ParameterProfile", "PhyloTree", "PreconditionError", "Project",
    "WorkCapExceeded", "is_ultrametric", "phylo_diversity", "preprocess", "profile", "project_list",
    "validate", "gnap_auto", "gnap_bruteforce", "gnap_dp_budget_counts", "gnap_dp_counts",
    "gnap_enumerate_budget", "gnap_height1", "MckpInstance", "mckp_auto", "mckp_preprocess",
    "PenaltySumInstance", "psum_bruteforce", "FormatError", "parse_instance", "render_instance",
]
