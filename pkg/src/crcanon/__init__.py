"""Canonical labeling of sparse graphs via color refinement and core decomposition."""
from .canon import canon, canon_fallback, canon_unicyclic
from .decompose import kernel, pendant_structure, subdivide, two_core
from .errors import (BadLambda, CountMismatch, CrCanonError, GraphError, NotATree, NotUnicyclic,
                     OddSum, ParseError, PureCycleComponent, RejectLoop, RejectRange,
                     RunawayTree, TooLarge)
from .forms import CanonicalForm
from .graph import (Graph, Multigraph, build_graph, components, cycle_graph, disjoint_union,
                    path_graph, read_edgelist, theta_graph, write_edgelist)
from .identify import graph_identifiable, uc_equivalent, unicyclic_identifiable
from .models import (ContiguousParams, attach_gw_trees, config_multigraph, degree_sequence, gnp,
                     sample_contiguous, solve_mu, subdivide_geometric)
from .refine import cr_distinguish, cr_stable
from .symmetry import (brute_force_aut, complex_part_conditions, detect_symmetries,
                       verify_group_structure)
from .trees import ahu_code, ahu_label, free_tree_canon
from .words import CircularWord, minimal_period

__all__ = [name for name in dir() if not name.startswith("_")]
