from .network import (Network, Architecture, ActivationPattern, AffineForm, forward, linearize,
                      build_mlp, build_counterexample, sample_gaussian, sample_icnn, is_icnn)
from .regions import DomainBox, enumerate_regions, extract_frontiers, isolated_data
from .pathlift import (ActivationRestriction, subgraph_after, inner_product_fast,
                       enumerate_paths, inner_product_explicit, full_pathlift_identity_check)
from .checker import (CheckOptions, ConvexityReport, Status, check_convexity, check_necessary,
                      verify_one_hidden_layer_theorem)
from .oracle import cpwl_convex_oracle, sample_convex_oracle
from .io_tools import save_network, load_network

__version__ = "0.1.0"
