# Tolerances
ZERO_TOL = 1e-9         # |z| <= ZERO_TOL counts as lying on a bent hyperplane
MARGIN_TOL = 1e-7       # minimum slack of a strict interior witness (an order above LP noise)
DECISION_TOL = 1e-9     # condition values in (-DECISION_TOL, 0) are clamped satisfied
SLOPE_TOL = 1e-8        # sup-norm slope change below which f is affine across a frontier
COINCIDE_TOL = 1e-9     # normalized rows closer than this are the same hyperplane
COLINEAR_TOL = 1e-9     # colinearity screen of augmented first-layer rows
MONOTONE_TOL = 1e-10    # slack of <u_k - u_l, x_k - x_l> >= 0 in the exact oracle
MIDPOINT_TOL = 1e-9     # relative slack of the midpoint convexity sampler
RESIDUAL_TOL = 1e-9     # post-solve validation of every LP witness

# LP engine (HiGHS) feasibility tolerances, tighter than RESIDUAL_TOL
LP_FEASIBILITY_TOL = 1e-10

# Guard rails
MAX_INPUT_DIM = 16
MAX_HIDDEN = 24
MAX_PATHS = 10 ** 6

# Region enumeration
DEFAULT_HALFWIDTH = 3.0
N_SEEDS = 64            # random seed points on top of the box center
N_PROBES = 256          # Monte-Carlo probes looking for regions the BFS missed
MAX_CROSSING_HALVINGS = 40

# Exact oracle epsilon placement
ORACLE_EPS = 1e-3
MAX_BISECTIONS = 40

# Sampling oracles
SAMPLER_CHUNK = 10 ** 4
