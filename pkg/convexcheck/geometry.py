"""
    **Description**

    Polyhedral kit used by the region enumeration: systems of (possibly strict) linear
    inequalities, a strict-feasibility LP that maximizes the minimum slack over the strict
    rows (interior witnesses of regions and relative-interior witnesses of frontiers), and
    dimension checks for faces.

    All LPs are solved with the HiGHS engine of scipy.optimize.linprog. Every returned
    witness is substituted back into its system before it is handed out.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .constants import MARGIN_TOL, RESIDUAL_TOL, LP_FEASIBILITY_TOL, ZERO_TOL
from .errors import SolverError

HIGHS_OPTIONS = {'primal_feasibility_tolerance': LP_FEASIBILITY_TOL,
                 'dual_feasibility_tolerance': LP_FEASIBILITY_TOL,
                 'presolve': True}

# linprog status codes
_LP_SUCCESS = 0
_LP_INFEASIBLE = 2


@dataclass(frozen=True, eq=False)
class HalfspaceSystem:
    """
    Rows <a_i, x> <= b_i, strict (<) where strict[i] is True.

    Parameters
    ----------
    :param A: ndarray (m, d)
    :param b: ndarray (m,)
    :param strict: boolean ndarray (m,)
    """
    A: np.ndarray
    b: np.ndarray
    strict: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        strict = np.broadcast_to(np.asarray(self.strict, dtype=bool), b.shape).copy()

        if A.shape[0] == 0:
            raise ValueError("A halfspace system needs at least one row")
        if A.shape[0] != b.size:
            raise ValueError(f"Inconsistent shapes: A {A.shape}, b {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("Halfspace rows must have finite entries")

        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'strict', strict)

    @classmethod
    def from_rows(cls, rows):
        """Build from (a, b, strict) triples."""
        rows = list(rows)
        if not rows:
            raise ValueError("A halfspace system needs at least one row")
        A = np.array([np.asarray(a, dtype=float) for a, _, _ in rows])
        return cls(A, np.array([float(b) for _, b, _ in rows]),
                   np.array([bool(s) for _, _, s in rows]))

    @classmethod
    def box(cls, lo, hi, strict=True):
        """Rows x_i <= hi_i and -x_i <= -lo_i of an axis-aligned box."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        eye = np.eye(lo.size)
        return cls(np.vstack([eye, -eye]), np.concatenate([hi, -lo]),
                   np.full(2 * lo.size, strict))

    @property
    def dim(self):
        return self.A.shape[1]

    def __len__(self):
        return self.A.shape[0]

    def stack(self, other):
        if other.dim != self.dim:
            raise ValueError(f"Cannot stack systems of dimensions {self.dim} and {other.dim}")
        return HalfspaceSystem(np.vstack([self.A, other.A]), np.concatenate([self.b, other.b]),
                               np.concatenate([self.strict, other.strict]))

    def normalized(self):
        """Rows scaled to unit Euclidean norm (zero rows untouched)."""
        norms = np.linalg.norm(self.A, axis=1)
        scale = np.where(norms > 0.0, norms, 1.0)
        return HalfspaceSystem(self.A / scale[:, None], self.b / scale, self.strict)

    def slack(self, x):
        return self.b - self.A @ np.asarray(x, dtype=float)

    def contains(self, x, margin=0.0, tol=RESIDUAL_TOL):
        """
        True if x satisfies every strict row with slack > margin and every non-strict
        row within tol.
        """
        slack = self.slack(x)
        return bool(np.all(slack[self.strict] > margin)
                    and np.all(slack[~self.strict] >= -tol * (1.0 + np.abs(self.b[~self.strict]))))

    def has_box_rows(self):
        """True if every coordinate is bounded above and below by an axis-aligned row."""
        rows = self.normalized().A
        for i in range(self.dim):
            unit = np.zeros(self.dim)
            unit[i] = 1.0
            if not (np.any(np.all(np.abs(rows - unit) <= ZERO_TOL, axis=1))
                    and np.any(np.all(np.abs(rows + unit) <= ZERO_TOL, axis=1))):
                return False
        return True


@dataclass(frozen=True, eq=False)
class FeasibilityWitness:
    point: np.ndarray
    margin: float


def _equality_arrays(equalities, d):
    equalities = list(equalities or [])
    if not equalities:
        return np.zeros((0, d)), np.zeros(0)

    E = np.array([np.asarray(a, dtype=float) for a, _ in equalities]).reshape(-1, d)
    e = np.array([float(b) for _, b in equalities])
    return E, e


def _solve(c, A_ub, b_ub, A_eq, b_eq, bounds):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub,
                  A_eq=A_eq if A_eq.shape[0] else None,
                  b_eq=b_eq if A_eq.shape[0] else None,
                  bounds=bounds, method='highs', options=HIGHS_OPTIONS)

    if res.status == _LP_INFEASIBLE:
        return None
    if res.status != _LP_SUCCESS:
        raise SolverError(f"LP engine failed with status {res.status}: {res.message}")
    return res.x


def strict_feasible(sys, equalities=(), margin_tol=MARGIN_TOL):
    """
    Find a point maximizing the minimum slack t over the strict rows of `sys`:

        max t  s.t.  <a, x> + t <= b (strict rows), <a, x> <= b (non-strict rows),
                     <a, x> = b (equalities).

    Strict rows are normalized to unit norm beforehand, so the margin is the Euclidean
    distance of the witness to the nearest strict hyperplane.

    Parameters
    ----------
    :param sys: HalfspaceSystem, must contain the rows of a bounding box.
    :param equalities: iterable of (a, b) pairs.
    :param margin_tol: witnesses with optimal margin below this value are rejected.

    Returns
    -------
    FeasibilityWitness, or None when the strict system (with equalities) is empty, i.e.
    the optimal margin is at most margin_tol.
    """
    if not sys.has_box_rows():
        raise SolverError("Internal error: strict feasibility requires bounding box rows")

    norm = sys.normalized()
    d = norm.dim
    E, e = _equality_arrays(equalities, d)
    has_strict = bool(np.any(norm.strict))

    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.column_stack([norm.A, norm.strict.astype(float)])
    A_eq = np.column_stack([E, np.zeros(E.shape[0])])
    # without strict rows t is a dummy variable
    bounds = [(None, None)] * d + [(None, None) if has_strict else (0.0, 0.0)]

    solution = _solve(c, A_ub, norm.b, A_eq, e, bounds)
    if solution is None:
        return None

    point = solution[:d]
    if E.shape[0]:
        # project the LP point onto the equality set to remove solver drift
        correction, *_ = np.linalg.lstsq(E, E @ point - e, rcond=None)
        point = point - correction

    # validation pass on the original rows
    slack = norm.slack(point)
    scale = 1.0 + np.abs(norm.b)
    if np.any(slack[~norm.strict] < -RESIDUAL_TOL * scale[~norm.strict]):
        raise SolverError("LP witness violates a non-strict row beyond tolerance "
                          f"(worst slack {slack[~norm.strict].min():.3e})")
    if E.shape[0] and np.any(np.abs(E @ point - e) > RESIDUAL_TOL * (1.0 + np.abs(e))):
        raise SolverError("LP witness violates an equality row beyond tolerance")

    margin = float(slack[norm.strict].min()) if has_strict else np.inf
    if margin <= margin_tol:
        return None

    return FeasibilityWitness(point, margin)


def implicit_equalities(sys, equalities=(), tol=RESIDUAL_TOL):
    """
    Indices of rows of `sys` (all read as non-strict) that hold with equality on the
    whole solution set of sys + equalities. Returns None when that set is empty.

    Rows strictly satisfiable somewhere are peeled off by repeatedly maximizing the sum of
    bounded slacks of the remaining candidate rows; the candidates left when the optimum is
    zero are the implicit equalities.
    """
    norm = sys.normalized()
    d, m = norm.dim, len(norm)
    E, e = _equality_arrays(equalities, d)

    candidates = np.arange(m)
    while True:
        k = candidates.size
        slack_cols = np.zeros((m, k))
        slack_cols[candidates, np.arange(k)] = 1.0

        c = np.concatenate([np.zeros(d), -np.ones(k)])
        A_ub = np.hstack([norm.A, slack_cols])
        A_eq = np.hstack([E, np.zeros((E.shape[0], k))])
        bounds = [(None, None)] * d + [(0.0, 1.0)] * k

        solution = _solve(c, A_ub, norm.b, A_eq, e, bounds)
        if solution is None:
            return None
        if k == 0:
            return candidates

        slacks = solution[d:]
        loose = slacks > tol
        if not np.any(loose):
            return candidates
        candidates = candidates[~loose]


def face_dimension(sys, equalities=()):
    """
    Dimension of the closed polyhedron {sys rows as non-strict} ∩ {equalities};
    -1 when empty.
    """
    implicit = implicit_equalities(sys, equalities)
    if implicit is None:
        return -1

    norm = sys.normalized()
    E, _ = _equality_arrays(equalities, norm.dim)
    active = np.vstack([E, norm.A[implicit]])
    if active.shape[0] == 0:
        return norm.dim
    return norm.dim - int(np.linalg.matrix_rank(active, tol=np.sqrt(RESIDUAL_TOL)))


def face_dimension_at_least(sys, equalities, k):
    """
    True iff the closed solution set of sys + equalities contains k + 1 affinely
    independent points.
    """
    if not 0 <= k <= sys.dim:
        raise ValueError(f"Face dimension must lie in [0, {sys.dim}]. Given {k}")
    return face_dimension(sys, equalities) >= k
