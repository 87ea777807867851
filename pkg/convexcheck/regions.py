"""
    **Description**

    Polyhedral partition of a network function on an axis-aligned box.

    Every activation pattern p whose set {x in box : pattern(x) = p} has nonempty interior
    is a cell: the pattern freezes every pre-activation into an affine form, so the cell is
    the polytope cut out by one strict row per hidden neuron (sign taken from p) and the box
    rows. Cells are discovered by a breadth-first search through their facets, seeded by the
    pattern at the box center and at random points, and completed by Monte-Carlo probing.

    Two cells sharing a (d-1)-dimensional face form a frontier; its switching set holds the
    hidden neurons whose bits differ between the two cells. Frontiers with a single switching
    neuron are the isolated switches the convexity conditions are evaluated on.

    Neighbouring cells may carry the same affine form of f (a neuron switching with no
    effect on the output); `affine_pieces` merges them into maximal affine pieces.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .constants import (ZERO_TOL, MARGIN_TOL, COINCIDE_TOL, SLOPE_TOL, ORACLE_EPS,
                        MAX_INPUT_DIM, MAX_HIDDEN, N_SEEDS, N_PROBES, MAX_CROSSING_HALVINGS,
                        DEFAULT_HALFWIDTH)
from .errors import GuardRailError, DimensionError, ToleranceError, ConvexcheckWarning
from .geometry import HalfspaceSystem, strict_feasible, face_dimension_at_least
from .network import ActivationPattern
from .pathlift import subgraph_after
from .tools import info, uniform_points


@dataclass(frozen=True, eq=False)
class DomainBox:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError(f"Box bounds must be vectors of equal length. "
                             f"Given {lo.shape} and {hi.shape}")
        if not np.all(lo < hi):
            raise ValueError("Box bounds must satisfy lo < hi componentwise")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    @classmethod
    def cube(cls, halfwidth=DEFAULT_HALFWIDTH, d=2):
        if not halfwidth > 0:
            raise ValueError(f"Box half-width must be positive. Given {halfwidth}")
        return cls(np.full(d, -float(halfwidth)), np.full(d, float(halfwidth)))

    @property
    def dim(self):
        return self.lo.size

    @property
    def center(self):
        return 0.5 * (self.lo + self.hi)

    def hrep(self):
        return HalfspaceSystem.box(self.lo, self.hi, strict=True)

    def sample(self, rng, size):
        return uniform_points(rng, self.lo, self.hi, size)

    def to_dict(self):
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass(frozen=True, eq=False)
class Facet:
    """
    Facet of a cell lying on the hyperplane of `neurons` (coincident rows grouped):
    relative-interior witness, outward unit normal, and the pattern read just across it.
    """
    neurons: tuple
    witness: np.ndarray
    normal: np.ndarray
    margin: float
    neighbor: tuple = None


@dataclass(eq=False)
class Region:
    """
    Cell of the partition: activation pattern, H-representation (hidden rows first, in the
    order of `row_neurons`, then the box rows), affine form of f and an interior witness.
    """
    pattern: ActivationPattern
    hrep: HalfspaceSystem
    row_neurons: tuple
    f_affine: object
    witness: np.ndarray
    margin: float
    facets: list = field(default_factory=list)

    def contains(self, x, margin=0.0):
        return self.hrep.contains(x, margin=margin)

    @property
    def complete(self):
        """True when the pattern across every facet was resolved."""
        return all(f.neighbor is not None for f in self.facets)


class RegionList(list):
    """Cells sorted by pattern, with the completeness flag of the enumeration."""

    def __init__(self, regions=(), complete=True, box=None):
        super().__init__(regions)
        self.complete = complete
        self.box = box

    def index_of(self, pattern):
        bits = pattern.bits if isinstance(pattern, ActivationPattern) else tuple(pattern)
        for k, region in enumerate(self):
            if region.pattern.bits == bits:
                return k
        raise KeyError(bits)

    def locate(self, x, margin=0.0):
        """Index of the cell containing x in its interior, None on boundaries."""
        for k, region in enumerate(self):
            if region.contains(x, margin=margin):
                return k
        return None


@dataclass(frozen=True, eq=False)
class Frontier:
    region_a: int
    region_b: int
    switching: frozenset
    witness: np.ndarray
    normal: np.ndarray
    margin: float

    @property
    def single(self):
        return len(self.switching) == 1

    @property
    def neuron(self):
        if not self.single:
            raise ValueError("Multi-switch frontier has no single neuron")
        return next(iter(self.switching))


def region_system(net, box, bits, zero_tol=ZERO_TOL):
    """
    H-representation of the cell of pattern `bits`:
        bit 1: z > 0  <=>  <-c, x> < e,     bit 0: z < 0  <=>  <c, x> < -e.

    Neurons whose pre-activation is constant under the pattern contribute no row; the
    pattern is rejected (None) if such a constant contradicts its bit.
    """
    slopes, offsets = net.hidden_forms(bits)

    rows, rhs, neurons = [], [], []
    for k, neuron in enumerate(net.hidden):
        c, e = slopes[k], offsets[k]
        if np.max(np.abs(c), initial=0.0) <= zero_tol:
            if (e > 0.0) != bool(bits[k]):
                return None, ()
            continue
        if bits[k]:
            rows.append(-c)
            rhs.append(e)
        else:
            rows.append(c)
            rhs.append(-e)
        neurons.append(neuron)

    system = box.hrep()
    if rows:
        system = HalfspaceSystem(np.array(rows), np.array(rhs), True).stack(system)
    return system, tuple(neurons)


def _coincident_groups(A, b, tol=COINCIDE_TOL):
    # rows already unit-normalized; same hyperplane and same side
    groups, assigned = [], np.zeros(len(b), dtype=bool)
    for i in range(len(b)):
        if assigned[i]:
            continue
        same = np.max(np.abs(A - A[i]), axis=1) <= tol
        same &= np.abs(b - b[i]) <= tol * (1.0 + abs(b[i]))
        same &= ~assigned
        members = np.flatnonzero(same)
        assigned[members] = True
        groups.append(tuple(members.tolist()))
    return groups


class _CellBuilder(object):
    """Builds cells (system, witness, facets) of one network on one box."""

    def __init__(self, net, box, zero_tol, margin_tol):
        self.net = net
        self.box = box
        self.zero_tol = zero_tol
        self.margin_tol = margin_tol

    def build(self, bits):
        system, row_neurons = region_system(self.net, self.box, bits, self.zero_tol)
        if system is None:
            return None

        witness = strict_feasible(system, margin_tol=self.margin_tol)
        if witness is None:
            return None

        region = Region(pattern=self.net.pattern_from_bits(bits), hrep=system,
                        row_neurons=row_neurons, f_affine=self.net.output_form(bits),
                        witness=witness.point, margin=witness.margin)
        region.facets = self._facets(region)
        return region

    def _facets(self, region):
        norm = region.hrep.normalized()
        n_rows = len(region.row_neurons)

        facets = []
        for group in _coincident_groups(norm.A[:n_rows], norm.b[:n_rows]):
            rep = group[0]
            keep = np.setdiff1d(np.arange(len(norm)), group)
            others = HalfspaceSystem(norm.A[keep], norm.b[keep], norm.strict[keep])

            witness = strict_feasible(others, [(norm.A[rep], norm.b[rep])], self.margin_tol)
            if witness is None:
                # hyperplane touches the cell in lower dimension or outside the box
                continue

            normal = norm.A[rep].copy()
            facets.append(Facet(neurons=tuple(region.row_neurons[i] for i in group),
                                witness=witness.point, normal=normal, margin=witness.margin,
                                neighbor=self._cross(region, witness, normal)))
        return facets

    def _cross(self, region, witness, normal):
        """
        Pattern just across a facet: forward passes at witness + delta * normal and at half
        that step must agree, differ from the cell's pattern, and the facet witness must lie in
        the closure of the candidate cell. delta starts below the facet margin and is halved.
        """
        delta = 0.5 * min(witness.margin, ORACLE_EPS)
        for _ in range(MAX_CROSSING_HALVINGS):
            probes = witness.point + np.outer([delta, 0.5 * delta], normal)
            bits = self.net.hidden_preacts(probes) > 0.0
            candidate = tuple(int(b) for b in bits[0])

            if (np.array_equal(bits[0], bits[1]) and candidate != region.pattern.bits
                    and self._touches(candidate, witness.point)):
                return candidate
            delta *= 0.5

        warnings.warn(f"Unstable facet crossing from pattern {region.pattern.key} at "
                      f"{witness.point}; enumeration marked incomplete", ConvexcheckWarning)
        return None

    def _touches(self, bits, point):
        system, _ = region_system(self.net, self.box, bits, self.zero_tol)
        if system is None:
            return False
        slack = system.normalized().slack(point)
        return bool(np.all(slack >= -self.margin_tol))


def _check_guard_rails(net, box):
    if box.dim != net.dim:
        raise DimensionError(f"Box dimension {box.dim} does not match the network input "
                             f"dimension {net.dim}")
    if net.dim > MAX_INPUT_DIM:
        raise GuardRailError(f"Input dimension {net.dim} exceeds the limit {MAX_INPUT_DIM}")
    if len(net.hidden) > MAX_HIDDEN:
        raise GuardRailError(f"{len(net.hidden)} hidden neurons exceed the limit {MAX_HIDDEN}")


def _observed_patterns(net, points, zero_tol=None):
    """Distinct patterns at `points`; with zero_tol, points near a hyperplane are skipped."""
    pre = net.hidden_preacts(points)
    if zero_tol is not None:
        pre = pre[np.all(np.abs(pre) > zero_tol, axis=1)]
    return sorted({tuple(int(b) for b in row) for row in (pre > 0.0)})


def enumerate_regions(net, box, zero_tol=ZERO_TOL, margin_tol=MARGIN_TOL, seed=0,
                      n_seeds=N_SEEDS, n_probes=N_PROBES, n_jobs=1, verbose=False):
    """
    Cells of the partition of f on the open box.

    Parameters
    ----------
    :param net: Network
    :param box: DomainBox of the same dimension
    :param zero_tol: pre-activations with |z| <= zero_tol count as lying on a hyperplane
    :param margin_tol: minimum inscribed radius of a cell (and of a facet within its plane)
    :param seed: seed of the random seed points and Monte-Carlo probes
    :param n_seeds: random seed points on top of the box center
    :param n_probes: Monte-Carlo probes per completion round
    :param n_jobs: threads building the cells of a BFS wave (results merged in sorted order)
    :param verbose: print progress information

    Returns
    -------
    RegionList sorted by pattern. `complete` is False when some facet crossing could not be
    resolved or an observed pattern has no cell above margin_tol.
    """
    _check_guard_rails(net, box)

    rng = np.random.default_rng(seed)
    builder = _CellBuilder(net, box, zero_tol, margin_tol)

    seeds = np.vstack([box.center, box.sample(rng, n_seeds)])
    queue = _observed_patterns(net, seeds)

    found = {}
    complete = True
    while True:
        while queue:
            wave = sorted(set(queue) - set(found))
            queue = []
            if n_jobs > 1 and len(wave) > 1:
                cells = Parallel(n_jobs=n_jobs, backend="threading")(
                    delayed(builder.build)(bits) for bits in wave)
            else:
                cells = [builder.build(bits) for bits in wave]

            for bits, cell in zip(wave, cells):
                found[bits] = cell
                if cell is None:
                    continue
                complete = complete and cell.complete
                queue.extend(f.neighbor for f in cell.facets
                             if f.neighbor is not None and f.neighbor not in found)

        # Monte-Carlo completion: patterns seen at random points but not reached
        observed = _observed_patterns(net, box.sample(rng, n_probes))
        queue = [bits for bits in observed if bits not in found]
        if not queue:
            break
        if verbose:
            info(f"probing found {len(queue)} unreached pattern(s)")

    thin = [bits for bits, cell in found.items() if cell is None]
    observed_thin = set(thin) & set(_observed_patterns(net, box.sample(rng, n_probes), zero_tol))
    if observed_thin:
        complete = False
        warnings.warn(f"{len(observed_thin)} observed pattern(s) have no cell above the margin "
                      f"tolerance {margin_tol}", ConvexcheckWarning)

    regions = RegionList(sorted((c for c in found.values() if c is not None),
                                key=lambda r: r.pattern.bits), complete=complete, box=box)
    if verbose:
        info(f"enumerated {len(regions)} cells ({'complete' if complete else 'incomplete'})")
    return regions


def extract_frontiers(net, regions, verbose=False):
    """
    One Frontier per unordered pair of cells sharing a (d-1)-dimensional face inside the
    open box, ordered by (region_a, region_b) with region_a < region_b. The normal points
    from region_a toward region_b; the switching set holds the neurons whose bits differ.
    """
    index = {region.pattern.bits: k for k, region in enumerate(regions)}

    frontiers = {}
    for k, region in enumerate(regions):
        for facet in region.facets:
            if facet.neighbor is None:
                continue
            j = index.get(facet.neighbor)
            if j is None:
                warnings.warn(f"Facet of pattern {region.pattern.key} leads to a pattern with "
                              f"no enumerated cell", ConvexcheckWarning)
                continue

            key = (min(k, j), max(k, j))
            if key in frontiers:
                continue

            other = regions[j]
            switching = region.pattern.differs(other.pattern)
            if len(switching) > 1:
                shared = region.hrep.stack(other.hrep)
                if not face_dimension_at_least(shared, (), net.dim - 1):
                    warnings.warn(f"Dropping multi-switch contact between patterns "
                                  f"{region.pattern.key} and {other.pattern.key}: shared face "
                                  f"is not (d-1)-dimensional", ConvexcheckWarning)
                    continue

            normal = facet.normal if k == key[0] else -facet.normal
            frontiers[key] = Frontier(region_a=key[0], region_b=key[1],
                                      switching=frozenset(switching), witness=facet.witness,
                                      normal=normal, margin=facet.margin)

    result = [frontiers[key] for key in sorted(frontiers)]
    if verbose:
        multi = sum(1 for f in result if not f.single)
        info(f"extracted {len(result)} frontiers ({multi} multi-switch)")
    return result


@dataclass
class NeuronIsolation:
    """Activation data of one hidden neuron gathered on the frontiers of the box."""
    neuron: str
    restrictions: list = field(default_factory=list)
    frontiers: list = field(default_factory=list)
    degeneracies: list = field(default_factory=list)

    @property
    def never_switches(self):
        return not self.frontiers and not self.degeneracies

    @property
    def degenerate_only(self):
        return not self.frontiers and bool(self.degeneracies)


class IsolatedData(dict):
    """Maps every hidden neuron to its NeuronIsolation (hidden order)."""

    def never_switching(self):
        return [n for n, data in self.items() if data.never_switches]

    def degenerate_only(self):
        return [n for n, data in self.items() if data.degenerate_only]

    def restriction_sets(self):
        return {n: list(data.restrictions) for n, data in self.items()}


def isolated_data(net, frontiers, regions):
    """
    Activation restrictions after v observed on single-switch frontiers of every hidden
    neuron v, deduplicated and sorted; multi-switch frontiers are listed as degeneracies
    of each neuron involved. Raises ToleranceError when the two cells of a single-switch frontier
    disagree on a hidden neuron after v.
    """
    data = IsolatedData((n, NeuronIsolation(n)) for n in net.hidden)
    subgraphs = {}

    for k, frontier in enumerate(frontiers):
        if not frontier.single:
            for neuron in sorted(frontier.switching):
                data[neuron].degeneracies.append(k)
            continue

        neuron = frontier.neuron
        if neuron not in subgraphs:
            subgraphs[neuron] = subgraph_after(net, neuron)
        subgraph = subgraphs[neuron]

        side_a = subgraph.restriction(regions[frontier.region_a].pattern)
        side_b = subgraph.restriction(regions[frontier.region_b].pattern)
        if side_a != side_b:
            raise ToleranceError(f"Cells {frontier.region_a} and {frontier.region_b} disagree "
                                 f"after {neuron} although only {neuron} switches")

        data[neuron].frontiers.append(k)
        if side_a not in data[neuron].restrictions:
            data[neuron].restrictions.append(side_a)

    for entry in data.values():
        entry.restrictions.sort(key=lambda r: r.bits)
    return data


def slope_change(regions, frontier):
    """Sup-norm change of the slope of f across a frontier."""
    u_a = regions[frontier.region_a].f_affine.slope
    u_b = regions[frontier.region_b].f_affine.slope
    return float(np.max(np.abs(u_a - u_b), initial=0.0))


@dataclass(frozen=True, eq=False)
class AffinePiece:
    """Maximal union of neighbouring cells carrying the same affine form of f."""
    cells: tuple
    f_affine: object


@dataclass(frozen=True)
class PieceFrontier:
    piece_a: int
    piece_b: int
    frontiers: tuple    # indices of the cell frontiers it is made of


def affine_pieces(regions, frontiers, slope_tol=SLOPE_TOL):
    """
    Merge cells across frontiers where the slope of f does not change.

    Returns
    -------
    pieces: list of AffinePiece ordered by their first cell
    piece_frontiers: list of PieceFrontier between distinct pieces, ordered by pair
    """
    parent = list(range(len(regions)))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for frontier in frontiers:
        if slope_change(regions, frontier) <= slope_tol:
            a, b = find(frontier.region_a), find(frontier.region_b)
            if a != b:
                parent[max(a, b)] = min(a, b)

    members = {}
    for k in range(len(regions)):
        members.setdefault(find(k), []).append(k)

    roots = sorted(members)
    label = {root: i for i, root in enumerate(roots)}
    pieces = [AffinePiece(tuple(members[root]), regions[root].f_affine) for root in roots]

    pairs = {}
    for k, frontier in enumerate(frontiers):
        a, b = label[find(frontier.region_a)], label[find(frontier.region_b)]
        if a != b:
            pairs.setdefault((min(a, b), max(a, b)), []).append(k)

    piece_frontiers = [PieceFrontier(a, b, tuple(ks)) for (a, b), ks in sorted(pairs.items())]
    return pieces, piece_frontiers
