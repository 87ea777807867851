"""
    **Description**

    Convexity certificate of a DAG ReLU network on a box.

    For every hidden neuron v and every activation restriction a observed on a frontier
    where only v switches, the inner product of a with the path-lifting after v must be
    non-negative for convexity. When every frontier across which the slope of f changes is
    a single-switch frontier, the conditions are also sufficient. The checker enumerates
    the partition, evaluates all conditions and classifies the network as convex, not
    convex, or inconclusive, falling back to the exact CPWL oracle when the single-switch assumption
    fails.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .constants import (ZERO_TOL, MARGIN_TOL, DECISION_TOL, SLOPE_TOL, COLINEAR_TOL,
                        DEFAULT_HALFWIDTH, N_SEEDS, N_PROBES)
from .network import Architecture, sample_gaussian, first_layer, colinear_neurons
from .oracle import cpwl_convex_oracle, sample_convex_oracle, sample_monotonicity_oracle
from .pathlift import subgraph_after, inner_product_fast
from .regions import (DomainBox, enumerate_regions, extract_frontiers, isolated_data,
                      affine_pieces, slope_change)
from .tools import Timer, info


class Status(str, Enum):
    CONVEX = 'convex'
    NOT_CONVEX = 'not_convex'
    INCONCLUSIVE = 'inconclusive'


@dataclass(frozen=True)
class CheckOptions:
    """
    Tolerances and switches of a convexity check.

    Parameters
    ----------
    :param zero_tol: |z| <= zero_tol counts as lying on a bent hyperplane.
    :param margin_tol: minimum inscribed radius of cells and facets.
    :param decision_tol: condition values >= -decision_tol are satisfied; values in
        (-decision_tol, 0) are flagged marginal.
    :param slope_tol: sup-norm slope change below which f is affine across a frontier.
    :param seed: seed of the enumeration seeds/probes and of the sampling oracles.
    :param fallback_oracle: resolve assumption failures with the exact CPWL oracle.
    :param cross_check: run all oracles and embed their agreement in the report.
    :param n_pairs: pairs drawn by the sampling oracles when cross-checking.
    :param n_jobs: threads for region building and condition evaluation.
    """
    zero_tol: float = ZERO_TOL
    margin_tol: float = MARGIN_TOL
    decision_tol: float = DECISION_TOL
    slope_tol: float = SLOPE_TOL
    seed: int = 0
    n_seeds: int = N_SEEDS
    n_probes: int = N_PROBES
    fallback_oracle: bool = True
    cross_check: bool = False
    n_pairs: int = 10 ** 5
    n_jobs: int = 1
    verbose: bool = False

    def __post_init__(self):
        for name in ('zero_tol', 'decision_tol', 'slope_tol'):
            if not getattr(self, name) >= 0.0:
                raise ValueError(f"{name} must be non-negative. Given {getattr(self, name)}")
        if not self.margin_tol > 0.0:
            raise ValueError(f"margin_tol must be positive. Given {self.margin_tol}")
        if self.n_jobs < 1 or self.n_pairs < 1:
            raise ValueError("n_jobs and n_pairs must be positive integers")

    def tolerances(self):
        return {'zero_tol': self.zero_tol, 'margin_tol': self.margin_tol,
                'decision_tol': self.decision_tol, 'slope_tol': self.slope_tol}


@dataclass(frozen=True)
class ConditionRecord:
    neuron: str
    restriction: object
    value: float
    satisfied: bool
    marginal: bool = False

    def to_dict(self):
        return {'neuron': self.neuron, 'restriction': self.restriction.as_dict(),
                'value': self.value, 'satisfied': self.satisfied, 'marginal': self.marginal}


def make_record(neuron, restriction, value, decision_tol=DECISION_TOL):
    value = float(value)
    return ConditionRecord(neuron, restriction, value, satisfied=value >= -decision_tol,
                           marginal=-decision_tol <= value < 0.0)


@dataclass(frozen=True)
class Degeneracy:
    """Multi-switch frontier; harmless when f is affine across it."""
    frontier: int
    regions: tuple
    switching: tuple
    slope_change: float
    harmless: bool

    def to_dict(self):
        return {'frontier': self.frontier, 'regions': list(self.regions),
                'switching': list(self.switching), 'slope_change': self.slope_change,
                'harmless': self.harmless}


@dataclass
class ConvexityReport:
    status: Status
    conditions: list
    degeneracies: list
    vacuous_neurons: list
    degenerate_only: list
    assumption_holds: bool
    enumeration_complete: bool
    region_count: int
    frontier_count: int
    cell_count: int
    cell_frontier_count: int
    tolerances: dict
    box: dict
    oracle_cross_check: Optional[bool] = None
    resolved_by: Optional[str] = None
    cross_check: Optional[dict] = None

    @property
    def violated(self):
        return [c for c in self.conditions if not c.satisfied]

    @property
    def marginal(self):
        return [c for c in self.conditions if c.marginal]

    def to_dict(self):
        return {
            'status': self.status.value,
            'region_count': self.region_count,
            'frontier_count': self.frontier_count,
            'cell_count': self.cell_count,
            'cell_frontier_count': self.cell_frontier_count,
            'conditions': [c.to_dict() for c in self.conditions],
            'degeneracies': [d.to_dict() for d in self.degeneracies],
            'vacuous_neurons': list(self.vacuous_neurons),
            'degenerate_only': list(self.degenerate_only),
            'assumption_holds': self.assumption_holds,
            'enumeration_complete': self.enumeration_complete,
            'oracle_cross_check': self.oracle_cross_check,
            'resolved_by': self.resolved_by,
            'cross_check': self.cross_check,
            'tolerances': dict(self.tolerances),
            'box': self.box,
        }


class ConvexityChecker:
    """
        Partition, frontiers and isolated-switch data of a network on a box, with the
        convexity conditions and the certificate built on top of them.

        Signature
        ---------
        checker = ConvexityChecker(net, [box, options])
        report = checker.certify()

        Parameters
        ----------
        :param net: Network
        :param box: DomainBox, optional, default [-3, 3]^d
        :param options: CheckOptions, optional
    """

    def __init__(self, net, box=None, options=None):
        self.net = net
        self.box = box if box is not None else DomainBox.cube(DEFAULT_HALFWIDTH, net.dim)
        self.options = options if options is not None else CheckOptions()
        opts = self.options

        with Timer("region enumeration", verbose=opts.verbose):
            self.regions = enumerate_regions(net, self.box, zero_tol=opts.zero_tol,
                                             margin_tol=opts.margin_tol, seed=opts.seed,
                                             n_seeds=opts.n_seeds, n_probes=opts.n_probes,
                                             n_jobs=opts.n_jobs, verbose=opts.verbose)

        self.frontiers = extract_frontiers(net, self.regions, verbose=opts.verbose)
        self.isolation = isolated_data(net, self.frontiers, self.regions)
        self.pieces, self.piece_frontiers = affine_pieces(self.regions, self.frontiers,
                                                          opts.slope_tol)

        self.subgraphs = {n: subgraph_after(net, n) for n in net.hidden}
        self._conditions = None

    # ----------------------------------------------------------------------------------------------
    # Diagnostics
    # ----------------------------------------------------------------------------------------------
    def degeneracies(self):
        records = []
        for k, frontier in enumerate(self.frontiers):
            if frontier.single:
                continue
            change = slope_change(self.regions, frontier)
            records.append(Degeneracy(k, (frontier.region_a, frontier.region_b),
                                      tuple(sorted(frontier.switching)), change,
                                      harmless=change <= self.options.slope_tol))
        return records

    def assumption_holds(self):
        """Every frontier across which the slope of f changes is single-switch."""
        return all(d.harmless for d in self.degeneracies())

    def vacuous_neurons(self):
        return self.isolation.never_switching()

    def conditions(self):
        """One ConditionRecord per (neuron, distinct restriction) seen on single switches."""
        if self._conditions is not None:
            return self._conditions

        tasks = [(n, r) for n in self.net.hidden for r in self.isolation[n].restrictions]
        if self.options.n_jobs > 1 and len(tasks) > 1:
            values = Parallel(n_jobs=self.options.n_jobs, backend="threading")(
                delayed(inner_product_fast)(self.net, n, r, self.subgraphs[n]) for n, r in tasks)
        else:
            values = [inner_product_fast(self.net, n, r, self.subgraphs[n]) for n, r in tasks]

        self._conditions = [make_record(n, r, v, self.options.decision_tol)
                            for (n, r), v in zip(tasks, values)]
        return self._conditions

    def exact_oracle(self):
        return cpwl_convex_oracle(self.regions, self.frontiers)

    def oracle_cross_check(self, status):
        """Runs the exact, midpoint and monotonicity oracles and compares them to `status`."""
        opts = self.options
        exact = self.exact_oracle().convex if self.regions.complete else None
        sampler = sample_convex_oracle(self.net, self.box, opts.n_pairs, seed=opts.seed).convex
        monotone = sample_monotonicity_oracle(self.net, self.box, min(opts.n_pairs, 10 ** 4),
                                              seed=opts.seed).convex

        if status == Status.INCONCLUSIVE:
            agree = None
        elif status == Status.CONVEX:
            agree = exact is not False and sampler and monotone
        else:
            agree = exact is not True
        return {'exact': exact, 'sampler': sampler, 'monotonicity': monotone, 'agree': agree}

    # ----------------------------------------------------------------------------------------------
    # Certificate
    # ----------------------------------------------------------------------------------------------
    def certify(self):
        opts = self.options
        conditions = self.conditions()
        degeneracies = self.degeneracies()
        assumption = all(d.harmless for d in degeneracies)
        complete = self.regions.complete

        oracle_verdict = None
        resolved_by = None
        if any(not c.satisfied for c in conditions):
            status, resolved_by = Status.NOT_CONVEX, 'conditions'
        elif assumption and complete:
            status, resolved_by = Status.CONVEX, 'conditions'
        elif opts.fallback_oracle and complete:
            oracle_verdict = self.exact_oracle().convex
            status = Status.CONVEX if oracle_verdict else Status.NOT_CONVEX
            resolved_by = 'oracle'
        else:
            status = Status.INCONCLUSIVE

        cross_check = None
        if opts.cross_check:
            cross_check = self.oracle_cross_check(status)
            if oracle_verdict is None:
                oracle_verdict = cross_check['exact']

        if opts.verbose:
            info(f"status {status.value}: {len(conditions)} conditions, "
                 f"{len(degeneracies)} multi-switch frontiers, {len(self.pieces)} affine pieces")

        return ConvexityReport(status=status, conditions=conditions, degeneracies=degeneracies,
                               vacuous_neurons=self.vacuous_neurons(),
                               degenerate_only=self.isolation.degenerate_only(),
                               assumption_holds=assumption, enumeration_complete=complete,
                               region_count=len(self.pieces),
                               frontier_count=len(self.piece_frontiers),
                               cell_count=len(self.regions),
                               cell_frontier_count=len(self.frontiers),
                               tolerances=opts.tolerances(), box=self.box.to_dict(),
                               oracle_cross_check=oracle_verdict, resolved_by=resolved_by,
                               cross_check=cross_check)


def check_convexity(net, box=None, opts=None):
    """Convexity certificate (ConvexityReport) of `net` on `box`."""
    return ConvexityChecker(net, box, opts).certify()


def check_necessary(net, box=None, opts=None):
    """Condition records only; violated records prove non-convexity, no sufficiency claim."""
    return ConvexityChecker(net, box, opts).conditions()


@dataclass
class TheoremSummary:
    trials: int
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    screened_colinear: int = 0
    screened_vacuous: int = 0
    attempts: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.passed == self.trials


def screen_one_hidden_layer(net, halfwidth, tol=COLINEAR_TOL):
    """
    'colinear' if two first-layer neurons share a hyperplane, 'vacuous' if a hyperplane
    misses the cube [-halfwidth, halfwidth]^d, None if the network passes.
    """
    weights, biases = first_layer(net)
    if colinear_neurons(weights, biases, tol):
        return 'colinear'
    reach = halfwidth * np.abs(weights).sum(axis=1)
    if np.any(np.abs(biases) >= reach):
        return 'vacuous'
    return None


def verify_one_hidden_layer_theorem(trials, seed=0, d=2, width=4, halfwidth=10.0, opts=None,
                                    max_factor=20, progress=None):
    """
    A one-hidden-layer network whose neurons have pairwise non-colinear hyperplanes is convex
    iff its last layer is non-negative. Samples Gaussian networks until `trials` of them
    pass the colinearity and box screens (at most max_factor * trials draws) and compares
    the checker verdict with the sign of the last layer.
    """
    if trials < 1:
        raise ValueError(f"Number of trials must be positive. Given {trials}")

    arch = Architecture(d, (width,))
    box = DomainBox.cube(halfwidth, d)
    summary = TheoremSummary(trials)

    for attempt in range(max_factor * trials):
        if summary.passed + summary.failed + summary.inconclusive == trials:
            break
        summary.attempts += 1

        net = sample_gaussian(arch, [seed, attempt])
        screened = screen_one_hidden_layer(net, halfwidth)
        if screened == 'colinear':
            summary.screened_colinear += 1
            continue
        if screened == 'vacuous':
            summary.screened_vacuous += 1
            continue

        expected = all(net.weight(n, net.output) >= 0.0 for n in net.hidden)
        status = check_convexity(net, box, opts).status
        if status == Status.INCONCLUSIVE:
            summary.inconclusive += 1
            summary.failures.append(attempt)
        elif (status == Status.CONVEX) == expected:
            summary.passed += 1
        else:
            summary.failed += 1
            summary.failures.append(attempt)

        if progress is not None:
            progress.update(1)

    return summary
