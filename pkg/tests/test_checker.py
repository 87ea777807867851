import json

import numpy as np
import pytest

from convexcheck.checker import (CheckOptions, ConvexityChecker, Status, check_convexity,
                                 check_necessary, make_record, screen_one_hidden_layer,
                                 verify_one_hidden_layer_theorem)
from convexcheck.network import (Architecture, sample_gaussian, sample_icnn, rescale_neuron,
                                 with_output_skip)
from convexcheck.oracle import cpwl_convex_oracle, sample_convex_oracle
from convexcheck.pathlift import ActivationRestriction
from convexcheck.regions import DomainBox

from .builders import single_relu, one_hidden_layer


def values_by_neuron(records):
    values = {}
    for record in records:
        values.setdefault(record.neuron, []).append(record.value)
    return values


class TestCounterexample:

    def test_certified_convex(self, counterexample, box3):
        report = check_convexity(counterexample, box3)
        assert report.status == Status.CONVEX
        assert report.resolved_by == 'conditions'
        assert report.assumption_holds and report.enumeration_complete
        assert report.region_count == 6
        assert report.frontier_count == 8
        assert report.cell_count == 9
        assert report.cell_frontier_count == 12
        assert report.violated == [] and report.degeneracies == []

    def test_condition_values(self, counterexample, box3):
        values = values_by_neuron(check_convexity(counterexample, box3).conditions)
        assert values['h1_0'] == pytest.approx([0.0, 2.0, 1.0])
        assert values['h1_1'] == pytest.approx([0.0, 1.0])
        assert values['h2_0'] == pytest.approx([1.0])
        assert values['h2_1'] == pytest.approx([1.0])

    def test_flipped_output_weight(self, flipped, box3):
        report = check_convexity(flipped, box3)
        assert report.status == Status.NOT_CONVEX
        assert report.resolved_by == 'conditions'
        values = values_by_neuron(report.conditions)
        assert values['h2_1'] == pytest.approx([-1.0])
        assert values['h1_0'] == pytest.approx([0.0, -2.0, -3.0])
        assert {r.neuron for r in report.violated} == {'h1_0', 'h1_1', 'h2_1'}

    def test_report_is_json(self, counterexample, box3):
        document = json.loads(json.dumps(check_convexity(counterexample, box3).to_dict()))
        assert document['status'] == 'convex'
        assert document['region_count'] == 6
        assert document['box'] == {'lo': [-3.0, -3.0], 'hi': [3.0, 3.0]}
        assert document['conditions'][0]['restriction'] == {'h2_0': 0, 'h2_1': 0}

    def test_default_box(self, counterexample):
        checker = ConvexityChecker(counterexample)
        assert checker.box.to_dict() == {'lo': [-3.0, -3.0], 'hi': [3.0, 3.0]}

    def test_cross_check(self, counterexample, flipped, box3):
        opts = CheckOptions(cross_check=True, n_pairs=2000)
        report = check_convexity(counterexample, box3, opts)
        assert report.cross_check == {'exact': True, 'sampler': True, 'monotonicity': True,
                                      'agree': True}
        assert report.oracle_cross_check is True

        report = check_convexity(flipped, box3, opts)
        assert report.cross_check['exact'] is False
        assert report.cross_check['agree'] is True

    def test_threads(self, counterexample, box3):
        serial = check_convexity(counterexample, box3)
        threaded = check_convexity(counterexample, box3, CheckOptions(n_jobs=3))
        assert [(r.neuron, r.restriction, r.value) for r in threaded.conditions] == \
            [(r.neuron, r.restriction, r.value) for r in serial.conditions]


class TestNecessaryConditions:

    def test_negative_last_layer_entry(self, box3):
        net = one_hidden_layer(np.eye(2), [0.0, 0.0], [1.0, -1.0])
        records = check_necessary(net, box3)
        assert [(r.neuron, r.satisfied) for r in records] == [('h1_0', True), ('h1_1', False)]
        assert records[1].value == pytest.approx(-1.0)

    def test_never_switching_neuron(self):
        net = single_relu(bias=10.0)
        box = DomainBox.cube(3.0, 1)
        assert check_necessary(net, box) == []

        report = check_convexity(net, box)
        assert report.status == Status.CONVEX
        assert report.vacuous_neurons == ['h']

    def test_single_relu(self):
        assert check_convexity(single_relu(), DomainBox.cube(1.0, 1)).status == Status.CONVEX
        concave = one_hidden_layer([[1.0]], [0.0], [-1.0])
        assert check_convexity(concave, DomainBox.cube(1.0, 1)).status == Status.NOT_CONVEX

    def test_marginal_values(self):
        restriction = ActivationRestriction((), ())
        record = make_record('h', restriction, -1e-12)
        assert record.satisfied and record.marginal
        record = make_record('h', restriction, -1e-6)
        assert not record.satisfied and not record.marginal
        assert not make_record('h', restriction, 0.0).marginal


class TestInvariances:

    @pytest.mark.parametrize("seed", range(8))
    def test_icnn_is_never_rejected(self, seed, box3):
        net = sample_icnn(Architecture(2, (2, 2)), seed)
        assert check_convexity(net, box3).status != Status.NOT_CONVEX

    @pytest.mark.parametrize("lam", [0.25, 3.0])
    def test_positive_rescaling(self, counterexample, box3, lam):
        before = values_by_neuron(check_convexity(counterexample, box3).conditions)
        report = check_convexity(rescale_neuron(counterexample, 'h1_0', lam), box3)
        after = values_by_neuron(report.conditions)

        assert report.status == Status.CONVEX
        assert after['h1_0'] == pytest.approx([v / lam for v in before['h1_0']])
        for neuron in ('h1_1', 'h2_0', 'h2_1'):
            assert after[neuron] == pytest.approx(before[neuron])

    @pytest.mark.parametrize("seed", range(10))
    def test_rescaling_keeps_verdict(self, seed, box3):
        rng = np.random.default_rng(seed)
        net = sample_gaussian(Architecture(2, (2, 2)), seed)
        neuron = net.hidden[rng.integers(len(net.hidden))]
        lam = float(rng.uniform(0.2, 5.0))

        before = check_convexity(net, box3)
        after = check_convexity(rescale_neuron(net, neuron, lam), box3)
        assert after.status == before.status
        assert after.region_count == before.region_count

        scaled = {(r.neuron, r.restriction): r.value for r in after.conditions}
        for record in before.conditions:
            factor = 1.0 / lam if record.neuron == neuron else 1.0
            assert scaled[(record.neuron, record.restriction)] == pytest.approx(
                factor * record.value, rel=1e-6, abs=1e-9)

    def test_output_skip_leaves_conditions(self, counterexample, box3):
        before = check_convexity(counterexample, box3)
        after = check_convexity(with_output_skip(counterexample, [0.3, -0.7]), box3)
        assert after.status == Status.CONVEX
        assert [r.value for r in after.conditions] == pytest.approx(
            [r.value for r in before.conditions])


class TestDegenerateNetworks:

    def test_affine_despite_coincident_neurons(self):
        # 2 ReLU(s) - ReLU(2 s) vanishes identically
        net = one_hidden_layer([[1.0, 1.0], [2.0, 2.0]], [0.0, 0.0], [2.0, -1.0])
        report = check_convexity(net, DomainBox.cube(1.0, 2))
        assert report.status == Status.CONVEX
        assert report.conditions == []
        assert len(report.degeneracies) == 1 and report.degeneracies[0].harmless
        assert report.degenerate_only == ['h1_0', 'h1_1']
        assert report.region_count == 1

    def test_concave_despite_coincident_neurons(self):
        # ReLU(s) - ReLU(2 s) = -ReLU(s)
        net = one_hidden_layer([[1.0, 1.0], [2.0, 2.0]], [0.0, 0.0], [1.0, -1.0])
        box = DomainBox.cube(1.0, 2)

        report = check_convexity(net, box)
        assert report.status == Status.NOT_CONVEX
        assert report.resolved_by == 'oracle'
        assert report.oracle_cross_check is False
        assert not report.assumption_holds

        report = check_convexity(net, box, CheckOptions(fallback_oracle=False))
        assert report.status == Status.INCONCLUSIVE
        assert report.resolved_by is None

    def test_opposite_neurons_give_identity(self):
        # ReLU(x) - ReLU(-x) = x
        net = one_hidden_layer([[1.0], [-1.0]], [0.0, 0.0], [1.0, -1.0])
        assert screen_one_hidden_layer(net, 10.0) == 'colinear'
        report = check_convexity(net, DomainBox.cube(1.0, 1))
        assert report.status == Status.CONVEX
        assert report.degeneracies[0].switching == ('h1_0', 'h1_1')

    def test_screens(self):
        vacuous = one_hidden_layer(np.eye(2), [20.0, 0.0], [1.0, 1.0])
        assert screen_one_hidden_layer(vacuous, 10.0) == 'vacuous'
        plain = one_hidden_layer(np.eye(2), [1.0, 0.0], [1.0, 1.0])
        assert screen_one_hidden_layer(plain, 10.0) is None


class TestOptions:

    @pytest.mark.parametrize("kwargs", [{'zero_tol': -1.0}, {'margin_tol': 0.0},
                                        {'n_jobs': 0}, {'n_pairs': 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            CheckOptions(**kwargs)

    def test_tolerances_in_report(self, counterexample, box3):
        opts = CheckOptions(decision_tol=1e-6)
        report = check_convexity(counterexample, box3, opts)
        assert report.tolerances['decision_tol'] == 1e-6


class TestOneHiddenLayerTheorem:

    def test_small_run(self):
        summary = verify_one_hidden_layer_theorem(10, seed=1)
        assert summary.ok
        assert summary.attempts >= 10
        assert summary.failures == []

    def test_invalid_trials(self):
        with pytest.raises(ValueError):
            verify_one_hidden_layer_theorem(0)

    @pytest.mark.slow
    def test_two_hundred_trials(self):
        summary = verify_one_hidden_layer_theorem(200, seed=0)
        assert summary.ok, summary.failures


@pytest.mark.slow
class TestOracleAgreement:

    def test_random_two_layer_networks(self, box3):
        arch = Architecture(2, (2, 2))
        decided = 0
        for seed in range(500):
            net = sample_gaussian(arch, seed)
            checker = ConvexityChecker(net, box3)
            status = checker.certify().status
            if status == Status.INCONCLUSIVE:
                continue
            decided += 1

            exact = cpwl_convex_oracle(checker.regions, checker.frontiers)
            assert (status == Status.CONVEX) == exact.convex, seed
            if not sample_convex_oracle(net, box3, 2000, seed=seed).convex:
                assert status == Status.NOT_CONVEX, seed
        assert decided >= 475
