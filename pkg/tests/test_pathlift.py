import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcheck.errors import GuardRailError
from convexcheck.network import Architecture, sample_gaussian, with_weights, build_mlp
from convexcheck.pathlift import (ActivationRestriction, subgraph_after, inner_product_fast,
                                  enumerate_paths, inner_product_explicit, count_paths,
                                  path_lifting, path_activations, full_pathlift_identity_check,
                                  two_layer_condition)

from .builders import chain
from .strategies import gaussian_networks, networks_and_points


def restriction_of(subgraph, bits):
    return ActivationRestriction(subgraph.hidden, tuple(bits))


class TestSubgraph:

    def test_after_first_layer(self, counterexample):
        subgraph = subgraph_after(counterexample, 'h1_0')
        assert subgraph.nodes == ('h1_0', 'h2_0', 'h2_1', 'out')
        assert subgraph.hidden == ('h2_0', 'h2_1')
        assert ('h1_1', 'h2_0', 1.0) not in subgraph.edges
        assert len(list(subgraph.all_restrictions())) == 4

    def test_after_last_layer(self, counterexample):
        subgraph = subgraph_after(counterexample, 'h2_1')
        assert subgraph.nodes == ('h2_1', 'out')
        assert list(subgraph.all_restrictions()) == [ActivationRestriction((), ())]

    @pytest.mark.parametrize("neuron", ['x0', 'out', 'nope'])
    def test_root_must_be_hidden(self, counterexample, neuron):
        with pytest.raises(ValueError):
            subgraph_after(counterexample, neuron)

    def test_restriction_of_pattern(self, counterexample):
        subgraph = subgraph_after(counterexample, 'h1_1')
        pattern = counterexample.pattern_from_bits([1, 0, 0, 1])
        assert subgraph.restriction(pattern) == restriction_of(subgraph, (0, 1))
        assert str(subgraph.restriction(pattern)) == '(0, 1)'


class TestFastInnerProduct:

    @pytest.mark.parametrize("bits, value", [((0, 0), 0.0), ((0, 1), 2.0), ((1, 1), 1.0),
                                             ((1, 0), -1.0)])
    def test_counterexample(self, counterexample, bits, value):
        subgraph = subgraph_after(counterexample, 'h1_0')
        assert inner_product_fast(counterexample, 'h1_0',
                                  restriction_of(subgraph, bits)) == pytest.approx(value)

    def test_last_layer_neuron_gives_outgoing_weight(self, counterexample, flipped):
        empty = ActivationRestriction((), ())
        assert inner_product_fast(counterexample, 'h2_1', empty) == pytest.approx(1.0)
        assert inner_product_fast(flipped, 'h2_1', empty) == pytest.approx(-1.0)

    def test_domain_mismatch(self, counterexample):
        with pytest.raises(ValueError):
            inner_product_fast(counterexample, 'h1_0', ActivationRestriction(('h2_0',), (1,)))

    def test_biases_are_ignored(self, counterexample):
        shifted = with_weights(counterexample, biases={'h2_0': 5.0, 'h2_1': -7.0, 'out': 3.0})
        subgraph = subgraph_after(counterexample, 'h1_0')
        for restriction in subgraph.all_restrictions():
            assert inner_product_fast(shifted, 'h1_0', restriction) == pytest.approx(
                inner_product_fast(counterexample, 'h1_0', restriction))

    @given(gaussian_networks(), st.floats(min_value=-3.0, max_value=3.0), st.data())
    @settings(max_examples=40, deadline=None)
    def test_linear_in_outgoing_weights(self, net, lam, data):
        neuron = data.draw(st.sampled_from(net.hidden))
        subgraph = subgraph_after(net, neuron)
        bits = data.draw(st.lists(st.integers(0, 1), min_size=len(subgraph.hidden),
                                  max_size=len(subgraph.hidden)))
        restriction = restriction_of(subgraph, bits)

        scaled = with_weights(net, {(neuron, s): lam * net.weight(neuron, s)
                                    for s in net.successors[neuron]})
        assert inner_product_fast(scaled, neuron, restriction) == pytest.approx(
            lam * inner_product_fast(net, neuron, restriction), rel=1e-9, abs=1e-9)


class TestPaths:

    def test_counterexample_paths(self, counterexample):
        pv = enumerate_paths(counterexample, 'h1_0')
        assert pv.paths == (('h1_0', 'h2_0', 'out'), ('h1_0', 'h2_1', 'out'))
        np.testing.assert_allclose(pv.weights, [-1.0, 2.0])

    def test_chain(self):
        net = chain([2.0, 3.0, 4.0, 5.0])
        pv = enumerate_paths(net, 'h1')
        assert pv.as_dict() == {('h1', 'h2', 'h3', 'out'): 60.0}

    def test_counts(self, counterexample):
        counts = count_paths(counterexample)
        assert counts['out'] == 1
        assert counts['h1_0'] == 2
        assert counts['x0'] == 4

    def test_guard_rail(self, counterexample):
        with pytest.raises(GuardRailError):
            enumerate_paths(counterexample, 'h1_0', max_paths=1)

    def test_explicit_extremes(self, counterexample):
        pv = enumerate_paths(counterexample, 'h1_0')
        subgraph = subgraph_after(counterexample, 'h1_0')
        assert inner_product_explicit(pv, restriction_of(subgraph, (1, 1))) == pytest.approx(
            pv.weights.sum())
        assert inner_product_explicit(pv, restriction_of(subgraph, (0, 0))) == 0.0

    def test_explicit_needs_full_domain(self, counterexample):
        pv = enumerate_paths(counterexample, 'h1_0')
        with pytest.raises(ValueError):
            inner_product_explicit(pv, ActivationRestriction(('h2_0',), (1,)))

    @given(gaussian_networks(max_layers=4), st.data())
    @settings(max_examples=500, deadline=None)
    def test_fast_matches_explicit(self, net, data):
        neuron = data.draw(st.sampled_from(net.hidden))
        subgraph = subgraph_after(net, neuron)
        bits = data.draw(st.lists(st.integers(0, 1), min_size=len(subgraph.hidden),
                                  max_size=len(subgraph.hidden)))
        restriction = restriction_of(subgraph, bits)

        explicit = inner_product_explicit(enumerate_paths(net, neuron), restriction)
        assert inner_product_fast(net, neuron, restriction, subgraph) == pytest.approx(
            explicit, rel=1e-9, abs=1e-9)


class TestPathLifting:

    def test_counterexample_identity(self, counterexample):
        lhs, rhs = full_pathlift_identity_check(counterexample, [1.0, 1.0])
        assert lhs == pytest.approx(2.5)
        assert rhs == pytest.approx(2.5)

    def test_zero_bias_network_at_origin(self):
        net = sample_gaussian(Architecture(2, (3, 2)), 4)
        net = with_weights(net, biases={n: 0.0 for n in net.biases})
        lhs, rhs = full_pathlift_identity_check(net, [0.0, 0.0])
        assert lhs == 0.0 and rhs == 0.0

    def test_lifting_layout(self, counterexample):
        lifting = path_lifting(counterexample)
        # 8 input paths (zero weights of W_1 included), 6 hidden bias paths, the output bias
        assert len(lifting) == 15
        assert lifting.paths[-1] == ('out',)
        assert lifting.sources.count('bias') == 7

        matrix = path_activations(counterexample, [1.0, 1.0], lifting)
        assert matrix.shape == (15, 3)

    @given(networks_and_points())
    @settings(max_examples=200, deadline=None)
    def test_identity(self, case):
        net, x = case
        lhs, rhs = full_pathlift_identity_check(net, x)
        assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-9)


def paths_into(net, neuron):
    """Paths from input neurons to `neuron` with their weight products."""
    if net.kinds[neuron] == 'input':
        return {(neuron,): 1.0}
    paths = {}
    for pred in net.predecessors[neuron]:
        for path, weight in paths_into(net, pred).items():
            paths[path + (neuron,)] = weight * net.weight(pred, neuron)
    return paths


class TestFactorization:

    @given(gaussian_networks(max_layers=3, max_width=3), st.data())
    @settings(max_examples=50, deadline=None)
    def test_paths_through_neuron(self, net, data):
        # input paths through v are in bijection with (paths into v) x (paths after v)
        lifting = path_lifting(net)
        assert len(lifting) <= 200

        neuron = data.draw(st.sampled_from(net.hidden))
        through = {path: value for path, value, source
                   in zip(lifting.paths, lifting.values, lifting.sources)
                   if source == 'input' and neuron in path}

        before = paths_into(net, neuron)
        after = enumerate_paths(net, neuron).as_dict()
        product = {q + r[1:]: w_q * w_r for q, w_q in before.items() for r, w_r in after.items()}

        assert set(through) == set(product)
        for path, value in through.items():
            assert value == pytest.approx(product[path], rel=1e-12, abs=1e-15)


class TestSlopeJump:

    def test_jump_across_single_switch(self, partition):
        # across a frontier of v the slope of f jumps by <a, Phi> times the slope of z_v
        net, regions, frontiers = partition
        hidden = list(net.hidden)
        for frontier in frontiers:
            neuron = frontier.neuron
            a, b = regions[frontier.region_a], regions[frontier.region_b]
            subgraph = subgraph_after(net, neuron)
            value = inner_product_fast(net, neuron, subgraph.restriction(a.pattern), subgraph)

            slopes, _ = net.hidden_forms(a.pattern.bits)
            c = slopes[hidden.index(neuron)]
            sign = 1.0 if b.pattern[neuron] == 1 else -1.0
            np.testing.assert_allclose(b.f_affine.slope - a.f_affine.slope, sign * value * c,
                                       atol=1e-9)


class TestTwoLayerClosedForm:

    @given(st.integers(min_value=0, max_value=2 ** 31 - 1),
           st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
    @settings(max_examples=30, deadline=None)
    def test_matches_fast(self, seed, n1, n2):
        net = sample_gaussian(Architecture(2, (n1, n2)), seed)
        for neuron in net.layers()[0]:
            subgraph = subgraph_after(net, neuron)
            for restriction in subgraph.all_restrictions():
                assert two_layer_condition(net, neuron, restriction) == pytest.approx(
                    inner_product_fast(net, neuron, restriction, subgraph), rel=1e-9, abs=1e-12)

    def test_rejects_deeper_networks(self):
        net = build_mlp([np.eye(2), np.eye(2), np.eye(2), [1.0, 1.0]],
                        [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], 0.0])
        subgraph = subgraph_after(net, 'h1_0')
        with pytest.raises(ValueError):
            two_layer_condition(net, 'h1_0', next(subgraph.all_restrictions()))
