"""
    **Description**

    Path-lifting of DAG ReLU networks. A path p = (p_0 -> ... -> p_k = output) carries the
    product of the weights along its edges; the network output is a scalar product between
    the vector of these products (the path-lifting, including the bias of p_0 when p_0 is a
    hidden neuron) and the path activations (products of the binary activations along the
    paths) applied to (x, 1).

    For a hidden neuron v, the subgraph after v collects the paths starting at v. The
    inner product between its path-lifting (bias of v excluded) and an activation restriction
    (activation of v excluded) is computed two ways:

    - `inner_product_fast`: a forward pass through the subgraph with every bias set to zero,
      every hidden neuron frozen to bits[mu] * t, and the scalar 1 injected at v.
    - `inner_product_explicit`: the sum over explicitly enumerated paths.
"""
from dataclasses import dataclass

import numpy as np

from .constants import MAX_PATHS
from .errors import GuardRailError, DimensionError
from .network import forward


@dataclass(frozen=True)
class ActivationRestriction:
    """Binary activations of the hidden neurons of a subgraph, its root excluded."""
    neurons: tuple
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != len(self.neurons):
            raise ValueError("Restriction must assign exactly one bit per neuron")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("Activation bits must be 0 or 1")
        object.__setattr__(self, 'neurons', tuple(self.neurons))
        object.__setattr__(self, 'bits', bits)

    def __getitem__(self, neuron):
        return self.as_dict()[neuron]

    def __lt__(self, other):
        return (self.neurons, self.bits) < (other.neurons, other.bits)

    def __len__(self):
        return len(self.bits)

    def as_dict(self):
        return dict(zip(self.neurons, self.bits))

    def __str__(self):
        return '(' + ', '.join(str(b) for b in self.bits) + ')'


@dataclass(frozen=True, eq=False)
class Subgraph:
    """
    Largest sub-DAG with `root` as its single source: nodes reachable from the root that
    reach the output, in topological order (root first, output last).
    """
    parent: object
    root: str
    nodes: tuple
    edges: tuple

    @property
    def hidden(self):
        """Hidden nodes other than the root; the domain of its activation restrictions."""
        return tuple(n for n in self.nodes[1:] if self.parent.kinds[n] == 'hidden')

    def restriction(self, pattern):
        """Restriction of a full activation pattern to the subgraph."""
        bits = pattern.as_dict()
        return ActivationRestriction(self.hidden, tuple(bits[n] for n in self.hidden))

    def all_restrictions(self):
        """Every binary assignment of the subgraph's hidden nodes (small subgraphs only)."""
        k = len(self.hidden)
        for code in range(2 ** k):
            yield ActivationRestriction(self.hidden, tuple((code >> (k - 1 - i)) & 1
                                                           for i in range(k)))


def _reachable(start, adjacency):
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for other in adjacency[node]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    return seen


def subgraph_after(net, neuron):
    """Subgraph of the paths from the hidden neuron `neuron` to the output."""
    if net.kinds.get(neuron) != 'hidden':
        raise ValueError(f"Subgraphs start at hidden neurons. Given {neuron!r}")

    forward_reach = _reachable(neuron, net.successors)
    backward_reach = _reachable(net.output, net.predecessors)
    keep = forward_reach & backward_reach

    nodes = tuple(n for n in net.order if n in keep)
    edges = tuple((s, t, w) for s, t, w in net.edges if s in keep and t in keep)
    return Subgraph(net, neuron, nodes, edges)


def _check_domain(subgraph, restriction):
    if restriction.neurons != subgraph.hidden:
        raise ValueError(f"Restriction domain {restriction.neurons} does not match the hidden "
                         f"neurons {subgraph.hidden} after {subgraph.root}")


def inner_product_fast(net, neuron, restriction, subgraph=None):
    """
    Inner product of `restriction` with the path-lifting after `neuron`, by a bias-free,
    frozen-activation forward pass injecting the value 1 at `neuron`.
    """
    subgraph = subgraph if subgraph is not None else subgraph_after(net, neuron)
    _check_domain(subgraph, restriction)

    gate = restriction.as_dict()
    members = set(subgraph.nodes)
    value = {neuron: 1.0}
    for node in subgraph.nodes[1:]:
        z = sum(net.weight(p, node) * value[p] for p in net.predecessors[node] if p in members)
        value[node] = gate.get(node, 1) * z

    return float(value[net.output])


@dataclass(frozen=True, eq=False)
class PathVector:
    """Paths (tuples of neuron ids ending at the output) with their weight products."""
    paths: tuple
    weights: np.ndarray

    def __len__(self):
        return len(self.paths)

    def as_dict(self):
        return dict(zip(self.paths, self.weights.tolist()))


def count_paths(net):
    """Number of paths from every neuron to the output (dynamic programming, reverse order)."""
    counts = {}
    for node in reversed(net.order):
        counts[node] = 1 if node == net.output else sum(counts[s] for s in net.successors[node])
    return counts


def _paths_from(net, start):
    # iterative DFS, successors visited in edge order
    stack = [(start, (start,), 1.0)]
    while stack:
        node, path, weight = stack.pop()
        if node == net.output:
            yield path, weight
            continue
        for succ in reversed(net.successors[node]):
            stack.append((succ, path + (succ,), weight * net.weight(node, succ)))


def enumerate_paths(net, neuron, max_paths=MAX_PATHS):
    """All paths from `neuron` to the output with their weight products (bias excluded)."""
    total = count_paths(net)[neuron]
    if total > max_paths:
        raise GuardRailError(f"{total} paths start at {neuron}, more than the {max_paths} "
                             f"allowed for explicit enumeration")

    paths, weights = [], []
    for path, weight in _paths_from(net, neuron):
        paths.append(path)
        weights.append(weight)
    return PathVector(tuple(paths), np.array(weights))


def inner_product_explicit(pv, restriction):
    """
    Sum over paths of (product of the restriction bits along the path, root and output
    excluded) times the path weight.
    """
    gate = restriction.as_dict()
    total = 0.0
    for path, weight in zip(pv.paths, pv.weights):
        active = 1
        for node in path[1:-1]:
            if node not in gate:
                raise ValueError(f"Restriction misses neuron {node} of path {path}")
            active *= gate[node]
        total += active * weight
    return float(total)


@dataclass(frozen=True, eq=False)
class PathLifting:
    """
    Full path-lifting Phi(theta): every path ending at the output, starting at an input
    neuron (weight product) or at a hidden/output neuron (its bias times the weight
    product, the output bias being the trivial path (output,)).
    """
    paths: tuple
    values: np.ndarray
    sources: tuple      # 'input' or 'bias' per path

    def __len__(self):
        return len(self.paths)


def path_lifting(net, max_paths=MAX_PATHS):
    counts = count_paths(net)
    starts = list(net.inputs) + list(net.hidden)
    total = sum(counts[s] for s in starts) + 1
    if total > max_paths:
        raise GuardRailError(f"Network has {total} paths, more than the {max_paths} allowed "
                             f"for explicit enumeration")

    paths, values, sources = [], [], []
    for start in starts:
        is_input = net.kinds[start] == 'input'
        scale = 1.0 if is_input else net.biases[start]
        for path, weight in _paths_from(net, start):
            paths.append(path)
            values.append(scale * weight)
            sources.append('input' if is_input else 'bias')

    paths.append((net.output,))
    values.append(net.biases[net.output])
    sources.append('bias')
    return PathLifting(tuple(paths), np.array(values), tuple(sources))


def path_activations(net, x, lifting=None):
    """
    Path-activation matrix A(x, theta) with shape (n_paths, d + 1): a path from input i
    carries the product of the activations of its hidden neurons in column i; a bias path
    carries the product of the activations of its hidden neurons (its start included) in
    the last column.
    """
    lifting = lifting if lifting is not None else path_lifting(net)
    bits = forward(net, x).pattern.as_dict()
    column = {n: i for i, n in enumerate(net.inputs)}

    matrix = np.zeros((len(lifting), net.dim + 1))
    for k, (path, source) in enumerate(zip(lifting.paths, lifting.sources)):
        active = 1
        for node in path:
            if net.kinds[node] == 'hidden':
                active *= bits[node]
        matrix[k, column[path[0]] if source == 'input' else net.dim] = active
    return matrix


def full_pathlift_identity_check(net, x, max_paths=MAX_PATHS):
    """
    Returns (lhs, rhs): the forward value f(x) and the scalar product
    <Phi(theta), A(x, theta) (x, 1)>.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != net.dim:
        raise DimensionError(f"Expecting a point of dimension {net.dim}. Given shape {x.shape}")

    lifting = path_lifting(net, max_paths)
    lhs = forward(net, x).value
    rhs = float(lifting.values @ (path_activations(net, x, lifting) @ np.append(x, 1.0)))
    return lhs, rhs


def two_layer_condition(net, neuron, restriction):
    """
    Closed form <a, w_3 * W_2[:, v]> of the condition attached to a first-layer neuron of a
    two-hidden-layer MLP; `restriction` assigns the second-layer activations.
    """
    layers = net.layers()
    if len(layers) != 2 or neuron not in layers[0]:
        raise ValueError(f"{neuron} is not a first-layer neuron of a two-hidden-layer network")

    gate = restriction.as_dict()
    total = 0.0
    for mu in layers[1]:
        if net.has_edge(neuron, mu) and net.has_edge(mu, net.output):
            total += gate.get(mu, 0) * net.weight(mu, net.output) * net.weight(neuron, mu)
    return float(total)
