"""
    **Description**

    Data model for DAG ReLU networks. A network is a weighted directed acyclic graph of
    neurons: input neurons (identity, no bias), hidden neurons (ReLU) and a single linear
    output neuron. Every non-input neuron computes its pre-activation

        z_v(x) = sum_{u -> v} w(u -> v) * u(x) + b_v,

    where u(x) is the post-activation of u. Once the binary activation pattern
    a_v = 1[z_v > 0] of every hidden neuron is frozen, each z_v is an affine function of
    x; `linearize` returns those affine forms, in particular the slope and intercept of
    the network function on any region carrying that pattern.

    Layered multilayer perceptrons (with optional weighted input skip connections) are
    built with `build_mlp`, sampled with `sample_gaussian`, and checked against the input
    convex (ICNN) sign constraint with `is_icnn`.
"""
from collections import namedtuple
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import NetworkError, CycleError, DimensionError

KINDS = ('input', 'hidden', 'output')

# private variables for class Network
_private_vars = ['inputs', 'output', 'hidden', 'order', 'kinds', 'edges', 'biases', 'dim',
                 'predecessors', 'successors', '_weights', '_pos', '_input_pos', '_hidden_pos',
                 '_output_pos', '_is_hidden', '_bias', '_in_src', '_in_w', '_compute']

ForwardResult = namedtuple('ForwardResult', ['value', 'preacts', 'pattern'])


@dataclass(frozen=True)
class Architecture:
    """Layered MLP architecture: input dimension d, hidden widths (n_1, ..., n_{L-1})."""
    d: int
    widths: tuple
    skip: bool = False

    def __post_init__(self):
        widths = tuple(int(w) for w in self.widths)
        if int(self.d) < 1:
            raise ValueError(f'Illegal input dimension {self.d} - must be at least 1')
        if len(widths) == 0 or min(widths) < 1:
            raise ValueError(f'Illegal widths {self.widths} - need at least one layer, '
                             f'every width at least 1')
        object.__setattr__(self, 'd', int(self.d))
        object.__setattr__(self, 'widths', widths)
        object.__setattr__(self, 'skip', bool(self.skip))

    @property
    def depth(self):
        # number of affine layers L (hidden layers + output layer)
        return len(self.widths) + 1


@dataclass(frozen=True)
class ActivationPattern:
    """Binary activation of every hidden neuron, keyed by the owning network's hidden order."""
    neurons: tuple
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != len(self.neurons):
            raise ValueError("Pattern must assign exactly one bit per hidden neuron")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("Activation bits must be 0 or 1")
        object.__setattr__(self, 'neurons', tuple(self.neurons))
        object.__setattr__(self, 'bits', bits)

    def __getitem__(self, neuron):
        try:
            return self.bits[self.neurons.index(neuron)]
        except ValueError:
            raise KeyError(neuron)

    def __len__(self):
        return len(self.bits)

    def __lt__(self, other):
        return self.bits < other.bits

    def as_dict(self):
        return dict(zip(self.neurons, self.bits))

    def flip(self, *neurons):
        bits = list(self.bits)
        for neuron in neurons:
            k = self.neurons.index(neuron)
            bits[k] = 1 - bits[k]
        return ActivationPattern(self.neurons, tuple(bits))

    def differs(self, other):
        """Neurons whose bits differ between two patterns of the same network."""
        if self.neurons != other.neurons:
            raise ValueError("Patterns belong to different networks")
        return frozenset(n for n, a, b in zip(self.neurons, self.bits, other.bits) if a != b)

    @property
    def key(self):
        return ''.join(str(b) for b in self.bits)


@dataclass(frozen=True, eq=False)
class AffineForm:
    """x -> <slope, x> + offset"""
    slope: np.ndarray
    offset: float

    def __call__(self, x):
        return float(np.dot(self.slope, np.asarray(x, dtype=float)) + self.offset)


class Network(object):
    """
        Immutable weighted DAG of neurons implementing a scalar CPWL function.

        Parameters
        ----------
        :param neurons: iterable of (id, kind) pairs, kind in {'input', 'hidden', 'output'}.
            Ids are strings, unique within the network.
        :param edges: iterable of (src, dst, weight) triples.
        :param biases: mapping id -> bias for hidden and output neurons (missing -> 0).
        :param inputs: ordered input ids defining the coordinates of x. Defaults to the
            input neurons in the order they are listed.
    """

    def __setattr__(self, key, val):
        """
        prevent modification of read-only instance variables.
        """
        if key in self.__dict__ and key in _private_vars:
            raise AttributeError('Attempt to rebind read-only instance variable ' + key)
        else:
            self.__dict__[key] = val

    def __delattr__(self, key):
        """
        prevent deletion of read-only instance variables.
        """
        if key in self.__dict__ and key in _private_vars:
            raise AttributeError('Attempt to unbind read-only instance variable ' + key)
        else:
            del self.__dict__[key]

    def __init__(self, neurons, edges, biases=None, inputs=None):

        kinds = {}
        listed = []
        for item in neurons:
            neuron_id, kind = item
            if not isinstance(neuron_id, str):
                raise NetworkError(f"Neuron ids must be strings. Given {neuron_id!r}")
            if kind not in KINDS:
                raise NetworkError(f"Unknown kind '{kind}' for neuron {neuron_id} - "
                                   f"must be one of {KINDS}")
            if neuron_id in kinds:
                raise NetworkError(f"Duplicate neuron id {neuron_id}")
            kinds[neuron_id] = kind
            listed.append(neuron_id)

        outputs = [n for n in listed if kinds[n] == 'output']
        if len(outputs) != 1:
            raise NetworkError(f"Expecting exactly one output neuron, found {len(outputs)}")

        input_ids = [n for n in listed if kinds[n] == 'input']
        if inputs is None:
            inputs = input_ids
        inputs = tuple(inputs)
        if not all(isinstance(n, str) for n in inputs):
            raise NetworkError(f"Input ids must be strings. Given {list(inputs)!r}")
        if len(inputs) == 0:
            raise NetworkError("A network needs at least one input neuron")
        if len(set(inputs)) != len(inputs) or set(inputs) != set(input_ids):
            raise NetworkError("Input order must list every input neuron exactly once")

        # edges: endpoints, direction, duplicates and finiteness
        weights = {}
        edge_list = []
        for src, dst, w in edges:
            if not isinstance(src, str) or not isinstance(dst, str):
                raise NetworkError(f"Edge endpoints must be neuron ids. Given ({src!r}, {dst!r})")
            if src not in kinds or dst not in kinds:
                raise NetworkError(f"Edge ({src}, {dst}) references an unknown neuron")
            if src == dst:
                raise CycleError(f"Self loop on neuron {src}")
            if kinds[dst] == 'input':
                raise NetworkError(f"Edge ({src}, {dst}) enters an input neuron")
            if kinds[src] == 'output':
                raise NetworkError(f"Edge ({src}, {dst}) leaves the output neuron")
            if (src, dst) in weights:
                raise NetworkError(f"Duplicate edge ({src}, {dst})")
            if isinstance(w, bool) or not np.isfinite(float(w)):
                raise NetworkError(f"Edge ({src}, {dst}) has an invalid weight {w!r}")
            weights[(src, dst)] = float(w)
            edge_list.append((src, dst, float(w)))

        biases = dict(biases or {})
        for neuron_id, bias in biases.items():
            if neuron_id not in kinds:
                raise NetworkError(f"Bias given for unknown neuron {neuron_id}")
            if kinds[neuron_id] == 'input':
                raise NetworkError(f"Input neuron {neuron_id} cannot carry a bias")
            if isinstance(bias, bool) or not np.isfinite(float(bias)):
                raise NetworkError(f"Neuron {neuron_id} has an invalid bias {bias!r}")
        biases = {n: float(biases.get(n, 0.0)) for n in listed if kinds[n] != 'input'}

        predecessors = {n: [] for n in listed}
        successors = {n: [] for n in listed}
        for src, dst, _ in edge_list:
            predecessors[dst].append(src)
            successors[src].append(dst)

        order = _topological_order(listed, predecessors, successors)

        # every hidden neuron must lie on an input -> output path
        from_inputs = _reachable(inputs, successors)
        to_output = _reachable(outputs, predecessors)
        dead = [n for n in listed if kinds[n] == 'hidden'
                and (n not in from_inputs or n not in to_output)]
        if dead:
            raise NetworkError(f"Dead hidden neurons (not on any input-output path): {dead}")

        self.inputs = inputs
        self.output = outputs[0]
        self.order = order
        self.hidden = tuple(n for n in order if kinds[n] == 'hidden')
        self.kinds = MappingProxyType(kinds)
        self.edges = tuple(edge_list)
        self.biases = MappingProxyType(biases)
        self.dim = len(inputs)

        self.predecessors = MappingProxyType({n: tuple(p) for n, p in predecessors.items()})
        self.successors = MappingProxyType({n: tuple(s) for n, s in successors.items()})
        self._weights = MappingProxyType(weights)

        # ------------------------------------------------------------------------------------------
        # Dense bookkeeping in topological order for vectorized evaluations
        # ------------------------------------------------------------------------------------------
        pos = {n: k for k, n in enumerate(order)}
        self._pos = MappingProxyType(pos)
        self._input_pos = _read_only([pos[n] for n in inputs], int)
        self._hidden_pos = _read_only([pos[n] for n in self.hidden], int)
        self._output_pos = pos[self.output]
        self._is_hidden = _read_only([self.activation(n) == 'relu' for n in order], bool)
        self._bias = _read_only([biases.get(n, 0.0) for n in order], float)
        self._in_src = tuple(_read_only([pos[p] for p in predecessors[n]], int)
                             for n in order)
        self._in_w = tuple(_read_only([weights[(p, n)] for p in predecessors[n]], float)
                           for n in order)
        self._compute = tuple(pos[n] for n in order if kinds[n] != 'input')

    # ----------------------------------------------------------------------------------------------
    # Structural queries
    # ----------------------------------------------------------------------------------------------
    def __repr__(self):
        return (f"Network(d={self.dim}, hidden={len(self.hidden)}, "
                f"edges={len(self.edges)}, output='{self.output}')")

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (dict(self.kinds) == dict(other.kinds) and self.inputs == other.inputs
                and dict(self._weights) == dict(other._weights)
                and dict(self.biases) == dict(other.biases))

    __hash__ = None

    @property
    def neurons(self):
        """(id, kind) pairs in topological order."""
        return tuple((n, self.kinds[n]) for n in self.order)

    def activation(self, neuron):
        """'relu' for hidden neurons, 'linear' for inputs and the output."""
        return 'relu' if self.kinds[neuron] == 'hidden' else 'linear'

    def weight(self, src, dst):
        return self._weights[(src, dst)]

    def has_edge(self, src, dst):
        return (src, dst) in self._weights

    def depths(self):
        """
        Longest-path layering: inputs at depth 0, every other neuron one past its deepest
        predecessor.
        """
        depth = {}
        for n in self.order:
            preds = self.predecessors[n]
            depth[n] = 0 if self.kinds[n] == 'input' else 1 + max(
                (depth[p] for p in preds), default=0)
        return depth

    def layers(self):
        """
        Hidden layers (N_1, ..., N_{L-1}) of a layered network: every edge leaving a hidden
        neuron must enter the next layer. Input neurons may feed any layer (weighted input
        skip connections). Raises NetworkError for non-layerable DAGs.
        """
        depth = self.depths()
        for src, dst, _ in self.edges:
            if self.kinds[src] == 'hidden' and depth[dst] != depth[src] + 1:
                raise NetworkError(f"Network is not layered: edge ({src}, {dst}) jumps from "
                                   f"layer {depth[src]} to layer {depth[dst]}")

        n_layers = depth[self.output]
        return [tuple(n for n in self.hidden if depth[n] == ell) for ell in range(1, n_layers)]

    def check_pattern(self, pattern):
        if not isinstance(pattern, ActivationPattern) or pattern.neurons != self.hidden:
            raise ValueError("Activation pattern does not cover exactly the hidden neurons "
                             "of this network")

    def pattern_from_bits(self, bits):
        return ActivationPattern(self.hidden, tuple(int(b) for b in bits))

    # ----------------------------------------------------------------------------------------------
    # Vectorized evaluations
    # ----------------------------------------------------------------------------------------------
    def propagate(self, points):
        """
        Exact forward pass for a batch of points with shape (m, d).

        Returns
        -------
        pre: ndarray (m, n) pre-activations in topological order (inputs carry x).
        post: ndarray (m, n) post-activations.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[-1] != self.dim:
            raise DimensionError(f"Expecting points of dimension {self.dim}. "
                                 f"Given shape {points.shape}")

        m, n = points.shape[0], len(self.order)
        pre = np.zeros((m, n))
        post = np.zeros((m, n))
        pre[:, self._input_pos] = points
        post[:, self._input_pos] = points

        for j in self._compute:
            z = post[:, self._in_src[j]] @ self._in_w[j] + self._bias[j]
            pre[:, j] = z
            post[:, j] = np.maximum(z, 0.0) if self._is_hidden[j] else z

        return pre, post

    def evaluate(self, points):
        """Network output for a batch of points (m, d) -> (m,)"""
        _, post = self.propagate(points)
        return post[:, self._output_pos]

    def hidden_preacts(self, points):
        """Pre-activations of hidden neurons (m, n_hidden) in hidden order."""
        pre, _ = self.propagate(points)
        return pre[:, self._hidden_pos]

    def linear_forms(self, bits):
        """
        Pre-activation affine forms of every neuron once hidden activations are frozen to
        `bits` (hidden order): ReLU(t) is replaced by bits[v] * t.

        Returns
        -------
        slopes: ndarray (n, d), offsets: ndarray (n,) in topological order.
        """
        bits = np.asarray(bits, dtype=float)
        n, d = len(self.order), self.dim

        pre_s = np.zeros((n, d))
        pre_c = np.zeros(n)
        pre_s[self._input_pos, np.arange(d)] = 1.0

        gate = np.ones(n)
        gate[self._hidden_pos] = bits

        post_s = pre_s.copy()
        post_c = np.zeros(n)
        for j in self._compute:
            src, w = self._in_src[j], self._in_w[j]
            pre_s[j] = w @ post_s[src]
            pre_c[j] = w @ post_c[src] + self._bias[j]
            post_s[j] = gate[j] * pre_s[j]
            post_c[j] = gate[j] * pre_c[j]

        return pre_s, pre_c

    def hidden_forms(self, bits):
        """Affine forms (slopes (n_hidden, d), offsets) of the hidden pre-activations."""
        slopes, offsets = self.linear_forms(bits)
        return slopes[self._hidden_pos], offsets[self._hidden_pos]

    def output_form(self, bits):
        slopes, offsets = self.linear_forms(bits)
        return AffineForm(slopes[self._output_pos].copy(), float(offsets[self._output_pos]))

    def components(self):
        """(neurons, edges, biases, inputs) suitable to rebuild an equal network."""
        return (list(self.neurons), list(self.edges), dict(self.biases), list(self.inputs))


def _read_only(values, dtype):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def _topological_order(listed, predecessors, successors):
    # Kahn's algorithm; ties broken by listing order for reproducibility
    rank = {n: k for k, n in enumerate(listed)}
    indegree = {n: len(predecessors[n]) for n in listed}
    ready = sorted((n for n in listed if indegree[n] == 0), key=rank.get)

    order = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        released = []
        for m in successors[n]:
            indegree[m] -= 1
            if indegree[m] == 0:
                released.append(m)
        ready = sorted(ready + released, key=rank.get)

    if len(order) != len(listed):
        stuck = [n for n in listed if indegree[n] > 0]
        raise CycleError(f"Edge relation contains a cycle through {stuck}")

    return tuple(order)


def _reachable(sources, adjacency):
    seen = set(sources)
    stack = list(sources)
    while stack:
        n = stack.pop()
        for m in adjacency[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return seen


# --------------------------------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------------------------------
def forward(net, x):
    """
    Exact forward evaluation at a single point.

    Returns
    -------
    ForwardResult(value, preacts, pattern): the output f(x), the pre-activation of every
    hidden and output neuron, and the activation pattern (bit 1 iff z > 0).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != net.dim:
        raise DimensionError(f"Expecting a point of dimension {net.dim}. Given shape {x.shape}")

    pre, post = net.propagate(x[None, :])
    pre = pre[0]

    preacts = {n: float(pre[net._pos[n]]) for n in net.order if net.kinds[n] != 'input'}
    pattern = net.pattern_from_bits(pre[net._hidden_pos] > 0.0)

    return ForwardResult(float(post[0, net._output_pos]), preacts, pattern)


def linearize(net, pattern):
    """
    Affine form of the pre-activation of every neuron (inputs: x_i) under a frozen
    activation pattern. The output form is the slope/intercept of f on any region
    carrying this pattern.
    """
    net.check_pattern(pattern)
    slopes, offsets = net.linear_forms(pattern.bits)
    return {n: AffineForm(slopes[k].copy(), float(offsets[k])) for k, n in enumerate(net.order)}


# --------------------------------------------------------------------------------------------------
# Constructors and samplers
# --------------------------------------------------------------------------------------------------
def input_id(i):
    return f"x{i}"


def hidden_id(layer, i):
    return f"h{layer}_{i}"


OUTPUT_ID = "out"


def build_mlp(weights, biases, skips=None):
    """
    Build a layered MLP f(x) = w_L^T y_{L-1} + b_L (+ v_L^T x), y_l = ReLU(W_l y_{l-1} + b_l
    (+ V_l x)), y_0 = x.

    Parameters
    ----------
    :param weights: list [W_1 (n_1, d), ..., W_{L-1}, w_L (n_{L-1},)].
    :param biases: list [b_1 (n_1,), ..., b_{L-1}, b_L (scalar)].
    :param skips: optional dict {l: V_l} of weighted input skip connections for
        2 <= l <= L; V_l has shape (n_l, d) (or (d,) for the output layer).
    """
    if len(weights) != len(biases) or len(weights) < 2:
        raise ValueError("Expecting one weight matrix and one bias vector per layer, "
                         "with at least one hidden layer")

    mats = [np.atleast_2d(np.asarray(w, dtype=float)) for w in weights]
    vecs = [np.atleast_1d(np.asarray(b, dtype=float)) for b in biases]
    skips = {int(ell): np.atleast_2d(np.asarray(v, dtype=float))
             for ell, v in (skips or {}).items()}

    d = mats[0].shape[1]
    n_layers = len(mats)
    if mats[-1].shape[0] != 1 or vecs[-1].size != 1:
        raise ValueError("The output layer must have width 1")

    neurons = [(input_id(i), 'input') for i in range(d)]
    previous = [input_id(i) for i in range(d)]
    edges, bias_map = [], {}

    for ell, (mat, vec) in enumerate(zip(mats, vecs), start=1):
        if mat.shape[1] != len(previous) or vec.size != mat.shape[0]:
            raise ValueError(f"Inconsistent shapes at layer {ell}: W {mat.shape}, "
                             f"b {vec.shape}, previous width {len(previous)}")

        if ell == n_layers:
            current = [OUTPUT_ID]
            neurons.append((OUTPUT_ID, 'output'))
        else:
            current = [hidden_id(ell, i) for i in range(mat.shape[0])]
            neurons.extend((n, 'hidden') for n in current)

        for i, dst in enumerate(current):
            bias_map[dst] = float(vec[i])
            edges.extend((src, dst, float(mat[i, j])) for j, src in enumerate(previous))

        if ell in skips:
            if ell < 2:
                raise ValueError("Skip connections start at layer 2 (W_1 already sees x)")
            v = skips[ell]
            if v.shape != (len(current), d):
                raise ValueError(f"Skip matrix of layer {ell} must have shape "
                                 f"{(len(current), d)}. Given {v.shape}")
            for i, dst in enumerate(current):
                edges.extend((input_id(j), dst, float(v[i, j])) for j in range(d))

        previous = current

    unknown = set(skips) - set(range(2, n_layers + 1))
    if unknown:
        raise ValueError(f"Skip connections given for unknown layers {sorted(unknown)}")

    return Network(neurons, edges, bias_map, inputs=[input_id(i) for i in range(d)])


def build_counterexample():
    """
    Convex 2-2-2-1 standard MLP that no ICNN with the same architecture implements:

        f(x) = (1 1) ReLU( [[-1, 1], [2, 1]] ReLU(x) + (-1, -0.5) ).
    """
    return build_mlp(weights=[np.eye(2), [[-1.0, 1.0], [2.0, 1.0]], [1.0, 1.0]],
                     biases=[[0.0, 0.0], [-1.0, -0.5], 0.0])


def _gaussian_layers(arch, rng):
    dims = (arch.d,) + arch.widths + (1,)
    weights, biases, skips = [], [], {}
    for ell in range(1, arch.depth + 1):
        n_out, n_in = dims[ell], dims[ell - 1]
        weights.append(rng.standard_normal((n_out, n_in)))
        biases.append(rng.standard_normal(n_out))
        if arch.skip and ell >= 2:
            skips[ell] = rng.standard_normal((n_out, arch.d))
    return weights, biases, skips


def sample_gaussian(arch, seed):
    """
    Layered MLP with i.i.d. standard normal weights and biases. `seed` is anything
    numpy.random.default_rng accepts (an integer or a sequence of integers).
    """
    rng = np.random.default_rng(seed)
    weights, biases, skips = _gaussian_layers(arch, rng)
    return build_mlp(weights, biases, skips)


def sample_icnn(arch, seed):
    """
    Gaussian sample folded onto the ICNN constraint: hidden-to-hidden and hidden-to-output
    weights replaced by their absolute values; W_1, skips and biases unconstrained.
    """
    rng = np.random.default_rng(seed)
    weights, biases, skips = _gaussian_layers(arch, rng)
    weights = [weights[0]] + [np.abs(w) for w in weights[1:]]
    return build_mlp(weights, biases, skips)


def is_icnn(net):
    """
    True iff every weight leaving a hidden neuron is non-negative (W_2, ..., W_{L-1}, w_L).
    No constraint on W_1, input skip connections or biases. Raises NetworkError when the
    DAG is not layered.
    """
    net.layers()
    return all(w >= 0.0 for src, _, w in net.edges if net.kinds[src] == 'hidden')


# --------------------------------------------------------------------------------------------------
# Parameter transformations
# --------------------------------------------------------------------------------------------------
def with_weights(net, weights=None, biases=None):
    """
    Copy of `net` with some edge weights and/or biases replaced.

    :param weights: mapping (src, dst) -> weight, edges must exist.
    :param biases: mapping neuron -> bias.
    """
    neurons, edges, bias_map, inputs = net.components()
    weights = dict(weights or {})

    missing = [key for key in weights if not net.has_edge(*key)]
    if missing:
        raise NetworkError(f"Cannot replace weights of missing edges {missing}")

    edges = [(s, t, float(weights.get((s, t), w))) for s, t, w in edges]
    bias_map.update({n: float(b) for n, b in (biases or {}).items()})
    return Network(neurons, edges, bias_map, inputs)


def rescale_neuron(net, neuron, lam):
    """
    Positive rescaling: incoming weights and bias of a hidden neuron times lam, outgoing
    weights divided by lam. The implemented function is unchanged.
    """
    if net.kinds.get(neuron) != 'hidden':
        raise ValueError(f"Only hidden neurons can be rescaled. Given {neuron}")
    if not lam > 0:
        raise ValueError(f"Rescaling factor must be positive. Given {lam}")

    weights = {(p, neuron): lam * net.weight(p, neuron) for p in net.predecessors[neuron]}
    weights.update({(neuron, s): net.weight(neuron, s) / lam for s in net.successors[neuron]})
    return with_weights(net, weights, {neuron: lam * net.biases[neuron]})


def with_output_skip(net, v):
    """Adds the linear term <v, x> to the output through input -> output edges."""
    v = np.asarray(v, dtype=float)
    if v.shape != (net.dim,):
        raise DimensionError(f"Skip vector must have shape ({net.dim},). Given {v.shape}")

    neurons, edges, bias_map, inputs = net.components()
    extra = dict(zip(net.inputs, v))
    edges = [(s, t, w + extra.pop(s) if t == net.output and s in extra else w)
             for s, t, w in edges]
    edges.extend((s, net.output, float(w)) for s, w in extra.items())
    return Network(neurons, edges, bias_map, inputs)


def colinear_neurons(weights, biases, tol):
    """
    Pairs (i, j) of first-layer neurons whose augmented rows (W_1[i], b_1[i]) are
    colinear within `tol` (relative), i.e. neurons sharing a hyperplane.
    """
    rows = np.column_stack([np.atleast_2d(weights), np.asarray(biases, dtype=float)])
    norms = np.linalg.norm(rows, axis=1)
    pairs = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            scale = norms[i] * norms[j]
            if scale == 0.0 or scale - abs(rows[i] @ rows[j]) <= tol * scale:
                pairs.append((i, j))
    return pairs


def first_layer(net):
    """(W_1, b_1) of a layered network as dense arrays (rows in hidden order)."""
    layer = net.layers()[0]
    weights = np.array([[net.weight(x, n) if net.has_edge(x, n) else 0.0 for x in net.inputs]
                        for n in layer])
    biases = np.array([net.biases[n] for n in layer])
    return weights, biases
