"""
    Independent convexity deciders used to cross-validate the path-lifting checker:

    - `cpwl_convex_oracle`: exact test on an enumerated partition. f is convex iff for every
      pair of neighbouring cells, with interior points x_k, x_l on both sides of their shared
      frontier, <u_k - u_l, x_k - x_l> >= 0 (u the slopes of f on the cells). Multi-switch
      frontiers are tested too.
    - `sample_convex_oracle`: midpoint convexity f((x+y)/2) <= (f(x)+f(y))/2 on random pairs.
      A violation is a proof of non-convexity; the absence of one is only evidence.
    - `sample_monotonicity_oracle`: monotonicity of the gradient <g(x) - g(y), x - y> >= 0 on
      random pairs of differentiable points.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import (ORACLE_EPS, MAX_BISECTIONS, MONOTONE_TOL, MIDPOINT_TOL, SAMPLER_CHUNK,
                        ZERO_TOL)
from .errors import PlacementError


@dataclass(frozen=True, eq=False)
class ConvexityWitness:
    x: np.ndarray
    y: np.ndarray
    violation: float
    frontier: Optional[int] = None


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    convex: bool
    witness: Optional[ConvexityWitness] = None
    n_tested: Optional[int] = None

    def __bool__(self):
        return self.convex


def place_across(regions, frontier, eps=ORACLE_EPS, max_bisections=MAX_BISECTIONS):
    """
    Points witness -/+ eps * normal strictly inside region_a / region_b, eps bisected
    from its initial value until both land.
    """
    cell_a, cell_b = regions[frontier.region_a], regions[frontier.region_b]
    for _ in range(max_bisections):
        x_a = frontier.witness - eps * frontier.normal
        x_b = frontier.witness + eps * frontier.normal
        if cell_a.contains(x_a) and cell_b.contains(x_b):
            return x_a, x_b
        eps *= 0.5

    raise PlacementError(f"No step places both points of the frontier between cells "
                         f"{frontier.region_a} and {frontier.region_b} inside their cells "
                         f"after {max_bisections} bisections")


def cpwl_convex_oracle(regions, frontiers, eps=ORACLE_EPS, tol=MONOTONE_TOL,
                       max_bisections=MAX_BISECTIONS):
    """
    Exact convexity test of a CPWL function on its enumerated partition. The witness of a
    non-convex verdict is the frontier with the most negative inner product.
    """
    worst = None
    for k, frontier in enumerate(frontiers):
        x_a, x_b = place_across(regions, frontier, eps, max_bisections)
        u_a = regions[frontier.region_a].f_affine.slope
        u_b = regions[frontier.region_b].f_affine.slope
        value = float(np.dot(u_b - u_a, x_b - x_a))

        if value < -tol and (worst is None or value < worst.violation):
            worst = ConvexityWitness(x_a, x_b, value, frontier=k)

    return OracleVerdict(convex=worst is None, witness=worst, n_tested=len(frontiers))


def sample_convex_oracle(net, box, n_pairs, seed=0, tol=MIDPOINT_TOL, chunk=SAMPLER_CHUNK):
    """
    Midpoint convexity on n_pairs uniform pairs of the box:

        f((x+y)/2) <= (f(x)+f(y))/2 + tol * (1 + max(|f(x)|, |f(y)|)).

    Stops at the first violation (in draw order). Deterministic per seed.
    """
    if n_pairs < 1:
        raise ValueError(f"Number of pairs must be positive. Given {n_pairs}")

    rng = np.random.default_rng(seed)
    remaining = int(n_pairs)
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size

        x = box.sample(rng, size)
        y = box.sample(rng, size)
        f_x, f_y = net.evaluate(x), net.evaluate(y)
        f_m = net.evaluate(0.5 * (x + y))

        excess = f_m - 0.5 * (f_x + f_y)
        scale = 1.0 + np.maximum(np.abs(f_x), np.abs(f_y))
        bad = np.flatnonzero(excess > tol * scale)
        if bad.size:
            i = bad[0]
            return OracleVerdict(False, ConvexityWitness(x[i], y[i], float(excess[i])),
                                 n_tested=n_pairs - remaining - size + i + 1)

    return OracleVerdict(True, n_tested=int(n_pairs))


def gradients(net, points, zero_tol=ZERO_TOL):
    """
    Gradient of f at every point where all hidden pre-activations exceed zero_tol in
    magnitude; rows of non-differentiable points are NaN.
    """
    if not net.hidden:
        return np.tile(net.output_form(()).slope, (len(points), 1))

    pre = net.hidden_preacts(points)
    grads = np.full((len(points), net.dim), np.nan)
    clear = np.all(np.abs(pre) > zero_tol, axis=1)

    bits = (pre > 0.0).astype(int)
    patterns, inverse = np.unique(bits[clear], axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    slopes = np.array([net.output_form(p).slope for p in patterns]).reshape(-1, net.dim)
    grads[clear] = slopes[inverse]
    return grads


def sample_monotonicity_oracle(net, box, n_pairs, seed=0, tol=MIDPOINT_TOL, zero_tol=1e-6):
    """
    Gradient monotonicity <g(x) - g(y), x - y> >= -tol on uniform pairs of differentiable
    points (pairs with a point within zero_tol of a hyperplane are skipped).
    """
    if n_pairs < 1:
        raise ValueError(f"Number of pairs must be positive. Given {n_pairs}")

    rng = np.random.default_rng(seed)
    x = box.sample(rng, n_pairs)
    y = box.sample(rng, n_pairs)

    g_x, g_y = gradients(net, x, zero_tol), gradients(net, y, zero_tol)
    usable = ~(np.isnan(g_x).any(axis=1) | np.isnan(g_y).any(axis=1))
    products = np.einsum('ij,ij->i', g_x - g_y, x - y)

    bad = np.flatnonzero(usable & (products < -tol))
    if bad.size:
        i = bad[0]
        return OracleVerdict(False, ConvexityWitness(x[i], y[i], float(products[i])),
                             n_tested=int(usable.sum()))
    return OracleVerdict(True, n_tested=int(usable.sum()))
