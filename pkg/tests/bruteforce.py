"""Unpruned reference enumerators used as an independent oracle.

Everything here works straight off the edge list: build the half-edge
incidence matrix, enumerate every assignment, test the boundary.  No
code is shared with the pruned solvers on purpose — agreement between
the two is one of the acceptance gates.

Size guard: 2(k-1) choices per edge, so k=4 with 6 edges is 6^6 = 46656
columns.  Keep inputs small.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

MAX_COLUMNS = 2_000_000


def incidence(g) -> np.ndarray:
    """Vertex-by-edge matrix of summed half-edge directions.

    Reference orientation: positive edge points u -> v (+1 at u, -1 at
    v), negative edge points out at both ends (+1, +1).  A positive
    loop therefore contributes 0, a negative loop 2.
    """
    a = np.zeros((g.num_vertices, g.num_edges), dtype=np.int64)
    for j, e in enumerate(g.edges):
        tau_u = 1
        tau_v = -1 if e.sign > 0 else 1
        a[e.u, j] += tau_u
        a[e.v, j] += tau_v
    return a


def _value_grid(per_edge: list[list[int]]) -> np.ndarray:
    count = 1
    for options in per_edge:
        count *= len(options)
        if count > MAX_COLUMNS:
            raise ValueError(f"brute-force grid too large (> {MAX_COLUMNS})")
    if count == 0:
        return np.zeros((0, len(per_edge)), dtype=np.int64)
    return np.array(list(itertools.product(*per_edge)), dtype=np.int64)


def all_integer_k_flows(g, k: int) -> np.ndarray:
    """Every nowhere-zero integer k-flow, as signed values under the
    reference orientation.  Shape (count, num_edges)."""
    options = [v for v in range(-(k - 1), k) if v != 0]
    grid = _value_grid([options] * g.num_edges)
    if grid.shape[0] == 0:
        return grid
    b = incidence(g) @ grid.T
    return grid[np.all(b == 0, axis=0)]


def all_zk_flows(g, k: int) -> np.ndarray:
    """Every nowhere-zero Z_k-flow as residues 1..k-1 under the
    reference orientation (reversal maps v to k-v, so this sweep covers
    every orientation)."""
    grid = _value_grid([[v for v in range(1, k)]] * g.num_edges)
    if grid.shape[0] == 0:
        return grid
    b = incidence(g) @ grid.T
    return grid[np.all(b % k == 0, axis=0)]


def has_integer_k_flow(g, k: int) -> bool:
    return bool(all_integer_k_flows(g, k).shape[0])


def has_zk_flow(g, k: int) -> bool:
    return bool(all_zk_flows(g, k).shape[0])


def boundary_of(g, orientation_flips, values) -> list:
    """Boundary recomputed from scratch (exact, Fraction-safe)."""
    acc = [Fraction(0)] * g.num_vertices
    for j, e in enumerate(g.edges):
        tau_u = 1
        tau_v = -1 if e.sign > 0 else 1
        if j in orientation_flips:
            tau_u, tau_v = -tau_u, -tau_v
        acc[e.u] += tau_u * Fraction(values[j])
        acc[e.v] += tau_v * Fraction(values[j])
    return acc


def negative_odd_count(g, values) -> int:
    """Number of negative edges carrying an odd value (the parity lemma
    says this is even for any integer flow)."""
    return sum(
        1 for j, e in enumerate(g.edges) if e.sign < 0 and int(values[j]) % 2 != 0
    )
