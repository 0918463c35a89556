"""Seeded randomness: stream derivation and random graph sampling.

All experiment randomness flows through numpy's PCG64 generator.  Trial
streams are derived with :func:`mix`, a splitmix64 fold of the master
seed with structural indices (cell id, trial index), so that trials can
run in any order, or concurrently, without perturbing each other's
draws.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One round of the splitmix64 output function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix(*parts: int) -> int:
    """Fold integers into a single 64-bit seed.

    The fold is order sensitive: mix(a, b) != mix(b, a) in general.
    Negative inputs are reduced modulo 2^64 first.
    """
    if not parts:
        raise ValueError("mix needs at least one component")
    acc = 0x243F6A8885A308D3
    for part in parts:
        acc = _splitmix64(acc ^ (int(part) & _MASK64))
    return acc


def stream(seed: int) -> np.random.Generator:
    """A PCG64 generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: each pair is an edge with probability p.

    The draw consumes exactly C(n, 2) uniforms from the seeded stream in
    row-major pair order, so the same seed always yields the same graph.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    if n < 2 or p == 0.0:
        return Graph(n, [])
    rows, cols = np.triu_indices(n, k=1)
    hit = stream(seed).random(rows.shape[0]) < p
    edges = zip(rows[hit].tolist(), cols[hit].tolist())
    return Graph(n, edges)


def boost_min_degree(g: Graph, delta: int, seed: int = 0) -> Graph:
    """Add uniformly chosen missing edges until the minimum degree is delta.

    Deficient vertices are processed in ascending order; each receives
    random new neighbors among the vertices it is not yet adjacent to.
    """
    if delta >= g.n:
        raise ValueError(f"minimum degree {delta} impossible on {g.n} vertices")
    rng = stream(seed)
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    extra: list[tuple[int, int]] = []
    for v in range(g.n):
        missing = [u for u in range(g.n) if u != v and u not in adj[v]]
        need = delta - len(adj[v])
        if need <= 0:
            continue
        picks = rng.choice(len(missing), size=need, replace=False)
        for idx in sorted(int(i) for i in picks):
            u = missing[idx]
            extra.append((v, u))
            adj[v].add(u)
            adj[u].add(v)
    return Graph(g.n, list(g.edges()) + extra) if extra else g
