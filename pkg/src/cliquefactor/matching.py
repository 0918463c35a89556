"""Maximum bipartite matching via Hopcroft-Karp.

Deterministic: given the same adjacency lists in the same order, the
matching returned is always the same. Used by the template machinery,
where a perfect matching of a pruned template steers which base vertex
each gadget gives up.
"""

from __future__ import annotations

from collections import deque
from typing import NamedTuple, Sequence

__all__ = ["MatchingResult", "maximum_bipartite_matching", "has_perfect_matching"]

_UNMATCHED = -1
_INF = -2  # sentinel distance for the BFS layering


class MatchingResult(NamedTuple):
    pair_left: list[int]
    pair_right: list[int]
    size: int


def maximum_bipartite_matching(
    n_left: int, n_right: int, adj: Sequence[Sequence[int]]
) -> MatchingResult:
    """Maximum matching of the bipartite graph given as left adjacency lists.

    adj[u] lists the right neighbors of left vertex u. Runs the usual
    alternating-BFS / layered-DFS rounds in O(E * sqrt(V)).
    """
    if len(adj) != n_left:
        raise ValueError("adjacency must have one row per left vertex")
    pair_left = [_UNMATCHED] * n_left
    pair_right = [_UNMATCHED] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in range(n_left):
            if pair_left[u] == _UNMATCHED:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found_free = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = pair_right[v]
                if w == _UNMATCHED:
                    found_free = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found_free

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = pair_right[v]
            if w == _UNMATCHED or (dist[w] == dist[u] + 1 and dfs(w)):
                pair_left[u] = v
                pair_right[v] = u
                return True
        dist[u] = _INF
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if pair_left[u] == _UNMATCHED and dfs(u):
                size += 1
    return MatchingResult(pair_left, pair_right, size)


def has_perfect_matching(n_left: int, n_right: int, adj: Sequence[Sequence[int]]) -> bool:
    """True when a matching saturating both sides exists (so n_left == n_right)."""
    if n_left != n_right:
        return False
    return maximum_bipartite_matching(n_left, n_right, adj).size == n_left
