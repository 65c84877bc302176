"""Minimum-cost bipartite assignment (shortest augmenting path form)."""

from __future__ import annotations

import numpy as np

_FORBIDDEN = 1e15


def _solve_square(cost: np.ndarray) -> list[int]:
    """Column assigned to each row; requires rows <= cols.

    Classic potentials-based O(n^2 m) implementation.
    """
    n, m = cost.shape
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    p = [0] * (m + 1)     # row matched to column j (1-indexed; 0 = none)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = -1
            row = cost[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [-1] * n
    for j in range(1, m + 1):
        if p[j] > 0:
            assign[p[j] - 1] = j - 1
    return assign


def hungarian_assign(cost, max_edge: float | None = None
                     ) -> list[tuple[int, int]]:
    """Minimum total-cost matching over a rectangular cost table.

    Every row (or column, whichever side is smaller) gets matched; pairs
    whose cost is at or above ``max_edge`` are then excluded. Returns sorted
    (row, col) pairs.
    """
    table = np.asarray(cost, dtype=float)
    if table.size == 0:
        return []
    if not np.all(np.isfinite(table)):
        raise ValueError("costs must be finite")
    work = table.copy()
    if max_edge is not None:
        work[work >= max_edge] = _FORBIDDEN
    transposed = work.shape[0] > work.shape[1]
    if transposed:
        work = work.T
    assign = _solve_square(work)
    pairs = []
    for r, c in enumerate(assign):
        if c < 0:
            continue
        row, col = (c, r) if transposed else (r, c)
        if max_edge is not None and table[row, col] >= max_edge:
            continue
        pairs.append((row, col))
    return sorted(pairs)
