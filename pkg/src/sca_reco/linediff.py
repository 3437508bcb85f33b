"""Longest-common-subsequence line matching via the Myers diff algorithm.

Myers computes a minimal edit script; because D = len(a) + len(b) - 2 * LCS,
a minimal script is equivalent to a maximal common subsequence, so the
diagonal runs recovered from the trace are exactly the matched-line pairs of
an LCS.  O(ND) beats the quadratic DP on the near-identical release pairs
this package diffs.
"""

from __future__ import annotations

from typing import Sequence

_NEG = -(10**9)  # sentinel smaller than any reachable x


def _shortest_edit_trace(a: Sequence[str], b: Sequence[str]) -> list[dict[int, int]]:
    n, m = len(a), len(b)
    v = {1: 0}
    trace = []
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, _NEG) < v.get(k + 1, _NEG)):
                x = v[k + 1]
            else:
                x = v[k - 1] + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                return trace
    raise AssertionError("diff failed to reach the end of both sequences")


def lcs_pairs(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Return matched 0-based index pairs (i, j) with a[i] == b[j].

    Pairs are strictly increasing in both coordinates and form a longest
    common subsequence of the two line lists.
    """
    if not a or not b:
        return []
    trace = _shortest_edit_trace(a, b)
    pairs: list[tuple[int, int]] = []
    x, y = len(a), len(b)
    for d in range(len(trace) - 1, -1, -1):
        v = trace[d]
        k = x - y
        if k == -d or (k != d and v.get(k - 1, _NEG) < v.get(k + 1, _NEG)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = v.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            pairs.append((x - 1, y - 1))
            x -= 1
            y -= 1
        if d > 0:
            x, y = prev_x, prev_y
    pairs.reverse()
    return pairs
