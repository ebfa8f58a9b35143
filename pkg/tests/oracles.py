"""Independent reference implementations used as test oracles.

Nothing here imports the package's own algorithms: the checks below are
brute force or closed form.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

ADEQUACY = 10


def golden_floor(n: int) -> int:
    """floor(n * (sqrt(5) - 1) / 2) by integer square roots (exact)."""
    m = math.isqrt(5 * n * n)
    return (m - n) // 2


def golden_word(count: int) -> str:
    """Lower mechanical word of slope (sqrt5-1)/2 and intercept 0."""
    return "".join(str(golden_floor(n + 1) - golden_floor(n)) for n in range(count))


def chacon_prefix(iterations: int) -> str:
    w = "0"
    for _ in range(iterations):
        w = "".join("0010" if c == "0" else "1" for c in w)
    return w


def window_syndetic(mask: np.ndarray, M: int, horizon: int) -> str:
    """Brute-force scan of every window {n..n+M} inside the horizon."""
    if len(mask) < M + 1:
        verdict = "holds"  # no window fits
    else:
        verdict = "holds" if sliding_window_view(mask, M + 1).any(axis=1).all() else "fails"
    return "inconclusive" if horizon < ADEQUACY * M else verdict


def window_thick(mask: np.ndarray, k: int, horizon: int) -> str:
    if len(mask) < k + 1:
        verdict = "fails"
    else:
        verdict = "holds" if sliding_window_view(mask, k + 1).all(axis=1).any() else "fails"
    return "inconclusive" if horizon < ADEQUACY * k else verdict


def max_circular_gap(turns: np.ndarray) -> float:
    """Largest gap (radians) between consecutive sorted angles given in turns."""
    s = np.sort(np.asarray(turns, float) % 1.0)
    gaps = np.diff(np.concatenate([s, [s[0] + 1.0]]))
    return float(gaps.max() * 2 * math.pi)
