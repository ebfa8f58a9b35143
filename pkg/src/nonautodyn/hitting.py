"""Finite-horizon subsets of the naturals, with witnesses, and their
syndetic / thick classification."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ADEQUACY_FACTOR = 10

ROLES = ("separation", "stability", "cover-separation", "containment")


@dataclass(frozen=True)
class Witness:
    n: int
    x: object
    y: object
    value: float


@dataclass
class HittingSet:
    """Members of ``{start..horizon}`` together with one witness pair each.

    ``points`` are the sampled start points; member ``members[i]`` is
    witnessed by ``points[wit_x[i]]`` and ``points[wit_y[i]]`` with the
    recorded ``wit_value`` (a distance, or a containment slack).
    """

    horizon: int
    members: np.ndarray
    role: str = "separation"
    start: int = 1
    points: list = field(default_factory=list)
    wit_x: np.ndarray | None = None
    wit_y: np.ndarray | None = None
    wit_value: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.unique(np.asarray(self.members, dtype=np.int64))
        if m.size and (m[0] < self.start or m[-1] > self.horizon):
            raise ValueError("members must lie in [start, horizon]")
        self.members = m

    @staticmethod
    def from_mask(mask: np.ndarray, start: int = 0, role: str = "separation", **kw) -> "HittingSet":
        """``mask[i]`` says whether ``start + i`` is a member."""
        mask = np.asarray(mask, bool)
        return HittingSet(start + len(mask) - 1, np.nonzero(mask)[0] + start, role, start, **kw)

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.members, n)
        return bool(i < self.members.size and self.members[i] == n)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.horizon - self.start + 1, bool)
        out[self.members - self.start] = True
        return out

    def witness(self, n: int) -> Witness:
        i = int(np.searchsorted(self.members, n))
        if i >= self.members.size or self.members[i] != n or self.wit_x is None:
            raise KeyError(f"{n} has no witness")
        return Witness(n, self.points[self.wit_x[i]], self.points[self.wit_y[i]], float(self.wit_value[i]))

    def complement(self, role: str | None = None) -> "HittingSet":
        return HittingSet.from_mask(~self.mask(), self.start, role or self.role)

    def translate(self, t: int) -> "HittingSet":
        return HittingSet(self.horizon + t, self.members + t, self.role, self.start + t)

    def gaps(self) -> np.ndarray:
        """Lengths of the maximal runs of non-members (edge runs included)."""
        return _runs(~self.mask())

    def runs(self) -> np.ndarray:
        """Lengths of the maximal runs of members."""
        return _runs(self.mask())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["member"])
        for n in self.members:
            w.writerow([int(n)])
        return buf.getvalue()


def _runs(mask: np.ndarray) -> np.ndarray:
    if mask.size == 0:
        return np.zeros(0, np.int64)
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    d = np.diff(padded)
    starts = np.nonzero(d == 1)[0]
    ends = np.nonzero(d == -1)[0]
    return (ends - starts).astype(np.int64)


def _run_positions(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    d = np.diff(padded)
    return np.nonzero(d == 1)[0], np.nonzero(d == -1)[0]


def histogram(values: np.ndarray) -> list[tuple[int, int]]:
    if values.size == 0:
        return []
    u, c = np.unique(values, return_counts=True)
    return [(int(a), int(b)) for a, b in zip(u, c)]


@dataclass(frozen=True)
class Classification:
    mode: str
    parameter: int | None
    verdict: str
    bound: int | None
    certificate: dict

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "parameter": self.parameter,
            "verdict": self.verdict,
            "bound": self.bound,
            "certificate": self.certificate,
        }


def min_syndetic_bound(S: HittingSet) -> int | None:
    """Smallest M with every window ``{n..n+M}`` meeting S; None if S is empty."""
    if len(S) == 0:
        return None
    g = S.gaps()
    return int(g.max()) if g.size else 0


def max_thick_run(S: HittingSet) -> int:
    """Largest k such that S contains ``k+1`` consecutive members (-1 if empty)."""
    r = S.runs()
    return int(r.max()) - 1 if r.size else -1


def classify(S: HittingSet, mode: str, bound: int | None = None) -> Classification:
    """Syndetic(M) or thick(k) verdict with a certificate.

    Without a ``bound`` the best bound consistent with the data is measured
    and the verdict reports whether the horizon is adequate for it.
    """
    if mode not in ("syndetic", "thick"):
        raise ValueError("mode must be 'syndetic' or 'thick'")
    if bound is not None and bound < 1:
        raise ValueError("bound must be >= 1")
    N = S.horizon
    mask = S.mask()
    if mode == "syndetic":
        measured = min_syndetic_bound(S)
        if bound is None:
            if measured is None:
                return Classification(mode, None, "fails", None, {"reason": "empty set"})
            ok = N >= ADEQUACY_FACTOR * max(measured, 1)
            return Classification(mode, None, "holds" if ok else "inconclusive", measured, {"max_gap": measured})
        cert: dict
        if measured is not None and measured <= bound:
            verdict, cert = "holds", {"max_gap": measured}
        else:
            # first run of non-members longer than the bound gives a clean window
            starts, ends = _run_positions(~mask)
            long = np.nonzero(ends - starts > bound)[0]
            if long.size == 0:
                # no window of length bound+1 fits in the horizon at all
                verdict, cert = "holds", {"vacuous": True}
            else:
                a = int(starts[long[0]]) + S.start
                verdict, cert = "fails", {"window": [a, a + bound], "max_gap": measured}
        if N < ADEQUACY_FACTOR * bound:
            verdict = "inconclusive"
        return Classification(mode, bound, verdict, measured, cert)
    measured = max_thick_run(S)
    if bound is None:
        ok = measured >= 1 and N >= ADEQUACY_FACTOR * measured
        return Classification(mode, None, "holds" if ok else "inconclusive", measured, {"longest_run": measured + 1})
    if measured >= bound:
        starts, ends = _run_positions(mask)
        i = int(np.nonzero(ends - starts >= bound + 1)[0][0])
        a = int(starts[i]) + S.start
        verdict, cert = "holds", {"run": [a, a + bound], "longest_run": measured + 1}
    else:
        verdict, cert = "fails", {"longest_run": measured + 1}
    if N < ADEQUACY_FACTOR * bound:
        verdict = "inconclusive"
    return Classification(mode, bound, verdict, measured, cert)


def union(sets: Sequence[HittingSet]) -> HittingSet:
    base = sets[0]
    return HittingSet(base.horizon, np.concatenate([s.members for s in sets]), base.role, base.start)


def intersection(sets: Sequence[HittingSet]) -> HittingSet:
    base = sets[0]
    m = base.members
    for s in sets[1:]:
        m = np.intersect1d(m, s.members)
    return HittingSet(base.horizon, m, base.role, base.start)
