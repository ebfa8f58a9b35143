"""Finite-horizon detectors for sensitivity and equicontinuity notions.

Every detector returns a three-valued :class:`Verdict`.  "evidence-against"
for a universally quantified property means every sampled candidate failed
at the chosen horizon; it is never a proof.
"""

from __future__ import annotations

import itertools
import math
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import hitting as hs
from .corpus import CorpusEntry
from .errors import CoverageGap, EmptyRegion
from .hitting import HittingSet, classify
from .space import (
    Ball,
    CirclePoint,
    Entourage,
    FiniteCover,
    IsolatedPoint,
    OrbitArray,
    StateSpace,
    TaggedPoint,
    WedgePoint,
    cylinder_cover,
)
from .system import PeriodicSystem, induced, iterate, orbit_segment

FOR, AGAINST, INCONCLUSIVE = "evidence-for", "evidence-against", "inconclusive"
OUTCOMES = (FOR, AGAINST, INCONCLUSIVE)
SENSITIVITY_MODES = ("plain", "syndetic", "thick", "multi")
HAUSDORFF_MODES = ("plain", "syndetic", "thick", "multi")


@dataclass(frozen=True)
class DetectorParams:
    """Knobs shared by all detectors.

    ``net_eps`` is the radius of the region balls (centred on an ε-net);
    ``basis_depth`` J gives the dyadic basis radii ``2^-j``, ``j = 1..J``.
    ``syndetic_bound`` defaults to ``thick_k``.  ``pair_times='aligned'``
    restricts the pair detectors to times that are multiples of the period.
    """

    horizon: int = 1000
    pair_samples: int = 8
    net_eps: float = 2.0**-4
    regions: tuple = ()
    region_component: str | None = None
    separation_eps: float = 0.5
    stability_eps: float = 0.25
    basis_depth: int = 8
    thick_k: int = 10
    syndetic_bound: int | None = None
    multi_m: int = 3
    max_tuples: int = 64
    starts: int = 8
    margin: float = 0.1
    cover_eps: float = 1.0
    target_eps: float | None = None
    pair_times: str = "all"
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name in ("horizon", "pair_samples", "basis_depth", "thick_k", "multi_m", "max_tuples", "starts", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("net_eps", "separation_eps", "stability_eps", "cover_eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.syndetic_bound is not None and self.syndetic_bound < 1:
            raise ValueError("syndetic_bound must be positive")
        if self.target_eps is not None and not self.target_eps > 0:
            raise ValueError("target_eps must be positive")
        if self.pair_times not in ("all", "aligned"):
            raise ValueError("pair_times must be 'all' or 'aligned'")
        if not 0 <= self.margin < 1:
            raise ValueError("margin must lie in [0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        object.__setattr__(self, "regions", tuple(self.regions))

    @property
    def bound_m(self) -> int:
        return self.syndetic_bound or self.thick_k

    def replace(self, **kw) -> "DetectorParams":
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(kw)
        return DetectorParams(**d)

    def echo(self, space: StateSpace | None = None) -> dict:
        d = asdict(self)
        d.pop("workers")  # results never depend on it
        d["regions"] = [
            {"center": space.serialize(b.center) if space else repr(b.center), "radius": b.radius} for b in self.regions
        ]
        return d


@dataclass
class Verdict:
    prop: str
    outcome: str
    certificate: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    system: str = ""

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")

    def as_dict(self) -> dict:
        return {
            "property": self.prop,
            "system": self.system,
            "outcome": self.outcome,
            "certificate": self.certificate,
            "params": self.params,
        }


# ---------------------------------------------------------------------------
# plumbing


def sub_seed(seed: int, *stream: int) -> int:
    """Deterministic per-task seed derived from the run seed."""
    return int(np.random.SeedSequence([seed, *stream]).generate_state(1)[0])


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(i, it) for i, it in enumerate(items)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(len(items)), items))


class _OrbitCache:
    """Small LRU of orbit arrays keyed by (system, start, horizon, depth)."""

    def __init__(self, maxsize: int = 128):
        self.maxsize = maxsize
        self._d: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, sys: PeriodicSystem, x, N: int, depth: int | None) -> OrbitArray:
        key = (id(sys), x, N, depth)
        with self._lock:
            if key in self._d:
                self._d.move_to_end(key)
                return self._d[key][1]
        arr = sys.space.orbit_array(orbit_segment(sys, x, N).states, depth)
        with self._lock:
            # the system is stored alongside so its id cannot be recycled
            self._d[key] = (sys, arr)
            while len(self._d) > self.maxsize:
                self._d.popitem(last=False)
        return arr

    def clear(self) -> None:
        with self._lock:
            self._d.clear()


ORBITS = _OrbitCache()


def orbit_arrays(sys: PeriodicSystem, points: Sequence, N: int, depth: int | None) -> list[OrbitArray]:
    return [ORBITS.get(sys, x, N, depth) for x in points]


def _depth(space: StateSpace, *radii: float) -> int | None:
    ks = [space.resolution(r) for r in radii]
    if any(k is None for k in ks):
        return None
    return max(max(ks), 1)


def component(x) -> str:
    if isinstance(x, TaggedPoint):
        return x.copy
    if isinstance(x, WedgePoint):
        return x.circle
    if isinstance(x, IsolatedPoint):
        return f"iso{x.label}"
    if isinstance(x, CirclePoint):
        return "circle"
    return "x"


def region_family(space: StateSpace, P: DetectorParams) -> list[Ball]:
    if P.regions:
        regs = list(P.regions)
    else:
        regs = [Ball(c, P.net_eps) for c in space.epsilon_net(P.net_eps, P.seed)]
    if P.region_component is not None:
        regs = [b for b in regs if component(b.center) == P.region_component]
    return regs


def start_points(space: StateSpace, P: DetectorParams) -> list:
    if P.region_component is None:
        return space.sample_points(P.starts, sub_seed(P.seed, 7))
    out, i = [], 0
    while len(out) < P.starts and i < 50 * P.starts:
        x = space.sample_point(sub_seed(P.seed, 7), i)
        if component(x) == P.region_component:
            out.append(x)
        i += 1
    return out


def within(space: StateSpace, center, pts: Sequence, r: float) -> np.ndarray:
    """Which ``pts`` lie within ``r`` of ``center``, reading only the needed prefix."""
    depth = _depth(space, r)
    a = space.orbit_array(list(pts), depth)
    c = space.orbit_array([center] * len(pts), depth)
    return space.array_distance(a, c) < r


def _samples(space: StateSpace, U: Ball, n: int, seed: int) -> list:
    pts = space.sample_in_ball(U, n, seed)
    pts = [p for p, ok in zip(pts, within(space, U.center, pts, U.radius)) if ok]
    if not pts:
        raise EmptyRegion(f"no sample falls in the ball around {space.serialize(U.center)}")
    return pts


def _ser(space: StateSpace, x) -> str:
    return space.serialize(x)


# ---------------------------------------------------------------------------
# separation and sensitivity


def separation_hitting_set(
    sys: PeriodicSystem, U: Ball, D: Entourage, P: DetectorParams, seed: int | None = None
) -> HittingSet:
    """Times ``1..N`` at which some sampled pair of ``U`` leaves ``D``.

    ``info['max_growth']`` is the largest increase of a pair distance over
    its initial value (exact metrics only).
    """
    space = sys.space
    N = P.horizon
    pts = _samples(space, U, P.pair_samples, P.seed if seed is None else seed)
    depth = _depth(space, D.epsilon)
    arrs = orbit_arrays(sys, pts, N, depth)
    pairs = list(itertools.combinations(range(len(pts)), 2))
    info = {"samples": len(pts), "pairs": len(pairs)}
    if not pairs:
        return HittingSet(N, np.zeros(0, np.int64), "separation", 1, pts, info=info)
    dist = np.stack([space.array_distance(arrs[i], arrs[j]) for i, j in pairs])
    best = np.argmax(dist[:, 1:], axis=0)
    value = dist[best, np.arange(1, N + 1)]
    member = value >= D.epsilon
    times = np.nonzero(member)[0] + 1
    pi = np.array(pairs, np.int64)
    info["max_value"] = float(dist[:, 1:].max()) if N else 0.0
    if depth is None:
        info["max_growth"] = float((dist.max(axis=1) - dist[:, 0]).max())
    return HittingSet(
        N,
        times,
        "separation",
        1,
        pts,
        pi[best[member], 0],
        pi[best[member], 1],
        value[member],
        info,
    )


def _set_summary(S: HittingSet) -> dict:
    out = {"size": len(S), "first": int(S.members[0]) if len(S) else None}
    out.update({k: v for k, v in S.info.items()})
    return out


def _aggregate(
    prop: str,
    sets: list[HittingSet],
    regions: list[Ball],
    mode: str,
    P: DetectorParams,
    space: StateSpace,
    sys_id: str,
    extra: dict | None = None,
) -> Verdict:
    """Shared verdict logic for separation-type and cover-type families."""
    rows = []
    outcome = FOR
    if not sets:
        return Verdict(prop, INCONCLUSIVE, {"reason": "empty region family"}, P.echo(space), sys_id)
    if mode == "plain":
        for b, S in zip(regions, sets):
            rows.append({"center": _ser(space, b.center), **_set_summary(S)})
            if len(S) == 0:
                outcome = AGAINST
        cert: dict = {"regions": rows}
        bad = [r for r in rows if r["size"] == 0]
        if bad:
            cert["failing_region"] = bad[0]["center"]
        else:
            cert["witnesses"] = [_witness_row(space, S, int(S.members[0])) for S in sets]
    elif mode in ("syndetic", "thick"):
        bound = P.bound_m if mode == "syndetic" else P.thick_k
        verdicts = []
        for b, S in zip(regions, sets):
            c = classify(S, mode, bound)
            verdicts.append(c.verdict)
            rows.append({"center": _ser(space, b.center), **c.as_dict(), "size": len(S)})
        if "inconclusive" in verdicts:
            outcome = INCONCLUSIVE
        elif all(v == "holds" for v in verdicts):
            outcome = FOR
        else:
            outcome = AGAINST
        cert = {"regions": rows}
        if outcome == AGAINST:
            cert["failing_region"] = rows[verdicts.index("fails")]["center"]
    elif mode == "multi":
        m = min(P.multi_m, len(sets))
        tuples = list(itertools.combinations(range(len(sets)), m))
        if len(tuples) > P.max_tuples:
            rng = np.random.default_rng(sub_seed(P.seed, 11))
            pick = np.sort(rng.choice(len(tuples), P.max_tuples, replace=False))
            tuples = [tuples[i] for i in pick]
        for t in tuples:
            inter = hs.intersection([sets[i] for i in t])
            rows.append({"regions": list(t), "size": len(inter), "first": int(inter.members[0]) if len(inter) else None})
            if len(inter) == 0:
                outcome = AGAINST
        cert = {"tuples": rows, "centers": [_ser(space, b.center) for b in regions]}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if extra:
        cert.update(extra)
    return Verdict(prop, outcome, cert, P.echo(space), sys_id)


def _witness_row(space: StateSpace, S: HittingSet, n: int) -> dict:
    w = S.witness(n)
    return {"n": n, "x": _ser(space, w.x), "y": _ser(space, w.y), "value": w.value}


class _FamilyCache:
    """Region families shared by the plain/thick/multi modes of one detector."""

    def __init__(self, maxsize: int = 16):
        self.maxsize = maxsize
        self._d: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: tuple, sys: PeriodicSystem, build: Callable):
        key = (id(sys),) + key
        with self._lock:
            if key in self._d:
                self._d.move_to_end(key)
                return self._d[key][1]
        val = build()
        with self._lock:
            self._d[key] = (sys, val)
            while len(self._d) > self.maxsize:
                self._d.popitem(last=False)
        return val

    def clear(self) -> None:
        with self._lock:
            self._d.clear()


FAMILIES = _FamilyCache()


def clear_caches() -> None:
    ORBITS.clear()
    FAMILIES.clear()


def separation_family(sys: PeriodicSystem, P: DetectorParams, eps: float | None = None) -> tuple[list[Ball], list[HittingSet]]:
    D = Entourage(eps or P.separation_eps)

    def build():
        regions = region_family(sys.space, P)

        def one(i, b):
            return separation_hitting_set(sys, b, D, P, sub_seed(P.seed, 1, i))

        return regions, _pmap(one, regions, P.workers)

    return FAMILIES.get(("separation", P.replace(workers=1), D.epsilon), sys, build)


def sensitivity_verdict(sys: PeriodicSystem, mode: str, P: DetectorParams) -> Verdict:
    """Sensitivity in the given mode over the region family at ``eps_D``."""
    if mode not in SENSITIVITY_MODES:
        raise ValueError(f"mode must be one of {SENSITIVITY_MODES}")
    regions, sets = separation_family(sys, P)
    growth = [S.info["max_growth"] for S in sets if "max_growth" in S.info]
    extra = {"max_growth": max(growth)} if growth else {}
    name = "sensitive" if mode == "plain" else f"{mode}_sensitive"
    return _aggregate(name, sets, regions, mode, P, sys.space, sys.system_id, extra)


# ---------------------------------------------------------------------------
# equicontinuity


def _basis(P: DetectorParams, top: float) -> list[float]:
    return [top * 2.0**-j for j in range(P.basis_depth + 1)]


def equicontinuity_at(sys: PeriodicSystem, x, E: Entourage, P: DetectorParams) -> Verdict:
    """Largest basis radius delta keeping sampled neighbours eps_E-close up to N."""
    space = sys.space
    depth = _depth(space, E.epsilon)
    N = P.horizon
    ax = orbit_arrays(sys, [x], N, depth)[0]
    failures = []
    for j, delta in enumerate(_basis(P, E.epsilon)):
        ys = _samples(space, Ball(x, delta), P.pair_samples, sub_seed(P.seed, 2, j))[1:]
        worst = None
        for y, ay in zip(ys, orbit_arrays(sys, ys, N, depth)):
            d = space.array_distance(ax, ay)
            bad = np.nonzero(d >= E.epsilon)[0]
            if bad.size:
                n = int(bad[0])
                worst = {"delta": delta, "y": _ser(space, y), "n": n, "distance": float(d[n])}
                break
        if worst is None:
            cert = {"x": _ser(space, x), "best_delta": delta, "failed": failures}
            return Verdict("equicontinuous_at", FOR, cert, P.echo(space), sys.system_id)
        failures.append(worst)
    cert = {"x": _ser(space, x), "best_delta": None, "failed": failures}
    return Verdict("equicontinuous_at", AGAINST, cert, P.echo(space), sys.system_id)


def _pointwise(prop: str, sys: PeriodicSystem, P: DetectorParams, fn: Callable) -> Verdict:
    """Universal aggregation of a per-point detector over sampled starts."""
    xs = start_points(sys.space, P)
    vs = _pmap(lambda i, x: fn(x), xs, P.workers)
    rows = [v.certificate | {"outcome": v.outcome} for v in vs]
    outs = [v.outcome for v in vs]
    if AGAINST in outs:
        outcome = AGAINST
    elif all(o == FOR for o in outs) and outs:
        outcome = FOR
    else:
        outcome = INCONCLUSIVE
    return Verdict(prop, outcome, {"points": rows}, P.echo(sys.space), sys.system_id)


def equicontinuity_verdict(sys: PeriodicSystem, P: DetectorParams) -> Verdict:
    E = Entourage(P.stability_eps)
    return _pointwise("equicontinuous", sys, P, lambda x: equicontinuity_at(sys, x, E, P))


def stability_set(sys: PeriodicSystem, U: Ball, E: Entourage, P: DetectorParams, seed: int) -> HittingSet:
    """``J(U,E)``: times ``1..N`` at which all sampled pairs of ``U`` stay eps_E-close."""
    space = sys.space
    N = P.horizon
    pts = _samples(space, U, P.pair_samples, seed)
    depth = _depth(space, E.epsilon)
    arrs = orbit_arrays(sys, pts, N, depth)
    ok = np.ones(N + 1, bool)
    for i, j in itertools.combinations(range(len(pts)), 2):
        ok &= space.array_distance(arrs[i], arrs[j]) < E.epsilon
    return HittingSet.from_mask(ok[1:], 1, "stability", points=pts, info={"samples": len(pts)})


def syndetic_equicontinuity_at(sys: PeriodicSystem, x, E: Entourage, P: DetectorParams) -> Verdict:
    """Some basis ball around ``x`` whose J-set is syndetic with the configured bound."""
    space = sys.space
    rows, verdicts = [], []
    for j, delta in enumerate(_basis(P, E.epsilon)):
        J = stability_set(sys, Ball(x, delta), E, P, sub_seed(P.seed, 3, j))
        c = classify(J, "syndetic", P.bound_m)
        rows.append({"delta": delta, **c.as_dict()})
        verdicts.append(c.verdict)
        if c.verdict == "holds":
            break
    if "holds" in verdicts:
        outcome = FOR
    elif "inconclusive" in verdicts:
        outcome = INCONCLUSIVE
    else:
        outcome = AGAINST
    cert = {"x": _ser(space, x), "basis": rows}
    if outcome == FOR:
        cert["measured_bound"] = rows[-1]["bound"]
    return Verdict("syndetically_equicontinuous_at", outcome, cert, P.echo(space), sys.system_id)


def syndetic_equicontinuity_verdict(sys: PeriodicSystem, P: DetectorParams) -> Verdict:
    E = Entourage(P.stability_eps)
    return _pointwise("syndetically_equicontinuous", sys, P, lambda x: syndetic_equicontinuity_at(sys, x, E, P))


def eventual_sensitivity_check(sys: PeriodicSystem, P: DetectorParams, D: Entourage | None = None) -> Verdict:
    """Search delays ``n`` in ``{0, p, 2p, 3p}`` and neighbours ``y`` of ``f^n x``.

    Delays are phase aligned, so ``f^{n+k}(x) = f^k(f^n x)`` and both orbits
    follow the same map sequence from time ``n``.
    """
    space = sys.space
    D = D or Entourage(P.separation_eps)
    p = sys.period
    N = P.horizon
    depth = _depth(space, D.epsilon)
    xs = start_points(space, P)
    radii = [2.0**-j for j in range(1, P.basis_depth + 1)]

    def one(ix, x):
        found = []
        for j, r in enumerate(radii):
            hit = None
            for n in (0, p, 2 * p, 3 * p):
                z = iterate(sys, x, n)
                az = orbit_arrays(sys, [z], N, depth)[0]
                ys = _samples(space, Ball(z, r), P.pair_samples, sub_seed(P.seed, 4, ix, j, n))[1:]
                for y, ay in zip(ys, orbit_arrays(sys, ys, N, depth)):
                    d = space.array_distance(az, ay)
                    k = np.nonzero(d[1:] >= D.epsilon)[0]
                    if k.size:
                        k0 = int(k[0]) + 1
                        hit = {"eps_E": r, "n": n, "k": k0, "y": _ser(space, y), "distance": float(d[k0])}
                        break
                if hit:
                    break
            if hit is None:
                return {"x": _ser(space, x), "failed_eps_E": r, "witnesses": found}
            found.append(hit)
        return {"x": _ser(space, x), "witnesses": found}

    rows = _pmap(one, xs, P.workers)
    outcome = AGAINST if any("failed_eps_E" in r for r in rows) else FOR
    return Verdict("eventually_sensitive", outcome, {"points": rows}, P.echo(space), sys.system_id)


# ---------------------------------------------------------------------------
# cover-based (Hausdorff) detectors


def default_cover(space: StateSpace, P: DetectorParams) -> FiniteCover:
    if space.resolution(1.0) is not None:
        return cylinder_cover(space, space.resolution(P.cover_eps), P.seed)
    return space.default_cover(P.cover_eps, P.seed)


def _membership(space: StateSpace, cover: FiniteCover, arr: OrbitArray, centers: OrbitArray) -> np.ndarray:
    if arr.depth is None:
        # exact metrics are elementwise in (comp, coord): broadcast states x members
        radii = np.array([b.radius for b in cover.members])
        a = OrbitArray(arr.comp[:, None], arr.coord[:, None])
        c = OrbitArray(centers.comp[None, :], centers.coord[None, :])
        return space.array_distance(a, c) < radii[None, :]
    out = np.zeros((len(arr), len(cover.members)), bool)
    for j, b in enumerate(cover.members):
        c = centers.take(np.full(len(arr), j))
        out[:, j] = space.array_distance(arr, c) < b.radius
    return out


def cover_hitting_set(
    sys: PeriodicSystem, V: Ball, cover: FiniteCover, P: DetectorParams, seed: int | None = None
) -> HittingSet:
    """Times at which some sampled pair of ``V`` shares no cover member."""
    space = sys.space
    N = P.horizon
    pts = _samples(space, V, P.pair_samples, P.seed if seed is None else seed)
    depth = _depth(space, *[b.radius for b in cover.members])
    arrs = orbit_arrays(sys, pts, N, depth)
    centers = space.orbit_array([b.center for b in cover.members], depth)
    mem = [_membership(space, cover, a, centers) for a in arrs]
    for i, m in enumerate(mem):
        gap = np.nonzero(~m.any(axis=1))[0]
        if gap.size:
            raise CoverageGap(f"image of sample {i} at time {int(gap[0])} lies in no cover member")
    pairs = list(itertools.combinations(range(len(pts)), 2))
    times = np.zeros(N + 1, bool)
    wx = np.full(N + 1, -1, np.int64)
    wy = np.full(N + 1, -1, np.int64)
    for i, j in pairs:
        split = ~(mem[i] & mem[j]).any(axis=1)
        new = split & ~times
        wx[new], wy[new] = i, j
        times |= split
    times[0] = False
    idx = np.nonzero(times)[0]
    return HittingSet(
        N, idx, "cover-separation", 1, pts, wx[idx], wy[idx], np.zeros(idx.size), {"samples": len(pts), "members": len(cover.members)}
    )


def hausdorff_sensitivity_verdict(
    sys: PeriodicSystem, mode: str, P: DetectorParams, cover: FiniteCover | None = None
) -> Verdict:
    if mode not in HAUSDORFF_MODES:
        raise ValueError(f"mode must be one of {HAUSDORFF_MODES}")
    space = sys.space
    explicit = cover is not None
    cover = cover or default_cover(space, P)

    def build():
        regions = region_family(space, P)

        def one(i, b):
            return cover_hitting_set(sys, b, cover, P, sub_seed(P.seed, 5, i))

        return regions, _pmap(one, regions, P.workers)

    if explicit:
        regions, sets = build()
    else:
        regions, sets = FAMILIES.get(("cover", P.replace(workers=1)), sys, build)
    extra = {"cover": [{"center": _ser(space, b.center), "radius": b.radius} for b in cover.members]}
    name = "hausdorff_sensitive" if mode == "plain" else f"{mode}_hausdorff_sensitive"
    return _aggregate(name, sets, regions, mode, P, space, sys.system_id, extra)


# ---------------------------------------------------------------------------
# equicontinuity pairs


def _implication_series(sys: PeriodicSystem, U: Ball, V: Ball, O: Ball, P: DetectorParams, seed: int):
    """Per time: (some U-image in V, all U-images in the shrunk O)."""
    space = sys.space
    N = P.horizon
    pts = _samples(space, U, P.pair_samples, seed)
    inner = O.radius * (1.0 - P.margin)
    depth = _depth(space, V.radius, inner)
    arrs = orbit_arrays(sys, pts, N, depth)
    cv = space.orbit_array([V.center] * (N + 1), depth)
    co = space.orbit_array([O.center] * (N + 1), depth)
    hit = np.zeros(N + 1, bool)
    inside = np.ones(N + 1, bool)
    for a in arrs:
        hit |= space.array_distance(a, cv) < V.radius
        inside &= space.array_distance(a, co) < inner
    return pts, hit, inside


def _pair_times(sys: PeriodicSystem, P: DetectorParams, hit: np.ndarray, inside: np.ndarray):
    step = sys.period if P.pair_times == "aligned" else 1
    times = np.arange(step, P.horizon + 1, step)
    return times, hit[times], inside[times]


def _pair_basis(P: DetectorParams) -> list[tuple[int, int]]:
    J = P.basis_depth
    return [(ju, jv) for ju in range(1, J + 1) for jv in range(1, J + 1)]


def eqp_check(sys: PeriodicSystem, x, y, O: Ball, P: DetectorParams) -> Verdict:
    """Search basis pairs (U, V) for which hitting V forces containment in O."""
    space = sys.space
    if not within(space, O.center, [y], O.radius)[0]:
        raise ValueError("y must lie in O")
    tried = []
    for k, (ju, jv) in enumerate(_pair_basis(P)):
        U, V = Ball(x, 2.0**-ju), Ball(y, 2.0**-jv)
        pts, hit, inside = _implication_series(sys, U, V, O, P, sub_seed(P.seed, 6, ju))
        times, hit, inside = _pair_times(sys, P, hit, inside)
        bad = np.nonzero(hit & ~inside)[0]
        if bad.size == 0:
            cert = {"x": _ser(space, x), "y": _ser(space, y), "U_radius": U.radius, "V_radius": V.radius,
                    "hits": int(hit.sum()), "margin": P.margin}
            return Verdict("equicontinuity_pair", FOR, cert, P.echo(space), sys.system_id)
        tried.append({"U_radius": U.radius, "V_radius": V.radius, "n": int(times[bad[0]])})
    cert = {
        "x": _ser(space, x),
        "y": _ser(space, y),
        "splitting_neighbourhood": {"center": _ser(space, O.center), "radius": O.radius},
        "violations": tried,
        "margin": P.margin,
    }
    return Verdict("equicontinuity_pair", AGAINST, cert, P.echo(space), sys.system_id)


def seqp_check(sys: PeriodicSystem, x, y, O: Ball, P: DetectorParams) -> Verdict:
    """As :func:`eqp_check`, asking only that the good times form a syndetic set."""
    space = sys.space
    if not within(space, O.center, [y], O.radius)[0]:
        raise ValueError("y must lie in O")
    rows, verdicts = [], []
    for ju, jv in _pair_basis(P):
        U, V = Ball(x, 2.0**-ju), Ball(y, 2.0**-jv)
        _, hit, inside = _implication_series(sys, U, V, O, P, sub_seed(P.seed, 6, ju))
        _, hit, inside = _pair_times(sys, P, hit, inside)
        # indexed by k = n/p when aligned, so the bound counts periods
        good = HittingSet.from_mask(~hit | inside, 1, "containment")
        c = classify(good, "syndetic", P.bound_m)
        rows.append({"U_radius": U.radius, "V_radius": V.radius, **c.as_dict()})
        verdicts.append(c.verdict)
        if c.verdict == "holds":
            break
    if "holds" in verdicts:
        outcome = FOR
    elif "inconclusive" in verdicts:
        outcome = INCONCLUSIVE
    else:
        outcome = AGAINST
    cert = {"x": _ser(space, x), "y": _ser(space, y), "O_radius": O.radius, "basis": rows, "margin": P.margin,
            "pair_times": P.pair_times}
    return Verdict("syndetic_equicontinuity_pair", outcome, cert, P.echo(space), sys.system_id)


def _pair_verdict(prop: str, sys: PeriodicSystem, P: DetectorParams, check: Callable) -> Verdict:
    """System-level pair property over sampled (x, y) with O = ball(y, eps_E)."""
    space = sys.space
    xs = start_points(space, P)
    pairs = [(xs[i], xs[(i + 1) % len(xs)]) for i in range(len(xs))]
    vs = _pmap(lambda i, xy: check(sys, xy[0], xy[1], Ball(xy[1], P.stability_eps), P), pairs, P.workers)
    outs = [v.outcome for v in vs]
    if AGAINST in outs:
        outcome = AGAINST
    elif outs and all(o == FOR for o in outs):
        outcome = FOR
    else:
        outcome = INCONCLUSIVE
    rows = [v.certificate | {"outcome": v.outcome} for v in vs]
    return Verdict(prop, outcome, {"pairs": rows}, P.echo(space), sys.system_id)


def topological_equicontinuity_verdict(sys: PeriodicSystem, P: DetectorParams) -> Verdict:
    return _pair_verdict("topologically_equicontinuous", sys, P, eqp_check)


def syndetic_topological_equicontinuity_verdict(sys: PeriodicSystem, P: DetectorParams) -> Verdict:
    return _pair_verdict("syndetically_topologically_equicontinuous", sys, P, seqp_check)


# ---------------------------------------------------------------------------
# recurrence estimators


def visit_times(sys: PeriodicSystem, x, targets: Sequence[Ball], N: int) -> list[int | None]:
    """First ``n <= N`` with ``f^n(x)`` in each target, or None (never)."""
    space = sys.space
    if not targets:
        return []
    depth = _depth(space, *[b.radius for b in targets])
    arr = ORBITS.get(sys, x, N, depth)
    centers = space.orbit_array([b.center for b in targets], depth)
    out: list[int | None] = [None] * len(targets)
    todo = list(range(len(targets)))
    # scan in doubling chunks; most targets are hit early
    lo, hi = 0, min(len(arr), 1024)
    while todo and lo < len(arr):
        chunk = arr.take(slice(lo, hi))
        rest = []
        for j in todo:
            d = space.array_distance(chunk, centers.take(np.full(hi - lo, j)))
            inside = np.nonzero(d < targets[j].radius)[0]
            if inside.size:
                out[j] = lo + int(inside[0])
            else:
                rest.append(j)
        todo = rest
        lo, hi = hi, min(len(arr), 2 * hi)
    return out


def target_family(space: StateSpace, P: DetectorParams) -> list[Ball]:
    eps = P.target_eps or P.net_eps
    return [Ball(c, eps) for c in space.epsilon_net(eps, P.seed)]


def minimality_estimate(sys: PeriodicSystem, P: DetectorParams, starts: Sequence | None = None) -> Verdict:
    """Every sampled start reaches every net ball within the horizon."""
    space = sys.space
    xs = list(starts) if starts is not None else start_points(space, P)
    targets = target_family(space, P)
    tables = _pmap(lambda i, x: visit_times(sys, x, targets, P.horizon), xs, P.workers)
    worst, missed = 0, []
    for x, t in zip(xs, tables):
        for j, n in enumerate(t):
            if n is None:
                missed.append({"start": _ser(space, x), "target": _ser(space, targets[j].center)})
            else:
                worst = max(worst, n)
    cert = {"starts": [_ser(space, x) for x in xs], "targets": len(targets), "worst_first_hit": worst,
            "first_hits": [[-1 if n is None else n for n in t] for t in tables]}
    if missed:
        cert["missed"] = missed[:20]
    return Verdict("minimal", AGAINST if missed else FOR, cert, P.echo(space), sys.system_id)


def omega_nonwandering_estimate(sys: PeriodicSystem, x, P: DetectorParams) -> dict:
    """Net-ball coverage of the orbit tail (omega) and of tail images of balls around x (Omega)."""
    space = sys.space
    N = P.horizon
    targets = target_family(space, P)
    depth = _depth(space, *[b.radius for b in targets])
    centers = space.orbit_array([b.center for b in targets], depth)
    tail = N // 2 + 1

    def covered(arr: OrbitArray) -> np.ndarray:
        out = np.zeros(len(targets), bool)
        sl = arr.take(slice(tail, None))
        for j, b in enumerate(targets):
            out[j] = bool((space.array_distance(sl, centers.take(np.full(len(sl), j))) < b.radius).any())
        return out

    omega = covered(ORBITS.get(sys, x, N, depth))
    big = np.zeros(len(targets), bool)
    radius = P.net_eps
    for y, a in zip(*_with_arrays(sys, _samples(space, Ball(x, radius), P.pair_samples, sub_seed(P.seed, 8)), N, depth)):
        big |= covered(a)
    big |= omega
    return {
        "x": _ser(space, x),
        "targets": [_ser(space, b.center) for b in targets],
        "omega": omega.astype(int).tolist(),
        "Omega": big.astype(int).tolist(),
        "ball_radius": radius,
        "tail_start": tail,
    }


def _with_arrays(sys, pts, N, depth):
    return pts, orbit_arrays(sys, pts, N, depth)


# ---------------------------------------------------------------------------
# structure of g


def structural_certificate(entry: CorpusEntry, samples: int = 100, seed: int = 0) -> dict | None:
    """Exact check, on samples, of the structural reason why Trans(X, g) is empty."""
    if entry.structure is None:
        return None
    g = induced(entry.system)
    pts = entry.space.sample_points(samples, seed)
    if entry.structure == "g-image-in-A":
        ok = all(component(g.maps[0](x)) == "A" for x in pts)
        return {"kind": entry.structure, "samples": samples, "holds": ok}
    if entry.structure == "g-preserves-copies":
        ok = all(component(g.maps[0](x)) == component(x) for x in pts)
        return {"kind": entry.structure, "samples": samples, "holds": ok}
    raise ValueError(f"unknown structure {entry.structure!r}")


# ---------------------------------------------------------------------------
# dichotomy report

REPORT_VERSION = 1

# property -> detector on one system
_DETECTORS: dict[str, Callable[[PeriodicSystem, DetectorParams], Verdict]] = {
    "minimal": minimality_estimate,
    "sensitive": lambda s, P: sensitivity_verdict(s, "plain", P),
    "thickly_sensitive": lambda s, P: sensitivity_verdict(s, "thick", P),
    "multi_sensitive": lambda s, P: sensitivity_verdict(s, "multi", P),
    "equicontinuous": equicontinuity_verdict,
    "syndetically_equicontinuous": syndetic_equicontinuity_verdict,
    "eventually_sensitive": lambda s, P: eventual_sensitivity_check(s, P),
    "hausdorff_sensitive": lambda s, P: hausdorff_sensitivity_verdict(s, "plain", P),
    "thickly_hausdorff_sensitive": lambda s, P: hausdorff_sensitivity_verdict(s, "thick", P),
    "multi_hausdorff_sensitive": lambda s, P: hausdorff_sensitivity_verdict(s, "multi", P),
    "topologically_equicontinuous": topological_equicontinuity_verdict,
    "syndetically_topologically_equicontinuous": syndetic_topological_equicontinuity_verdict,
}
DETECTOR_NAMES = tuple(_DETECTORS)


@dataclass(frozen=True)
class Row:
    """A dichotomy ``either A or B`` or an equivalence ``A iff B``."""

    name: str
    kind: str  # "dichotomy" | "f-vs-g" | "equivalence"
    left: str
    right: str
    needs_minimal: bool
    needs_trans_g: bool
    label: str


ROWS = (
    Row("sensitive-or-equicontinuous", "dichotomy", "sensitive", "equicontinuous", True, True,
        "minimal but is neither sensitive nor equicontinuous"),
    Row("thickly-sensitive-or-syndetically-equicontinuous", "dichotomy", "thickly_sensitive",
        "syndetically_equicontinuous", True, True, "neither thickly sensitive nor syndetically equicontinuous"),
    Row("equicontinuous-or-eventually-sensitive", "dichotomy", "equicontinuous", "eventually_sensitive", False, True,
        "neither equicontinuous nor eventually sensitive"),
    Row("multi-sensitive-or-syndetically-equicontinuous", "dichotomy", "multi_sensitive",
        "syndetically_equicontinuous", True, True, "neither multi-sensitive nor syndetically equicontinuous"),
    Row("topologically-equicontinuous-or-hausdorff-sensitive", "dichotomy", "topologically_equicontinuous",
        "hausdorff_sensitive", True, True, "neither topologically equicontinuous nor Hausdorff sensitive"),
    Row("syndetically-topologically-equicontinuous-or-thickly-hausdorff-sensitive", "dichotomy",
        "syndetically_topologically_equicontinuous", "thickly_hausdorff_sensitive", True, True,
        "neither syndetically topologically equicontinuous nor thickly Hausdorff sensitive"),
    Row("syndetic-equicontinuity-f-vs-g", "f-vs-g", "syndetically_equicontinuous", "syndetically_equicontinuous",
        False, False, "syndetic equicontinuity of f and g differ"),
    Row("thick-sensitivity-f-vs-g", "f-vs-g", "thickly_sensitive", "thickly_sensitive", False, False,
        "thick sensitivity of f and g differ"),
    Row("thick-iff-multi-sensitive", "equivalence", "thickly_sensitive", "multi_sensitive", False, True,
        "thick and multi-sensitivity differ"),
    Row("hausdorff-sensitivity-f-vs-g", "f-vs-g", "hausdorff_sensitive", "hausdorff_sensitive", False, False,
        "Hausdorff sensitivity of f and g differ"),
    Row("thick-hausdorff-f-vs-g", "f-vs-g", "thickly_hausdorff_sensitive", "thickly_hausdorff_sensitive", False,
        False, "thick Hausdorff sensitivity of f and g differ"),
    Row("thick-iff-multi-hausdorff", "equivalence", "thickly_hausdorff_sensitive", "multi_hausdorff_sensitive", False,
        True, "thick and multi-Hausdorff sensitivity differ"),
)
ROW_NAMES = tuple(r.name for r in ROWS)


class DetectorSuite:
    """Lazily evaluated detector verdicts on ``f`` and on the induced ``g``."""

    def __init__(self, entry: CorpusEntry, P: DetectorParams):
        self.entry = entry
        self.P = P
        self.systems = {"f": entry.system, "g": induced(entry.system)}
        self._cache: dict[tuple[str, str], Verdict] = {}

    def verdict(self, prop: str, which: str = "f") -> Verdict:
        key = (prop, which)
        if key not in self._cache:
            self._cache[key] = _DETECTORS[prop](self.systems[which], self.P)
        return self._cache[key]

    def outcome(self, prop: str, which: str = "f") -> str:
        return self.verdict(prop, which).outcome

    def trans_g_nonempty(self) -> tuple[str, str]:
        """('yes'|'no'|'unknown', reason)."""
        cert = structural_certificate(self.entry, seed=self.P.seed)
        if cert is not None and cert["holds"]:
            return "no", f"structural certificate {cert['kind']} holds on {cert['samples']} samples"
        g_min = self.outcome("minimal", "g")
        if g_min == FOR:
            return "yes", "every sampled start is g-transitive at the net scale"
        expected = self.entry.expect("trans_g_empty")
        if expected is not None:
            return ("no" if expected else "yes"), "manifest: " + self.entry.manifest["trans_g_empty"].anchor
        return "unknown", "no sampled start is g-transitive at horizon N"

    def minimal(self) -> tuple[str, str]:
        o = self.outcome("minimal", "f")
        return {FOR: "yes", AGAINST: "no"}.get(o, "unknown"), f"minimality estimate: {o}"


def _hypothesis(suite: DetectorSuite, row: Row) -> tuple[str, list[str]]:
    parts, status = [], "yes"
    checks = []
    if row.needs_minimal:
        checks.append(("minimal", suite.minimal()))
    if row.needs_trans_g:
        checks.append(("Trans(X,g) nonempty", suite.trans_g_nonempty()))
    for name, (val, why) in checks:
        parts.append(f"{name}: {val} ({why})")
        if val == "no":
            status = "no"
        elif val == "unknown" and status == "yes":
            status = "unknown"
    return status, parts


def _evaluate_row(suite: DetectorSuite, row: Row) -> dict:
    hyp, why = _hypothesis(suite, row)
    if row.kind == "dichotomy":
        a, b = suite.outcome(row.left), suite.outcome(row.right)
        if FOR in (a, b):
            status, note = "CONSISTENT", "a horn holds"
        elif a == AGAINST and b == AGAINST:
            status, note = "VIOLATION", row.label
        else:
            status, note = "INCONCLUSIVE", "horns undecided"
        outcomes = {row.left: a, row.right: b}
    else:
        if row.kind == "f-vs-g":
            a, b = suite.outcome(row.left, "f"), suite.outcome(row.right, "g")
            outcomes = {f"{row.left}[f]": a, f"{row.right}[g]": b}
        else:
            a, b = suite.outcome(row.left), suite.outcome(row.right)
            outcomes = {row.left: a, row.right: b}
        if a == b and a != INCONCLUSIVE:
            status, note = "CONSISTENT", "verdicts agree"
        elif {a, b} == {FOR, AGAINST}:
            status, note = "VIOLATION", row.label
        else:
            status, note = "INCONCLUSIVE", "a verdict is inconclusive"
    if hyp == "no":
        # the theorem says nothing here; report what was observed
        if status == "VIOLATION":
            note = f"hypothesis fails; {row.label}"
        elif status == "CONSISTENT" and row.kind == "dichotomy":
            note = "hypothesis not applicable but horn satisfied anyway"
        else:
            note = f"hypothesis fails; {note}"
        status = "INFO"
    elif hyp == "unknown" and status == "VIOLATION":
        status, note = "INCONCLUSIVE", f"hypothesis undecided; {row.label}"
    return {"row": row.name, "kind": row.kind, "flag": status, "note": note, "hypothesis": hyp,
            "hypothesis_detail": why, "outcomes": outcomes}


def dichotomy_report(entry: CorpusEntry, P: DetectorParams, rows: Sequence[str] | None = None) -> dict:
    """Consistency matrix over the selected theorem rows (all by default)."""
    unknown = set(rows or ()) - set(ROW_NAMES)
    if unknown:
        raise ValueError(f"unknown rows {sorted(unknown)}")
    suite = DetectorSuite(entry, P)
    selected = [r for r in ROWS if rows is None or r.name in rows]
    matrix = [_evaluate_row(suite, r) for r in selected]
    manifest = []
    for prop, exp in entry.manifest.items():
        if exp.value is None or prop not in _DETECTORS:
            continue
        o = suite.outcome(prop)
        want = FOR if exp.value else AGAINST
        flag = "CONSISTENT" if o == want else ("INCONCLUSIVE" if o == INCONCLUSIVE else "VIOLATION")
        manifest.append({"property": prop, "expected": exp.value, "anchor": exp.anchor, "outcome": o, "flag": flag})
    verdicts = [v.as_dict() | {"which": k[1]} for k, v in sorted(suite._cache.items())]
    cert = structural_certificate(entry, seed=P.seed)
    return {
        "version": REPORT_VERSION,
        "entry": entry.entry_id,
        "params": P.echo(entry.space),
        "structure": cert,
        "matrix": matrix,
        "manifest": manifest,
        "verdicts": verdicts,
    }
