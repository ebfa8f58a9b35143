"""Concrete state spaces: metrics, balls, finite covers and seeded sampling.

Four shapes are provided:

* ``CircleSpace``: the unit circle with arc-length metric, optionally with
  isolated planar points at distance 2 from everything else.
* ``WedgeSpace``: two unit circles glued at one point, with the intrinsic
  (shortest path) metric.
* ``SymbolicSpace``: one binary subshift with the metric ``2**-k``.
* ``TwoCopySpace``: two disjoint copies of a subshift, 2 apart.

Angles are held as exact fractions of a full turn in ``TURN_BITS``-bit
fixed point, so rotations compose without drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import symbolic as sym
from .errors import MixedSpace, NetTooLarge, WindowExhausted

TURN_BITS = 128
TURN = 1 << TURN_BITS
HALF_TURN = TURN >> 1
CROSS_DISTANCE = 2.0
MAX_NET_POINTS = 100_000

_PI = Fraction(
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899863"
)
TWO_PI = 2 * math.pi


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CirclePoint:
    """``e^{i theta}`` with ``theta = 2 pi turn / TURN``."""

    turn: int

    def __post_init__(self):
        if not 0 <= self.turn < TURN:
            object.__setattr__(self, "turn", self.turn % TURN)

    @staticmethod
    def from_theta(theta: float | Fraction | str) -> "CirclePoint":
        t = Fraction(theta) / (2 * _PI)
        return CirclePoint(round(t * TURN) % TURN)

    @property
    def theta(self) -> float:
        return self.turn / TURN * TWO_PI


@dataclass(frozen=True)
class IsolatedPoint:
    """The planar point ``(label, 0)``; labels 2 and 3 are used."""

    label: int


@dataclass(frozen=True)
class WedgePoint:
    """``e^{i theta}`` on circle A or ``2 + e^{i theta}`` on circle B.

    The tangent point is always stored as A with turn 0.
    """

    circle: str
    turn: int

    def __post_init__(self):
        t = self.turn % TURN
        c = self.circle
        if c not in ("A", "B"):
            raise ValueError("circle must be 'A' or 'B'")
        if c == "B" and t == HALF_TURN:
            c, t = "A", 0
        object.__setattr__(self, "turn", t)
        object.__setattr__(self, "circle", c)

    @property
    def theta(self) -> float:
        return self.turn / TURN * TWO_PI


TANGENT_POINT = WedgePoint("A", 0)


@dataclass(frozen=True)
class TaggedPoint:
    """A point of a subshift placed in copy ``a`` or ``b``."""

    copy: str
    seq: sym.SymbolicPoint


Point = object


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class Entourage:
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("entourage epsilon must be positive")

    def contains(self, space: "StateSpace", x: Point, y: Point) -> bool:
        return space.distance(x, y) < self.epsilon


@dataclass
class FiniteCover:
    members: list[Ball]
    certified_on: list[Point] = field(default_factory=list)


@dataclass
class OrbitArray:
    """Vectorized states: a component/copy id and a coordinate per state.

    ``coord`` is a float turn in [0,1) for circle-type spaces and a
    ``(n, depth)`` symbol matrix for symbolic ones.  ``depth`` is ``None``
    when distances computed from the arrays are exact.
    """

    comp: np.ndarray
    coord: np.ndarray
    depth: int | None = None

    def __len__(self) -> int:
        return len(self.comp)

    def take(self, idx) -> "OrbitArray":
        return OrbitArray(self.comp[idx], self.coord[idx], self.depth)


def _arc(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.abs(a - b) % 1.0
    return np.minimum(d, 1.0 - d) * TWO_PI


def _arc_exact(t1: int, t2: int) -> float:
    d = (t1 - t2) % TURN
    d = min(d, TURN - d)
    return d / TURN * TWO_PI


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *stream])


def _random_turn(rng: np.random.Generator) -> int:
    return int.from_bytes(rng.bytes(TURN_BITS // 8), "little")


def _format_theta(turn: int) -> str:
    v = Fraction(turn, TURN) * 2 * _PI
    digits = 45
    scaled = round(v * 10**digits)
    s = str(scaled).rjust(digits + 1, "0")
    return f"{s[:-digits]}.{s[-digits:]}"


def _parse_theta(text: str) -> int:
    return round(Fraction(text) / (2 * _PI) * TURN) % TURN


# ---------------------------------------------------------------------------
# spaces


class StateSpace:
    space_id: str = ""
    diameter: float = 0.0
    name: str = ""

    # metric ---------------------------------------------------------------
    def distance(self, x: Point, y: Point) -> float:
        raise NotImplementedError

    def contains(self, x: Point) -> bool:
        raise NotImplementedError

    def _check(self, *pts: Point) -> None:
        for p in pts:
            if not self.contains(p):
                raise MixedSpace(f"{p!r} is not a point of {self.name}")

    # codec ----------------------------------------------------------------
    def serialize(self, x: Point) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> Point:
        raise NotImplementedError

    # sampling -------------------------------------------------------------
    def sample_point(self, seed: int, i: int) -> Point:
        raise NotImplementedError

    def sample_points(self, n: int, seed: int) -> list[Point]:
        if n < 1:
            raise ValueError("n must be >= 1")
        return [self.sample_point(seed, i) for i in range(n)]

    def sample_in_ball(self, ball: Ball, n: int, seed: int) -> list[Point]:
        raise NotImplementedError

    def epsilon_net(self, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
        raise NotImplementedError

    # vectorized -----------------------------------------------------------
    def resolution(self, eps: float) -> int | None:
        """Symbols needed to decide ``d < eps`` exactly (None for exact metrics)."""
        return None

    def orbit_array(self, states: Sequence[Point], depth: int | None = None) -> OrbitArray:
        raise NotImplementedError

    def array_distance(self, a: OrbitArray, b: OrbitArray) -> np.ndarray:
        raise NotImplementedError

    # covers ---------------------------------------------------------------
    def default_cover(self, eps: float, seed: int = 0) -> FiniteCover:
        raise NotImplementedError


class CircleSpace(StateSpace):
    """Unit circle (arc length) plus optional isolated points ``(2,0), (3,0)``."""

    space_id = "circle-plus-isolated"

    def __init__(self, isolated: tuple[int, ...] = (2, 3)):
        self.isolated = tuple(isolated)
        self.diameter = CROSS_DISTANCE if self.isolated else math.pi
        self.name = "circle+" + ",".join(f"({k},0)" for k in self.isolated) if self.isolated else "circle"

    def contains(self, x: Point) -> bool:
        return isinstance(x, CirclePoint) or (isinstance(x, IsolatedPoint) and x.label in self.isolated)

    def distance(self, x: Point, y: Point) -> float:
        self._check(x, y)
        if isinstance(x, CirclePoint) and isinstance(y, CirclePoint):
            return _arc_exact(x.turn, y.turn)
        return 0.0 if x == y else CROSS_DISTANCE

    def serialize(self, x: Point) -> str:
        self._check(x)
        if isinstance(x, IsolatedPoint):
            return f"iso:({x.label},0)"
        return f"circle:θ={_format_theta(x.turn)}"

    def parse(self, text: str) -> Point:
        if text.startswith("iso:("):
            return IsolatedPoint(int(text[5:].split(",")[0]))
        if text.startswith("circle:θ="):
            return CirclePoint(_parse_theta(text[len("circle:θ=") :]))
        raise ValueError(f"cannot parse {text!r}")

    def sample_point(self, seed: int, i: int) -> Point:
        # stratified: every tenth sample slot is reserved for each isolated point
        if self.isolated and i % 10 in (3, 7):
            return IsolatedPoint(self.isolated[0] if i % 10 == 3 else self.isolated[-1])
        return CirclePoint(_random_turn(_rng(seed, 1, i)))

    def sample_in_ball(self, ball: Ball, n: int, seed: int) -> list[Point]:
        c, r = ball.center, ball.radius
        out: list[Point] = []
        if isinstance(c, IsolatedPoint):
            if r <= CROSS_DISTANCE:
                return [c] * n
            return [c] + self.sample_points(n - 1, seed) if n > 1 else [c]
        for i in range(n):
            if i == 0:
                out.append(c)
                continue
            rng = _rng(seed, 2, i)
            if r > CROSS_DISTANCE and self.isolated and i % 5 == 1:
                out.append(IsolatedPoint(self.isolated[(i // 5) % len(self.isolated)]))
                continue
            width = min(r, math.pi)
            u = rng.uniform(-1.0, 1.0) * width * 0.999999
            out.append(CirclePoint(c.turn + round(u / TWO_PI * TURN)))
        return out

    def epsilon_net(self, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
        if not 0 < eps < self.diameter:
            raise ValueError("eps must lie in (0, diameter)")
        n = math.ceil(TWO_PI / eps)
        if n + len(self.isolated) > max_points:
            raise NetTooLarge(f"{n} circle points exceed {max_points}")
        pts: list[Point] = [CirclePoint(k * TURN // n) for k in range(n)]
        return pts + [IsolatedPoint(k) for k in self.isolated]

    def orbit_array(self, states: Sequence[Point], depth: int | None = None) -> OrbitArray:
        comp = np.zeros(len(states), np.int8)
        coord = np.zeros(len(states), np.float64)
        for i, s in enumerate(states):
            if isinstance(s, IsolatedPoint):
                comp[i] = s.label
            else:
                coord[i] = s.turn / TURN
        return OrbitArray(comp, coord)

    def array_distance(self, a: OrbitArray, b: OrbitArray) -> np.ndarray:
        same = a.comp == b.comp
        arc = _arc(a.coord, b.coord)
        return np.where(same, np.where(a.comp == 0, arc, 0.0), CROSS_DISTANCE)

    def default_cover(self, eps: float, seed: int = 0) -> FiniteCover:
        return arc_cover(self, spacing=eps, radius=eps)


class WedgeSpace(StateSpace):
    """Circles A (centre 0) and B (centre 2) tangent at ``1``, intrinsic metric."""

    space_id = "two-tangent-circles"
    name = "wedge"
    diameter = 2 * math.pi

    def contains(self, x: Point) -> bool:
        return isinstance(x, WedgePoint)

    def distance(self, x: Point, y: Point) -> float:
        self._check(x, y)
        if x.circle == y.circle:
            return _arc_exact(x.turn, y.turn)
        a, b = (x, y) if x.circle == "A" else (y, x)
        return _arc_exact(a.turn, 0) + _arc_exact(b.turn, HALF_TURN)

    def serialize(self, x: Point) -> str:
        self._check(x)
        return f"wedge:{x.circle}:θ={_format_theta(x.turn)}"

    def parse(self, text: str) -> Point:
        if not text.startswith("wedge:") or text[7:10] != ":θ=":
            raise ValueError(f"cannot parse {text!r}")
        return WedgePoint(text[6], _parse_theta(text[10:]))

    def sample_point(self, seed: int, i: int) -> Point:
        return WedgePoint("AB"[i % 2], _random_turn(_rng(seed, 1, i)))

    def sample_in_ball(self, ball: Ball, n: int, seed: int) -> list[Point]:
        c, r = ball.center, ball.radius
        other = "B" if c.circle == "A" else "A"
        p_turn = 0 if c.circle == "A" else HALF_TURN
        q_turn = HALF_TURN if c.circle == "A" else 0
        to_p = _arc_exact(c.turn, p_turn)
        own = 2 * min(r, math.pi)
        rest = max(0.0, r - to_p)
        far = 2 * min(rest, math.pi)
        out: list[Point] = [c]
        for i in range(1, n):
            rng = _rng(seed, 2, i)
            if rng.uniform(0, own + far) < own:
                u = rng.uniform(-1.0, 1.0) * min(r, math.pi) * 0.999999
                out.append(WedgePoint(c.circle, c.turn + round(u / TWO_PI * TURN)))
            else:
                u = rng.uniform(-1.0, 1.0) * min(rest, math.pi) * 0.999999
                out.append(WedgePoint(other, q_turn + round(u / TWO_PI * TURN)))
        return out

    def epsilon_net(self, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
        if not 0 < eps < self.diameter:
            raise ValueError("eps must lie in (0, diameter)")
        n = math.ceil(TWO_PI / eps)
        if 2 * n > max_points:
            raise NetTooLarge(f"{2 * n} points exceed {max_points}")
        a = [WedgePoint("A", k * TURN // n) for k in range(n)]
        b = [WedgePoint("B", HALF_TURN + k * TURN // n) for k in range(1, n)]
        return a + b

    def orbit_array(self, states: Sequence[Point], depth: int | None = None) -> OrbitArray:
        comp = np.array([0 if s.circle == "A" else 1 for s in states], np.int8)
        coord = np.array([s.turn / TURN for s in states], np.float64)
        return OrbitArray(comp, coord)

    def array_distance(self, a: OrbitArray, b: OrbitArray) -> np.ndarray:
        same = _arc(a.coord, b.coord)
        a_to_p = np.where(a.comp == 0, _arc(a.coord, 0.0), _arc(a.coord, 0.5))
        b_to_p = np.where(b.comp == 0, _arc(b.coord, 0.0), _arc(b.coord, 0.5))
        return np.where(a.comp == b.comp, same, a_to_p + b_to_p)

    def default_cover(self, eps: float, seed: int = 0) -> FiniteCover:
        return arc_cover(self, spacing=eps, radius=eps)


# ---------------------------------------------------------------------------
# symbolic models


class SymbolicModel:
    """How to sample points of one subshift, inside or outside a cylinder."""

    name = ""
    tree: sym.TreeSpec

    def sample(self, rng: np.random.Generator) -> sym.SymbolicPoint:
        raise NotImplementedError

    def in_cylinder(self, word: str, rng: np.random.Generator) -> sym.SymbolicPoint:
        raise NotImplementedError

    def language(self, n: int) -> set[str]:
        return sym.get_tree(self.tree).language(n)


class SturmianModel(SymbolicModel):
    def __init__(self, rho: sym.Real = sym.GOLDEN):
        self.rho = rho
        self.tree = sym.sturmian_tree_spec(rho)
        self.name = f"sturmian[{rho.text()}]"

    def _params(self, rng) -> sym.SturmianParams:
        g = int.from_bytes(rng.bytes(16), "little")
        return sym.SturmianParams(self.rho, sym.Real.rational(Fraction(g, 1 << 128)))

    def sample(self, rng):
        return sym.SturmianPoint(self._params(rng), 0)

    def in_cylinder(self, word: str, rng):
        params = self._params(rng)
        span = 64 * len(word) + 4096
        while True:
            w = sym.array_to_word(sym.mechanical_word(params, 0, span + len(word)))
            k = w.find(word)
            if k >= 0:
                return sym.SturmianPoint(params, k)
            if span > sym.MAX_INNER:
                raise WindowExhausted(f"word {word!r} not found; not in the language?")
            span *= 4


class OdometerModel(SymbolicModel):
    name = "odometer"
    tree = sym.FULL

    def sample(self, rng):
        return sym.OdometerPoint(sym.RandomBits(int(rng.integers(1 << 62))))

    def in_cylinder(self, word: str, rng):
        return sym.OdometerPoint.from_bits(word, pad_seed=int(rng.integers(1 << 62)))

    def language(self, n: int) -> set[str]:
        return sym.FullShiftTree().language(n)


class SubstitutionModel(SymbolicModel):
    """Points of a substitution subshift: its fixed point read from an offset."""

    def __init__(self, rule: str = "chacon", max_offset: int = 1_000_000):
        self.rule = rule
        self.tree = sym.CHACON_TREE
        self.name = rule
        self.max_offset = max_offset

    def sample(self, rng):
        return sym.SequencePoint(self.rule, int(rng.integers(self.max_offset)))

    def in_cylinder(self, word: str, rng):
        tree = sym.get_tree(self.tree)
        k = tree.find(word, int(rng.integers(self.max_offset)))
        return sym.SequencePoint(self.rule, k)


class CodedModel(SymbolicModel):
    """An inner system transported onto the language of ``outer`` by coding."""

    def __init__(self, inner: SymbolicModel, outer: sym.TreeSpec):
        self.inner = inner
        self.tree = outer
        self.name = f"{inner.name}->{outer.text()}"

    def sample(self, rng):
        return sym.CodedPoint(self.inner.sample(rng), self.inner.tree, self.tree)

    def in_cylinder(self, word: str, rng):
        code = sym.get_tree(self.tree).encode_word(word)
        inner_word = sym.get_tree(self.inner.tree).decode(code)
        return sym.CodedPoint(self.inner.in_cylinder(inner_word, rng), self.inner.tree, self.tree)


# 2**-k underflows to 0.0 past k = 1074; clamp so distinct points stay apart
_MIN_EXP = 1074


def _dyadic(k: int) -> float:
    return 2.0 ** -min(k, _MIN_EXP)


def _cylinder_depth(eps: float) -> int:
    """Symbols two points must share to be closer than ``eps``."""
    return max(0, math.floor(math.log2(1.0 / eps))) + 1 if eps <= 1 else 0


def symbolic_distance(x: sym.SymbolicPoint, y: sym.SymbolicPoint, limit: int = sym.MAX_WINDOW) -> float:
    if x == y:
        return 0.0
    n = sym.W_MIN
    while True:
        a, b = x.symbols(n), y.symbols(n)
        diff = np.nonzero(a != b)[0]
        if diff.size:
            return _dyadic(int(diff[0]))
        if n >= limit:
            raise WindowExhausted(f"points agree on {n} symbols")
        n = min(4 * n, limit)


class _SymbolicBase(StateSpace):
    diameter = 1.0

    def resolution(self, eps: float) -> int:
        return _cylinder_depth(eps)

    def array_distance(self, a: OrbitArray, b: OrbitArray) -> np.ndarray:
        k = min(a.coord.shape[1], b.coord.shape[1])
        neq = a.coord[:, :k] != b.coord[:, :k]
        first = np.argmax(neq, axis=1)
        anyd = neq.any(axis=1)
        d = np.where(anyd, np.ldexp(1.0, -np.minimum(first, _MIN_EXP)), _dyadic(k))
        return np.where(a.comp == b.comp, d, CROSS_DISTANCE)

    def _ball_depth(self, ball: Ball) -> int:
        return _cylinder_depth(ball.radius)


class SymbolicSpace(_SymbolicBase):
    """A single binary subshift."""

    space_id = "plain-symbolic"

    def __init__(self, model: SymbolicModel):
        self.model = model
        self.name = model.name

    def contains(self, x: Point) -> bool:
        return isinstance(x, sym.SymbolicPoint)

    def distance(self, x: Point, y: Point) -> float:
        self._check(x, y)
        return symbolic_distance(x, y)

    def serialize(self, x: Point) -> str:
        self._check(x)
        return f"sym:{x.window(16)}@{x.describe()}"

    def parse(self, text: str) -> Point:
        if not text.startswith("sym:"):
            raise ValueError(f"cannot parse {text!r}")
        return sym.parse_point(text.split("@", 1)[1])

    def sample_point(self, seed: int, i: int) -> Point:
        return self.model.sample(_rng(seed, 1, i))

    def sample_in_ball(self, ball: Ball, n: int, seed: int) -> list[Point]:
        depth = self._ball_depth(ball)
        if depth == 0:
            return [ball.center] + [self.sample_point(seed, i) for i in range(1, n)]
        word = ball.center.window(depth)
        return [ball.center] + [self.model.in_cylinder(word, _rng(seed, 2, i)) for i in range(1, n)]

    def epsilon_net(self, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        depth = _cylinder_depth(eps)
        words = sorted(self.model.language(depth))
        if len(words) > max_points:
            raise NetTooLarge(f"{len(words)} cylinders exceed {max_points}")
        return [self.model.in_cylinder(w, _rng(seed, 3, i)) for i, w in enumerate(words)]

    def orbit_array(self, states: Sequence[Point], depth: int | None = None) -> OrbitArray:
        depth = depth or sym.W_MIN
        return OrbitArray(np.zeros(len(states), np.int8), sym.prefix_matrix(list(states), depth), depth)

    def default_cover(self, eps: float, seed: int = 0) -> FiniteCover:
        return cylinder_cover(self, _cylinder_depth(eps), seed)


class TwoCopySpace(_SymbolicBase):
    """Copies ``a`` and ``b`` of subshifts; each copy has its own sampling model.

    Both models must share one language (the common Cantor model).
    """

    space_id = "two-copy-symbolic"

    def __init__(self, model_a: SymbolicModel, model_b: SymbolicModel):
        self.models = {"a": model_a, "b": model_b}
        self.name = f"{model_a.name}|{model_b.name}"
        self.diameter = CROSS_DISTANCE

    def contains(self, x: Point) -> bool:
        return isinstance(x, TaggedPoint) and x.copy in self.models

    def distance(self, x: Point, y: Point) -> float:
        self._check(x, y)
        if x.copy != y.copy:
            return CROSS_DISTANCE
        return symbolic_distance(x.seq, y.seq)

    def serialize(self, x: Point) -> str:
        self._check(x)
        return f"sym:{x.copy}:{x.seq.window(16)}@{x.seq.describe()}"

    def parse(self, text: str) -> Point:
        if not text.startswith("sym:") or text[5] != ":":
            raise ValueError(f"cannot parse {text!r}")
        return TaggedPoint(text[4], sym.parse_point(text.split("@", 1)[1]))

    def sample_point(self, seed: int, i: int) -> Point:
        c = "ab"[i % 2]
        return TaggedPoint(c, self.models[c].sample(_rng(seed, 1, i)))

    def sample_in_ball(self, ball: Ball, n: int, seed: int) -> list[Point]:
        c = ball.center
        if ball.radius > CROSS_DISTANCE:
            return [c] + [self.sample_point(seed, i) for i in range(1, n)]
        depth = self._ball_depth(ball)
        model = self.models[c.copy]
        if depth == 0:
            return [c] + [TaggedPoint(c.copy, model.sample(_rng(seed, 2, i))) for i in range(1, n)]
        word = c.seq.window(depth)
        return [c] + [TaggedPoint(c.copy, model.in_cylinder(word, _rng(seed, 2, i))) for i in range(1, n)]

    def epsilon_net(self, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        depth = _cylinder_depth(eps)
        out: list[Point] = []
        for ci, c in enumerate("ab"):
            words = sorted(self.models[c].language(depth))
            out += [TaggedPoint(c, self.models[c].in_cylinder(w, _rng(seed, 3, ci, i))) for i, w in enumerate(words)]
        if len(out) > max_points:
            raise NetTooLarge(f"{len(out)} cylinders exceed {max_points}")
        return out

    def orbit_array(self, states: Sequence[Point], depth: int | None = None) -> OrbitArray:
        depth = depth or sym.W_MIN
        comp = np.array([0 if s.copy == "a" else 1 for s in states], np.int8)
        coord = np.zeros((len(states), depth), np.uint8)
        for cval, c in ((0, "a"), (1, "b")):
            idx = np.nonzero(comp == cval)[0]
            if idx.size:
                coord[idx] = sym.prefix_matrix([states[i].seq for i in idx], depth)
        return OrbitArray(comp, coord, depth)

    def default_cover(self, eps: float, seed: int = 0) -> FiniteCover:
        return cylinder_cover(self, _cylinder_depth(eps), seed)

    def restrict(self, copy: str) -> list[str]:
        return [copy]


# ---------------------------------------------------------------------------
# operations


def distance(space: StateSpace, x: Point, y: Point) -> float:
    return space.distance(x, y)


def sample_points(space: StateSpace, n: int, seed: int) -> list[Point]:
    return space.sample_points(n, seed)


def epsilon_net(space: StateSpace, eps: float, seed: int = 0, max_points: int = MAX_NET_POINTS) -> list[Point]:
    return space.epsilon_net(eps, seed, max_points)


def in_ball(space: StateSpace, ball: Ball, x: Point) -> bool:
    return space.distance(ball.center, x) < ball.radius


def locate_in_cover(space: StateSpace, cover: FiniteCover, x: Point) -> set[int]:
    """Indices of the cover members containing ``x`` (empty means a coverage gap)."""
    return {i for i, b in enumerate(cover.members) if space.distance(b.center, x) < b.radius}


def cover_membership(space: StateSpace, cover: FiniteCover, arr: OrbitArray) -> np.ndarray:
    """Boolean matrix: state ``i`` lies in member ``j``."""
    out = np.zeros((len(arr), len(cover.members)), bool)
    centers = space.orbit_array([b.center for b in cover.members], arr.depth)
    for j, b in enumerate(cover.members):
        c = centers.take(np.full(len(arr), j))
        out[:, j] = space.array_distance(arr, c) < b.radius
    return out


def cylinder_cover(space: StateSpace, depth: int, seed: int = 0) -> FiniteCover:
    """One ball per depth-``depth`` cylinder; each ball is exactly its cylinder."""
    depth = max(depth, 1)
    radius = 2.0 ** -(depth - 1)
    # any eps in (2^-depth, 2^-(depth-1)] selects depth-`depth` cylinders
    reps = space.epsilon_net(0.75 * 2.0 ** -(depth - 1), seed)
    return FiniteCover([Ball(c, radius) for c in reps], reps)


def arc_cover(space: StateSpace, spacing: float, radius: float) -> FiniteCover:
    """Balls of ``radius`` around a net of the given spacing (plus isolated atoms)."""
    net = space.epsilon_net(spacing)
    members = []
    for c in net:
        r = 1.0 if isinstance(c, IsolatedPoint) else radius
        members.append(Ball(c, r))
    return FiniteCover(members, net)


def lebesgue_radius(space: StateSpace, cover: FiniteCover, samples: Sequence[Point]) -> float:
    """Largest lam such that each sampled ball of radius lam sits in one member."""
    best = math.inf
    for x in samples:
        slack = max(b.radius - space.distance(b.center, x) for b in cover.members)
        best = min(best, slack)
    return max(best, 0.0)


def certify_cover(space: StateSpace, cover: FiniteCover, samples: Sequence[Point]) -> bool:
    ok = all(locate_in_cover(space, cover, x) for x in samples)
    if ok:
        cover.certified_on = list(samples)
    return ok
