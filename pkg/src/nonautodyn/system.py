"""Periodic non-autonomous systems and their orbits."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import HorizonTooLarge
from .space import StateSpace

DEFAULT_MAX_HORIZON = 10_000_000

Map = Callable[[object], object]


def max_horizon() -> int:
    """Largest permitted orbit horizon (``NONAUTODYN_MAX_HORIZON`` overrides)."""
    v = os.environ.get("NONAUTODYN_MAX_HORIZON")
    return int(v) if v else DEFAULT_MAX_HORIZON


@dataclass(frozen=True)
class PeriodicSystem:
    """Maps ``f_1..f_p`` applied cyclically: ``f_{n+lp} = f_n``."""

    maps: tuple[Map, ...]
    space: StateSpace
    system_id: str = "system"

    def __post_init__(self):
        if not self.maps:
            raise ValueError("a periodic system needs at least one map")
        object.__setattr__(self, "maps", tuple(self.maps))

    @property
    def period(self) -> int:
        return len(self.maps)

    def map_at(self, n: int) -> Map:
        """``f_n`` for ``n >= 1``."""
        return self.maps[(n - 1) % self.period]


def iterate(sys: PeriodicSystem, x, n: int):
    """``f_1^n(x) = f_n o ... o f_1 (x)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = sys.period
    for i in range(n):
        x = sys.maps[i % p](x)
    return x


class _Composite:
    """Lazy composition of a map window, applied in order."""

    def __init__(self, maps: Sequence[Map]):
        self.maps = tuple(maps)

    def __call__(self, x):
        for f in self.maps:
            x = f(x)
        return x

    def __repr__(self) -> str:
        return f"_Composite({len(self.maps)} maps)"


def window_compose(sys: PeriodicSystem, i: int, k: int) -> Map:
    """``f_i^k = f_{i+k-1} o ... o f_i``; the identity when ``k == 0``."""
    if i < 1 or k < 0:
        raise ValueError("need i >= 1 and k >= 0")
    return _Composite([sys.map_at(i + j) for j in range(k)])


def induced(sys: PeriodicSystem) -> PeriodicSystem:
    """The autonomous system ``g = f_p o ... o f_1`` as a period-one system."""
    if sys.period == 1:
        return PeriodicSystem(sys.maps, sys.space, sys.system_id + ":g")
    return PeriodicSystem((_Composite(sys.maps),), sys.space, sys.system_id + ":g")


@dataclass
class OrbitSegment:
    start: object
    horizon: int
    states: list

    def check(self, sys: PeriodicSystem) -> bool:
        if self.states[0] != self.start or len(self.states) != self.horizon + 1:
            return False
        return all(self.states[n + 1] == sys.maps[n % sys.period](self.states[n]) for n in range(self.horizon))


def orbit_segment(sys: PeriodicSystem, x, N: int) -> OrbitSegment:
    """States ``f_1^n(x)`` for ``n = 0..N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > max_horizon():
        raise HorizonTooLarge(f"horizon {N} exceeds {max_horizon()}")
    states = [x]
    maps = sys.maps
    p = len(maps)
    for n in range(N):
        x = maps[n % p](x)
        states.append(x)
    return OrbitSegment(states[0], N, states)
