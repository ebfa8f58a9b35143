"""The example systems, plus the autonomous classics they are built from.

Every entry carries a manifest of expected properties.  Each known value is
tagged with a short anchor describing the claim it encodes; values nobody
claims are left as ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import symbolic as sym
from .errors import ConstructionFailed
from .space import (
    HALF_TURN,
    TURN,
    CirclePoint,
    CircleSpace,
    CodedModel,
    IsolatedPoint,
    OdometerModel,
    StateSpace,
    SturmianModel,
    SubstitutionModel,
    SymbolicSpace,
    TaggedPoint,
    TwoCopySpace,
    WedgePoint,
    WedgeSpace,
)
from .system import PeriodicSystem

PROPERTIES = (
    "minimal",
    "sensitive",
    "equicontinuous",
    "syndetically_equicontinuous",
    "thickly_sensitive",
    "trans_g_empty",
)


@dataclass(frozen=True)
class Expectation:
    value: bool | None
    anchor: str = ""

    def __post_init__(self):
        if self.value is not None and not self.anchor:
            raise ValueError("a known manifest value needs an anchor")


@dataclass
class CorpusEntry:
    entry_id: str
    system: PeriodicSystem
    space: StateSpace
    manifest: dict[str, Expectation]
    description: str = ""
    params: dict = field(default_factory=dict)
    # structural reason why no point is g-transitive, checked by the detectors
    structure: str | None = None

    def expect(self, prop: str) -> bool | None:
        e = self.manifest.get(prop)
        return None if e is None else e.value

    def summary(self) -> str:
        parts = []
        for k, e in self.manifest.items():
            if e.value is not None:
                parts.append(f"{k}={'yes' if e.value else 'no'} [{e.anchor}]")
        return f"{self.entry_id}: {self.description}; " + "; ".join(parts)


def _manifest(**kw) -> dict[str, Expectation]:
    out = {p: Expectation(None) for p in PROPERTIES}
    for k, v in kw.items():
        out[k] = Expectation(*v) if isinstance(v, tuple) else v
    return out


def _turn(rho: sym.Real, bits: int) -> int:
    """``floor(rho * 2**bits)``: the rotation by ``rho`` of a turn (or half turn)."""
    return rho.bounds(bits)[0]


# ---------------------------------------------------------------------------
# map handles (pure callables with readable reprs)


class Rotate:
    def __init__(self, step: int):
        self.step = step

    def __call__(self, x):
        return CirclePoint(x.turn + self.step)

    def __repr__(self):
        return f"Rotate({self.step / TURN:.6f} turn)"


class E1Map:
    """Half-angle rotation on the circle with a table on the isolated points."""

    def __init__(self, step: int, table: dict):
        self.step = step
        self.table = table

    def __call__(self, x):
        if isinstance(x, CirclePoint):
            return CirclePoint(x.turn + self.step)
        return self.table[x.label]

    def __repr__(self):
        return f"E1Map({self.table})"


class WedgeMap:
    """A pasted map: one turn-update per circle, landing on a chosen circle."""

    def __init__(self, on_a: tuple[str, int], on_b: tuple[str, int]):
        self.on_a = on_a
        self.on_b = on_b

    def branch(self, circle: str, turn: int) -> WedgePoint:
        target, add = self.on_a if circle == "A" else self.on_b
        return WedgePoint(target, turn + add)

    def __call__(self, x):
        return self.branch(x.circle, x.turn)

    def __repr__(self):
        return f"WedgeMap(A->{self.on_a[0]}, B->{self.on_b[0]})"


class CopyMap:
    """``(x, a) -> (fa(x), ta)`` and ``(x, b) -> (fb(x), tb)``."""

    def __init__(self, fa, ta: str, fb, tb: str, name: str):
        self.fa, self.ta, self.fb, self.tb, self.name = fa, ta, fb, tb, name

    def __call__(self, x):
        if x.copy == "a":
            return TaggedPoint(self.ta, self.fa(x.seq))
        return TaggedPoint(self.tb, self.fb(x.seq))

    def __repr__(self):
        return self.name


class Conjugated:
    """``h^{-1} o target o h`` where h codes tree ``src`` onto tree ``dst``."""

    def __init__(self, target, src: sym.TreeSpec, dst: sym.TreeSpec, name: str):
        self.target, self.src, self.dst, self.name = target, src, dst, name

    def __call__(self, p):
        return sym.coded(self.target(sym.coded(p, self.src, self.dst)), self.dst, self.src)

    def __repr__(self):
        return self.name


class Shift:
    def __call__(self, p):
        return p.shift()

    def __repr__(self):
        return "shift"


class Identity:
    def __call__(self, x):
        return x

    def __repr__(self):
        return "identity"


# ---------------------------------------------------------------------------
# builders


def _rho(params: dict) -> sym.Real:
    r = params.get("rho", sym.GOLDEN)
    return r if isinstance(r, sym.Real) else sym.Real.parse(str(r))


_ALLOWED = {"rho"}


def build_example(entry_id: str, params: dict | None = None) -> CorpusEntry:
    """Build a corpus entry by id (``E1``-``E4`` or one of the autonomous classics)."""
    params = dict(params or {})
    unknown = set(params) - _ALLOWED
    if unknown:
        raise ValueError(f"unknown corpus parameters: {sorted(unknown)}")
    if entry_id not in BUILDERS:
        raise KeyError(f"unknown corpus entry {entry_id!r}; known: {sorted(BUILDERS)}")
    rho = _rho(params)
    if rho.is_rational() or not 0 < float(rho) < 1:
        raise ValueError("rho must be an irrational slope in (0,1)")
    entry = BUILDERS[entry_id](rho)
    entry.params = {"rho": rho.text(), **{k: v for k, v in params.items() if k != "rho"}}
    return entry


def _e1(rho: sym.Real) -> CorpusEntry:
    space = CircleSpace((2, 3))
    half = _turn(rho, 127)  # alpha/2 with alpha = 2 pi rho
    f1 = E1Map(half, {2: IsolatedPoint(3), 3: IsolatedPoint(2)})
    f2 = E1Map(half, {2: CirclePoint(0), 3: IsolatedPoint(3)})
    sys = PeriodicSystem((f1, f2), space, "E1")
    man = _manifest(
        minimal=(False, "isolated atoms are not reached from circle points"),
        trans_g_empty=(False, "(2,0) is g-transitive through (3,0) and (1,0)"),
    )
    man["three_in_trans_g"] = Expectation(False, "(3,0) is not g-transitive")
    man["three_in_trans_f"] = Expectation(True, "(3,0) is transitive under the sequence")
    return CorpusEntry("E1", sys, space, man, "circle with two isolated points, half-angle rotations")


def _e2(rho: sym.Real) -> CorpusEntry:
    space = WedgeSpace()
    a = _turn(rho, 128)
    f1 = WedgeMap(("B", a), ("B", a + HALF_TURN))
    f2 = WedgeMap(("A", HALF_TURN), ("A", 0))
    # pasting: both branch formulas must agree at the tangent point
    for f in (f1, f2):
        if f.branch("A", 0) != f.branch("B", HALF_TURN):
            raise ConstructionFailed("branch formulas disagree at the tangent point")
    sys = PeriodicSystem((f1, f2), space, "E2")
    man = _manifest(
        minimal=(True, "every orbit of the sequence is dense in both circles"),
        trans_g_empty=(True, "g maps the whole space into circle A"),
    )
    return CorpusEntry("E2", sys, space, man, "two tangent circles with pasted rotations", structure="g-image-in-A")


def _two_copy(rho: sym.Real, chacon: bool) -> tuple[TwoCopySpace, PeriodicSystem]:
    st = sym.sturmian_tree_spec(rho)
    swap = CopyMap(Identity(), "b", Identity(), "a", "swap")
    if not chacon:
        f = Conjugated(sym.odometer_add1, st, sym.FULL, "h^-1 R1 h")
        space = TwoCopySpace(CodedModel(OdometerModel(), st), SturmianModel(rho))
        f1 = CopyMap(f, "b", Shift(), "a", "f1[a: conjugated odometer, b: shift]")
        return space, PeriodicSystem((f1, swap), space, "E3")
    f = Conjugated(Shift(), st, sym.CHACON_TREE, "h^-1 sigma_chacon h")
    space = TwoCopySpace(SturmianModel(rho), CodedModel(SubstitutionModel("chacon"), st))
    f1 = CopyMap(Shift(), "b", f, "a", "f1[a: shift, b: conjugated chacon]")
    return space, PeriodicSystem((f1, swap), space, "E4")


def _e3(rho: sym.Real) -> CorpusEntry:
    space, sys = _two_copy(rho, chacon=False)
    man = _manifest(
        minimal=(True, "minimal two-copy system"),
        sensitive=(False, "equicontinuous odometer copy blocks sensitivity"),
        equicontinuous=(False, "sensitive shift copy blocks equicontinuity"),
        trans_g_empty=(True, "g preserves each copy"),
    )
    return CorpusEntry(
        "E3", sys, space, man, "two copies: conjugated odometer (a) and Sturmian shift (b)", structure="g-preserves-copies"
    )


def _e4(rho: sym.Real) -> CorpusEntry:
    space, sys = _two_copy(rho, chacon=True)
    man = _manifest(
        minimal=(True, "minimal two-copy system"),
        thickly_sensitive=(False, "syndetically equicontinuous shift copy blocks thick sensitivity"),
        syndetically_equicontinuous=(False, "thickly sensitive chacon copy blocks syndetic equicontinuity"),
        trans_g_empty=(True, "g preserves each copy"),
    )
    return CorpusEntry(
        "E4", sys, space, man, "two copies: Sturmian shift (a) and conjugated Chacon shift (b)", structure="g-preserves-copies"
    )


def _rotation(rho: sym.Real) -> CorpusEntry:
    space = CircleSpace(())
    sys = PeriodicSystem((Rotate(_turn(rho, 128)),), space, "rotation")
    man = _manifest(
        minimal=(True, "irrational rotation orbits are dense"),
        trans_g_empty=(False, "irrational rotation orbits are dense"),
    )
    return CorpusEntry("rotation", sys, space, man, "irrational rotation of the circle")


def _sturmian_shift(rho: sym.Real) -> CorpusEntry:
    space = SymbolicSpace(SturmianModel(rho))
    sys = PeriodicSystem((Shift(),), space, "sturmian-shift")
    man = _manifest(
        minimal=(True, "Sturmian shift is minimal"),
        sensitive=(True, "Sturmian shift is sensitive"),
        syndetically_equicontinuous=(True, "Sturmian shift is syndetically equicontinuous"),
        trans_g_empty=(False, "Sturmian shift is minimal"),
    )
    return CorpusEntry("sturmian-shift", sys, space, man, "autonomous Sturmian shift")


def _odometer(rho: sym.Real) -> CorpusEntry:
    space = SymbolicSpace(OdometerModel())
    sys = PeriodicSystem((sym.odometer_add1,), space, "odometer")
    man = _manifest(
        minimal=(True, "odometer is minimal"),
        equicontinuous=(True, "odometer is equicontinuous"),
        trans_g_empty=(False, "odometer is minimal"),
    )
    return CorpusEntry("odometer", sys, space, man, "dyadic odometer (add one with carry)")


def _odometer_coded(rho: sym.Real) -> CorpusEntry:
    st = sym.sturmian_tree_spec(rho)
    space = SymbolicSpace(CodedModel(OdometerModel(), st))
    sys = PeriodicSystem((Conjugated(sym.odometer_add1, st, sym.FULL, "h^-1 R1 h"),), space, "odometer-coded")
    man = _manifest(
        minimal=(True, "conjugate of the odometer"),
        equicontinuous=(True, "conjugate of the odometer"),
        trans_g_empty=(False, "conjugate of the odometer"),
    )
    return CorpusEntry("odometer-coded", sys, space, man, "odometer transported onto the Sturmian Cantor model")


def _chacon_coded(rho: sym.Real) -> CorpusEntry:
    st = sym.sturmian_tree_spec(rho)
    space = SymbolicSpace(CodedModel(SubstitutionModel("chacon"), st))
    sys = PeriodicSystem((Conjugated(Shift(), st, sym.CHACON_TREE, "h^-1 sigma_chacon h"),), space, "chacon-coded")
    man = _manifest(
        minimal=(True, "Chacon shift is minimal"),
        thickly_sensitive=(True, "weakly mixing implies thickly sensitive"),
        trans_g_empty=(False, "Chacon shift is minimal"),
    )
    return CorpusEntry("chacon-coded", sys, space, man, "Chacon shift transported onto the Sturmian Cantor model")


def _identity_circle(rho: sym.Real) -> CorpusEntry:
    space = CircleSpace(())
    sys = PeriodicSystem((Identity(),), space, "identity-circle")
    return CorpusEntry("identity-circle", sys, space, _manifest(), "identity map on the circle")


BUILDERS = {
    "E1": _e1,
    "E2": _e2,
    "E3": _e3,
    "E4": _e4,
    "rotation": _rotation,
    "sturmian-shift": _sturmian_shift,
    "odometer": _odometer,
    "odometer-coded": _odometer_coded,
    "chacon-coded": _chacon_coded,
    "identity-circle": _identity_circle,
}


def corpus_ids() -> list[str]:
    return list(BUILDERS)

