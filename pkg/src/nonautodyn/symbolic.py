"""Symbolic dynamics: mechanical words, the dyadic odometer, the Chacon
substitution, and cylinder coding trees between Cantor models.

Points are value objects that know how to produce any prefix of their
sequence on demand.  Nothing is cached on the point itself, so extending a
window can never rewrite symbols that were already handed out.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import numpy as np

from . import _automaton as _sam
from .errors import (
    CertificationFailed,
    CertifiedDepthExceeded,
    InvalidCode,
    PrecisionExhausted,
    WindowExhausted,
)

W_MIN = 64
MAX_WINDOW = 4096
# Longest prefix any point is asked to materialise (inner sequences of coded
# points can be far longer than the outer comparison window).
MAX_INNER = 1 << 23

_BASE_PREC = 128
_MAX_PREC = 8192


# ---------------------------------------------------------------------------
# exact reals


@dataclass(frozen=True)
class Real:
    """A real number known exactly: ``(a + sqrt(b)) / c`` or a rational ``p/q``."""

    kind: str
    a: int = 0
    b: int = 0
    c: int = 1

    @staticmethod
    def quadratic(a: int, b: int, c: int) -> "Real":
        if c <= 0 or b < 0:
            raise ValueError("quadratic real needs c > 0 and b >= 0")
        return Real("quadratic", a, b, c)

    @staticmethod
    def rational(value: Union[Fraction, int, str]) -> "Real":
        f = Fraction(value)
        return Real("rational", f.numerator, f.denominator, 1)

    @staticmethod
    def parse(text: str) -> "Real":
        text = text.strip()
        if text in NAMED_SLOPES:
            return NAMED_SLOPES[text]
        m = re.fullmatch(r"q\((-?\d+),(\d+),(\d+)\)", text.replace(" ", ""))
        if m:
            return Real.quadratic(int(m[1]), int(m[2]), int(m[3]))
        m = re.fullmatch(r"r\((-?\d+)/(\d+)\)", text.replace(" ", ""))
        if m:
            return Real.rational(Fraction(int(m[1]), int(m[2])))
        return Real.rational(text)

    def text(self) -> str:
        if self.kind == "quadratic":
            return f"q({self.a},{self.b},{self.c})"
        return f"r({self.a}/{self.b})"

    def bounds(self, prec: int) -> tuple[int, int]:
        """Integers ``lo <= self * 2**prec <= hi`` with ``hi - lo <= 2``."""
        if self.kind == "rational":
            lo, rem = divmod(self.a << prec, self.b)
            return lo, lo + (1 if rem else 0)
        s = math.isqrt(self.b << (2 * prec))
        exact = s * s == self.b << (2 * prec)
        num_lo = (self.a << prec) + s
        num_hi = num_lo + (0 if exact else 1)
        return num_lo // self.c, -((-num_hi) // self.c)

    def __float__(self) -> float:
        lo, _ = self.bounds(80)
        return lo / float(1 << 80)

    def is_rational(self) -> bool:
        if self.kind == "rational":
            return True
        return math.isqrt(self.b) ** 2 == self.b


GOLDEN = Real.quadratic(-1, 5, 2)
NAMED_SLOPES = {
    "golden": GOLDEN,
    "silver": Real.quadratic(-1, 2, 1),
    "sqrt3": Real.quadratic(-1, 3, 2),
    "sqrt7": Real.quadratic(-2, 7, 1),
}
ZERO = Real.rational(0)


def continued_fraction(x: Real, terms: int = 40) -> list[int]:
    """First ``terms`` partial quotients of ``x`` in (0,1) (leading 0 omitted)."""
    prec = 64 * terms + 256
    while True:
        lo, hi = x.bounds(prec)
        a = _cf(Fraction(lo, 1 << prec), terms + 1)
        b = _cf(Fraction(hi, 1 << prec), terms + 1)
        n = 0
        while n < min(len(a), len(b)) and a[n] == b[n]:
            n += 1
        if n > terms or (a == b and x.kind == "rational"):
            return a[1 : terms + 1]
        if prec > 1 << 16:
            return a[1:n]
        prec *= 2


def _cf(f: Fraction, n: int) -> list[int]:
    out = []
    for _ in range(n):
        q = math.floor(f)
        out.append(q)
        f -= q
        if f == 0:
            break
        f = 1 / f
    return out


def convergent_denominators(x: Real, terms: int = 40) -> list[int]:
    qs = [1]
    prev = 0
    for a in continued_fraction(x, terms):
        qs.append(a * qs[-1] + prev)
        prev = qs[-2]
    return qs


# ---------------------------------------------------------------------------
# mechanical words


@dataclass(frozen=True)
class SturmianParams:
    rho: Real = GOLDEN
    gamma: Real = ZERO

    def __post_init__(self):
        r = float(self.rho)
        g = float(self.gamma)
        if not 0.0 < r < 1.0:
            raise ValueError("slope must lie in (0,1)")
        if not 0.0 <= g < 1.0:
            raise ValueError("intercept must lie in [0,1)")


def _floor_exact(params: SturmianParams, n: int) -> int:
    prec = _BASE_PREC
    while prec <= _MAX_PREC:
        rlo, rhi = params.rho.bounds(prec)
        glo, ghi = params.gamma.bounds(prec)
        lo = (n * rlo + glo) >> prec
        hi = (n * rhi + ghi) >> prec
        if lo == hi:
            return lo
        prec *= 2
    raise PrecisionExhausted(f"floor({n}*rho+gamma) unresolved at {_MAX_PREC} bits")


def mechanical_symbol(params: SturmianParams, n: int) -> int:
    """Symbol ``n`` of the lower mechanical word of slope rho and intercept gamma."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    return _floor_exact(params, n + 1) - _floor_exact(params, n)


def mechanical_word(params: SturmianParams, start: int, count: int) -> np.ndarray:
    """Symbols ``start .. start+count-1`` as a uint8 array.

    Floors are evaluated in float64 relative to an exactly computed base; any
    position whose fractional part lies near an integer is redone exactly.
    """
    if count <= 0:
        return np.zeros(0, np.uint8)
    prec = _BASE_PREC
    rlo, _ = params.rho.bounds(prec)
    glo, _ = params.gamma.bounds(prec)
    base_int = start * rlo + glo
    base_floor = base_int >> prec
    base_frac = (base_int - (base_floor << prec)) / float(1 << prec)
    rho = rlo / float(1 << prec)
    j = np.arange(count + 1, dtype=np.float64)
    x = base_frac + j * rho
    fl = np.floor(x)
    risky = np.abs(x - np.rint(x)) < 1e-8
    risky[0] = True
    idx = np.nonzero(risky)[0]
    if idx.size:
        fixed = np.array([_floor_exact(params, start + int(i)) - base_floor for i in idx], np.float64)
        fl[idx] = fixed
    return np.diff(fl).astype(np.uint8)


def sturmian_balance_ok(params: SturmianParams, n: int) -> bool:
    total = int(mechanical_word(params, 0, n).sum())
    return total in (math.floor(n * float(params.rho)), math.ceil(n * float(params.rho)))


# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class SubstitutionRule:
    images: tuple[tuple[str, str], ...]
    seed: str = "0"
    name: str = "custom"

    def image(self, symbol: str) -> str:
        return dict(self.images)[symbol]

    def apply(self, word: str) -> str:
        table = dict(self.images)
        return "".join(table[c] for c in word)


CHACON = SubstitutionRule((("0", "0010"), ("1", "1")), "0", "chacon")
RULES = {"chacon": CHACON}


@functools.lru_cache(maxsize=32)
def substitution_prefix(rule: SubstitutionRule, iterations: int) -> str:
    """``rule`` applied ``iterations`` times to its seed symbol."""
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    if iterations == 0:
        return rule.seed
    return rule.apply(substitution_prefix(rule, iterations - 1))


@functools.lru_cache(maxsize=8)
def substitution_array(rule: SubstitutionRule, iterations: int) -> np.ndarray:
    arr = np.frombuffer(substitution_prefix(rule, iterations).encode(), np.uint8) - ord("0")
    arr.setflags(write=False)
    return arr


def _sequence_text(rule: SubstitutionRule, length: int) -> np.ndarray:
    it = 0
    while len(substitution_prefix(rule, it)) < length:
        it += 1
        if it > 40:
            raise WindowExhausted("substitution prefix cannot reach requested length")
    return substitution_array(rule, max(it, 13 if rule is CHACON else it))


def _factors_of(text: str, n: int) -> set[str]:
    return {text[i : i + n] for i in range(len(text) - n + 1)}


def factor_language(source: Union[SturmianParams, Real, SubstitutionRule], n: int) -> set[str]:
    """All admissible words of length ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(source, SubstitutionRule):
        it = 1
        while len(substitution_prefix(source, it)) < 8 * n + 8:
            it += 1
        sets = [_factors_of(substitution_prefix(source, it + j), n) for j in range(3)]
        if not (sets[0] == sets[1] == sets[2]):
            raise CertificationFailed(f"factors of length {n} not stable under two more iterations")
        return sets[0]
    params = source if isinstance(source, SturmianParams) else SturmianParams(source)
    qs = convergent_denominators(params.rho, 40)
    k = next((i for i, q in enumerate(qs) if q > n), len(qs) - 1)
    span = 4 * (qs[min(k + 1, len(qs) - 1)] + qs[k] + n)
    w = mechanical_word(params, 0, span + n)
    text = "".join("1" if c else "0" for c in w)
    return _factors_of(text, n)


# ---------------------------------------------------------------------------
# points


class SymbolicPoint:
    """Common interface: ``symbols(n)`` returns the first n symbols."""

    def symbols(self, n: int) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def window(self, n: int = W_MIN) -> str:
        return "".join("1" if c else "0" for c in self.symbols(n))

    def shift(self) -> "SymbolicPoint":
        return ShiftedPoint(self, 1)

    def describe(self) -> str:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class SturmianPoint(SymbolicPoint):
    """The mechanical word of ``params`` read from position ``offset``."""

    params: SturmianParams
    offset: int = 0

    def symbols(self, n: int) -> np.ndarray:
        _check_len(n)
        return mechanical_word(self.params, self.offset, n)

    def shift(self) -> "SturmianPoint":
        return SturmianPoint(self.params, self.offset + 1)

    def gamma(self) -> float:
        """Effective intercept ``gamma + offset * rho`` mod 1."""
        rlo, _ = self.params.rho.bounds(_BASE_PREC)
        glo, _ = self.params.gamma.bounds(_BASE_PREC)
        v = (glo + self.offset * rlo) % (1 << _BASE_PREC)
        return v / float(1 << _BASE_PREC)

    def describe(self) -> str:
        return f"sturmian(rho={self.params.rho.text()},gamma={self.params.gamma.text()},k={self.offset})"


@dataclass(frozen=True)
class SequencePoint(SymbolicPoint):
    """The fixed point of a substitution read from position ``offset``."""

    rule: str = "chacon"
    offset: int = 0

    def symbols(self, n: int) -> np.ndarray:
        _check_len(n)
        text = _sequence_text(RULES[self.rule], self.offset + n)
        return np.array(text[self.offset : self.offset + n])

    def shift(self) -> "SequencePoint":
        return SequencePoint(self.rule, self.offset + 1)

    def describe(self) -> str:
        return f"seq(rule={self.rule},k={self.offset})"


class BitSource:
    """Source of the binary digits of a 2-adic integer (least significant first)."""

    def low_bits(self, n: int) -> int:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class RandomBits(BitSource):
    """``head`` in the low ``head_bits`` digits, then a seeded random stream."""

    seed: int
    head: int = 0
    head_bits: int = 0

    def low_bits(self, n: int) -> int:
        if n <= self.head_bits:
            return self.head & ((1 << n) - 1)
        return self.head | (_random_stream(self.seed, n - self.head_bits) << self.head_bits)

    def describe(self) -> str:
        return f"rand(seed={self.seed},head={self.head:x},hb={self.head_bits})"


@functools.lru_cache(maxsize=4096)
def _random_block(seed: int, block: int) -> int:
    rng = np.random.default_rng([seed, block])
    return int.from_bytes(rng.bytes(64), "little")


def _random_stream(seed: int, n: int) -> int:
    out = 0
    blocks = -(-n // 512)
    for b in range(blocks):
        out |= _random_block(seed, b) << (512 * b)
    return out & ((1 << n) - 1)


@dataclass(frozen=True)
class ExplicitBits(BitSource):
    """Finitely many digits followed by zeros."""

    value: int
    nbits: int

    def low_bits(self, n: int) -> int:
        return self.value & ((1 << n) - 1)

    def describe(self) -> str:
        return f"bits(v={self.value:x},n={self.nbits})"


@dataclass(frozen=True)
class EncodedBits(BitSource):
    """The coding-tree bits of a symbolic point (the map into the odometer)."""

    point: SymbolicPoint
    tree: "TreeSpec"

    def low_bits(self, n: int) -> int:
        bits = get_tree(self.tree).encode(self.point, n)
        return int(bits[::-1], 2) if bits else 0

    def describe(self) -> str:
        return f"enc(p={self.point.describe()},tree={self.tree.text()})"


@dataclass(frozen=True)
class OdometerPoint(SymbolicPoint):
    """The 2-adic integer ``base + t``, written least significant digit first."""

    base: BitSource
    t: int = 0

    @staticmethod
    def from_bits(bits: str, pad_seed: int | None = None) -> "OdometerPoint":
        value = int(bits[::-1], 2) if bits else 0
        if pad_seed is None:
            return OdometerPoint(ExplicitBits(value, len(bits)))
        return OdometerPoint(RandomBits(pad_seed, value, len(bits)))

    def low_bits(self, n: int) -> int:
        return (self.base.low_bits(n) + self.t) & ((1 << n) - 1)

    def symbols(self, n: int) -> np.ndarray:
        _check_len(n)
        v = self.low_bits(n)
        if n == 0:
            return np.zeros(0, np.uint8)
        raw = np.frombuffer(v.to_bytes(-(-n // 8), "little"), np.uint8)
        return np.unpackbits(raw, bitorder="little")[:n].copy()

    def add1(self) -> "OdometerPoint":
        return OdometerPoint(self.base, self.t + 1)

    def shift(self) -> SymbolicPoint:
        return ShiftedPoint(self, 1)

    def describe(self) -> str:
        return f"odo(base={self.base.describe()},t={self.t})"


def odometer_add1(p: SymbolicPoint) -> SymbolicPoint:
    """Add one with carry, least significant digit first."""
    if isinstance(p, OdometerPoint):
        return p.add1()
    return OdometerPoint(EncodedBits(p, FULL), 1)


@dataclass(frozen=True)
class ShiftedPoint(SymbolicPoint):
    base: SymbolicPoint
    k: int = 1

    def symbols(self, n: int) -> np.ndarray:
        _check_len(n)
        return self.base.symbols(n + self.k)[self.k :]

    def shift(self) -> "ShiftedPoint":
        return ShiftedPoint(self.base, self.k + 1)

    def describe(self) -> str:
        return f"shift(p={self.base.describe()},k={self.k})"


@dataclass(frozen=True)
class CodedPoint(SymbolicPoint):
    """Image of ``inner`` under the coding map from ``src`` to ``dst``.

    The inner point is encoded along the ``src`` tree, and the resulting bit
    string is decoded along the ``dst`` tree.
    """

    inner: SymbolicPoint
    src: "TreeSpec"
    dst: "TreeSpec"

    def symbols(self, n: int) -> np.ndarray:
        _check_len(n)
        if n == 0:
            return np.zeros(0, np.uint8)
        src, dst = get_tree(self.src), get_tree(self.dst)
        if isinstance(dst, FullShiftTree):
            bits = src.encode(self.inner, n)
            return np.frombuffer(bits.encode(), np.uint8) - ord("0")
        # the length-n words form a complete prefix code; decoding the longest
        # codeword with extension could walk past the certified depth
        table, lmax, words = dst.code_table(n)
        bits = src.encode(self.inner, lmax)
        return words[table[int(bits, 2)]].copy()

    def describe(self) -> str:
        return f"coded(p={self.inner.describe()},src={self.src.text()},dst={self.dst.text()})"


def _check_len(n: int) -> None:
    if n < 0:
        raise ValueError("length must be nonnegative")
    if n > MAX_INNER:
        raise WindowExhausted(f"prefix of length {n} exceeds {MAX_INNER}")


def sturmian_shift(p: SturmianPoint) -> SturmianPoint:
    return p.shift()


def shift(p: SymbolicPoint) -> SymbolicPoint:
    """The left shift on any symbolic point, keeping simple generators simple."""
    return p.shift()


def coded(inner: SymbolicPoint, src: "TreeSpec", dst: "TreeSpec") -> SymbolicPoint:
    """``CodedPoint`` with the obvious cancellations applied."""
    if src == dst:
        return inner
    if isinstance(inner, CodedPoint) and inner.dst == src:
        return coded(inner.inner, inner.src, dst)
    return CodedPoint(inner, src, dst)


def conjugate_apply(
    source: "TreeSpec",
    target_map: Callable[[SymbolicPoint], SymbolicPoint],
    target: "TreeSpec",
    p: SymbolicPoint,
    out_depth: int,
) -> SymbolicPoint:
    """``h^{-1}(target_map(h(p)))`` where h codes ``source`` onto ``target``.

    ``out_depth`` symbols are materialised eagerly so depth problems surface
    here rather than later.
    """
    q = coded(target_map(coded(p, source, target)), target, source)
    q.symbols(out_depth)
    return q


def prefix_matrix(points: list[SymbolicPoint], k: int) -> np.ndarray:
    """First ``k`` symbols of every point as an ``len(points) x k`` array.

    Points sharing a generator are evaluated together.
    """
    m = len(points)
    out = np.zeros((m, k), np.uint8)
    if m == 0 or k == 0:
        return out
    groups: dict = {}
    for i, p in enumerate(points):
        if isinstance(p, SturmianPoint):
            key = ("st", p.params)
        elif isinstance(p, SequencePoint):
            key = ("seq", p.rule)
        elif isinstance(p, OdometerPoint):
            key = ("odo", p.base)
        elif isinstance(p, CodedPoint) and isinstance(p.inner, (SequencePoint, OdometerPoint)):
            inner_key = ("seq", p.inner.rule) if isinstance(p.inner, SequencePoint) else ("odo", p.inner.base)
            key = ("coded", p.src, p.dst, inner_key)
        else:
            key = ("one", i)
        groups.setdefault(key, []).append(i)
    for key, idx in groups.items():
        pts = [points[i] for i in idx]
        kind = key[0]
        if kind == "st":
            offs = np.array([p.offset for p in pts], np.int64)
            out[idx] = _window_gather(lambda a, c: mechanical_word(key[1], a, c), offs, k)
        elif kind == "seq":
            offs = np.array([p.offset for p in pts], np.int64)
            text = _sequence_text(RULES[key[1]], int(offs.max()) + k)
            out[idx] = np.asarray(text)[offs[:, None] + np.arange(k)]
        elif kind == "odo":
            out[idx] = _odometer_rows(pts, k)
        elif kind == "coded":
            out[idx] = _coded_rows(pts, k)
        else:
            out[idx] = pts[0].symbols(k)
    return out


def _window_gather(gen, offs: np.ndarray, k: int) -> np.ndarray:
    lo, hi = int(offs.min()), int(offs.max())
    if hi - lo <= 8 * len(offs) + (1 << 16):
        seq = gen(lo, hi - lo + k)
        return seq[(offs - lo)[:, None] + np.arange(k)]
    return np.stack([gen(int(o), k) for o in offs])


def _odometer_rows(pts: list[OdometerPoint], k: int) -> np.ndarray:
    if k <= 62:
        base = pts[0].base.low_bits(k)
        t = np.array([p.t for p in pts], dtype=object)
        vals = np.array([(base + int(x)) & ((1 << k) - 1) for x in t], np.uint64)
        return ((vals[:, None] >> np.arange(k, dtype=np.uint64)) & np.uint64(1)).astype(np.uint8)
    return np.stack([p.symbols(k) for p in pts])


def _coded_rows(pts: list[CodedPoint], k: int) -> np.ndarray:
    src, dst = get_tree(pts[0].src), get_tree(pts[0].dst)
    table, lmax, words = dst.code_table(k)
    out = np.zeros((len(pts), k), np.uint8)
    inner = [p.inner for p in pts]
    if isinstance(inner[0], OdometerPoint) and src.kind == "full":
        base = inner[0].base.low_bits(lmax)
        mask = (1 << lmax) - 1
        vals = [(base + p.t) & mask for p in inner]
        bitrows = np.array([[(v >> j) & 1 for j in range(lmax)] for v in vals], np.uint8)
        ok = np.ones(len(pts), bool)
    elif isinstance(inner[0], SequencePoint):
        offs = np.array([p.offset for p in inner], np.int64)
        text = np.ascontiguousarray(_sequence_text(RULES[inner[0].rule], int(offs.max()) + 1))
        bitrows, emitted, status = _sam.encode_batch(src.nxt, text, offs, lmax, src.limit)
        ok = emitted == lmax
    else:  # pragma: no cover - grouping guarantees one of the above
        return np.stack([p.symbols(k) for p in pts])
    weights = (1 << np.arange(lmax - 1, -1, -1)).astype(np.int64)
    keys = bitrows.astype(np.int64) @ weights
    rows = table[keys]
    good = ok & (rows >= 0)
    out[good] = words[rows[good]]
    for i in np.nonzero(~good)[0]:
        out[i] = pts[i].symbols(k)
    return out


# ---------------------------------------------------------------------------
# coding trees


@dataclass(frozen=True)
class TreeSpec:
    """Names a coding tree: ``sturmian`` (with slope), ``chacon`` or ``full``."""

    kind: str
    rho: Real | None = None

    def text(self) -> str:
        if self.kind == "sturmian":
            return f"sturmian[{self.rho.text()}]"
        return self.kind

    @staticmethod
    def parse(text: str) -> "TreeSpec":
        m = re.fullmatch(r"sturmian\[(.*)\]", text)
        if m:
            return TreeSpec("sturmian", Real.parse(m[1]))
        if text in ("chacon", "full"):
            return TreeSpec(text)
        raise ValueError(f"unknown tree {text!r}")


FULL = TreeSpec("full")
CHACON_TREE = TreeSpec("chacon")


def sturmian_tree_spec(rho: Real = GOLDEN) -> TreeSpec:
    return TreeSpec("sturmian", rho)


class CodingTree:
    """Cylinder refinement tree of a binary subshift language.

    Children of a node are its admissible one-symbol right extensions.  A bit
    is emitted only at nodes with two children, equal to the symbol taken,
    so the smaller extension maps to 0.
    """

    kind = "subshift"

    def __init__(self, text: np.ndarray, expected: Callable[[int], int], name: str):
        text = np.ascontiguousarray(text, dtype=np.uint8)
        self.name = name
        self.text = text
        self.text_bytes = (text + ord("0")).tobytes()
        self.nxt, link, length, self.endpos = _sam.build(text)
        counts = _sam.factor_counts(link, length, len(text) // 2)
        good = 0
        for n in range(1, len(counts)):
            if counts[n] != expected(n):
                break
            good = n
        if good < 2:
            raise CertificationFailed(f"{name}: factor counts disagree with expected complexity")
        # all words of length <= good are present, so every node of depth
        # < good has its exact set of children
        self.limit = good - 1
        self.certified_length = good
        self._code_tables: dict = {}

    # -- language -----------------------------------------------------
    def _state(self, word: str) -> int:
        s = 0
        for ch in word:
            s = int(self.nxt[s, int(ch)])
            if s < 0:
                return -1
        return s

    def admissible(self, word: str) -> bool:
        if len(word) > self.certified_length:
            raise CertifiedDepthExceeded(f"{self.name}: length {len(word)} beyond certified {self.certified_length}")
        return self._state(word) >= 0

    def children(self, word: str) -> list[str]:
        if len(word) > self.limit:
            raise CertifiedDepthExceeded(f"{self.name}: depth {len(word)} beyond certified {self.limit}")
        s = self._state(word)
        if s < 0:
            raise InvalidCode(f"{word!r} is not admissible")
        return [c for c in "01" if self.nxt[s, int(c)] >= 0]

    def language(self, n: int) -> set[str]:
        if n > self.certified_length:
            raise CertifiedDepthExceeded(f"{self.name}: length {n} beyond certified {self.certified_length}")
        if n == 0:
            return {""}
        if n - 1 > self.limit:
            raise CertifiedDepthExceeded(f"{self.name}: depth {n - 1} beyond certified {self.limit}")
        # breadth-first over automaton states; a word of length n read into
        # state s ends at endpos[s] in the backing text
        states = np.zeros(1, np.int64)
        for _ in range(n):
            nx = self.nxt[states].reshape(-1)
            states = nx[nx >= 0]
        ends = self.endpos[states]
        return {self.text_bytes[e - n + 1 : e + 1].decode() for e in ends.tolist()}

    # -- coding -------------------------------------------------------
    def encode_word(self, word: str, nbits: int | None = None) -> str:
        """Bits emitted while reading ``word`` (at most ``nbits``)."""
        arr = np.frombuffer(word.encode(), np.uint8) - ord("0")
        cap = len(word) if nbits is None else nbits
        out = np.zeros(max(cap, 1), np.uint8)
        e, _, st = _sam.encode_walk(self.nxt, np.ascontiguousarray(arr), 0, len(arr), cap, self.limit, out)
        if st == _sam.INADMISSIBLE:
            raise InvalidCode(f"{self.name}: word is not admissible")
        if st == _sam.DEPTH_EXCEEDED:
            raise CertifiedDepthExceeded(f"{self.name}: word longer than certified depth")
        if nbits is not None and st == _sam.NEED_MORE:
            raise WindowExhausted(f"{self.name}: word too short for {nbits} bits")
        return "".join("1" if b else "0" for b in out[:e])

    def encode(self, p: SymbolicPoint, nbits: int) -> str:
        """First ``nbits`` branch bits along the cylinder path of ``p``."""
        if nbits == 0:
            return ""
        if isinstance(p, SequencePoint) and self.kind == "subshift":
            text = _sequence_text(RULES[p.rule], p.offset + 1)
            out = np.zeros(nbits, np.uint8)
            e, _, st = _sam.encode_walk(self.nxt, np.ascontiguousarray(text), p.offset, len(text), nbits, self.limit, out)
            if st == _sam.OK:
                return "".join("1" if b else "0" for b in out[:e])
        n = max(64, 4 * nbits)
        while True:
            arr = np.ascontiguousarray(p.symbols(n))
            out = np.zeros(nbits, np.uint8)
            e, _, st = _sam.encode_walk(self.nxt, arr, 0, n, nbits, self.limit, out)
            if st == _sam.OK:
                return "".join("1" if b else "0" for b in out[:e])
            if st == _sam.INADMISSIBLE:
                raise InvalidCode(f"{self.name}: point leaves the language")
            if st == _sam.DEPTH_EXCEEDED:
                raise CertifiedDepthExceeded(f"{self.name}: {nbits} bits need depth beyond {self.limit}")
            if n >= MAX_INNER:
                raise WindowExhausted(f"{self.name}: {nbits} bits need more than {n} symbols")
            n = min(4 * n, MAX_INNER)

    def decode(self, bits: str, extend: bool = False) -> str:
        """Shortest admissible word carrying ``bits`` (or up to the next split)."""
        if bits == "" and not extend:
            return ""
        s, depth, st = _decode_cached(self, bits, extend)
        if st != _sam.OK:
            raise CertifiedDepthExceeded(f"{self.name}: code of length {len(bits)} beyond certified depth")
        if depth == 0:
            return ""
        end = int(self.endpos[s])
        return self.text_bytes[end - depth + 1 : end + 1].decode()

    def decode_depth(self, bits: str, extend: bool = False) -> int:
        return _decode_cached(self, bits, extend)[1]

    def bits_for_length(self, n: int) -> int:
        """Bits needed so that the decoded word always has length >= n."""
        return self.code_table(n)[1]

    def prefix_code(self, n: int) -> dict[str, str]:
        """Map code -> word for all admissible words of length n."""
        return {self.encode_word(w): w for w in sorted(self.language(n))}

    def code_table(self, n: int):
        """Lookup table from ``lmax``-bit integers to rows of a word matrix."""
        if n not in self._code_tables:
            code = self.prefix_code(n)
            lmax = max(len(c) for c in code)
            if lmax > 22:
                raise CertifiedDepthExceeded(f"{self.name}: code table for length {n} too large")
            table = np.full(1 << lmax, -1, np.int64)
            words = np.zeros((len(code), n), np.uint8)
            for r, (c, w) in enumerate(sorted(code.items())):
                words[r] = np.frombuffer(w.encode(), np.uint8) - ord("0")
                lo = (int(c, 2) if c else 0) << (lmax - len(c))
                table[lo : lo + (1 << (lmax - len(c)))] = r
            self._code_tables[n] = (table, lmax, words)
        return self._code_tables[n]

    def input_depth(self, nbits: int) -> int:
        """Largest word length needed to determine ``nbits`` bits."""
        worst = 0
        for v in range(1 << nbits):
            b = format(v, f"0{nbits}b") if nbits else ""
            worst = max(worst, self.decode_depth(b))
        return worst

    def find(self, word: str, start: int = 0) -> int:
        """Position of ``word`` in the backing text at or after ``start`` (wrapping)."""
        i = self.text_bytes.find(word.encode(), start)
        if i < 0:
            i = self.text_bytes.find(word.encode())
        if i < 0:
            raise InvalidCode(f"{self.name}: word not found in backing text")
        return i

    def dump(self, depth: int) -> str:
        lines = [f"# coding tree {self.name} (certified node depth {self.limit})"]
        for d in range(depth + 1):
            words = sorted(self.language(d))
            lines.append(f"depth {d}: {len(words)} words")
            for w in words:
                kids = self.children(w) if d < depth else []
                if len(kids) == 2:
                    lines.append(f"  {w or '.'} -> {w}0 [bit 0], {w}1 [bit 1]")
                elif kids:
                    lines.append(f"  {w or '.'} -> {w}{kids[0]}")
                else:
                    lines.append(f"  {w or '.'}")
        return "\n".join(lines)


@functools.lru_cache(maxsize=None)
def _decode_cached_impl(tree_id: int, bits: str, extend: bool):
    tree = _TREES_BY_ID[tree_id]
    arr = np.ascontiguousarray(np.frombuffer(bits.encode(), np.uint8) - ord("0"))
    s, depth, st = _sam.decode_walk(tree.nxt, arr, extend, tree.limit)
    return int(s), int(depth), int(st)


_TREES_BY_ID: dict[int, CodingTree] = {}


def _decode_cached(tree: CodingTree, bits: str, extend: bool):
    _TREES_BY_ID[id(tree)] = tree
    return _decode_cached_impl(id(tree), bits, extend)


class FullShiftTree:
    """Coding tree of the full binary shift: every node splits, code = word."""

    kind = "full"
    name = "full"
    limit = MAX_INNER
    certified_length = MAX_INNER

    def admissible(self, word: str) -> bool:
        return True

    def children(self, word: str) -> list[str]:
        return ["0", "1"]

    def language(self, n: int) -> set[str]:
        if n > 20:
            raise CertifiedDepthExceeded("full-shift language enumeration capped at length 20")
        return {format(v, f"0{n}b") for v in range(1 << n)} if n else {""}

    def encode_word(self, word: str, nbits: int | None = None) -> str:
        if nbits is not None and len(word) < nbits:
            raise WindowExhausted("word too short")
        return word if nbits is None else word[:nbits]

    def encode(self, p: SymbolicPoint, nbits: int) -> str:
        if isinstance(p, OdometerPoint):
            v = p.low_bits(nbits)
            return "".join("1" if (v >> j) & 1 else "0" for j in range(nbits))
        return p.window(nbits)

    def decode(self, bits: str, extend: bool = False) -> str:
        return bits

    def decode_depth(self, bits: str, extend: bool = False) -> int:
        return len(bits)

    def bits_for_length(self, n: int) -> int:
        return n

    def input_depth(self, nbits: int) -> int:
        return nbits

    def prefix_code(self, n: int) -> dict[str, str]:
        return {w: w for w in self.language(n)}

    def code_table(self, n: int):
        table = np.arange(1 << n, dtype=np.int64)
        words = ((table[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
        return table, n, words

    def dump(self, depth: int) -> str:
        return f"# coding tree full: every node of every depth splits; code = word (depth {depth})"


def chacon_complexity(n: int) -> int:
    return 2 if n == 1 else 2 * n - 1


@functools.lru_cache(maxsize=None)
def get_tree(spec: TreeSpec):
    """Build (once) and return the coding tree named by ``spec``."""
    if spec.kind == "full":
        return FullShiftTree()
    if spec.kind == "chacon":
        text = substitution_array(CHACON, 13)
        return CodingTree(text, chacon_complexity, "chacon")
    if spec.kind == "sturmian":
        params = SturmianParams(spec.rho, ZERO)
        text = mechanical_word(params, 0, 1 << 19)
        return CodingTree(text, lambda n: n + 1, f"sturmian[{spec.rho.text()}]")
    raise ValueError(f"unknown tree kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# serialization of generators


def parse_point(text: str) -> SymbolicPoint:
    """Inverse of ``SymbolicPoint.describe``."""
    node, rest = _parse_call(text.strip(), 0)
    if rest != len(text.strip()):
        raise ValueError(f"trailing text in {text!r}")
    return _build(node)


def _parse_call(s: str, i: int):
    m = re.compile(r"[a-z]+").match(s, i)
    if not m or m.end() >= len(s) or s[m.end()] != "(":
        raise ValueError(f"expected call at {i} in {s!r}")
    name = m.group()
    i = m.end() + 1
    args = {}
    while s[i] != ")":
        m = re.compile(r"([a-z]+)=").match(s, i)
        if not m:
            raise ValueError(f"expected key at {i} in {s!r}")
        key = m.group(1)
        i = m.end()
        if re.compile(r"(rand|bits|enc|sturmian|seq|odo|shift|coded)\(").match(s, i):
            val, i = _parse_call(s, i)
        else:
            depth = 0
            j = i
            while j < len(s):
                ch = s[j]
                if ch in "([":
                    depth += 1
                elif ch in ")]":
                    if depth == 0:
                        break
                    depth -= 1
                elif ch == "," and depth == 0:
                    break
                j += 1
            val, i = s[i:j], j
        args[key] = val
        if s[i] == ",":
            i += 1
    return (name, args), i + 1


def _build(node):
    name, a = node
    if name == "sturmian":
        return SturmianPoint(SturmianParams(Real.parse(a["rho"]), Real.parse(a["gamma"])), int(a["k"]))
    if name == "seq":
        return SequencePoint(a["rule"], int(a["k"]))
    if name == "odo":
        return OdometerPoint(_build(a["base"]), int(a["t"]))
    if name == "rand":
        return RandomBits(int(a["seed"]), int(a["head"], 16), int(a["hb"]))
    if name == "bits":
        return ExplicitBits(int(a["v"], 16), int(a["n"]))
    if name == "enc":
        return EncodedBits(_build(a["p"]), TreeSpec.parse(a["tree"]))
    if name == "shift":
        return ShiftedPoint(_build(a["p"]), int(a["k"]))
    if name == "coded":
        return CodedPoint(_build(a["p"]), TreeSpec.parse(a["src"]), TreeSpec.parse(a["dst"]))
    raise ValueError(f"unknown generator {name!r}")


def word_to_array(word: str) -> np.ndarray:
    return np.frombuffer(word.encode(), np.uint8) - ord("0")


def array_to_word(arr: Iterable[int]) -> str:
    return "".join("1" if int(c) else "0" for c in arr)
