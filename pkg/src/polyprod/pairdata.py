"""Cohomological input for CW pairs (X, A).

A pair is described by a strongly free splitting of its long exact sequence:
graded generators of B′ (mapped isomorphically by ι*), C′ (the kernel of ι*)
and E′ (the cokernel of ι*), together with cup-product tables on H̃*(X) =
B′ ⊕ C′ and on H̃*(A) = B′ ⊕ E′.  The wedge model replaces each generator by
a sphere of the same degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .homalg import Field, QQ
from .series import PoincareSeries

MODULES = ("B", "C", "E")
SIDE_MODULES = {"X": ("B", "C"), "A": ("B", "E")}
# allowed product targets per side, keyed by the (sorted) module pair
TARGETS = {
    "X": {("C", "C"): {"C"}, ("B", "C"): {"C"}, ("B", "B"): {"B", "C"}},
    "A": {("E", "E"): {"E", "B"}, ("B", "E"): {"E", "B"}, ("B", "B"): {"B"}},
}
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass(frozen=True, order=True)
class GradedGen:
    name: str
    degree: int
    module: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: int | None
    message: str
    entry: tuple | None = None

    def __str__(self) -> str:
        where = f"vertex {self.vertex}: " if self.vertex is not None else ""
        at = f" at {self.entry}" if self.entry else ""
        return f"[{self.rule}] {where}{self.message}{at}"


class PairValidationError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}


class CatalogError(ValueError):
    pass


Table = Mapping[tuple[str, str], Mapping[str, Fraction]]


@dataclass(frozen=True, eq=True)
class CWPair:
    """One vertex's worth of pair data.

    ``x_products`` / ``a_products`` map ``(lhs, rhs)`` generator names to a
    combination ``{name: coefficient}``.  Omitted entries are zero unless the
    reversed entry is given, in which case graded commutativity fills it in.
    ``betti`` optionally records dim H̃^d of ``"X"``, ``"A"`` and ``"X/A"`` so
    the splitting can be audited against the exact sequence.
    """

    name: str
    gens: tuple[GradedGen, ...]
    x_products: Mapping = field(default_factory=dict, hash=False)
    a_products: Mapping = field(default_factory=dict, hash=False)
    non_connected: bool = False
    betti: Mapping | None = field(default=None, hash=False)

    def gens_of(self, module: str) -> tuple[GradedGen, ...]:
        return tuple(g for g in self.gens if g.module == module)

    def gen(self, name: str) -> GradedGen:
        for g in self.gens:
            if g.name == name:
                return g
        raise KeyError(f"pair {self.name!r} has no generator {name!r}")

    def table(self, side: str) -> Mapping:
        return self.x_products if side == "X" else self.a_products

    def product(self, side: str, x: GradedGen, y: GradedGen, field: Field) -> list[tuple[object, GradedGen]]:
        """x·y in H̃*(X) (``side="X"``) or H̃*(A) as ``[(coeff, gen), ...]``."""
        table = self.table(side)
        entry = table.get((x.name, y.name))
        sign = 1
        if entry is None:
            entry = table.get((y.name, x.name))
            sign = -1 if (x.degree * y.degree) % 2 else 1
        if not entry:
            return []
        out = []
        for name, c in entry.items():
            c = field(sign * Fraction(c))
            if c:
                out.append((c, self.gen(name)))
        return out

    def series(self, module: str) -> PoincareSeries:
        return PoincareSeries.from_degrees(g.degree for g in self.gens_of(module))

    def euler(self, space: str) -> int:
        """χ of X, A or X/A computed from the splitting (unreduced)."""
        mods = {"X": ("B", "C"), "A": ("B", "E")}[space]
        return 1 + sum((-1) ** g.degree for g in self.gens if g.module in mods)


@dataclass(frozen=True)
class PairDecomposition:
    field: Field
    pairs: tuple[CWPair, ...]

    @classmethod
    def uniform(cls, pair: CWPair, m: int, field: Field = QQ) -> "PairDecomposition":
        return cls(field, (pair,) * m)

    @property
    def m(self) -> int:
        return len(self.pairs)

    def at(self, vertex: int) -> CWPair:
        """Pair data for ambient vertex ``vertex`` (1-based)."""
        return self.pairs[vertex - 1]

    def restrict(self, m: int) -> "PairDecomposition":
        return PairDecomposition(self.field, self.pairs[:m])

    def concat(self, other: "PairDecomposition") -> "PairDecomposition":
        if other.field != self.field:
            raise ValueError("field mismatch")
        return PairDecomposition(self.field, self.pairs + other.pairs)


# -- validation ---------------------------------------------------------------

def _check_pair(pair: CWPair, field: Field, vertex: int | None) -> list[Violation]:
    out: list[Violation] = []
    names: dict[str, GradedGen] = {}
    for g in pair.gens:
        if not NAME_RE.match(g.name):
            out.append(Violation("syntax", vertex, f"bad generator name {g.name!r}"))
        if g.name in names:
            out.append(Violation("syntax", vertex, f"duplicate generator name {g.name!r}"))
        names[g.name] = g
        if g.module not in MODULES:
            out.append(Violation("syntax", vertex, f"generator {g.name!r} has unknown module {g.module!r}"))
        if g.degree < 0:
            out.append(Violation("degree", vertex, f"generator {g.name!r} has negative degree {g.degree}"))
        elif g.degree == 0 and not pair.non_connected:
            out.append(Violation("degree", vertex,
                                 f"generator {g.name!r} has degree 0 but the pair is not flagged non_connected"))
    if out:
        return out

    reduced_tables: dict[str, dict] = {}
    for side in ("X", "A"):
        allowed = SIDE_MODULES[side]
        reduced_tables[side] = {}
        for (ln, rn), combo in pair.table(side).items():
            entry = (side, ln, rn)
            if ln not in names or rn not in names:
                out.append(Violation("syntax", vertex, "table refers to an unknown generator", entry))
                continue
            lhs, rhs = names[ln], names[rn]
            bad_in = [g.name for g in (lhs, rhs) if g.module not in allowed]
            if bad_in:
                out.append(Violation("module-target", vertex,
                                     f"{'/'.join(bad_in)} does not live in H̃*({side})", entry))
                continue
            allowed_out = TARGETS[side][tuple(sorted((lhs.module, rhs.module)))]
            value = {}
            for name, c in combo.items():
                if name not in names:
                    out.append(Violation("syntax", vertex, f"product names unknown generator {name!r}", entry))
                    continue
                try:
                    c = field(Fraction(c))
                except (ZeroDivisionError, ValueError):
                    out.append(Violation("syntax", vertex, f"coefficient {c} is undefined over {field.tag}", entry))
                    continue
                if not c:
                    continue
                tgt = names[name]
                if tgt.module not in allowed_out:
                    out.append(Violation("module-target", vertex,
                                         f"{lhs.module}'·{rhs.module}' may not land in {tgt.module}' ({name})", entry))
                if tgt.degree != lhs.degree + rhs.degree:
                    out.append(Violation("degree", vertex,
                                         f"{name} has degree {tgt.degree}, expected {lhs.degree + rhs.degree}", entry))
                value[name] = c
            reduced_tables[side][(ln, rn)] = value

    # graded commutativity
    for side, table in reduced_tables.items():
        for (ln, rn), value in table.items():
            lhs, rhs = names[ln], names[rn]
            sign = -1 if (lhs.degree * rhs.degree) % 2 else 1
            if ln == rn:
                if sign == -1 and field.p != 2 and value:
                    out.append(Violation("commutativity", vertex,
                                         f"odd class {ln} must square to zero", (side, ln, rn)))
                continue
            rev = table.get((rn, ln))
            if rev is None or (rn, ln) < (ln, rn):
                continue
            expect = {k: field.reduce(sign * v) for k, v in value.items()}
            expect = {k: v for k, v in expect.items() if v}
            if expect != {k: v for k, v in rev.items() if v}:
                out.append(Violation("commutativity", vertex,
                                     f"{rn}·{ln} disagrees with (-1)^{{|x||y|}} {ln}·{rn}", (side, ln, rn)))

    # ι* is a ring map: on B′ ⊗ B′ the A-side product is the B′-part of the X-side one
    bgens = pair.gens_of("B")
    for x in bgens:
        for y in bgens:
            on_x = {g.name: c for c, g in pair.product("X", x, y, field) if g.module == "B"}
            on_a = {g.name: c for c, g in pair.product("A", x, y, field) if g.module == "B"}
            if on_x != on_a:
                out.append(Violation("iota-compatibility", vertex,
                                     f"A-side {x.name}·{y.name} = {on_a or 0} but the B'-part on X is {on_x or 0}",
                                     ("A", x.name, y.name)))

    if pair.betti is not None:
        out.extend(_check_exactness(pair, vertex))
    return out


def _check_exactness(pair: CWPair, vertex: int | None) -> list[Violation]:
    out = []
    b, c, e = (pair.series(mod) for mod in MODULES)
    expected = {"A": b + e, "X": b + c, "X/A": c + e.shift(1)}
    for space, want in expected.items():
        given = pair.betti.get(space)
        if given is None:
            continue
        got = PoincareSeries(given)
        if got != want:
            out.append(Violation("exactness", vertex,
                                 f"dim H̃*({space}) = {got} but the splitting gives {want}", (space,)))
    return out


def validate_pair(p: PairDecomposition) -> PairDecomposition:
    """Return ``p`` unchanged if every vertex passes; raise otherwise."""
    violations = []
    seen: dict[int, list[Violation]] = {}
    for i, pair in enumerate(p.pairs, start=1):
        key = id(pair)
        if key not in seen:
            seen[key] = _check_pair(pair, p.field, None)
        violations.extend(replace(v, vertex=i) for v in seen[key])
    if violations:
        raise PairValidationError(violations)
    return p


def validate_cwpair(pair: CWPair, field: Field = QQ) -> CWPair:
    problems = _check_pair(pair, field, None)
    if problems:
        raise PairValidationError(problems)
    return pair


# -- wedge model --------------------------------------------------------------

@dataclass(frozen=True)
class WedgeModel:
    B: tuple[int, ...]
    C: tuple[int, ...]
    E: tuple[int, ...]

    @staticmethod
    def _fmt(degrees: tuple[int, ...]) -> str:
        return " ∨ ".join(f"S^{d}" for d in degrees) if degrees else "*"

    def __str__(self) -> str:
        return f"B = {self._fmt(self.B)}, C = {self._fmt(self.C)}, E = {self._fmt(self.E)}"


def wedge_model(p: PairDecomposition | CWPair, vertex: int = 1) -> WedgeModel:
    pair = p.at(vertex) if isinstance(p, PairDecomposition) else p
    return WedgeModel(*(tuple(g.degree for g in pair.gens_of(mod)) for mod in MODULES))


# -- catalog ------------------------------------------------------------------

def _gens(spec: str) -> tuple[GradedGen, ...]:
    """``"B:b4:4 C:c8:8"`` -> generators."""
    out = []
    for tok in spec.split():
        mod, name, deg = tok.split(":")
        out.append(GradedGen(name, int(deg), mod))
    return tuple(out)


def _table(entries: Iterable[tuple[str, str, str]]) -> dict:
    return {(a, b): {c: Fraction(1)} for a, b, c in entries}


def _moment_angle() -> CWPair:
    return CWPair("moment-angle", _gens("E:e:1"),
                  betti={"X": {}, "A": {1: 1}, "X/A": {2: 1}})


def _real_moment_angle() -> CWPair:
    return CWPair("real-moment-angle", _gens("E:e:0"), {}, _table([("e", "e", "e")]),
                  non_connected=True, betti={"X": {}, "A": {0: 1}, "X/A": {1: 1}})


def _s0_pair() -> CWPair:
    # D¹ ∨ S⁰ with S⁰ mapped to the ends of D¹; both H̃⁰ classes are idempotent
    return CWPair("s0-pair", _gens("C:c:0 E:e:0"),
                  _table([("c", "c", "c")]), _table([("e", "e", "e")]),
                  non_connected=True, betti={"X": {0: 1}, "A": {0: 1}, "X/A": {0: 1, 1: 1}})


def _mf_cp3() -> CWPair:
    # H̃*(M_f) ⊂ H*(CP^8) is spanned by x^2..x^8; H̃*(CP^3) by y, y^2, y^3
    gens = _gens("B:b4:4 B:b6:6 C:c8:8 C:c10:10 C:c12:12 C:c14:14 C:c16:16 E:e2:2")
    power = {"b4": 2, "b6": 3, "c8": 4, "c10": 5, "c12": 6, "c14": 7, "c16": 8}
    name_of = {v: k for k, v in power.items()}
    x_entries = []
    xs = sorted(power, key=power.get)
    for i, a in enumerate(xs):
        for b in xs[i:]:
            k = power[a] + power[b]
            if k <= 8:
                x_entries.append((a, b, name_of[k]))
    a_entries = [("e2", "e2", "b4"), ("e2", "b4", "b6")]
    betti = {
        "X": {4: 1, 6: 1, 8: 1, 10: 1, 12: 1, 14: 1, 16: 1},
        "A": {2: 1, 4: 1, 6: 1},
        "X/A": {3: 1, 8: 1, 10: 1, 12: 1, 14: 1, 16: 1},
    }
    return CWPair("mf-cp3", gens, _table(x_entries), _table(a_entries), betti=betti)


def _so3_rp2(field: Field) -> CWPair:
    if field.p == 2:
        gens = _gens("B:b1:1 B:b2:2 C:c3:3")
        x_entries = [("b1", "b1", "b2"), ("b1", "b2", "c3")]
        a_entries = [("b1", "b1", "b2")]
        betti = {"X": {1: 1, 2: 1, 3: 1}, "A": {1: 1, 2: 1}, "X/A": {3: 1}}
        return CWPair("so3-rp2", gens, _table(x_entries), _table(a_entries), betti=betti)
    # away from 2, RP^2 is acyclic and RP^3 is a rational 3-sphere
    return CWPair("so3-rp2", _gens("C:c3:3"), betti={"X": {3: 1}, "A": {}, "X/A": {3: 1}})


CATALOG = {
    "moment-angle": lambda field: _moment_angle(),
    "real-moment-angle": lambda field: _real_moment_angle(),
    "s0-pair": lambda field: _s0_pair(),
    "mf-cp3": lambda field: _mf_cp3(),
    "so3-rp2": _so3_rp2,
}


def builtin_pair(name: str, field: Field = QQ) -> CWPair:
    try:
        make = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown pair {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    if not isinstance(field, Field):
        raise CatalogError(f"incompatible field {field!r}")
    return validate_cwpair(make(field), field)


def builtin(name: str, m: int = 1, field: Field = QQ) -> PairDecomposition:
    """The catalog pair ``name`` at every vertex of ``[m]``."""
    return validate_pair(PairDecomposition.uniform(builtin_pair(name, field), m, field))


def pair_from_betti(name: str, betti_x: Mapping[int, int], betti_a: Mapping[int, int],
                    rank_iota: Mapping[int, int], non_connected: bool = False) -> CWPair:
    """Split a pair from dimensions of H̃*(X), H̃*(A) and the ranks of ι*.

    Products are left at zero; fill ``x_products``/``a_products`` afterwards
    if the rings are known.
    """
    gens = []
    for d in sorted(set(betti_x) | set(betti_a) | set(rank_iota)):
        r, x, a = rank_iota.get(d, 0), betti_x.get(d, 0), betti_a.get(d, 0)
        if r > min(x, a):
            raise ValueError(f"rank of ι* in degree {d} exceeds the dimensions")
        for mod, count in (("B", r), ("C", x - r), ("E", a - r)):
            for k in range(count):
                suffix = f"_{k + 1}" if count > 1 else ""
                gens.append(GradedGen(f"{mod.lower()}{d}{suffix}", d, mod))
    e_series = {}
    for d in set(betti_a):
        if betti_a[d] - rank_iota.get(d, 0):
            e_series[d + 1] = betti_a[d] - rank_iota.get(d, 0)
    xa = {d: betti_x.get(d, 0) - rank_iota.get(d, 0) for d in betti_x}
    for d, c in e_series.items():
        xa[d] = xa.get(d, 0) + c
    betti = {"X": dict(betti_x), "A": dict(betti_a), "X/A": {d: c for d, c in xa.items() if c}}
    return CWPair(name, tuple(gens), {}, {}, non_connected=non_connected, betti=betti)
