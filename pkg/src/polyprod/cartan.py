"""Additive structure of polyhedral (smash) products.

The reduced cohomology of Ẑ(K_J; (X,A)_J) splits over Cartan subsets
I ⊆ J and simplices σ ∈ K_I into pieces

    H̃*(Σ|lk_σ(K_I)|) ⊗ ⨂_{i∈σ} C′_i ⊗ ⨂_{i∈I∖σ} E′_i ⊗ ⨂_{j∈J∖I} B′_j

and the full polyhedral product is the sum of these over all J ⊆ [m], the
empty J giving the unit.  A :class:`Generator` records one basis vector of
one such piece.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian

from .complex import (SimplicialComplex, full_subcomplex, link, members, popcount,
                      shortlex_key, submasks, to_mask)
from .homalg import Field, betti_numbers, reduced_cohomology
from .pairdata import GradedGen, PairDecomposition
from .series import PoincareSeries

ROLE_MODULE = {"c": "C", "e": "E", "b": "B"}


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    """A labelled basis element of a wedge summand of H̃*(Ẑ(K_J)).

    ``J``, ``I`` and ``sigma`` are vertex bitmasks.  The link class is the
    ``link_index``-th basis vector in degree ``link_degree`` of
    H̃*(lk_σ(K_I)), and ``factors`` lists ``(vertex, gen)`` for every vertex
    of ``J`` in increasing order: C′ generators on σ, E′ on I∖σ, B′ on J∖I.
    """

    J: int
    I: int
    sigma: int
    link_degree: int
    link_index: int
    factors: tuple[tuple[int, GradedGen], ...]

    @property
    def degree(self) -> int:
        return self.link_degree + 1 + sum(g.degree for _, g in self.factors)

    def role(self, vertex: int) -> str | None:
        bit = 1 << (vertex - 1)
        if not self.J & bit:
            return None
        if self.sigma & bit:
            return "c"
        return "e" if self.I & bit else "b"

    def factor(self, vertex: int) -> GradedGen:
        for v, g in self.factors:
            if v == vertex:
                return g
        raise KeyError(vertex)

    @property
    def label(self) -> str:
        return format_label(self)

    def sort_key(self):
        return (self.J, self.I, shortlex_key(self.sigma), self.link_degree, self.link_index,
                tuple((v, g.name) for v, g in self.factors))

    def __str__(self) -> str:
        return self.label


def unit_generator() -> Generator:
    """The class 1 ∈ H⁰(Z), living in the J = ∅ summand."""
    return Generator(0, 0, 0, -1, 0, ())


def generator_degree(g: Generator) -> int:
    return g.degree


# -- labels ---------------------------------------------------------------------

def _fmt_set(mask: int) -> str:
    return ",".join(str(v) for v in members(mask))


def format_label(g: Generator) -> str:
    """Canonical text form, e.g. ``J=1,2;I=1;S=1;L=-1:0;F=1:c8,2:b4``."""
    facs = ",".join(f"{v}:{gen.name}" for v, gen in g.factors)
    return (f"J={_fmt_set(g.J)};I={_fmt_set(g.I)};S={_fmt_set(g.sigma)};"
            f"L={g.link_degree}:{g.link_index};F={facs}")


_LABEL_RE = re.compile(
    r"J=(?P<J>[0-9,]*);I=(?P<I>[0-9,]*);S=(?P<S>[0-9,]*);"
    r"L=(?P<d>-?\d+):(?P<k>\d+);F=(?P<F>.*)\Z"
)


def _parse_set(text: str) -> int:
    return to_mask(int(x) for x in text.split(",")) if text else 0


def parse_label(text: str, K: SimplicialComplex, p: PairDecomposition) -> Generator:
    """Inverse of :func:`format_label`; checks the generator exists."""
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise GeneratorError(f"malformed generator label {text!r}")
    factors = []
    if m["F"]:
        for tok in m["F"].split(","):
            try:
                v, name = tok.split(":")
                v = int(v)
                factors.append((v, p.at(v).gen(name)))
            except (ValueError, KeyError, IndexError) as exc:
                raise GeneratorError(f"bad factor {tok!r} in {text!r}: {exc}") from None
    g = Generator(_parse_set(m["J"]), _parse_set(m["I"]), _parse_set(m["S"]),
                  int(m["d"]), int(m["k"]), tuple(factors))
    check_generator(g, K, p)
    return g


def check_generator(g: Generator, K: SimplicialComplex, p: PairDecomposition) -> None:
    if g.J & ~K.vertex_mask:
        raise GeneratorError(f"{g.label}: J is not a subset of the vertex set")
    if g.I & ~g.J or g.sigma & ~g.I:
        raise GeneratorError(f"{g.label}: need σ ⊆ I ⊆ J")
    if g.sigma not in K.face_masks:
        raise GeneratorError(f"{g.label}: σ is not a face of K")
    if [v for v, _ in g.factors] != list(members(g.J)):
        raise GeneratorError(f"{g.label}: need exactly one factor per vertex of J, in order")
    for v, gen in g.factors:
        want = ROLE_MODULE[g.role(v)]
        if gen.module != want or gen not in p.at(v).gens:
            raise GeneratorError(f"{g.label}: vertex {v} needs a {want}' generator, got {gen.name}")
    dim = link_basis(K, g.I, g.sigma, p.field).dim(g.link_degree)
    if not 0 <= g.link_index < dim:
        raise GeneratorError(f"{g.label}: link class index out of range (dimension {dim})")


# -- links ----------------------------------------------------------------------

@lru_cache(maxsize=65536)
def link_complex(K: SimplicialComplex, I: int, sigma: int) -> SimplicialComplex:
    """lk_σ(K_I) with ambient labels."""
    return link(full_subcomplex(K, I), sigma)


def link_basis(K: SimplicialComplex, I: int, sigma: int, field: Field):
    return reduced_cohomology(link_complex(K, I, sigma), field)


@lru_cache(maxsize=65536)
def link_series(K: SimplicialComplex, I: int, sigma: int, field: Field) -> PoincareSeries:
    return PoincareSeries(betti_numbers(link_complex(K, I, sigma), field))


# -- generators -----------------------------------------------------------------

def _factor_choices(p: PairDecomposition, J: int, I: int, sigma: int):
    per_vertex = []
    for v in members(J):
        bit = 1 << (v - 1)
        mod = "C" if sigma & bit else ("E" if I & bit else "B")
        gens = p.at(v).gens_of(mod)
        if not gens:
            return None
        per_vertex.append([(v, g) for g in gens])
    return per_vertex


def _summand_generators(K, p, J, I):
    out = []
    KI = full_subcomplex(K, I)
    for sigma in KI.ordered_masks:
        choices = _factor_choices(p, J, I, sigma)
        if choices is None:
            continue
        basis = link_basis(K, I, sigma, p.field)
        for d, dim in basis.dims().items():
            for k in range(dim):
                for facs in cartesian(*choices):
                    out.append(Generator(J, I, sigma, d, k, tuple(facs)))
    return out


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _as_mask(J) -> int:
    return J if isinstance(J, int) else to_mask(J)


def smash_generators(K: SimplicialComplex, p: PairDecomposition, J=None, threads: int = 1) -> list[Generator]:
    """Basis of H̃*(Ẑ(K_J; (X,A)_J)) in canonical order.

    Cartan subsets I ⊆ J in increasing binary order, then σ ∈ K_I in
    shortlex order, then link classes by (degree, index), then factor
    choices in catalog order.  ``J`` defaults to the whole vertex set.
    """
    J = K.vertex_mask if J is None else _as_mask(J)
    if J & ~K.vertex_mask:
        raise GeneratorError("J is not a subset of the vertex set")
    chunks = _pmap(lambda I: _summand_generators(K, p, J, I), submasks(J), threads)
    return [g for chunk in chunks for g in chunk]


def full_generators(K: SimplicialComplex, p: PairDecomposition, threads: int = 1) -> list[Generator]:
    """Basis of H*(Z(K; (X,A))): the unit followed by every smash summand."""
    out = []
    for J in submasks(K.vertex_mask):
        out.extend(smash_generators(K, p, J, threads))
    return out


# -- series ---------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _pair_series(pair, mod: str) -> PoincareSeries:
    return pair.series(mod)


def _module_series(p: PairDecomposition, v: int, mod: str) -> PoincareSeries:
    return _pair_series(p.at(v), mod)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict[int, int] = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
    return out


def _link_term(K, I, sigma, field, suspension) -> dict:
    s = link_series(K, I, sigma, field).coeffs
    if suspension:
        return {d + 1: c for d, c in s.items()}
    # mutation: forget the suspension, reading the empty link as a point class
    out: dict[int, int] = {}
    for d, c in s.items():
        out[max(d, 0)] = out.get(max(d, 0), 0) + c
    return out


def inner_series(K: SimplicialComplex, p: PairDecomposition, I: int,
                 suspension: bool = True) -> PoincareSeries:
    """Σ_{σ∈K_I} t·P̄(lk_σ K_I)·Π_σ P(C′)·Π_{I∖σ} P(E′) for one Cartan subset."""
    verts = members(I)
    cs = {v: _module_series(p, v, "C").coeffs for v in verts}
    es = {v: _module_series(p, v, "E").coeffs for v in verts}
    total: dict[int, int] = {}
    for sigma in full_subcomplex(K, I).ordered_masks:
        term = {0: 1}
        for v in verts:
            term = _poly_mul(term, cs[v] if sigma >> (v - 1) & 1 else es[v])
            if not term:
                break
        if not term:
            continue
        for d, c in _poly_mul(_link_term(K, I, sigma, p.field, suspension), term).items():
            total[d] = total.get(d, 0) + c
    return PoincareSeries(total)


def _b_product(p, mask: int) -> PoincareSeries:
    out = PoincareSeries.one()
    for v in members(mask):
        out = out * _module_series(p, v, "B")
    return out


def smash_series(K: SimplicialComplex, p: PairDecomposition, J=None, threads: int = 1,
                 suspension: bool = True) -> PoincareSeries:
    """Reduced series of Ẑ(K_J; (X,A)_J).

    ``suspension=False`` drops the factor t in front of the link series; it
    exists only so the oracle tests can confirm they notice the mistake.
    """
    J = K.vertex_mask if J is None else _as_mask(J)
    parts = _pmap(lambda I: _summand_series(K, p, I, suspension) * _b_product(p, J & ~I),
                  submasks(J), threads)
    total = PoincareSeries.zero()
    for s in parts:
        total = total + s
    return total


def _summand_series(K, p, I, suspension=True):
    return inner_series(K, p, I, suspension)


def full_series(K: SimplicialComplex, p: PairDecomposition, threads: int = 1,
                suspension: bool = True) -> PoincareSeries:
    """Unreduced series of Z(K; (X,A)).

    Summing the smash series over all J and regrouping by I gives
    Σ_I inner(I) · Π_{j∉I} (1 + P̄(B′_j)); the I = ∅ term supplies the unit.
    """
    everything = K.vertex_mask
    ones = {v: PoincareSeries.one() + _module_series(p, v, "B") for v in K.vertices}

    def term(I):
        s = _summand_series(K, p, I, suspension)
        if not s:
            return s
        for v in members(everything & ~I):
            s = s * ones[v]
        return s

    total = PoincareSeries.zero()
    for s in _pmap(term, submasks(everything), threads):
        total = total + s
    return PoincareSeries(total.coeffs, reduced=False)


def series_of_generators(gens) -> PoincareSeries:
    return PoincareSeries.from_degrees(g.degree for g in gens)


def betti_table(K: SimplicialComplex, p: PairDecomposition, threads: int = 1) -> dict[int, int]:
    """dim H^n(Z(K; (X,A))) by degree."""
    return dict(full_series(K, p, threads).coeffs)


def summand_breakdown(K: SimplicialComplex, p: PairDecomposition, J=None) -> dict[tuple[int, int, int], PoincareSeries]:
    """Series contributed by each (J, I, σ) triple with a nonzero piece."""
    J = K.vertex_mask if J is None else _as_mask(J)
    out = {}
    for g in smash_generators(K, p, J):
        key = (g.J, g.I, g.sigma)
        out[key] = out.get(key, PoincareSeries.zero()) + PoincareSeries.monomial(g.degree)
    return out


__all__ = [
    "Generator", "GeneratorError", "unit_generator", "generator_degree", "format_label",
    "parse_label", "check_generator", "link_complex", "link_basis", "link_series",
    "smash_generators", "full_generators", "inner_series", "smash_series", "full_series",
    "series_of_generators", "betti_table", "summand_breakdown",
]
