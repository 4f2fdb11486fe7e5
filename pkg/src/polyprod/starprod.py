"""Star and cup products of labelled generators.

A product u ∗ v of generators of the (P, J, τ) and (Q, L, ω) summands is
computed vertex by vertex from the pair tables, then the two link classes are
multiplied into H̃*(lk_{τ∪ω}(K_{J∪L})) and pulled back to the link of the
summand where the factor products land.  The link product is handled by a
short cascade of exact rules; anything beyond them is returned as an
:class:`UnknownTerm` rather than guessed.

Sign convention: a generator is read as the ordered tensor
(link class) ⊗ (factor at the smallest vertex) ⊗ ... with the link class in
degree ``link_degree + 1``.  Products interleave the two tensors slot by slot
and pick up the Koszul sign of that shuffle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .cartan import Generator, check_generator, link_basis, link_complex
from .complex import SimplicialComplex, members
from .homalg import (Cochain, combination, express, join_class, pullback_vector,
                     restrict, unit_vector)
from .pairdata import PairDecomposition


class StarError(ValueError):
    pass


@dataclass(frozen=True)
class LinkClass:
    """A class in H̃^degree(lk_σ(K_S)) given by coordinates in the canonical basis."""

    K: SimplicialComplex
    S: int
    sigma: int
    degree: int
    coords: tuple
    field: object

    @property
    def complex(self) -> SimplicialComplex:
        return link_complex(self.K, self.S, self.sigma)

    @property
    def basis(self):
        return link_basis(self.K, self.S, self.sigma, self.field)

    def cochain(self) -> Cochain:
        return combination(self.basis, self.degree, list(self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    @classmethod
    def basis_class(cls, K, S, sigma, degree, index, field) -> "LinkClass":
        n = link_basis(K, S, sigma, field).dim(degree)
        return cls(K, S, sigma, degree, tuple(unit_vector(n, index, field)), field)


@dataclass(frozen=True)
class LinkStarResult:
    kind: str  # "class" | "zero" | "unknown"
    strategy: str
    value: LinkClass | None = None
    reason: str = ""
    flags: frozenset = frozenset()


def _empty(K: SimplicialComplex) -> bool:
    return K.is_empty_complex()


def link_star(alpha: LinkClass, beta: LinkClass, I: int | None = None, sigma: int | None = None) -> LinkStarResult:
    """Product of link classes over (J, τ) and (L, ω) into lk_{τ∪ω}(K_{J∪L})."""
    K, fld = alpha.K, alpha.field
    if beta.K != K or beta.field != fld:
        raise StarError("link classes come from different complexes or fields")
    J, tau, L, omega = alpha.S, alpha.sigma, beta.S, beta.sigma
    explicit = I is not None or sigma is not None
    I = J | L if I is None else I
    sigma = tau | omega if sigma is None else sigma
    if I != J | L or sigma & J != tau or sigma & L != omega or sigma & ~I:
        if explicit:
            raise StarError("target context does not match τ = σ∩J, ω = σ∩L")
        return LinkStarResult("zero", "S0", reason="no target summand")
    if sigma not in K.face_masks:
        return LinkStarResult("zero", "S0", reason="no target summand")
    d = alpha.degree + beta.degree + 1
    target = link_basis(K, I, sigma, fld)
    if target.dim(d) == 0 or alpha.is_zero() or beta.is_zero():
        return LinkStarResult("zero", "S0", reason="target group vanishes")
    if _empty(alpha.complex) and _empty(beta.complex) and _empty(link_complex(K, I, sigma)):
        flags = frozenset()
        if J & L and not (tau == omega and bin(tau).count("1") == 1):
            flags = frozenset({"S1-extended"})
        a0 = alpha.coords[0]
        b0 = beta.coords[0]
        coords = (fld.reduce(a0 * b0),)
        return LinkStarResult("class", "S1", LinkClass(K, I, sigma, -1, coords, fld), flags=flags)
    if not J & L:
        joined = join_class(alpha.cochain(), beta.cochain(), alpha.complex, beta.complex, fld)
        small = restrict(joined, target.complex)
        coords = tuple(express(small, target))
        return LinkStarResult("class", "S2", LinkClass(K, I, sigma, d, coords, fld))
    return LinkStarResult("unknown", "S3", reason="link product outside the implemented rules")


def _pull(cls: LinkClass, S: int, sigma: int) -> LinkClass:
    """Restrict ``cls`` to the sub-link lk_σ(K_S) ⊆ lk_{cls.sigma}(K_{cls.S})."""
    if S == cls.S and sigma == cls.sigma:
        return cls
    src = cls.basis
    tgt = link_basis(cls.K, S, sigma, cls.field)
    if not tgt.complex.face_masks <= src.complex.face_masks:
        raise StarError("link map is not an inclusion of links")
    coords = pullback_vector(src, tgt, cls.degree, list(cls.coords))
    return LinkClass(cls.K, S, sigma, cls.degree, tuple(coords), cls.field)


def iota(cls: LinkClass, l: int) -> LinkClass:
    """ι_l*: H̃*(lk_σ K_S) -> H̃*(lk_σ K_{S∖l}) for l ∈ S∖σ."""
    bit = 1 << (l - 1)
    if not cls.S & bit or cls.sigma & bit:
        raise StarError(f"ι_{l} needs {l} ∈ S∖σ")
    return _pull(cls, cls.S & ~bit, cls.sigma)


def rho(cls: LinkClass, s: int) -> LinkClass:
    """ρ_{S,s}*: H̃*(lk_σ K_S) -> H̃*(lk_{σ∪s} K_{S∪s}) for s ∉ S with σ∪s ∈ K."""
    bit = 1 << (s - 1)
    if cls.S & bit:
        raise StarError(f"ρ needs {s} ∉ S")
    if cls.sigma | bit not in cls.K.face_masks:
        raise StarError(f"σ ∪ {{{s}}} is not a face")
    return _pull(cls, cls.S | bit, cls.sigma | bit)


def link_maps(kind: str, cls: LinkClass, vertex: int) -> LinkClass:
    if kind == "iota":
        return iota(cls, vertex)
    if kind == "rho":
        return rho(cls, vertex)
    raise StarError(f"unknown link map {kind!r}")


@dataclass(frozen=True)
class UnknownTerm:
    """An unevaluated link product with everything needed to finish it."""

    coefficient: object
    alpha: LinkClass
    beta: LinkClass
    target_I: int
    target_sigma: int
    final_J: int
    final_I: int
    final_sigma: int
    factors: tuple
    degree: int

    def describe(self) -> dict:
        def ctx(c: LinkClass):
            return {"S": list(members(c.S)), "sigma": list(members(c.sigma)),
                    "degree": str(c.degree), "coords": [str(x) for x in c.coords]}
        return {
            "coefficient": str(self.coefficient),
            "alpha": ctx(self.alpha),
            "beta": ctx(self.beta),
            "product_in": {"I": list(members(self.target_I)), "sigma": list(members(self.target_sigma))},
            "pull_back_to": {"J": list(members(self.final_J)), "I": list(members(self.final_I)),
                             "sigma": list(members(self.final_sigma))},
            "factors": [f"{v}:{g.name}" for v, g in self.factors],
            "degree": str(self.degree),
        }


@dataclass
class StarClass:
    terms: dict = field(default_factory=dict)  # Generator -> nonzero coefficient
    unknown: list = field(default_factory=list)
    flags: set = field(default_factory=set)

    def add(self, g: Generator, c, fld) -> None:
        c = fld.reduce(self.terms.get(g, 0) + c)
        if c:
            self.terms[g] = c
        else:
            self.terms.pop(g, None)

    def items(self) -> list[tuple[Generator, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def is_zero(self) -> bool:
        return not self.terms and not self.unknown

    def degrees(self) -> set[int]:
        return {g.degree for g in self.terms} | {u.degree for u in self.unknown}

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = [f"{c}*[{g.label}]" for g, c in self.items()]
        parts += ["<unknown>"] * len(self.unknown)
        return " + ".join(parts)


def _koszul_exponent(u_slots, v_slots) -> int:
    """Σ |a||b| over u-slots a placed after v-slots b in the merged order."""
    total = 0
    for pa, da in u_slots:
        if da % 2 == 0:
            continue
        for pb, db in v_slots:
            if pa > pb and db % 2:
                total += 1
    return total


def _vertex_options(i, u: Generator, v: Generator, p: PairDecomposition):
    """Branches for one vertex: list of (coeff, role, gen, move) or None for 'no target'.

    ``move`` is ``"iota"`` when the vertex leaves I′, ``"rho"`` when it joins
    σ′ and I′, otherwise ``None``.
    """
    fld = p.field
    pair = p.at(i)
    ru, rv = u.role(i), v.role(i)
    if rv is None:
        return [(fld.one, ru, u.factor(i), None)]
    if ru is None:
        return [(fld.one, rv, v.factor(i), None)]
    x, y = u.factor(i), v.factor(i)
    roles = {ru, rv}
    if roles <= {"c", "b"} and "c" in roles:
        return [(c, "c", g, None) for c, g in pair.product("X", x, y, fld)]
    if roles == {"c", "e"}:
        return None
    if "e" in roles:
        out = []
        for c, g in pair.product("A", x, y, fld):
            if g.module == "E":
                out.append((c, "e", g, None))
            else:
                out.append((c, "b", g, "iota"))
        return out
    # both b: product taken in H̃*(X)
    out = []
    for c, g in pair.product("X", x, y, fld):
        if g.module == "B":
            out.append((c, "b", g, None))
        else:
            out.append((c, "c", g, "rho"))
    return out


def star(u: Generator, v: Generator, K: SimplicialComplex, p: PairDecomposition,
         check: bool = True) -> StarClass:
    """u ∗ v as a combination of generators of the (P ∪ Q) summand."""
    if check:
        check_generator(u, K, p)
        check_generator(v, K, p)
    fld = p.field
    result = StarClass()
    P, J, tau = u.J, u.I, u.sigma
    Q, L, omega = v.J, v.I, v.sigma
    # a vertex of τ lying in L∖ω (or of ω in J∖τ) leaves no summand to land in
    if tau & L & ~omega or omega & J & ~tau:
        return result
    I0, sigma0 = J | L, tau | omega
    if sigma0 not in K.face_masks:
        return result
    union = P | Q
    verts = members(union)
    options = []
    for i in verts:
        opts = _vertex_options(i, u, v, p)
        if not opts:
            return result
        options.append(opts)

    alpha = LinkClass.basis_class(K, J, tau, u.link_degree, u.link_index, fld)
    beta = LinkClass.basis_class(K, L, omega, v.link_degree, v.link_index, fld)
    base: LinkStarResult | None = None

    u_slots = [(0, u.link_degree + 1)] + [(i, g.degree) for i, g in u.factors]
    v_slots = [(0, v.link_degree + 1)] + [(i, g.degree) for i, g in v.factors]
    sign = -1 if _koszul_exponent(u_slots, v_slots) % 2 else 1

    for branch in cartesian(*options):
        coeff = fld(sign)
        I1, s1 = I0, sigma0
        ok = True
        for i, (c, role, g, move) in zip(verts, branch):
            coeff = fld.reduce(coeff * c)
            bit = 1 << (i - 1)
            if move == "iota":
                I1 &= ~bit
            elif move == "rho":
                I1 |= bit
                s1 |= bit
        if not coeff:
            continue
        if s1 not in K.face_masks:
            ok = False
        if not ok:
            continue
        factors = tuple((i, g) for i, (_, _, g, _) in zip(verts, branch))
        degree = u.degree + v.degree
        if base is None:
            base = link_star(alpha, beta, I0, sigma0)
            result.flags.update(base.flags)
        if base.kind == "zero":
            return result
        if base.kind == "unknown":
            result.unknown.append(UnknownTerm(coeff, alpha, beta, I0, sigma0, union, I1, s1,
                                              factors, degree))
            continue
        pulled = _pull(base.value, I1, s1)
        d = pulled.degree
        for k, x in enumerate(pulled.coords):
            x = fld.reduce(x * coeff)
            if x:
                g = Generator(union, I1, s1, d, k, factors)
                result.add(g, x, fld)
    if base is not None:
        result.flags.add(f"strategy:{base.strategy}")
    return result


def cup(u: Generator, v: Generator, K: SimplicialComplex, p: PairDecomposition) -> StarClass:
    """Cup product in H*(Z(K; (X,A))); generators index the Hochster summands by ``J``."""
    return star(u, v, K, p)


__all__ = [
    "LinkClass", "LinkStarResult", "StarClass", "StarError", "UnknownTerm",
    "link_star", "iota", "rho", "link_maps", "star", "cup",
]
