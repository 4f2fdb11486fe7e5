"""Brute-force cross-checks for the cartan engine.

Nothing here goes through the Cartan/link machinery: Euler characteristics
come from inclusion-exclusion over the pieces D(σ) of the polyhedral product,
and the moment-angle Betti numbers come straight from full subcomplexes.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .complex import (SimplicialComplex, cycle, discrete, empty_complex, join, members,
                      popcount, simplex, simplex_boundary, submasks, validate_complex)
from .homalg import GF, QQ, Field, betti_numbers
from .pairdata import PairDecomposition, builtin

MAX_FACETS = 12


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    check: str
    instance: str
    expected: object
    computed: object
    passed: bool
    reproduction: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "instance": self.instance,
            "expected": _jsonable(self.expected),
            "computed": _jsonable(self.computed),
            "passed": self.passed,
            "reproduction": self.reproduction,
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): str(v) for k, v in sorted(x.items())}
    return str(x)


# -- Euler characteristic -------------------------------------------------------

def _piece_euler(p: PairDecomposition, m_vertices, sigma: int) -> int:
    out = 1
    for v in m_vertices:
        out *= p.at(v).euler("X" if sigma >> (v - 1) & 1 else "A")
    return out


def euler_characteristic(K: SimplicialComplex, p: PairDecomposition) -> int:
    """χ(Z(K; (X,A))) by inclusion-exclusion over the maximal faces.

    Z is the union of D(F) over facets F and D(F) ∩ D(F′) = D(F ∩ F′).
    Complexes with more than 12 facets fall back to the cell count
    Σ_{σ∈K} Π_{σ}(χX − χA) Π_{rest} χA, which is the same number.
    """
    verts = K.vertices
    facets = K.facet_masks
    memo: dict[int, int] = {}

    def chi(sigma):
        if sigma not in memo:
            memo[sigma] = _piece_euler(p, verts, sigma)
        return memo[sigma]

    if len(facets) > MAX_FACETS:
        total = 0
        for sigma in K.face_masks:
            term = 1
            for v in verts:
                x, a = p.at(v).euler("X"), p.at(v).euler("A")
                term *= (x - a) if sigma >> (v - 1) & 1 else a
            total += term
        return total

    total = 0
    for r in range(1, len(facets) + 1):
        for group in combinations(facets, r):
            inter = group[0]
            for f in group[1:]:
                inter &= f
            total += (-1) ** (r + 1) * chi(inter)
    return total


# -- Hochster -----------------------------------------------------------------

def _model_of(model) -> str:
    if isinstance(model, str):
        if model not in ("moment-angle", "real-moment-angle"):
            raise OracleError(f"no direct formula for model {model!r}")
        return model
    if isinstance(model, PairDecomposition):
        pairs = model.pairs
        if any(pr.gens_of("B") or pr.gens_of("C") for pr in pairs):
            raise OracleError("the direct formula needs B' = C' = 0 at every vertex")
        degs = {tuple(g.degree for g in pr.gens_of("E")) for pr in pairs}
        if degs == {(1,)}:
            return "moment-angle"
        if degs == {(0,)}:
            return "real-moment-angle"
    raise OracleError("the direct formula applies only to (D², S¹) and (D¹, S⁰)")


def hochster_direct(K: SimplicialComplex, model="moment-angle", field: Field = QQ) -> dict[int, int]:
    """dim H^ℓ(Z) summed from H̃*(K_J) over all J ⊆ [m]."""
    model = _model_of(model)
    table: dict[int, int] = {}
    for J in submasks(K.vertex_mask):
        sub = SimplicialComplex(members(J), frozenset(f for f in K.face_masks if f & ~J == 0))
        for d, n in betti_numbers(sub, field).items():
            ell = d + 1 + (popcount(J) if model == "moment-angle" else 0)
            table[ell] = table.get(ell, 0) + n
    return dict(sorted(table.items()))


# -- corpus -------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    name: str
    K: SimplicialComplex

    def describe(self) -> dict:
        return {"m": self.K.m, "vertices": list(self.K.vertices),
                "facets": [list(f) for f in self.K.facets]}


def named_complexes(max_vertices: int = 6) -> list[Instance]:
    out = []
    for m in range(1, max_vertices + 1):
        out.append(Instance(f"empty-{m}", empty_complex(m)))
        out.append(Instance(f"discrete-{m}", discrete(m)))
        out.append(Instance(f"simplex-{m}", simplex(m)))
        if m >= 2:
            out.append(Instance(f"boundary-{m}", simplex_boundary(m)))
        if m >= 3:
            out.append(Instance(f"cycle-{m}", cycle(m)))
    small = [i for i in out if i.K.m <= 3]
    for a in small:
        for b in small:
            if a.K.m + b.K.m <= max_vertices and a.name <= b.name:
                out.append(Instance(f"join({a.name},{b.name})", join(a.K, b.K)))
    return out


def random_complex(rng: random.Random, m: int) -> SimplicialComplex:
    nfacets = rng.randint(0, min(MAX_FACETS, 2 ** m - 1))
    gens = []
    for _ in range(nfacets):
        size = rng.randint(1, m)
        gens.append(rng.sample(range(1, m + 1), size))
    K = validate_complex(m, gens)
    while len(K.facet_masks) > MAX_FACETS:
        gens.pop()
        K = validate_complex(m, gens)
    return K


def corpus(seed: int = 0, max_vertices: int = 6, random_count: int = 200) -> list[Instance]:
    """Named families plus seeded random complexes, deduplicated, in a fixed order."""
    rng = random.Random(seed)
    seen = set()
    out = []
    for inst in named_complexes(max_vertices):
        if inst.K not in seen:
            seen.add(inst.K)
            out.append(inst)
    attempts = 0
    made = 0
    while made < random_count and attempts < 20 * random_count and max_vertices >= 1:
        attempts += 1
        m = rng.randint(1, max_vertices)
        K = random_complex(rng, m)
        if K in seen:
            continue
        seen.add(K)
        out.append(Instance(f"random-{seed}-{made}", K))
        made += 1
    return out


# -- checks -------------------------------------------------------------------

def _default_full_series():
    from .cartan import full_series
    return full_series


EULER_PAIRS = (
    ("moment-angle", QQ, 6),
    ("real-moment-angle", QQ, 6),
    ("s0-pair", QQ, 6),
    ("so3-rp2", GF(2), 5),
    ("mf-cp3", QQ, 4),
)


def _euler_reports(inst: Instance, fs) -> list[OracleReport]:
    out = []
    for name, fld, cap in EULER_PAIRS:
        if inst.K.m > cap:
            continue
        p = builtin(name, inst.K.m, fld)
        want = euler_characteristic(inst.K, p)
        got = fs(inst.K, p).evaluate(-1)
        out.append(OracleReport("euler", f"{inst.name}/{name}", want, got, want == got,
                                {"complex": inst.describe(), "pair": name, "field": fld.tag}))
    return out


def _hochster_reports(inst: Instance, fs) -> list[OracleReport]:
    out = []
    for name in ("moment-angle", "real-moment-angle"):
        p = builtin(name, inst.K.m)
        want = hochster_direct(inst.K, name)
        got = dict(fs(inst.K, p).coeffs)
        out.append(OracleReport("hochster", f"{inst.name}/{name}", want, got, want == got,
                                {"complex": inst.describe(), "pair": name, "field": "Q"}))
    return out


def join_cases(instances: Iterable[Instance], max_vertices: int, limit: int = 400):
    base = [i for i in instances if i.K.m <= max_vertices - 1 and i.K.m <= 3][:24]
    cases = []
    for a in base:
        for b in base:
            if a.K.m + b.K.m <= max_vertices:
                cases.append((a, b))
    return cases[:limit]


def _join_report(a: Instance, b: Instance, pair: str, fs) -> OracleReport:
    m1, m2 = a.K.m, b.K.m
    # ambient labels are consecutive only after relabelling both sides
    Ka, Kb = a.K.relabel(), b.K.relabel()
    Kj = join(Ka, Kb.shifted(m1)).relabel()
    pa, pb, pj = builtin(pair, m1), builtin(pair, m2), builtin(pair, m1 + m2)
    want = fs(Ka, pa) * fs(Kb, pb)
    got = fs(Kj, pj)
    return OracleReport("join", f"{a.name}*{b.name}/{pair}", dict(want.coeffs), dict(got.coeffs),
                        want == got, {"left": a.describe(), "right": b.describe(), "pair": pair, "field": "Q"})


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


CHECKS = ("euler", "hochster", "join")


def corpus_check(seed: int = 0, sizes: Iterable[int] | None = None, checks: Iterable[str] = CHECKS,
                 full_series: Callable | None = None, threads: int = 1,
                 instances: list[Instance] | None = None) -> list[OracleReport]:
    """Run the oracle checks over the seeded corpus.

    ``sizes`` limits the vertex counts used (default 1..6); an empty
    ``sizes`` gives an empty report.  ``full_series`` lets tests substitute a
    deliberately broken engine.
    """
    fs = full_series or _default_full_series()
    sizes = set(range(1, 7) if sizes is None else sizes)
    checks = tuple(checks)
    for c in checks:
        if c not in CHECKS:
            raise OracleError(f"unknown check {c!r}")
    if not sizes:
        return []
    top = max(sizes)
    if instances is None:
        instances = corpus(seed, top)
    instances = [i for i in instances if i.K.m in sizes]
    reports: list[OracleReport] = []
    if "euler" in checks:
        for chunk in _pmap(lambda i: _euler_reports(i, fs), instances, threads):
            reports.extend(chunk)
    if "hochster" in checks:
        for chunk in _pmap(lambda i: _hochster_reports(i, fs), instances, threads):
            reports.extend(chunk)
    if "join" in checks:
        cases = [(a, b, pair) for a, b in join_cases(instances, top)
                 for pair in ("moment-angle", "real-moment-angle")]
        reports.extend(_pmap(lambda c: _join_report(*c, fs), cases, threads))
    return reports


def summarize(reports: list[OracleReport]) -> dict:
    by_check: dict[str, list[int]] = {}
    for r in reports:
        tally = by_check.setdefault(r.check, [0, 0])
        tally[0 if r.passed else 1] += 1
    return {k: {"passed": v[0], "failed": v[1]} for k, v in sorted(by_check.items())}


__all__ = [
    "OracleReport", "OracleError", "Instance", "euler_characteristic", "hochster_direct",
    "named_complexes", "random_complex", "corpus", "join_cases", "corpus_check", "summarize",
]
