"""Command-line front end and the JSON problem format.

Problem files look like::

    {"format": 1,
     "complex": {"m": 4, "facets": [[1, 2], [2, 3], [3, 4], [1, 4]]},
     "field": "Q",
     "pairs": {"builtin": "moment-angle"}}

``pairs`` may instead be ``{"shared": PAIR}`` or ``{"per_vertex": [PAIR or
{"builtin": name}, ...]}``.  Degrees, dimensions and coefficients are decimal
strings.  Every command prints one JSON document (``--pretty`` prints tables
instead) and exits 0 on success, 1 on invalid input and 2 when an oracle
check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from . import cartan, oracle, starprod
from .complex import ComplexError, SimplicialComplex, full_subcomplex, members, to_mask, validate_complex
from .homalg import Field
from .pairdata import (CWPair, CatalogError, GradedGen, PairDecomposition, PairValidationError,
                       builtin_pair, validate_pair)

FORMAT = 1
LARGE_M = 16
EXIT_OK, EXIT_INVALID, EXIT_ORACLE = 0, 1, 2


class ProblemError(ValueError):
    """Invalid problem file; ``where`` points at the offending location."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class Problem:
    """A parsed problem file, kept close to its JSON form so it round-trips.

    ``pairs`` is ``("builtin", name)``, ``("shared", CWPair)`` or
    ``("per_vertex", ((kind, data), ...))`` with kind ``"builtin"``/``"pair"``.
    """

    m: int
    facets: tuple
    field: str
    pairs: tuple

    @property
    def fld(self) -> Field:
        return Field.parse(self.field)

    def complex(self) -> SimplicialComplex:
        return validate_complex(self.m, self.facets)

    def decomposition(self) -> PairDecomposition:
        fld = self.fld
        kind, data = self.pairs
        if kind == "builtin":
            per = (builtin_pair(data, fld),) * self.m
        elif kind == "shared":
            per = (data,) * self.m
        else:
            if len(data) != self.m:
                raise ProblemError(f"lists {len(data)} pairs but m = {self.m}", "pairs.per_vertex")
            per = tuple(builtin_pair(d, fld) if k == "builtin" else d for k, d in data)
        return validate_pair(PairDecomposition(fld, per))


@lru_cache(maxsize=1)
def problem_schema() -> dict:
    text = resources.files("polyprod").joinpath("schemas/problem.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _path(err) -> str:
    out = ""
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<root>"


# -- reading ------------------------------------------------------------------

def _read_pair(doc: dict) -> CWPair:
    gens = tuple(GradedGen(g["name"], int(g["degree"]), g["module"]) for g in doc["generators"])

    def table(entries):
        return {(e["lhs"], e["rhs"]): {k: Fraction(v) for k, v in e["value"].items()} for e in entries}

    betti = None
    if "betti" in doc:
        betti = {space: {int(d): int(n) for d, n in dims.items()} for space, dims in doc["betti"].items()}
    return CWPair(doc["name"], gens, table(doc.get("x_products", [])), table(doc.get("a_products", [])),
                  non_connected=doc.get("non_connected", False), betti=betti)


def load_problem(doc: dict) -> Problem:
    """Problem from an already-decoded JSON document (schema-checked)."""
    validator = jsonschema.Draft202012Validator(problem_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        # best_match descends into oneOf branches; take the deepest sub-error
        while err.context:
            err = max(err.context, key=lambda e: len(e.absolute_path))
        raise ProblemError(err.message, _path(err))
    cx = doc["complex"]
    m = cx["m"]
    for k, facet in enumerate(cx["facets"]):
        bad = [v for v in facet if not 1 <= v <= m]
        if bad:
            raise ProblemError(f"facet {facet} has vertices outside 1..{m}: {bad}", f"complex.facets[{k}]")
    try:
        Field.parse(doc["field"])
    except ValueError as exc:
        raise ProblemError(str(exc), "field") from None
    pairs = doc["pairs"]
    if "builtin" in pairs:
        spec = ("builtin", pairs["builtin"])
    elif "shared" in pairs:
        spec = ("shared", _read_pair(pairs["shared"]))
    else:
        spec = ("per_vertex", tuple(("builtin", p["builtin"]) if "builtin" in p else ("pair", _read_pair(p))
                                    for p in pairs["per_vertex"]))
    return Problem(m, tuple(tuple(f) for f in cx["facets"]), doc["field"], spec)


def parse_problem(source) -> tuple[SimplicialComplex, PairDecomposition]:
    """Read a problem file (path or JSON text) into validated domain objects."""
    problem = read_problem(source)
    return build(problem)


def read_problem(source) -> Problem:
    text = source
    if not (isinstance(source, str) and source.lstrip().startswith("{")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return load_problem(doc)


def build(problem: Problem) -> tuple[SimplicialComplex, PairDecomposition]:
    try:
        K = problem.complex()
    except ComplexError as exc:
        raise ProblemError(str(exc), "complex.facets") from None
    try:
        p = problem.decomposition()
    except CatalogError as exc:
        raise ProblemError(str(exc), "pairs") from None
    return K, p


# -- writing ------------------------------------------------------------------

def _write_pair(pair: CWPair) -> dict:
    def table(t):
        return [{"lhs": a, "rhs": b, "value": {k: str(v) for k, v in combo.items()}}
                for (a, b), combo in t.items()]

    out = {
        "name": pair.name,
        "generators": [{"name": g.name, "degree": str(g.degree), "module": g.module} for g in pair.gens],
        "x_products": table(pair.x_products),
        "a_products": table(pair.a_products),
    }
    if pair.non_connected:
        out["non_connected"] = True
    if pair.betti is not None:
        out["betti"] = {space: {str(d): str(n) for d, n in sorted(dims.items())}
                        for space, dims in pair.betti.items()}
    return out


def problem_to_dict(problem: Problem) -> dict:
    kind, data = problem.pairs
    if kind == "builtin":
        pairs = {"builtin": data}
    elif kind == "shared":
        pairs = {"shared": _write_pair(data)}
    else:
        pairs = {"per_vertex": [{"builtin": d} if k == "builtin" else _write_pair(d) for k, d in data]}
    return {
        "format": FORMAT,
        "complex": {"m": problem.m, "facets": [list(f) for f in problem.facets]},
        "field": problem.field,
        "pairs": pairs,
    }


def dump_problem(problem: Problem) -> str:
    return json.dumps(problem_to_dict(problem), indent=2, ensure_ascii=False) + "\n"


def emit(doc: dict) -> str:
    """Canonical output bytes: sorted keys, fixed separators."""
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


# -- commands -----------------------------------------------------------------

def _gen_doc(g: cartan.Generator) -> dict:
    return {
        "label": g.label,
        "degree": str(g.degree),
        "J": list(members(g.J)),
        "I": list(members(g.I)),
        "sigma": list(members(g.sigma)),
        "link_degree": str(g.link_degree),
        "link_index": str(g.link_index),
        "factors": [{"vertex": v, "name": gen.name, "module": gen.module, "degree": str(gen.degree)}
                    for v, gen in g.factors],
    }


def _subset(text: str | None, K: SimplicialComplex) -> int | None:
    if text is None:
        return None
    text = text.strip().strip("{}[]")
    J = to_mask(int(x) for x in text.split(",") if x.strip()) if text else 0
    if J & ~K.vertex_mask:
        raise ProblemError(f"subset {{{text}}} is not inside the vertex set", "--subset")
    return J


def cmd_validate(args, K, p) -> tuple[int, dict]:
    pairs = []
    for v in range(1, p.m + 1):
        pr = p.at(v)
        pairs.append({"vertex": v, "name": pr.name,
                      **{mod: [{"name": g.name, "degree": str(g.degree)} for g in pr.gens_of(mod)]
                         for mod in ("B", "C", "E")}})
    return EXIT_OK, {"valid": True, "m": K.m, "field": p.field.tag, "faces": str(len(K)),
                     "facets": [list(f) for f in K.facets], "pairs": pairs}


def cmd_series(args, K, p) -> tuple[int, dict]:
    J = _subset(args.subset, K)
    if args.space == "smash":
        s = cartan.smash_series(K, p, J, threads=args.threads)
    else:
        sub = K if J is None else full_subcomplex(K, J)
        s = cartan.full_series(sub, p, threads=args.threads)
    doc = {"space": args.space, "series": s.to_dict(), "reduced": args.space == "smash"}
    if J is not None:
        doc["subset"] = list(members(J))
    return EXIT_OK, doc


def cmd_generators(args, K, p) -> tuple[int, dict]:
    J = _subset(args.subset, K)
    if J is None:
        gens = cartan.full_generators(K, p, threads=args.threads)
    else:
        gens = cartan.smash_generators(K, p, J, threads=args.threads)
    if args.degree is not None:
        gens = [g for g in gens if g.degree == args.degree]
    doc = {"count": str(len(gens)), "generators": [_gen_doc(g) for g in gens]}
    if J is not None:
        doc["subset"] = list(members(J))
    if args.degree is not None:
        doc["degree"] = str(args.degree)
    return EXIT_OK, doc


def cmd_product(args, K, p) -> tuple[int, dict]:
    try:
        u = cartan.parse_label(args.u, K, p)
        v = cartan.parse_label(args.v, K, p)
    except cartan.GeneratorError as exc:
        raise ProblemError(str(exc), "--u/--v") from None
    res = starprod.cup(u, v, K, p)
    doc = {
        "u": u.label,
        "v": v.label,
        "degree": str(u.degree + v.degree),
        "terms": [{"label": g.label, "coefficient": p.field.format(c), "degree": str(g.degree)}
                  for g, c in res.items()],
        "unknown": [t.describe() for t in res.unknown],
        "flags": sorted(res.flags),
        "warning": bool(res.unknown),
    }
    return EXIT_OK, doc


def cmd_oracle(args) -> tuple[int, dict]:
    checks = oracle.CHECKS if args.check == "all" else (args.check,)
    reports = oracle.corpus_check(seed=args.seed, sizes=range(1, args.max_vertices + 1), checks=checks,
                                  threads=args.threads)
    failures = [r.to_dict() for r in reports if not r.passed]
    doc = {
        "seed": str(args.seed),
        "checks": list(checks),
        "max_vertices": str(args.max_vertices),
        "reports": str(len(reports)),
        "summary": {k: {kk: str(vv) for kk, vv in v.items()} for k, v in oracle.summarize(reports).items()},
        "failures": failures,
        "passed": not failures,
    }
    return (EXIT_OK if not failures else EXIT_ORACLE), doc


# -- pretty printing ----------------------------------------------------------

def _pretty(command: str, doc: dict) -> str:
    lines = []
    if command == "series":
        lines.append(f"{'degree':>8}  {'dim':>8}")
        for d, n in doc["series"].items():
            lines.append(f"{d:>8}  {n:>8}")
    elif command == "generators":
        lines.append(f"{'degree':>6}  label")
        for g in doc["generators"]:
            lines.append(f"{g['degree']:>6}  {g['label']}")
        lines.append(f"{doc['count']} generators")
    elif command == "product":
        lines.append(f"{doc['u']}  *  {doc['v']}")
        for t in doc["terms"] or [{"coefficient": "0", "label": "", "degree": doc["degree"]}]:
            lines.append(f"  {t['coefficient']:>6}  {t['label']}")
        if doc["unknown"]:
            lines.append(f"  + {len(doc['unknown'])} unevaluated link product(s)")
        if doc["flags"]:
            lines.append("  flags: " + ", ".join(doc["flags"]))
    elif command == "oracle":
        for check, tally in doc["summary"].items():
            lines.append(f"{check:<10} passed {tally['passed']:>6}  failed {tally['failed']:>6}")
        for f in doc["failures"]:
            lines.append(f"FAIL {f['check']} {f['instance']}: expected {f['expected']} got {f['computed']}")
    elif command == "validate":
        lines.append(f"valid: m = {doc['m']}, {doc['faces']} faces, field {doc['field']}")
        for pr in doc["pairs"]:
            desc = "; ".join(f"{mod}: " + (", ".join(f"{g['name']}({g['degree']})" for g in pr[mod]) or "0")
                             for mod in ("B", "C", "E"))
            lines.append(f"  vertex {pr['vertex']} [{pr['name']}] {desc}")
    else:
        lines.append(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    return "\n".join(lines) + "\n"


# -- entry point --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _threads_default() -> int:
    raw = os.environ.get("PP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $PP_THREADS or 1); never changes the output")
    common.add_argument("--pretty", action="store_true", help="print tables instead of JSON")

    parser = _Parser(prog="polyprod", description="Cohomology of polyhedral products.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common], help="check a problem file")
    v.add_argument("problem")

    s = sub.add_parser("series", parents=[common], help="Hilbert-Poincaré series")
    s.add_argument("problem")
    s.add_argument("--space", choices=("smash", "full"), default="full")
    s.add_argument("--subset", help="vertex subset J, e.g. 1,3")

    g = sub.add_parser("generators", parents=[common], help="labelled additive basis")
    g.add_argument("problem")
    g.add_argument("--subset", help="list H̃* of the smash summand for J instead of the full space")
    g.add_argument("--degree", type=int)

    pr = sub.add_parser("product", parents=[common], help="cup product of two generators")
    pr.add_argument("problem")
    pr.add_argument("--u", required=True)
    pr.add_argument("--v", required=True)

    o = sub.add_parser("oracle", parents=[common], help="run the brute-force cross-checks")
    o.add_argument("--check", choices=("euler", "hochster", "join", "all"), default="all")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-vertices", type=int, default=6)
    return parser


COMMANDS = {"validate": cmd_validate, "series": cmd_series, "generators": cmd_generators,
            "product": cmd_product}


def run_command(argv: list[str]) -> tuple[int, str, str]:
    """Run one command; returns (exit status, stdout text, stderr text)."""
    args = make_parser().parse_args(argv)
    if args.threads is None:
        args.threads = _threads_default()
    err = ""
    try:
        if args.command == "oracle":
            status, doc = cmd_oracle(args)
        else:
            K, p = parse_problem(args.problem)
            if K.m > LARGE_M:
                err += f"warning: m = {K.m} > {LARGE_M}; enumeration grows like 3^m, consider --subset\n"
            status, doc = COMMANDS[args.command](args, K, p)
    except PairValidationError as exc:
        status = EXIT_INVALID
        doc = {"valid": False, "errors": [
            {"rule": v.rule, "vertex": v.vertex, "message": v.message,
             "entry": list(v.entry) if v.entry else None} for v in exc.violations]}
    except (ProblemError, OSError) as exc:
        status = EXIT_INVALID
        doc = {"valid": False, "errors": [{"rule": "input", "message": str(exc),
                                           "where": getattr(exc, "where", "")}]}
    doc = {"format": FORMAT, "command": args.command, **doc}
    out = _pretty(args.command, doc) if args.pretty and status != EXIT_INVALID else emit(doc)
    if status == EXIT_INVALID:
        err += "".join(f"error: {e['message']}\n" for e in doc["errors"])
    return status, out, err


def main(argv: list[str] | None = None) -> int:
    status, out, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
