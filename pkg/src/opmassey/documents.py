"""
JSON problem documents.

A document names an algebra (explicitly or through a construction
directive), its presentation, optional relation-check scopes and a list of
Massey queries.  Scalars are strings ``"p/q"``; permutations are 1-based
image lists; degrees follow the document's ``grading`` flag.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any

from . import construct
from .dgalg import DgAlgebra, MultilinearOp, expand_orbits
from .exactla import format_rational, parse_rational
from .graded import GradedBasis, GradedComplex, HVector
from .operads import (
    BUILTINS,
    Generator,
    Presentation,
    Relation,
    RelationTerm,
    Symmetry,
    builtin,
    from_images,
    to_images,
)

SCHEMA = "opmassey/1"

CANNED = {
    "heisenberg-ce": construct.heisenberg_ce,
    "heisenberg-gerstenhaber": construct.heisenberg_gerstenhaber,
    "heisenberg-hypercom": construct.heisenberg_hypercom,
}


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class Query:
    relation: str
    inputs: list            # names or {name: rational} cochains
    name: str = ""
    subspace: list | None = None
    representatives: list | None = None
    bounding_chains: dict = field(default_factory=dict)
    seed: int | None = None


@dataclass
class Document:
    grading: str
    algebra: DgAlgebra
    relation_scope: dict
    queries: list[Query]
    source: dict


def _sign(grading: str) -> int:
    return -1 if grading == "cohomological" else 1


def _expect(cond, path, message):
    if not cond:
        raise SchemaError(path, message)


def _rational(value, path):
    if isinstance(value, int) and not isinstance(value, bool):
        return parse_rational(str(value))
    _expect(isinstance(value, str), path, "rationals are strings 'p/q' or 'p'")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _coeffs(obj, path) -> dict:
    _expect(isinstance(obj, dict), path, "expected an object of name -> rational")
    return {str(k): _rational(v, f"{path}.{k}") for k, v in obj.items()}


def parse_vector(basis: GradedBasis, obj, path, degree=None) -> HVector:
    if isinstance(obj, str):
        obj = {obj: "1"}
    coeffs = _coeffs(obj, path)
    for k in coeffs:
        _expect(k in basis, path, f"unknown basis element {k!r}")
    try:
        return basis.vector(coeffs, degree)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def vector_json(v: HVector, order=None) -> dict:
    keys = [k for k in order if k in v.coeffs] if order is not None else list(v.coeffs)
    return {k: format_rational(v[k]) for k in keys}


def _lie(obj, path) -> construct.LieData:
    _expect(isinstance(obj, dict) and "names" in obj, path, "Lie data needs 'names'")
    brackets = {}
    for k, entry in enumerate(obj.get("brackets", [])):
        p = f"{path}.brackets[{k}]"
        _expect(isinstance(entry, dict) and "pair" in entry and "value" in entry, p,
                "bracket entries are {pair: [a, b], value: {...}}")
        a, b = entry["pair"]
        brackets[(a, b)] = _coeffs(entry["value"], f"{p}.value")
    try:
        return construct.LieData(tuple(obj["names"]), brackets)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def lie_json(data: construct.LieData) -> dict:
    entries = []
    for a, b in itertools.combinations(data.names, 2):
        val = data.bracket(a, b)
        if val:
            entries.append({"pair": [a, b], "value": {k: format_rational(c) for k, c in val.items()}})
    return {"names": list(data.names), "brackets": entries}


def _presentation(obj, path, sign) -> Presentation:
    if isinstance(obj, str):
        _expect(obj in BUILTINS, path, f"unknown builtin presentation {obj!r}")
        return builtin(obj)
    _expect(isinstance(obj, dict), path, "presentation must be a builtin name or an object")
    gens = {}
    for k, g in enumerate(obj.get("generators", [])):
        p = f"{path}.generators[{k}]"
        try:
            gens[g["name"]] = Generator(g["name"], int(g["arity"]), sign * int(g["degree"]),
                                        Symmetry(g.get("symmetry", "none")))
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(p, f"bad generator: {exc}") from None
    rels = []
    for k, r in enumerate(obj.get("relations", [])):
        p = f"{path}.relations[{k}]"
        terms = []
        for j, t in enumerate(r.get("terms", [])):
            tp = f"{p}.terms[{j}]"
            try:
                terms.append(RelationTerm(_rational(t.get("coefficient", "1"), tp + ".coefficient"),
                                          gens[t["outer"]], gens[t["inner"]], int(t["slot"]),
                                          from_images(t["perm"])))
            except SchemaError:
                raise
            except (KeyError, ValueError, TypeError) as exc:
                raise SchemaError(tp, f"bad relation term: {exc}") from None
        try:
            rels.append(Relation(r["name"], terms))
        except (KeyError, ValueError) as exc:
            raise SchemaError(p, f"bad relation: {exc}") from None
    try:
        return Presentation(obj.get("name", "custom"), tuple(gens.values()), rels)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def presentation_json(pres: Presentation, sign: int) -> dict:
    return {
        "name": pres.name,
        "generators": [{"name": g.name, "arity": g.arity, "degree": sign * g.degree,
                        "symmetry": g.symmetry.value} for g in pres.generators],
        "relations": [{"name": r.name, "terms": [
            {"coefficient": format_rational(t.coefficient), "outer": t.outer.name,
             "inner": t.inner.name, "slot": t.slot, "perm": to_images(t.perm)}
            for t in r.terms]} for r in pres.relations],
    }


def _explicit_algebra(obj, path, sign, pres) -> DgAlgebra:
    _expect("basis" in obj, path, "explicit algebras need 'basis'")
    elems = []
    for k, e in enumerate(obj["basis"]):
        _expect(isinstance(e, list) and len(e) == 2 and isinstance(e[1], int), f"{path}.basis[{k}]",
                "basis entries are [name, degree]")
        elems.append((str(e[0]), sign * e[1]))
    try:
        basis = GradedBasis(elems)
    except ValueError as exc:
        raise SchemaError(f"{path}.basis", str(exc)) from None
    diff = {}
    for name, val in obj.get("differential", {}).items():
        p = f"{path}.differential.{name}"
        _expect(name in basis, p, f"unknown basis element {name!r}")
        # degree is not forced here so the validator can report a wrong one
        coeffs = _coeffs(val, p)
        for k in coeffs:
            _expect(k in basis, p, f"unknown basis element {k!r}")
        degs = {basis.degree(k) for k, c in coeffs.items() if c}
        deg = degs.pop() if len(degs) == 1 else basis.degree(name) - 1
        diff[name] = HVector(deg, coeffs)
    ops = {}
    for gname, opdef in obj.get("operations", {}).items():
        p = f"{path}.operations.{gname}"
        try:
            gen = pres.generator(gname)
        except KeyError as exc:
            raise SchemaError(p, str(exc)) from None
        table = {}
        for k, entry in enumerate(opdef.get("entries", [])):
            ep = f"{p}.entries[{k}]"
            _expect(isinstance(entry, dict) and "inputs" in entry and "output" in entry, ep,
                    "entries are {inputs: [...], output: {...}}")
            key = tuple(entry["inputs"])
            for n in key:
                _expect(n in basis, ep, f"unknown basis element {n!r}")
            deg = gen.degree + sum(basis.degree(n) for n in key)
            table[key] = parse_vector(basis, entry["output"], ep + ".output", deg)
        if opdef.get("storage", "full") == "orbit":
            try:
                table = expand_orbits(gen, table, basis.degree)
            except ValueError as exc:
                raise SchemaError(p, str(exc)) from None
        ops[gname] = MultilinearOp(gen, table)
    try:
        return DgAlgebra(GradedComplex(basis, diff), pres, ops, obj.get("name", ""))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _construct(obj, path) -> DgAlgebra:
    kind = obj["construct"]
    try:
        if kind in CANNED:
            return CANNED[kind]()
        if kind == "chevalley-eilenberg":
            return construct.chevalley_eilenberg(_lie(obj.get("lie"), f"{path}.lie"),
                                                 name=obj.get("name", kind))
        if kind == "gerstenhaber-from-bialgebra":
            data = construct.LieBialgebraData(_lie(obj.get("lie"), f"{path}.lie"),
                                              _lie(obj.get("dual_bracket"), f"{path}.dual_bracket"))
            return construct.gerstenhaber_from_bialgebra(data, name=obj.get("name", kind))
        if kind == "bv-trivialized-hypercom3":
            ce = construct.chevalley_eilenberg(_lie(obj.get("lie"), f"{path}.lie"))
            basis = ce.basis
            op = {}
            for name, val in obj.get("operator", {}).items():
                _expect(name in basis, f"{path}.operator", f"unknown basis element {name!r}")
                op[name] = parse_vector(basis, val, f"{path}.operator.{name}", basis.degree(name) + 2)
            m3 = None
            if "m3" in obj:
                gen = builtin("hypercom3").generator("m3")
                m3 = {}
                for k, entry in enumerate(obj["m3"]):
                    key = tuple(entry["inputs"])
                    deg = gen.degree + sum(basis.degree(n) for n in key)
                    m3[key] = parse_vector(basis, entry["output"], f"{path}.m3[{k}].output", deg)
            return construct.bv_trivialized_hypercom3(
                ce, construct.DegreeMinus2Operator(op), m3, name=obj.get("name", kind))
    except SchemaError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(path, f"construction failed: {exc}") from None
    raise SchemaError(f"{path}.construct", f"unknown construction {kind!r}")


def _scope(obj, path) -> dict:
    scope = {}
    for rel, val in (obj or {}).items():
        p = f"{path}.{rel}"
        if isinstance(val, dict) and "product" in val:
            names = list(val["product"])
            arity = int(val.get("arity", 0)) or None
            scope[rel] = {"product": names, "arity": arity}
        else:
            _expect(isinstance(val, list), p, "scope is a list of tuples or {product: [...]}")
            scope[rel] = [tuple(t) for t in val]
    return scope


def expand_scope(algebra: DgAlgebra, scope: dict) -> dict:
    out = {}
    for rel, val in scope.items():
        if isinstance(val, dict):
            arity = val["arity"] or algebra.presentation.relation(rel).arity
            out[rel] = list(itertools.product(val["product"], repeat=arity))
        else:
            out[rel] = list(val)
    return out


def _query(obj, path) -> Query:
    _expect(isinstance(obj, dict), path, "queries are objects")
    _expect("relation" in obj and "inputs" in obj, path, "queries need 'relation' and 'inputs'")
    choices = obj.get("choices", {}) or {}
    chains = {}
    for k, v in (choices.get("bounding_chains") or {}).items():
        _expect(str(k).isdigit(), f"{path}.choices.bounding_chains", "keys are summand indices")
        chains[int(k)] = v
    seed = obj.get("seed")
    _expect(seed is None or isinstance(seed, int), f"{path}.seed", "seed must be an integer")
    return Query(obj["relation"], list(obj["inputs"]), obj.get("name", ""),
                 obj.get("subspace"), choices.get("representatives"), chains, seed)


def parse_document(data: Any) -> Document:
    _expect(isinstance(data, dict), "$", "document must be a JSON object")
    grading = data.get("grading", "cohomological")
    _expect(grading in ("cohomological", "homological"), "$.grading",
            "grading is 'cohomological' or 'homological'")
    sign = _sign(grading)
    alg = data.get("algebra")
    _expect(isinstance(alg, dict), "$.algebra", "missing algebra")
    if "construct" in alg:
        algebra = _construct(alg, "$.algebra")
        if "presentation" in data:
            pres = _presentation(data["presentation"], "$.presentation", sign)
            _expect(pres == algebra.presentation, "$.presentation",
                    "does not match the constructed algebra")
    else:
        _expect("presentation" in data, "$.presentation", "explicit algebras need a presentation")
        pres = _presentation(data["presentation"], "$.presentation", sign)
        algebra = _explicit_algebra(alg, "$.algebra", sign, pres)
    scope = _scope(data.get("relation_scope"), "$.relation_scope")
    for rel in scope:
        try:
            algebra.presentation.relation(rel)
        except KeyError as exc:
            raise SchemaError("$.relation_scope", str(exc)) from None
    queries = [_query(q, f"$.queries[{k}]") for k, q in enumerate(data.get("queries", []))]
    return Document(grading, algebra, scope, queries, data)


def load_document(path) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_document(data)


def algebra_json(alg: DgAlgebra, sign: int) -> dict:
    basis = alg.basis
    order = basis.names
    return {
        "name": alg.name,
        "basis": [[e.name, sign * e.degree] for e in basis],
        "differential": {k: vector_json(alg.complex.differential[k], order)
                         for k in order if k in alg.complex.differential},
        "operations": {
            g.name: {"storage": "full", "entries": [
                {"inputs": list(key), "output": vector_json(val, order)}
                for key, val in sorted(alg.ops[g.name].table.items(),
                                       key=lambda kv: [order.index(n) for n in kv[0]])]}
            for g in alg.presentation.generators
        },
    }


def query_json(q: Query) -> dict:
    out = {"relation": q.relation, "inputs": q.inputs}
    if q.name:
        out = {"name": q.name, **out}
    if q.subspace is not None:
        out["subspace"] = q.subspace
    if q.representatives is not None or q.bounding_chains:
        ch = {}
        if q.representatives is not None:
            ch["representatives"] = q.representatives
        if q.bounding_chains:
            ch["bounding_chains"] = {str(k): v for k, v in sorted(q.bounding_chains.items())}
        out["choices"] = ch
    if q.seed is not None:
        out["seed"] = q.seed
    return out


def dump_document(doc: Document) -> dict:
    """Explicit form of a parsed document (construction directives expanded)."""
    sign = _sign(doc.grading)
    out = {
        "schema": SCHEMA,
        "grading": doc.grading,
        "presentation": presentation_json(doc.algebra.presentation, sign),
        "algebra": algebra_json(doc.algebra, sign),
    }
    if doc.relation_scope:
        out["relation_scope"] = {
            r: ({"product": v["product"], "arity": v["arity"]} if isinstance(v, dict)
                else [list(t) for t in v])
            for r, v in doc.relation_scope.items()}
    out["queries"] = [query_json(q) for q in doc.queries]
    return out


def to_text(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def canned_documents() -> dict[str, dict]:
    """The example documents, keyed by file stem."""
    return {
        "heisenberg-ce": {
            "schema": SCHEMA,
            "grading": "cohomological",
            "algebra": {"construct": "heisenberg-ce"},
            "queries": [
                {"name": "associative <x, x, y>", "relation": "associativity",
                 "inputs": ["x", "x", "y"]},
            ],
        },
        "heisenberg-gerstenhaber": {
            "schema": SCHEMA,
            "grading": "cohomological",
            "algebra": {"construct": "heisenberg-gerstenhaber"},
            "queries": [
                {"name": "gerstenhaber <yz, x, y>", "relation": "gerstenhaber",
                 "inputs": ["yz", "x", "y"]},
            ],
        },
        "heisenberg-hypercom": {
            "schema": SCHEMA,
            "grading": "cohomological",
            "algebra": {"construct": "heisenberg-hypercom"},
            "relation_scope": {"hypercommutative": {"product": ["vw", "vx", "x", "vz"], "arity": 4}},
            "queries": [
                {"name": "hypercommutative <vw, vx, x, x>", "relation": "hypercommutative",
                 "inputs": ["vw", "vx", "x", "x"],
                 "subspace": ["vxz", "vyz", "wxz", "wyz"]},
            ],
        },
    }
