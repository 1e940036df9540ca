"""
Command line front end: ``opmassey {validate,homology,massey,examples}``.

Exit status: 0 all good, 1 validation failure, 2 some Massey product is
undefined, 3 usage or schema error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import massey as m
from .documents import (
    Document,
    Query,
    SchemaError,
    canned_documents,
    expand_scope,
    load_document,
    parse_vector,
    to_text,
    vector_json,
)
from .graded import HomologyClass, HVector, build_contraction

EXIT_OK, EXIT_INVALID, EXIT_UNDEFINED, EXIT_USAGE = 0, 1, 2, 3

# command-line spelling -> relation-check scope
SCOPES = {"paper": "declared", "full": "full"}


def _degree(n: int) -> dict:
    return {"homological": n, "cohomological": -n}


def _class_json(cls: HVector, names) -> dict:
    return vector_json(cls, names)


def cmd_validate(doc: Document, scope: str = "declared") -> tuple[dict, int]:
    alg = doc.algebra
    rel_scope = expand_scope(alg, doc.relation_scope) if scope == "declared" else {}
    reports = alg.validate(rel_scope)
    ok = all(r.ok for r in reports)
    out = {
        "algebra": alg.name,
        "grading": doc.grading,
        "scope": scope,
        "ok": ok,
        "validation": [r.as_dict() for r in reports],
    }
    return out, EXIT_OK if ok else EXIT_INVALID


def _homology_json(K) -> dict:
    H = K.homology
    return {
        "betti": [{"degree": _degree(n), "dim": b} for n, b in sorted(H.betti.items(), key=lambda kv: -kv[0])],
        "basis": [{"name": e.name, "degree": _degree(e.degree),
                   "representative": vector_json(H.representative(e.name), K.complex.basis.names)}
                  for e in H.basis],
    }


def cmd_homology(doc: Document, scope: str = "declared") -> tuple[dict, int]:
    out, code = cmd_validate(doc, scope)
    if code:
        return out, code
    K = build_contraction(doc.algebra.complex)
    out["homology"] = _homology_json(K)
    return out, EXIT_OK


class QueryError(ValueError):
    pass


def _resolve_class(K, item, where) -> HomologyClass:
    """A homology class from a class name, a cycle name or a cycle as {name: rational}."""
    H = K.homology
    basis = K.complex.basis
    if isinstance(item, str) and item in H.basis:
        return H.unit(item)
    v = _resolve_cochain(basis, item, where)
    if K.complex.d(v):
        raise QueryError(f"{where}: {item!r} is not a cycle")
    return K.p(v)


def _resolve_cochain(basis, item, where) -> HVector:
    try:
        return parse_vector(basis, item, where)
    except SchemaError as exc:
        raise QueryError(str(exc)) from None


def _problem(doc: Document, K, q: Query, k: int) -> m.MasseyProblem:
    alg = doc.algebra
    try:
        rel = alg.presentation.relation(q.relation)
    except KeyError as exc:
        raise QueryError(str(exc)) from None
    inputs = [_resolve_class(K, x, f"queries[{k}].inputs[{j}]") for j, x in enumerate(q.inputs)]
    choices = None
    if q.representatives is not None or q.bounding_chains:
        reps = None
        if q.representatives is not None:
            reps = [_resolve_cochain(alg.basis, y, f"queries[{k}].choices.representatives[{j}]")
                    for j, y in enumerate(q.representatives)]
        chains = {i: _resolve_cochain(alg.basis, v, f"queries[{k}].choices.bounding_chains.{i}")
                  for i, v in q.bounding_chains.items()}
        choices = m.Choices(reps, chains)
    try:
        return m.MasseyProblem(alg, K, rel, inputs, choices)
    except ValueError as exc:
        raise QueryError(f"queries[{k}]: {exc}") from None


def run_query(doc: Document, K, q: Query, k: int, seed: int | None = None,
              verbose: bool = False) -> dict:
    out = {"name": q.name, "relation": q.relation, "inputs": q.inputs}
    try:
        P = _problem(doc, K, q, k)
    except QueryError as exc:
        out.update(defined=False, error=str(exc), status="invalid")
        return out
    names = K.homology.basis.names
    seed = q.seed if seed is None else seed
    out["degree"] = _degree(P.degree)
    try:
        vanishing = m.check_vanishing(P, strict=False)
        out["vanishing"] = [{"summand": tv.index, "outer": tv.term.outer.name,
                             "inner": tv.term.inner.name, "slot": tv.term.slot,
                             "class": _class_json(tv.homology, names), "vanishes": tv.vanishes}
                            for tv in vanishing]
        if seed is not None:
            P = P.with_choices(m.random_choices(P, random.Random(seed)))
            mode = "random"
        elif P.choices:
            mode = "explicit"
        else:
            mode = "canonical"
        res = m.compute(P, "explicit" if mode != "canonical" else "canonical")
    except m.MasseyUndefined as exc:
        out.update(defined=False, error=str(exc), status="undefined")
        return out
    except m.MasseyInternalError as exc:
        out.update(defined=False, error=f"invalid choices: {exc}", status="invalid")
        return out
    coset = res.coset
    tv = m.transfer_value(P)
    out.update({
        "defined": True,
        "status": "defined",
        "choices": {"mode": mode, "seed": seed},
        "representative": _class_json(coset.representative, names),
        "normal_form": _class_json(coset.normal_form(), names),
        "indeterminacy": [_class_json(b, names) for b in coset.indeterminacy],
        "transfer_value": _class_json(tv, names),
        "transfer_in_coset": m.coset_contains(coset, tv),
    })
    if q.subspace is not None:
        try:
            sub = [_resolve_class(K, s, f"queries[{k}].subspace[{j}]") for j, s in enumerate(q.subspace)]
            hit = m.coset_intersect_subspace(coset, sub)
        except (QueryError, ValueError) as exc:
            out["intersection"] = {"error": str(exc)}
        else:
            out["intersection"] = ({"empty": True} if hit is None else
                                   {"empty": False, "point": _class_json(hit.point, names),
                                    "directions": [_class_json(d, names) for d in hit.directions]})
    if verbose:
        cnames = K.complex.basis.names
        out["audit"] = {
            "representatives": [vector_json(y, cnames) for y in P.representatives()],
            "bounding_chains": [vector_json(r, cnames) for r in res.chains],
            "cochain": vector_json(res.cochain, cnames),
        }
    return out


def cmd_massey(doc: Document, scope: str = "declared", seed: int | None = None,
               verbose: bool = False) -> tuple[dict, int]:
    out, code = cmd_validate(doc, scope)
    if code:
        return out, code
    K = build_contraction(doc.algebra.complex)
    results = [run_query(doc, K, q, k, seed, verbose) for k, q in enumerate(doc.queries)]
    out["queries"] = results
    statuses = {r["status"] for r in results}
    if "invalid" in statuses:
        code = EXIT_USAGE
    elif "undefined" in statuses:
        code = EXIT_UNDEFINED
    return out, code


def cmd_examples(outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for stem, data in canned_documents().items():
        p = outdir / f"{stem}.json"
        p.write_text(to_text(data), encoding="utf-8")
        paths.append(p)
    return paths


# text rendering


def _fmt_vec(v: dict) -> str:
    if not v:
        return "0"
    parts = []
    for k, c in v.items():
        coef = c if "/" not in c else f"({c})"
        parts.append(k if c == "1" else f"-{k}" if c == "-1" else f"{coef}*{k}")
    return " + ".join(parts).replace("+ -", "- ")


def render_text(report: dict) -> str:
    lines = [f"algebra {report.get('algebra', '')} ({report.get('grading', '')}, scope {report.get('scope', '')})"]
    for r in report.get("validation", []):
        status = "PASS" if r["ok"] else "FAIL"
        lines.append(f"  {status} {r['check']} ({r['checked']} checked)")
        for f in r["failures"][:10]:
            lines.append(f"      at {f['where']}: {f['message']}")
    if "homology" in report:
        lines.append("homology")
        for b in report["homology"]["betti"]:
            lines.append(f"  H^{b['degree']['cohomological']}: dim {b['dim']}")
        for e in report["homology"]["basis"]:
            lines.append(f"  [{e['name']}] in H^{e['degree']['cohomological']} "
                         f"represented by {_fmt_vec(e['representative'])}")
    for k, q in enumerate(report.get("queries", [])):
        label = q["name"] or f"query {k}"
        lines.append(f"{label}: <{', '.join(map(str, q['inputs']))}> for {q['relation']}")
        if not q["defined"]:
            lines.append(f"  {q['status']}: {q['error']}")
            continue
        lines.append(f"  degree H^{q['degree']['cohomological']}, choices {q['choices']['mode']}")
        lines.append(f"  representative {_fmt_vec(q['representative'])}")
        lines.append(f"  normal form    {_fmt_vec(q['normal_form'])}")
        ind = ", ".join(_fmt_vec(b) for b in q["indeterminacy"]) or "none"
        lines.append(f"  indeterminacy  {ind}")
        lines.append(f"  transfer value {_fmt_vec(q['transfer_value'])} "
                     f"({'in' if q['transfer_in_coset'] else 'NOT in'} coset)")
        if "intersection" in q:
            hit = q["intersection"]
            if "error" in hit:
                lines.append(f"  intersection error: {hit['error']}")
            elif hit["empty"]:
                lines.append("  intersection empty")
            else:
                dirs = ", ".join(_fmt_vec(d) for d in hit["directions"])
                lines.append(f"  intersection {_fmt_vec(hit['point'])}" + (f" + span({dirs})" if dirs else ""))
        if "audit" in q:
            a = q["audit"]
            for j, y in enumerate(a["representatives"]):
                lines.append(f"  y{j + 1} = {_fmt_vec(y)}")
            for j, r in enumerate(a["bounding_chains"]):
                lines.append(f"  rho{j} = {_fmt_vec(r)}")
            lines.append(f"  cochain = {_fmt_vec(a['cochain'])}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opmassey", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "homology", "massey"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="problem document (JSON)")
        p.add_argument("--output", help="report path (default stdout)")
        p.add_argument("--scope", choices=tuple(SCOPES), default="paper",
                       help="relation checks on the document's declared tuples (paper) or on all tuples")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--verbose", action="store_true", help="include chosen cycles and chains")
        p.add_argument("--seed", type=int, help="randomize choices for every query")
    p = sub.add_parser("examples")
    p.add_argument("--output", default="examples-out", help="directory for the documents")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command == "examples":
        try:
            for p in cmd_examples(args.output):
                print(p)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK
    try:
        doc = load_document(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "validate":
        report, code = cmd_validate(doc, SCOPES[args.scope])
    elif args.command == "homology":
        report, code = cmd_homology(doc, SCOPES[args.scope])
    else:
        report, code = cmd_massey(doc, SCOPES[args.scope], args.seed, args.verbose)
    text = to_text(report) if args.format == "json" else render_text(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
