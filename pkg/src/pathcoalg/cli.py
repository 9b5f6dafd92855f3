"""Command surface over workbench files.

Every command reads one file, runs one computation and prints one report,
as text or as JSON (--format).  The exit status never encodes a verdict:
0 means the run completed (the verdict is in the report), 2 means a parse
or semantic error in the input, 3 means an internal self-check failed.

Coideals are given on the command line as comma-separated path lists; the
tool closes them under the dual action automatically and reports the closure
it actually used.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .coalgebra import (CoalgebraError, Coideal, Element, InternalCheckError,
                        coideal_generated, comultiply, counit, injective_envelope,
                        multipath_hull, independent_reduce)
from .fields import FieldError
from .fileformat import (FileFormatError, WorkbenchFile, parse,
                         parse_element_expr, serialize)
from .qcf import (EmbeddingCertificate, classify_monomial_qcf, f_qcf_exhaustive,
                  is_semiperfect_path_coalgebra, torsionless_oracle)
from .quiver import Path, QuiverError, parse_path
from .tailclosure import (enumerate_independent_sets, free_embedding_from_annihilator,
                          embed_coideal_in_qF, multipath_pool, set_serial,
                          single_tail_closure, tail_closure_step,
                          verify_annihilator_identity)


def _parse_path_list(quiver, text: str) -> list[Path]:
    parts = [part.strip() for part in text.split(",")]
    if not any(parts):
        raise CoalgebraError("empty path list")
    return [parse_path(quiver, part) for part in parts if part]


def _closed_coideal(C, paths: list[Path], side: str) -> Coideal:
    """Close a user-supplied path list under the dual action."""
    gens = [Element.from_path(C.quiver, C.field, p) for p in paths]
    elements = []
    for g in gens:
        elements.extend(coideal_generated(C, g, side).basis)
    return Coideal.from_span(C, side, elements, generators=gens)


def _coideal_texts(I: Coideal) -> list[str]:
    if I.is_path_spanned():
        return [str(p) for p in I.path_set()]
    return [str(b) for b in I.basis]


def _matrix_payload(F) -> dict:
    fld = F.domain.coalgebra.field
    return {"domain_basis": [str(b) for b in F.domain.basis],
            "rows": [[fld.format(c) for c in f.coeffs] for f in F.values]}


def _certificate_payload(cert: EmbeddingCertificate) -> dict:
    payload = {"rank": cert.rank, "verified": cert.verified,
               "components": len(cert.morphisms),
               "morphisms": [_matrix_payload(F) for F in cert.morphisms]}
    if cert.morphisms:
        D = cert.morphisms[0].domain.coalgebra
        payload["dual_basis"] = [str(b) for b in D.basis]
    return payload


def _witness_payload(w) -> dict:
    return {"element": str(w.element), "note": w.note,
            "solution_dim": len(w.solution_basis),
            "solution_basis": [_matrix_payload(F) for F in w.solution_basis]}


# -- command handlers: return (verdict, findings, details, certificate, witness)

def cmd_validate(wf: WorkbenchFile, args):
    quivers = {name: {"vertices": len(q.vertices), "arrows": len(q.arrows)}
               for name, q in wf.quivers.items()}
    coalgebras = {name: {"quiver": wf.coalgebra_quiver[name], "dim": C.dim,
                         "mode": "monomial" if C.monomial else "general"}
                  for name, C in wf.coalgebras.items()}
    return "ok", [], {"quivers": quivers, "coalgebras": coalgebras}, None, None


def cmd_delta(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    x = parse_element_expr(C.quiver, wf.field, args.element)
    if not C.contains(x):
        raise CoalgebraError(f"element {x} is not in coalgebra {args.coalgebra}")
    fmt = wf.field.format
    pairs = sorted(comultiply(x).items(),
                   key=lambda it: (it[0][0].sort_key(), it[0][1].sort_key()))
    details = {"element": str(x), "counit": fmt(counit(x)),
               "delta": [{"left": str(u), "right": str(w), "coefficient": fmt(c)}
                         for (u, w), c in pairs]}
    return "ok", [], details, None, None


def cmd_classify(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    verdict = classify_monomial_qcf(C, args.side)
    return verdict.value, verdict.reasons, {"note": verdict.note}, None, None


def cmd_oracle(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    coideal_side = "right" if args.side == "left" else "left"
    paths = _parse_path_list(C.quiver, args.coideal)
    I = _closed_coideal(C, paths, coideal_side)
    details = {"coideal_side": coideal_side,
               "input_paths": [str(p) for p in paths],
               "closure_used": _coideal_texts(I), "coideal_dim": I.dim}
    res = torsionless_oracle(C, I, args.side)
    if isinstance(res, EmbeddingCertificate):
        return "certified", [], details, _certificate_payload(res), None
    return "refuted", [], details, None, _witness_payload(res)


def cmd_exhaustive(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    res = f_qcf_exhaustive(C, args.side)
    log = []
    for I, outcome in res.log:
        entry = {"coideal": _coideal_texts(I)}
        if isinstance(outcome, EmbeddingCertificate):
            entry["outcome"] = "certified"
            entry["certificate"] = _certificate_payload(outcome)
        else:
            entry["outcome"] = "refuted"
            entry["witness"] = _witness_payload(outcome)
        log.append(entry)
    details = {"checked": len(res.log), "note": res.verdict.note, "log": log}
    return res.verdict.value, res.verdict.reasons, details, None, None


def cmd_envelope(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    I = injective_envelope(C, args.vertex, args.side)
    details = {"vertex": args.vertex, "dim": I.dim,
               "basis": [str(b) for b in I.basis]}
    return "ok", [], details, None, None


def cmd_semiperfect(wf: WorkbenchFile, args):
    q = wf.quiver(args.quiver)
    held, findings = is_semiperfect_path_coalgebra(q, args.scope, args.side)
    verdict = "semiperfect" if held else "not-semiperfect"
    return verdict, findings, {"scope": args.scope}, None, None


def cmd_independent(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    pool = multipath_pool(C, args.pool_maxlen)
    sets = enumerate_independent_sets(C, args.pool_maxlen, args.max_size)
    details = {"pool": [str(m) for m in pool],
               "sets": [{"serial": set_serial(C, F),
                         "members": [str(m) for m in F]} for F in sets],
               "count": len(sets)}
    return "ok", [], details, None, None


def cmd_tailclose(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    closure = tail_closure_step(C, args.pool_maxlen, args.max_size)
    qname = f"{args.coalgebra}_tails"
    cname = f"{args.coalgebra}_closure"
    out = WorkbenchFile(field=wf.field,
                        quivers={qname: closure.coalgebra.quiver},
                        coalgebras={cname: closure.coalgebra},
                        coalgebra_quiver={cname: qname})
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize(out))
    details = {"pool_maxlen": args.pool_maxlen, "max_size": args.max_size,
               "extensions": [{"serial": e.serial, "vertex": e.vertex,
                               "arrows": list(e.arrows), "q": str(e.q)}
                              for e in closure.extensions],
               "closure_dim": closure.coalgebra.dim, "output": args.output}
    return "ok", [], details, None, None


def cmd_verify_tail(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    paths = _parse_path_list(C.quiver, args.set)
    members = [Element.from_path(C.quiver, wf.field, p) for p in paths]
    closure = single_tail_closure(C, members)
    ext, D = closure.extensions[0], closure.coalgebra
    report = verify_annihilator_identity(D, ext)
    details = {"set": [str(m) for m in ext.members], "serial": ext.serial,
               "vertex": ext.vertex, "arrows": list(ext.arrows),
               "q": str(ext.q), "closure_dim": D.dim,
               "annihilator_dim": len(report.annihilator_basis),
               "x_dim": len(report.x_basis),
               "multipath_identity": report.multipath_identity,
               "note": report.note}
    certificate = None
    if report.holds:
        cert = free_embedding_from_annihilator(
            D, ext.q.with_quiver(D.quiver), report.x_basis)
        certificate = _certificate_payload(cert)
    return ("holds" if report.holds else "fails"), [], details, certificate, None


def cmd_embed(wf: WorkbenchFile, args):
    C = wf.coalgebra(args.coalgebra)
    paths = _parse_path_list(C.quiver, args.coideal)
    I = _closed_coideal(C, paths, "right")
    details = {"input_paths": [str(p) for p in paths],
               "closure_used": _coideal_texts(I), "coideal_dim": I.dim}
    hull = multipath_hull(C, I, "right")
    reduced = independent_reduce(C, list(hull.generators))
    closure = (single_tail_closure(C, reduced) if reduced
               else tail_closure_step(C, 0, 0))
    report = embed_coideal_in_qF(closure, I)
    ext = report.extension
    details.update({
        "reduced_set": [str(m) for m in report.reduced_set],
        "serial": ext.serial if ext else None,
        "q": str(ext.q) if ext else None,
        "cyclic_coideal_dim": report.coideal.dim,
        "cyclic_coideal_basis": [str(b) for b in report.coideal.basis],
        "membership": [[wf.field.format(c) for c in row]
                       for row in report.witness]})
    return ("contained" if report.contained else "not-contained"), [], details, None, None


_FINDING_TEXTS = {
    "arrow-count": "vertex {vertex} has {count} {direction} arrows (expected {expected})",
    "witness-extension": "vertex {vertex} has no free witness: {witness} extends to {extension} inside the coalgebra",
    "reaches-cycle": "vertex {vertex} reaches a cycle (side {side})",
    "bounded-scope": "bounded scope {bound}: finite dimension, criterion holds",
    "failing-coideal": "coideal spanned by {paths} fails: every morphism kills {element}",
}


def _finding_text(finding: dict) -> str:
    template = _FINDING_TEXTS.get(finding.get("kind", ""))
    if template is not None:
        try:
            return template.format(**finding)
        except KeyError:
            pass
    return ", ".join(f"{k}={v}" for k, v in finding.items())


def _detail_text(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for k, v in report["args"].items():
        lines.append(f"arg {k}: {v}")
    lines.append(f"field: {report['field']}")
    lines.append(f"verdict: {report['verdict']}")
    for finding in report["findings"]:
        lines.append(f"finding: {_finding_text(finding)}")
    for k, v in report["details"].items():
        if isinstance(v, list) and v and isinstance(v[0], dict) and "outcome" in v[0]:
            for entry in v:
                lines.append(f"{k}: {', '.join(entry['coideal'])}"
                             f" -> {entry['outcome']}")
            continue
        lines.append(f"detail {k}: {_detail_text(v)}")
    cert = report["certificate"]
    if cert is not None:
        lines.append(f"certificate: rank {cert['rank']},"
                     f" components {cert['components']},"
                     f" verified {str(cert['verified']).lower()}")
    witness = report["witness"]
    if witness is not None:
        lines.append(f"witness: {witness['element']}"
                     f" (solution space dimension {witness['solution_dim']};"
                     f" {witness['note']})")
    lines.append(f"timing_ms: {report['timing_ms']}")
    return "\n".join(lines)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    return render_text(report)


_ARG_KEYS = ("file", "coalgebra", "quiver", "element", "side", "coideal",
             "vertex", "scope", "pool_maxlen", "max_size", "output", "set")


def _args_echo(args) -> dict:
    out = {}
    for key in _ARG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathcoalg",
        description="exact workbench for quiver path coalgebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, **flags):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="workbench file")
        if flags.get("coalgebra"):
            p.add_argument("-c", "--coalgebra", required=True,
                           help="coalgebra block name")
        if flags.get("quiver"):
            p.add_argument("-q", "--quiver", required=True,
                           help="quiver block name")
        if flags.get("element"):
            p.add_argument("-e", "--element", required=True,
                           help="element expression 'c1 P1 + c2 P2 + ...'")
        if flags.get("side"):
            p.add_argument("--side", choices=("left", "right"), default="left")
        if flags.get("coideal"):
            p.add_argument("--coideal", required=True,
                           help="comma-separated path list")
        if flags.get("vertex"):
            p.add_argument("--vertex", required=True)
        if flags.get("scope"):
            p.add_argument("--scope", default="full",
                           help="'full' or 'bounded:L'")
        if flags.get("pool"):
            p.add_argument("--pool-maxlen", type=int, required=True,
                           dest="pool_maxlen")
            p.add_argument("--max-size", type=int, required=True,
                           dest="max_size")
        if flags.get("output"):
            p.add_argument("-o", "--output", required=True,
                           help="file to write the closure to")
        if flags.get("set"):
            p.add_argument("--set", required=True,
                           help="comma-separated multipath list")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(handler=handler)
        return p

    add("validate", cmd_validate, "parse a file and report its blocks")
    add("delta", cmd_delta, "comultiply an element", coalgebra=True, element=True)
    add("classify", cmd_classify, "arrow-count classification",
        coalgebra=True, side=True)
    add("oracle", cmd_oracle, "decide torsionless-ness of one coideal",
        coalgebra=True, coideal=True, side=True)
    add("exhaustive", cmd_exhaustive, "oracle over every path-spanned coideal",
        coalgebra=True, side=True)
    add("envelope", cmd_envelope, "injective envelope of a vertex",
        coalgebra=True, vertex=True, side=True)
    add("semiperfect", cmd_semiperfect, "finitely many paths per vertex",
        quiver=True, side=True, scope=True)
    add("independent", cmd_independent, "enumerate independent multipath sets",
        coalgebra=True, pool=True)
    add("tailclose", cmd_tailclose, "one bounded tail-closure step",
        coalgebra=True, pool=True, output=True)
    add("verify-tail", cmd_verify_tail, "annihilator identity for one extension",
        coalgebra=True, set=True)
    add("embed", cmd_embed, "embed a coideal into the cyclic coideal of its tail",
        coalgebra=True, coideal=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        with open(args.file, encoding="utf-8") as fh:
            wf = parse(fh.read())
        verdict, findings, details, certificate, witness = args.handler(wf, args)
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 3
    except (FileFormatError, CoalgebraError, QuiverError, FieldError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "args": _args_echo(args),
        "field": wf.field.name,
        "verdict": verdict,
        "findings": findings,
        "details": details,
        "certificate": certificate,
        "witness": witness,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    print(render(report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
