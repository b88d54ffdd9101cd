"""Command line driver: ``linfty verify | nijenhuis | deform | decompose | catalog``.

Exit codes: 0 verified, 1 falsified (the report carries a witness), 2 input error.
Structure arguments are file paths, ``-`` for stdin, or ``catalog:NAME``.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog
from .errors import InputError
from .report import Report, Residual, combine, jsonable
from .serialize import dumps, loads, parse_document
from .symforms import FormSum, as_formsum, euler_form, identity_form

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT = 0, 1, 2


def read_document(source: str, stdin=None) -> dict:
    if source.startswith("catalog:"):
        return catalog.entry(source[len("catalog:"):])
    if source == "-":
        return loads((stdin or sys.stdin).read())
    try:
        with open(source, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def sampled_regime(samples: int, seed: int) -> str:
    return f"sampled({samples}, {seed})"


# ------------------------------------------------------------------ verify


def verify_structure(kind: str, obj, curved: bool = False, samples: int = 100, seed: int = 0) -> Report:
    from .linfty import check_linfty
    if kind == "graded-space":
        return Report("graded space", True, "exact", [], {"dim": obj.dim, "degrees": list(obj.degrees)})
    if kind == "form-sum":
        return check_linfty(obj, curved=curved)
    if kind == "lie2-quadruple":
        from .lie2 import check_quadruple
        return combine("Lie 2-algebra", [check_quadruple(obj), check_linfty(obj.to_mu())])
    if kind == "crossed-module":
        return obj.check()
    if kind == "lie-algebra":
        from .liealg import lie_algebra_structure
        rep = check_linfty(lie_algebra_structure(obj))
        rep.name = "Lie algebra (Jacobi as L-infinity)"
        return rep
    if kind in ("courant-point", "courant-standard"):
        from .courant import check_associated_lie2, check_courant_axioms
        reports = [check_courant_axioms(obj, samples, seed), check_associated_lie2(obj, samples, seed)]
        regime = "exhaustive" if kind == "courant-point" else sampled_regime(samples, seed)
        return combine("Courant algebroid", reports, regime)
    if kind == "nplectic":
        from .nplectic import check_nplectic
        return check_nplectic(obj, samples, seed)
    if kind == "tensors":
        return verify_tensors(obj)
    raise InputError(f"cannot verify kind {kind!r}")


def verify_tensors(t) -> Report:
    from . import algebroid as ab
    A, g = t.A, t.g
    reports = [Report("Jacobi", ab.jacobi_ok(g), "exact")]
    if t.N is not None and t.pi is not None:
        reports.append(ab.pn_check(A, t.pi, t.N))
    elif t.N is not None and t.omega is not None:
        reports.append(ab.omega_n_check(A, t.omega, t.N))
    elif t.pi is not None and t.omega is not None:
        reports.append(ab.p_omega_check(A, t.pi, t.omega))
    elif t.N is not None:
        v = ab.nijenhuis_tensor_lift(A, t.N)
        reports.append(Report("extension of N is Nijenhuis", v.is_nijenhuis, "exact", list(v.residuals),
                              {"classification": v.classification, "square": v.square_name}))
    elif t.pi is not None:
        sq = A.schouten(t.pi, t.pi)
        reports.append(Report("pi is Poisson", not sq, "exact", [Residual("[pi, pi] = 0", ("pi", "pi"), sq)] if sq else []))
    return combine("tensors on a Lie algebra", reports, "exact")


# ------------------------------------------------------------------ structures as forms


def structure_mu(kind: str, obj) -> FormSum:
    if kind == "form-sum":
        return obj
    if kind == "lie2-quadruple":
        return obj.to_mu()
    if kind == "lie-algebra":
        from .liealg import lie_algebra_structure
        return lie_algebra_structure(obj)
    if kind == "crossed-module":
        from .lie2 import quadruple_from_crossed_module
        return quadruple_from_crossed_module(obj).to_mu()
    if kind == "courant-point":
        from .courant import associated_lie2, tabulate
        return tabulate(obj, associated_lie2(obj).forms)
    if kind == "tensors":
        return as_formsum(obj.A.l2())
    raise InputError(f"kind {kind!r} has no finite structure to deform")


def load_form(source: str, space) -> FormSum:
    if source == "euler":
        return as_formsum(euler_form(space))
    if source == "identity":
        return as_formsum(identity_form(space))
    kind, obj = parse_document(read_document(source))
    if kind != "form-sum":
        raise InputError(f"{source}: expected a form-sum document, got {kind}")
    if obj.space != space:
        raise InputError(f"{source}: form lives on a different graded space")
    return obj


# ------------------------------------------------------------------ commands


def cmd_verify(args) -> tuple:
    kind, obj = parse_document(read_document(args.file, args.stdin))
    if args.kind and args.kind != kind:
        raise InputError(f"document kind is {kind}, expected {args.kind}")
    rep = verify_structure(kind, obj, args.curved, args.samples, args.seed)
    code = EXIT_OK if rep.passed else EXIT_FALSIFIED
    out = {"command": "verify", "kind": kind, "status": "verified" if rep.passed else "falsified",
           "report": rep.to_json()}
    return out, code


def cmd_nijenhuis(args) -> tuple:
    from .linfty import hierarchy, nijenhuis_classify
    kind, obj = parse_document(read_document(args.file, args.stdin))
    mu = structure_mu(kind, obj)
    N = load_form(args.deformer, mu.space)
    squares = [(src, load_form(src, mu.space)) for src in args.squares]
    verdict = nijenhuis_classify(N, mu, squares, defaults=not squares)
    _, hrep = hierarchy(mu, N, args.kmax, verdict.square if verdict.coboundary else None)
    code = EXIT_OK if verdict.is_nijenhuis else EXIT_FALSIFIED
    out = {"command": "nijenhuis", "kind": kind, "deformer": args.deformer,
           "classification": verdict.classification, "square": verdict.square_name,
           "verdict": verdict.to_json(), "hierarchy": hrep.to_json(), "kmax": args.kmax}
    return out, code


def cmd_deform(args) -> tuple:
    from .linfty import check_linfty
    from .symforms import rn_bracket
    kind, obj = parse_document(read_document(args.file, args.stdin))
    mu = structure_mu(kind, obj)
    N = load_form(args.deformer, mu.space)
    deformed = rn_bracket(N, mu)
    rep = check_linfty(deformed, curved=0 in deformed.parts)
    out = {"command": "deform", "kind": kind, "deformer": args.deformer,
           "deformed": {"kind": "form-sum", "payload": deformed.to_json()},
           "deformed_is_linfty": rep.passed, "report": rep.to_json()}
    return out, EXIT_OK if rep.passed else EXIT_FALSIFIED


def cmd_decompose(args) -> tuple:
    from .lie2 import Lie2Quadruple, decompose_chi_zero
    kind, obj = parse_document(read_document(args.file, args.stdin))
    if kind == "form-sum":
        obj = Lie2Quadruple.from_mu(obj)
    elif kind != "lie2-quadruple":
        raise InputError("decompose needs a Lie 2-algebra")
    dec = decompose_chi_zero(obj)
    out = {"command": "decompose", "kind": kind, "report": dec.report.to_json(),
           "alpha": dec.alpha.to_json(),
           "string": dec.string.to_json() if dec.string else None,
           "trivial": dec.trivial.to_json() if dec.trivial else None,
           "string_dims": dec.report.details.get("string_dims"),
           "trivial_dims": dec.report.details.get("trivial_dims")}
    return out, EXIT_OK if dec.report.passed else EXIT_FALSIFIED


def cmd_catalog(args) -> tuple:
    if not args.name:
        return {"command": "catalog", "entries": list(catalog.NAMES)}, EXIT_OK
    return catalog.entry(args.name), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linfty", description="Verify and deform L-infinity structures.")
    p.add_argument("--format", choices=("json", "text"), default="json", help="report format")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--samples", type=int, default=100, help="sample count for sampled checks")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    v = sub.add_parser("verify", help="check the defining identities of a structure")
    v.add_argument("file")
    v.add_argument("--kind", help="expected document kind")
    v.add_argument("--curved", action="store_true", help="allow an arity-0 part")
    common(v)
    v.set_defaults(run=cmd_verify)

    n = sub.add_parser("nijenhuis", help="classify a deformer and print the hierarchy")
    n.add_argument("file")
    n.add_argument("--deformer", required=True, help="form-sum file, 'euler' or 'identity'")
    n.add_argument("--squares", nargs="*", default=[], help="candidate squares (files, 'euler', 'identity')")
    n.add_argument("--kmax", type=int, default=3)
    common(n)
    n.set_defaults(run=cmd_nijenhuis)

    d = sub.add_parser("deform", help="compute [N, mu]")
    d.add_argument("file")
    d.add_argument("--deformer", required=True)
    common(d)
    d.set_defaults(run=cmd_deform)

    c = sub.add_parser("decompose", help="split a chi = 0 Lie 2-algebra")
    c.add_argument("file")
    common(c)
    c.set_defaults(run=cmd_decompose)

    k = sub.add_parser("catalog", help="print a built-in example")
    k.add_argument("name", nargs="?")
    common(k)
    k.set_defaults(run=cmd_catalog)
    return p


def _summary(out: dict) -> str:
    if "report" in out and isinstance(out["report"], dict):
        rep = out["report"]
        lines = [f"{out['command']} {out.get('kind', '')}: {out.get('status', out.get('classification', ''))}"
                 f" [{rep.get('regime')}]"]
        for name, ok in sorted(rep.get("details", {}).get("checks", {}).items()):
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {name}")
        for r in rep.get("residuals", [])[:1]:
            lines.append(f"  witness: {r['identity']} at {', '.join(r['inputs'])}")
        return "\n".join(lines) + "\n"
    if out.get("command") == "nijenhuis":
        return f"nijenhuis: {out['classification']}, square {out['square']}\n"
    return dumps(out)


def main(argv=None, stdout=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.stdin = stdin or sys.stdin
        out, code = args.run(args)
    except InputError as exc:
        out, code = {"status": "input-error", "error": str(exc)}, EXIT_INPUT
    if args.command != "catalog":
        out["samples"], out["seed"] = args.samples, args.seed
        out["exit_code"] = code
    text = _summary(out) if args.format == "text" else dumps(jsonable(out))
    stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
