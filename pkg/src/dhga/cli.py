"""Command-line front end.

Exit codes: 0 when every check passes, 1 on any failed check, 2 on a
configuration or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .lorentz import (
    LorentzMatrix,
    NoPivot,
    NotInPin,
    NotOrthogonal,
    NotSpecial,
    NullVectorPivot,
    adjoint_matrix,
    classify_spin,
    lift,
)
from .multivector import Kind, format_mv
from .parse import ParseError, parse_mv
from .spinor_ideal import IdempotentSpec, build_idempotent, check_idempotent_props, ideal_dimension
from .suites import SUITES, ConfigError, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _kinds_for(n: int, kind: str | None):
    if kind:
        return [Kind.parse(kind)]
    return [Kind.SPINOR] if n % 2 else [Kind.SEMISPINOR, Kind.DOUBLESPINOR]


def _emit(args, payload, text: str):
    body = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    sys.stdout.write(body if args.format == "json" else text)


def _load_matrix(path: str) -> LorentzMatrix:
    with open(path) as fh:
        return LorentzMatrix.from_json(json.load(fh))


def cmd_verify(args) -> int:
    matrix = _load_matrix(args.matrix) if args.matrix else None
    configs = []
    for n in args.n:
        kinds = [None] if args.suite in ("double-cover", "lift-roundtrip") else _kinds_for(n, args.kind)
        for kind in kinds:
            configs.append(SuiteConfig(args.suite, n, kind, args.trials, args.seed, args.backend,
                                       args.parity, matrix))
    reports, lines = [], []
    for cfg in configs:
        def stream(trial, rep, cfg=cfg):
            if args.format == "text":
                tag = f"{cfg.suite} n={cfg.n} kind={cfg.kind.value if cfg.kind else '-'}"
                extra = f" ({rep.detail})" if rep.detail else ""
                sys.stdout.write(f"{tag} trial {trial}: {rep.status}{extra}\n")

        rep = run_suite(cfg, stream)
        reports.append(rep.to_json())
        c = rep.counts
        lines.append(f"{rep.suite} n={rep.n} kind={rep.kind or '-'}: {rep.status.upper()} "
                     f"(pass {c['pass']}, fail {c['fail']}, not applicable {c['not_applicable']})\n")
    payload = reports[0] if len(reports) == 1 else reports
    _emit(args, payload, "".join(lines))
    return EXIT_FAIL if any(r["status"] == "fail" for r in reports) else EXIT_OK


def cmd_idempotent(args) -> int:
    spec = IdempotentSpec(args.n, Kind.parse(args.kind))
    t = build_idempotent(spec)
    try:
        props = check_idempotent_props(t)
        status = "pass"
    except AssertionError as exc:
        props, status = {"error": str(exc)}, "fail"
    payload = {
        "check": "idempotent",
        "spec": spec.to_json(),
        "status": status,
        "value": t.value.to_json(),
        "text": format_mv(t.value),
        "terms": len(t.value),
        "ideal_dimension": ideal_dimension(t),
        "properties": props,
    }
    fmt = args.print or args.format
    args.format = fmt
    _emit(args, payload, format_mv(t.value) + "\n")
    return EXIT_OK if status == "pass" else EXIT_FAIL


def cmd_lift(args) -> int:
    p = _load_matrix(args.matrix_file)
    s = lift(p, backend=args.backend)
    payload = {"value": s.value.to_json(), "text": format_mv(s.value), "parity": s.parity.value,
               "certificate": s.certificate.value, "norm": str(s.norm)}
    text = format_mv(s.value)
    if not s.value.is_float and s.norm != 1:
        text += f"  (S reversion(S) = {s.norm})"
    _emit(args, payload, text + "\n")
    return EXIT_OK


def _parse_expr(args):
    return parse_mv(args.expr, args.n)


def cmd_eval(args) -> int:
    u = _parse_expr(args)
    _emit(args, u.to_json(), format_mv(u) + "\n")
    return EXIT_OK


def cmd_classify(args) -> int:
    u = _parse_expr(args)
    try:
        s = classify_spin(u, allow_scale=args.allow_scale)
    except NotInPin as exc:
        _emit(args, {"status": "NotInPin", "condition": exc.condition, "detail": str(exc)},
              f"NotInPin: {exc.condition}\n")
        return EXIT_FAIL
    payload = {"status": s.certificate.value, "parity": s.parity.value, "norm": str(s.norm)}
    _emit(args, payload, f"{s.certificate.value} ({s.parity.value}, norm {s.norm})\n")
    return EXIT_OK


def cmd_adjoint(args) -> int:
    u = _parse_expr(args)
    try:
        s = classify_spin(u, allow_scale=True)
    except NotInPin as exc:
        _emit(args, {"status": "NotInPin", "condition": exc.condition}, f"NotInPin: {exc.condition}\n")
        return EXIT_FAIL
    p = adjoint_matrix(s)
    payload = p.to_json()
    text = "".join(" ".join(f"{str(x):>8}" for x in row) + "\n" for row in payload["rows"])
    _emit(args, payload, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="FILE", help="also write the JSON report here")
    common.add_argument("--backend", choices=("exact", "float"), default="exact")

    p = _Parser(prog="dhga", description="Exact Cl(1,n) engine and verification suites.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    v.add_argument("--kind", choices=[k.value for k in Kind])
    v.add_argument("--trials", type=int, default=25)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--parity", choices=("even", "odd", "both"), default="even",
                   help="parity of spin elements for spinor-invariance")
    v.add_argument("--matrix", metavar="FILE", help="matrix JSON for tensor-invariance")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("idempotent", parents=[common], help="print the idempotent for (n, kind)")
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    i.add_argument("--print", choices=("text", "json"))
    i.set_defaults(func=cmd_idempotent)

    lf = sub.add_parser("lift", parents=[common], help="lift a matrix JSON file to a spin element")
    lf.add_argument("matrix_file")
    lf.set_defaults(func=cmd_lift)

    for name, func, helptext in (("eval", cmd_eval, "canonicalize a multivector expression"),
                                 ("classify", cmd_classify, "certify Pin/Spin membership"),
                                 ("adjoint", cmd_adjoint, "matrix of S^-1 e^mu S")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("expr")
        c.add_argument("--n", type=int, required=True)
        if name == "classify":
            c.add_argument("--allow-scale", action="store_true",
                           help="accept any nonzero scalar norm S reversion(S)")
        c.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError, NotOrthogonal, NotSpecial, NullVectorPivot, NoPivot,
            ValueError, OSError) as exc:
        sys.stderr.write(f"dhga: error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

