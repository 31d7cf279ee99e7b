"""Command-line interface.

Subcommands cover the whole pipeline: classify/normalize produce
certificates, verify replays them, points/aut/orbits report on the
geometry, and random generates seeded instances of prescribed rank.
stdout carries only JSON (keys sorted, so repeated runs are
byte-identical); diagnostics go to stderr; exit codes follow the
exception table in errors.py.

The extension cap is, in order of precedence: --max-ext-degree, the
TWISTFORM_MAX_EXT environment variable, then the built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import random as _random
import sys

from .certio import (certificate_from_dict, certificate_to_dict, elem_to_dict,
                     field_to_dict, matrix_from_dict, matrix_to_dict)
from .classify import classify_form, random_matrix_of_rank
from .errors import InputError, TwistformError, UnsupportedRankError, VerificationError
from .gf import MAX_EXT_DEGREE, build_field, prime_power
from .geometry import aut_membership, aut_report, count_points, enum_points
from .linalg import TwistedForm, rank_kernel
from .normform import w_matrix
from .orbits import brute_force_orbits
from .verify import verify_certificate


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as bad:
        raise InputError(f"cannot read {path}: {bad}") from None
    except json.JSONDecodeError as bad:
        raise InputError(f"{path} is not valid JSON: {bad}") from None


def _emit(doc, out_path=None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _extension_cap(args) -> int:
    if getattr(args, "max_ext_degree", None) is not None:
        cap = args.max_ext_degree
    else:
        raw = os.environ.get("TWISTFORM_MAX_EXT")
        if raw is None:
            return MAX_EXT_DEGREE
        try:
            cap = int(raw)
        except ValueError:
            raise InputError(f"TWISTFORM_MAX_EXT must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"extension cap must be positive, got {cap}")
    return cap


def cmd_classify(args) -> int:
    matrix = matrix_from_dict(_read_json(args.input))
    cert = classify_form(TwistedForm(matrix, args.q), _extension_cap(args),
                         args.seed)
    _emit(certificate_to_dict(cert), args.out)
    return 0


def cmd_normalize(args) -> int:
    matrix = matrix_from_dict(_read_json(args.input))
    rank, _ = rank_kernel(matrix)
    if rank != matrix.ncols:
        raise UnsupportedRankError(
            f"normalize needs an invertible matrix, got rank {rank} "
            f"at size {matrix.ncols}"
        )
    cert = classify_form(TwistedForm(matrix, args.q), _extension_cap(args),
                         args.seed)
    _emit(certificate_to_dict(cert), args.out)
    return 0


def cmd_verify(args) -> int:
    cert = certificate_from_dict(_read_json(args.certificate))
    try:
        verify_certificate(cert)
    except VerificationError as bad:
        _emit({"ok": False, "error": str(bad), "step_index": bad.step_index})
        return bad.exit_code
    doc = {"ok": True, "label": str(cert.label), "steps": len(cert.trace)}
    if cert.seed is not None:
        doc["seed"] = cert.seed
    _emit(doc)
    return 0


def cmd_points(args) -> int:
    p, e = prime_power(args.q)
    base = build_field(p, e)
    field = build_field(p, e * args.field_degree)
    form = TwistedForm(w_matrix(base, args.n, args.s), args.q)
    points = enum_points(form, field)
    _emit({
        "n": args.n,
        "s": args.s,
        "q": args.q,
        "field": field_to_dict(field),
        "count": len(points),
        "points": [[c.val for c in pt.coords] for pt in points],
    })
    return 0


def cmd_aut(args) -> int:
    matrix = matrix_from_dict(_read_json(args.matrix))
    delta = aut_membership(matrix, args.s, args.n, args.q)
    report = aut_report(matrix, args.s, args.n, args.q)
    _emit({
        "n": args.n,
        "s": args.s,
        "q": args.q,
        "member": delta is not None,
        "delta": None if delta is None else elem_to_dict(delta),
        "structural_ok": report.ok,
        "regime": report.regime,
        "conditions": [[name, value] for name, value in report.conditions],
        "flags": [[name, value] for name, value in report.flags],
        "agree": (delta is not None) == report.ok,
    })
    return 0


def cmd_orbits(args) -> int:
    try:
        ladder = tuple(int(tok) for tok in args.ladder.split(","))
    except ValueError:
        raise InputError(f"--ladder must be comma-separated integers, got "
                         f"{args.ladder!r}") from None
    report = brute_force_orbits(args.n, args.q, args.m, args.rank, ladder)
    _emit({
        "n": report.n,
        "q": report.q,
        "m": report.m,
        "rank": report.target_rank,
        "ladder": list(report.ladder),
        "field": field_to_dict(report.field),
        "base_count": report.base_count,
        "work": report.work,
        "orbit_count": len(report.classes),
        "classes": [{
            "member_count": cls.member_count,
            "representative": matrix_to_dict(cls.representative),
            "named_forms": list(cls.named_forms),
            "labels": list(cls.labels),
            "consistent": cls.consistent,
        } for cls in report.classes],
        "named_class": dict(report.named_class),
        "consistent": report.consistent,
    })
    return 0


def cmd_random(args) -> int:
    p, e = prime_power(args.q)
    field = build_field(p, e * args.m)
    matrix = random_matrix_of_rank(field, args.n + 1, args.rank,
                                   _random.Random(args.seed))
    doc = matrix_to_dict(matrix)
    doc["seed"] = args.seed
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistform",
        description="classification of twisted forms sum a_ij x_i x_j^q "
                    "under the congruence action, with checkable certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cert_flags(sp):
        sp.add_argument("--q", type=int, required=True,
                        help="twist: a power of the field characteristic")
        sp.add_argument("--in", dest="input", required=True,
                        help="matrix JSON file, or - for stdin")
        sp.add_argument("--out", default=None,
                        help="write the certificate here instead of stdout")
        sp.add_argument("--max-ext-degree", type=int, default=None,
                        help="cap on the extension degree over the prime field")
        sp.add_argument("--seed", type=int, default=None,
                        help="bookkeeping seed echoed into the certificate")

    sp = sub.add_parser("classify", help="reduce a matrix to its normal form")
    add_cert_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("normalize",
                        help="like classify but requires full rank")
    add_cert_flags(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("verify", help="replay a certificate independently")
    sp.add_argument("certificate", help="certificate JSON file, or - for stdin")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("points",
                        help="rational points of the normal form W_s")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--field-degree", type=int, default=1,
                    help="count over F_{q^j} for this j (default 1)")
    sp.set_defaults(func=cmd_points)

    sp = sub.add_parser("aut",
                        help="stabilizer membership and structural conditions")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--matrix", required=True,
                    help="matrix JSON file, or - for stdin")
    sp.set_defaults(func=cmd_aut)

    sp = sub.add_parser("orbits",
                        help="brute-force orbit partition at desk scale")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, default=1,
                    help="base field degree over F_q (default 1)")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--ladder", default="1,2",
                    help="comma-separated transform field degrees (default 1,2)")
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("random",
                        help="seeded matrix of prescribed rank")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, default=1,
                    help="base field degree over F_q (default 1)")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TwistformError as bad:
        print(f"twistform: {bad}", file=sys.stderr)
        return bad.exit_code


if __name__ == "__main__":
    sys.exit(main())
