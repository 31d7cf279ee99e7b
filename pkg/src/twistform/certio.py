"""JSON-dict codecs for matrices, labels, and certificates.

Everything here is strict in both directions: encoding only accepts the
package's own types, decoding validates shapes, field descriptors, and label
vocabulary before any object is built, and raises InputError with the
offending key on anything malformed.  Matrices always carry their field
inline so a certificate file is self-contained.

Only dict <-> object conversion lives here; reading and writing actual JSON
text is left to the caller (the CLI uses json.dumps with sorted keys).
"""

from __future__ import annotations

from typing import Optional

from .errors import InputError
from .gf import (FieldCtx, FieldElem, elem_from_dict, elem_to_dict,
                 field_from_dict, field_to_dict)
from .linalg import MatrixF
from .normform import (LABEL_KINDS, STEP_NAMES, Certificate,
                       NormalFormLabel, TraceStep)


def matrix_to_dict(m: MatrixF) -> dict:
    return {
        "field": field_to_dict(m.ctx),
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [[elem_to_dict(x) for x in row] for row in m.rows],
    }


def matrix_from_dict(obj, expect_ctx: Optional[FieldCtx] = None) -> MatrixF:
    if not isinstance(obj, dict):
        raise InputError(f"matrix must be an object, got {type(obj).__name__}")
    for key in ("field", "rows", "cols", "entries"):
        if key not in obj:
            raise InputError(f"matrix is missing key '{key}'")
    ctx = field_from_dict(obj["field"])
    if expect_ctx is not None and ctx is not expect_ctx:
        raise InputError(
            f"matrix field F_{ctx.p}^{ctx.d} does not match the enclosing "
            f"field F_{expect_ctx.p}^{expect_ctx.d}"
        )
    nrows, ncols, entries = obj["rows"], obj["cols"], obj["entries"]
    if not isinstance(nrows, int) or not isinstance(ncols, int):
        raise InputError("matrix keys rows and cols must be integers")
    if not isinstance(entries, list) or len(entries) != nrows:
        raise InputError(f"expected {nrows} entry rows, got {len(entries)!r}")
    rows = []
    for row in entries:
        if not isinstance(row, list) or len(row) != ncols:
            raise InputError(f"expected {ncols} entries per row, got {len(row)!r}")
        rows.append(tuple(elem_from_dict(x, ctx) for x in row))
    return MatrixF(ctx, tuple(rows))


def label_to_dict(label: NormalFormLabel) -> dict:
    out = {"kind": label.kind}
    if label.s is not None:
        out["s"] = label.s
    return out


def label_from_dict(obj) -> NormalFormLabel:
    if not isinstance(obj, dict):
        raise InputError(f"label must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind not in LABEL_KINDS:
        raise InputError(f"unknown label kind {kind!r}")
    s = obj.get("s")
    if s is not None and not isinstance(s, int):
        raise InputError("label parameter s must be an integer")
    return NormalFormLabel(kind, s)


# trace-step parameters are integers, field elements, or flat vectors of
# field elements; anything else in a file is rejected

def _param_to_dict(v):
    if isinstance(v, int):
        return v
    if isinstance(v, FieldElem):
        return elem_to_dict(v)
    if isinstance(v, (tuple, list)):
        return [_param_to_dict(x) for x in v]
    raise InputError(f"unencodable step parameter of type {type(v).__name__}")


def _param_from_dict(v, ctx: FieldCtx):
    if isinstance(v, bool):
        raise InputError("step parameters cannot be booleans")
    if isinstance(v, int):
        return v
    if isinstance(v, dict):
        return elem_from_dict(v, ctx)
    if isinstance(v, list):
        return tuple(_param_from_dict(x, ctx) for x in v)
    raise InputError(f"undecodable step parameter of type {type(v).__name__}")


def step_to_dict(step: TraceStep) -> dict:
    return {
        "name": step.name,
        "params": {k: _param_to_dict(v) for k, v in step.params.items()},
        "matrix": matrix_to_dict(step.matrix),
        "claimed": matrix_to_dict(step.claimed),
    }


def step_from_dict(obj, ctx: FieldCtx) -> TraceStep:
    if not isinstance(obj, dict):
        raise InputError(f"trace step must be an object, got {type(obj).__name__}")
    name = obj.get("name")
    if name not in STEP_NAMES:
        raise InputError(f"unknown trace step name {name!r}")
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise InputError("step params must be an object")
    return TraceStep(
        name,
        {k: _param_from_dict(v, ctx) for k, v in params.items()},
        matrix_from_dict(obj.get("matrix"), ctx),
        matrix_from_dict(obj.get("claimed"), ctx),
    )


def certificate_to_dict(cert: Certificate) -> dict:
    out = {
        "input": matrix_to_dict(cert.input_matrix),
        "q": cert.q,
        "label": label_to_dict(cert.label),
        "T": matrix_to_dict(cert.t_matrix),
        "field": field_to_dict(cert.field),
        "trace": [step_to_dict(st) for st in cert.trace],
    }
    if cert.seed is not None:
        out["seed"] = cert.seed
    return out


def certificate_from_dict(obj) -> Certificate:
    if not isinstance(obj, dict):
        raise InputError(f"certificate must be an object, got {type(obj).__name__}")
    for key in ("input", "q", "label", "T", "field", "trace"):
        if key not in obj:
            raise InputError(f"certificate is missing key '{key}'")
    q = obj["q"]
    if not isinstance(q, int) or q < 2:
        raise InputError(f"certificate q must be an integer >= 2, got {q!r}")
    ctx = field_from_dict(obj["field"])
    trace = obj["trace"]
    if not isinstance(trace, list):
        raise InputError("certificate trace must be an array")
    seed = obj.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise InputError("certificate seed must be an integer")
    return Certificate(
        input_matrix=matrix_from_dict(obj["input"]),
        q=q,
        label=label_from_dict(obj["label"]),
        t_matrix=matrix_from_dict(obj["T"], ctx),
        field=ctx,
        trace=tuple(step_from_dict(st, ctx) for st in trace),
        seed=seed,
    )
