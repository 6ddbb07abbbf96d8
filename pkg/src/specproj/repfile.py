"""On-disk representation files and SDPA export.

A ``.rep`` file is a JSON document; see ``docs/repfile.md`` for the field
list. Floats are written with ``repr`` so save/load round-trips bit-exactly.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from specproj.sdr import SDRep

FORMAT_VERSION = 1


class RepFileError(ValueError):
    pass


def _num(v: float) -> str:
    v = float(v)
    if v == 0:
        v = 0.0  # drop the sign of -0.0
    return json.dumps(v)


def _matrix(M: np.ndarray, indent: str) -> str:
    # One row per line.
    rows = f",\n{indent} ".join("[" + ", ".join(_num(v) for v in row) + "]" for row in M)
    return f"[{rows}]"


def _matrix_list(mats: np.ndarray, indent: str) -> str:
    if len(mats) == 0:
        return "[]"
    inner = ",\n".join(indent + "  " + _matrix(M, indent + "  ") for M in mats)
    return f"[\n{inner}\n{indent}]"


def dumps(R: SDRep) -> str:
    lines = [
        "{",
        f'  "format_version": {FORMAT_VERSION},',
        f'  "k": {R.k},',
        f'  "n": {R.n},',
        f'  "m": {R.m},',
        f'  "A": {_matrix(R.A, "       ")},',
        f'  "B": {_matrix_list(R.B, "  ")},',
        f'  "C": {_matrix_list(R.C, "  ")},',
        '  "labels": {"ambient": %s, "lifted": %s},'
        % (json.dumps(list(R.ambient_labels)), json.dumps(list(R.lifted_labels))),
        f'  "blocks": {json.dumps(list(R.blocks))},',
        f'  "provenance": {json.dumps(R.provenance)}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def save(R: SDRep, path) -> None:
    Path(path).write_text(dumps(R), encoding="utf-8")


def _int_field(doc, name):
    v = doc.get(name)
    if not isinstance(v, int) or isinstance(v, bool):
        raise RepFileError(f"field {name!r}: expected an integer, got {v!r}")
    return v


def _matrices(doc, name, count, k):
    raw = doc.get(name, [] if name == "C" else None)
    if not isinstance(raw, list) or len(raw) != count:
        got = len(raw) if isinstance(raw, list) else type(raw).__name__
        raise RepFileError(f"field {name!r}: expected {count} matrices, got {got}")
    return [_square(M, f"{name}[{i}]", k) for i, M in enumerate(raw)]


def _square(M, name, k):
    try:
        arr = np.array(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise RepFileError(f"field {name!r}: not a numeric matrix ({exc})") from None
    if arr.shape != (k, k):
        raise RepFileError(f"field {name!r}: expected a {k}x{k} matrix, got shape {arr.shape}")
    return arr


def loads(text: str, source: str = "<string>") -> SDRep:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RepFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise RepFileError(f"{source}: top level must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise RepFileError(f"{source}: field 'format_version': unsupported version {version!r}")
    try:
        k, n, m = (_int_field(doc, f) for f in ("k", "n", "m"))
        A = _square(doc.get("A"), "A", k)
        B = _matrices(doc, "B", n, k)
        C = _matrices(doc, "C", m, k)
        labels = doc.get("labels") or {}
        blocks = doc.get("blocks")
        return SDRep(
            A=A,
            B=B,
            C=np.array(C).reshape(m, k, k),
            ambient_labels=labels.get("ambient"),
            lifted_labels=labels.get("lifted"),
            blocks=blocks,
            provenance=doc.get("provenance") or "",
        )
    except RepFileError as exc:
        raise RepFileError(f"{source}: {exc}") from None
    except ValueError as exc:
        field, _, detail = str(exc).partition(": ")
        raise RepFileError(f"{source}: field {field!r}: {detail}") from None


def load(path) -> SDRep:
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), str(path))


def format_sdpa(R: SDRep, x) -> str:
    """SDPA sparse text for ``max t s.t. pencil(x, z) - t I >= 0``.

    SDPA form is ``min c.y s.t. sum_i F_i y_i - F_0 >= 0``; with variables
    ``y = (z_1..z_m, t)`` this gives ``F_0 = -(A + sum x_i B_i)``,
    ``F_j = C_j``, ``F_{m+1} = -I`` and ``c = (0, .., 0, -1)``.
    """
    x = np.asarray(x, dtype=float)
    M0 = R.base_matrix(x)
    mats = [-M0, *R.C, -np.eye(R.k)]
    offsets = np.cumsum((0,) + R.blocks)
    out = [
        str(R.m + 1),
        str(len(R.blocks)),
        " ".join(str(b) for b in R.blocks),
        " ".join(["0"] * R.m + ["-1"]),
    ]
    for matno, F in enumerate(mats):
        for blk, (o, size) in enumerate(zip(offsets, R.blocks), start=1):
            for i in range(size):
                for j in range(i, size):
                    v = F[o + i, o + j]
                    if v != 0:
                        out.append(f"{matno} {blk} {i + 1} {j + 1} {v:.17g}")
    return "\n".join(out) + "\n"


def export_sdpa(R: SDRep, x, path) -> None:
    Path(path).write_text(format_sdpa(R, x), encoding="utf-8")
