"""Readers for space, functional, and family spec files.

All files are JSON.  Syntax problems surface with the parser's line and
column; structural problems carry a path expression such as
``$.gram[2][0]``.  Loading is deliberately separated from mathematical
validation: a structurally sound gram spec whose matrix is indefinite
loads fine (``GramSpace(validate=False)``) and then fails the axiom
checks, so usage errors and falsified mathematics keep distinct exit
codes downstream.
"""

import json
import numbers

import numpy as np

from .errors import InputError, SpecFormatError
from .families import FunctionalFamily
from .functionals import BLinearFunctional
from .spaces import GramSpace, ProductSpace, Subspace, Vector

__all__ = [
    "load_json",
    "load_space",
    "load_functional",
    "load_family",
    "space_from_dict",
    "functional_from_dict",
    "family_from_dict",
]


def _reject_constant(token):
    raise ValueError(f"non-finite literal {token} is not allowed")


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecFormatError(f"cannot read file: {exc.strerror or exc}", filename=str(path)) from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(exc.msg, filename=str(path), line=exc.lineno, col=exc.colno) from exc
    except ValueError as exc:
        raise SpecFormatError(str(exc), filename=str(path)) from exc


def _expect_mapping(data, where, filename):
    if not isinstance(data, dict):
        raise SpecFormatError(
            f"expected an object, got {type(data).__name__}", filename=filename, where=where
        )
    return data


def _get(data, key, where, filename):
    if key not in data:
        raise SpecFormatError(f"missing required key {key!r}", filename=filename, where=where)
    return data[key]


def _as_real(value, where, filename):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise SpecFormatError(
            f"expected a real number, got {type(value).__name__}", filename=filename, where=where
        )
    out = float(value)
    if not np.isfinite(out):
        raise SpecFormatError("non-finite value", filename=filename, where=where)
    return out


def _as_vector(data, where, filename):
    if not isinstance(data, list) or not data:
        raise SpecFormatError("expected a non-empty array of reals", filename=filename, where=where)
    return np.array([_as_real(v, f"{where}[{j}]", filename) for j, v in enumerate(data)])


def _as_matrix(data, where, filename):
    if not isinstance(data, list) or not data:
        raise SpecFormatError("expected a non-empty array of rows", filename=filename, where=where)
    rows = [_as_vector(row, f"{where}[{j}]", filename) for j, row in enumerate(data)]
    width = rows[0].size
    for j, row in enumerate(rows):
        if row.size != width:
            raise SpecFormatError(
                f"row has {row.size} entries, expected {width}",
                filename=filename,
                where=f"{where}[{j}]",
            )
    return np.stack(rows)


def space_from_dict(data, where="$", filename=None):
    """Build a space from its spec object; SPD-ness is not enforced here."""
    data = _expect_mapping(data, where, filename)
    kind = _get(data, "kind", where, filename)
    if kind == "gram":
        gram = _as_matrix(_get(data, "gram", where, filename), f"{where}.gram", filename)
        if gram.shape[0] != gram.shape[1]:
            raise SpecFormatError(
                f"gram matrix is {gram.shape[0]}x{gram.shape[1]}, expected square",
                filename=filename,
                where=f"{where}.gram",
            )
        if "dim" in data:
            dim = data["dim"]
            if not isinstance(dim, int) or isinstance(dim, bool) or dim != gram.shape[0]:
                raise SpecFormatError(
                    f"dim {dim!r} does not match gram size {gram.shape[0]}",
                    filename=filename,
                    where=f"{where}.dim",
                )
        try:
            return GramSpace(gram, validate=False)
        except InputError as exc:
            raise SpecFormatError(str(exc), filename=filename, where=f"{where}.gram") from exc
    if kind == "product":
        left = space_from_dict(_get(data, "left", where, filename), f"{where}.left", filename)
        right = space_from_dict(_get(data, "right", where, filename), f"{where}.right", filename)
        return ProductSpace(left, right)
    raise SpecFormatError(
        f"unknown space kind {kind!r}; expected 'gram' or 'product'",
        filename=filename,
        where=f"{where}.kind",
    )


def load_space(path):
    return space_from_dict(load_json(path), filename=str(path))


def functional_from_dict(data, space, where="$", filename=None):
    data = _expect_mapping(data, where, filename)
    b = _as_vector(_get(data, "b", where, filename), f"{where}.b", filename)
    c = _as_vector(_get(data, "c", where, filename), f"{where}.c", filename)
    for name, arr in (("b", b), ("c", c)):
        if arr.size != space.dim:
            raise SpecFormatError(
                f"{name} has {arr.size} entries, space has dim {space.dim}",
                filename=filename,
                where=f"{where}.{name}",
            )
    domain = None
    if data.get("domain") is not None:
        rows = _as_matrix(data["domain"], f"{where}.domain", filename)
        if rows.shape[1] != space.dim:
            raise SpecFormatError(
                f"domain vectors have {rows.shape[1]} entries, space has dim {space.dim}",
                filename=filename,
                where=f"{where}.domain",
            )
        try:
            domain = Subspace(space, [Vector(space, row) for row in rows])
        except InputError as exc:
            raise SpecFormatError(str(exc), filename=filename, where=f"{where}.domain") from exc
    try:
        return BLinearFunctional(space, Vector(space, b), c, domain)
    except InputError as exc:
        raise SpecFormatError(str(exc), filename=filename, where=where) from exc


def load_functional(path, space):
    return functional_from_dict(load_json(path), space, filename=str(path))


def family_from_dict(data, where="$", filename=None):
    """Family/sequence spec: embedded space, shared anchor, coefficient rows."""
    data = _expect_mapping(data, where, filename)
    space = space_from_dict(_get(data, "space", where, filename), f"{where}.space", filename)
    b = _as_vector(_get(data, "b", where, filename), f"{where}.b", filename)
    if b.size != space.dim:
        raise SpecFormatError(
            f"b has {b.size} entries, space has dim {space.dim}",
            filename=filename,
            where=f"{where}.b",
        )
    rows = _as_matrix(_get(data, "coeffs", where, filename), f"{where}.coeffs", filename)
    if rows.shape[1] != space.dim:
        raise SpecFormatError(
            f"coefficient vectors have {rows.shape[1]} entries, space has dim {space.dim}",
            filename=filename,
            where=f"{where}.coeffs",
        )
    label = data.get("label", "")
    if not isinstance(label, str):
        raise SpecFormatError("label must be a string", filename=filename, where=f"{where}.label")
    try:
        return FunctionalFamily.from_coeffs(space, b, rows, label=label)
    except InputError as exc:
        raise SpecFormatError(str(exc), filename=filename, where=where) from exc


def load_family(path):
    return family_from_dict(load_json(path), filename=str(path))
