"""
JSON formats.

Matrices are ``{"rows": n, "cols": k, "data": [[re, im], ...]}`` with the
entries listed column by column.  Vectors are n x 1 matrices.
"""

import json
from pathlib import Path

import numpy as np

from .hilbert import DEFAULT_TOL, Ray, orthonormalize
from .operators import Isometry, OperatorClass
from .projective import RayMapTable


class FormatError(ValueError):
    """Well-formed JSON that does not match the expected schema."""


def matrix_to_json(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    rows, cols = a.shape
    flat = a.reshape(-1, order="F")
    return {"rows": rows, "cols": cols, "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj):
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"matrix object needs rows, cols and data: {exc}") from None
    if len(data) != rows * cols:
        raise FormatError(f"matrix data has {len(data)} entries, expected {rows * cols}")
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in data])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if not np.all(np.isfinite(flat)):
        raise FormatError("matrix has non-finite entries")
    return flat.reshape((rows, cols), order="F")


def vector_from_json(obj):
    a = matrix_from_json(obj)
    if a.shape[1] != 1:
        raise FormatError(f"expected an n x 1 vector, got {a.shape[0]} x {a.shape[1]}")
    return a[:, 0]


def subspace_to_json(s):
    return matrix_to_json(s.basis)


def subspace_from_json(obj, tol=DEFAULT_TOL):
    """Any spanning matrix is accepted; columns are orthonormalized."""
    return orthonormalize(matrix_from_json(obj), tol)


def table_to_json(table):
    return [
        {"source": matrix_to_json(s.vector), "image": matrix_to_json(t.vector)} for s, t in table
    ]


def table_from_json(obj, tol=DEFAULT_TOL):
    if not isinstance(obj, list):
        raise FormatError("ray map table must be a JSON list")
    try:
        pairs = [(Ray(vector_from_json(e["source"])), Ray(vector_from_json(e["image"]))) for e in obj]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"table entries need source and image: {exc}") from None
    return RayMapTable(pairs, tol)


def isometry_to_json(iso, k=None):
    out = {"n": iso.n, "matrix": matrix_to_json(iso.matrix), "class": iso.op_class.value}
    if k is not None:
        out["k"] = k
    return out


def grassmann_map_to_json(pairs, n, k):
    return {
        "n": n,
        "k": k,
        "pairs": [{"source": subspace_to_json(s), "image": subspace_to_json(t)} for s, t in pairs],
    }


def oracle_from_json(obj, tol=DEFAULT_TOL):
    """A Grassmann oracle from a generator file or a tabulated map.

    Generator: ``{"k", "matrix", "class"}``.  Tabulated: ``{"k", "pairs":
    [{"source", "image"}, ...]}``.
    """
    from .reconstruct import GrassmannOracle

    if not isinstance(obj, dict) or "k" not in obj:
        raise FormatError("oracle file must be an object with a 'k' field")
    k = int(obj["k"])
    if "matrix" in obj:
        try:
            op_class = OperatorClass(obj.get("class", "linear"))
        except ValueError:
            raise FormatError(f"unknown operator class {obj.get('class')!r}") from None
        iso = Isometry(matrix_from_json(obj["matrix"]), op_class)
        if iso.defect() > tol.eps_orth * 100:
            raise FormatError("generator matrix is not an isometry")
        return GrassmannOracle.from_isometry(iso, k)
    if "pairs" in obj:
        pairs = [
            (subspace_from_json(p["source"], tol), subspace_from_json(p["image"], tol))
            for p in obj["pairs"]
        ]
        if any(s.k != k or t.k != k for s, t in pairs):
            raise FormatError("tabulated pairs must all be k-subspaces")
        return GrassmannOracle.from_pairs(pairs, tol)
    raise FormatError("oracle file needs either 'matrix' or 'pairs'")


def hypergraph_to_json(h):
    return {
        "d": h.d,
        "rays": [matrix_to_json(r) for r in h.rays],
        "contexts": [list(c) for c in h.contexts],
    }


def hypergraph_from_json(obj, tol=DEFAULT_TOL):
    """Contexts are recomputed when absent."""
    from .measure import OrthoHypergraph, build_hypergraph

    try:
        d = int(obj["d"])
        rays = [vector_from_json(v) for v in obj["rays"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"hypergraph needs d and rays: {exc}") from None
    h = build_hypergraph(rays, d, tol)
    if obj.get("contexts") is not None:
        if len(h.rays) != len(rays):
            raise FormatError("explicit contexts need a ray list without duplicates")
        h = OrthoHypergraph(h.rays, d, [tuple(int(i) for i in c) for c in obj["contexts"]], h.edges, tol)
    return h


def load_json(path):
    """Read JSON, letting ``json.JSONDecodeError`` carry line/column diagnostics."""
    with open(path) as fh:
        return json.load(fh)


def _numpy_scalar(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"Object of type {type(o).__name__} is not JSON serializable")


def dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True, default=_numpy_scalar)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
