"""Serialization and spec parsing for the command-line front end.

Formats are chosen for exact cross-language round-trips and byte-identical
reruns: CSV cells carry 17 significant digits (enough to reproduce any
binary64 value), JSON matrices store every entry as an [re, im] pair, and
writers never emit timestamps.  Every output file carries the tool version
and a full parameter echo — CSV as a leading `#` comment line, JSON under a
"meta" key.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ._version import __version__
from .calculus import (
    Exponential,
    Gaussian,
    Heaviside,
    LorentzianWeight,
    NamedBuiltin,
    Polynomial,
    PolynomialGaussian,
    Reciprocal,
    ScalarFunction,
)
from .errors import DimensionMismatch, ParameterError
from .kernels import GAUSSIAN, LORENTZIAN, SmoothingKernel
from .resolvent import Circle, Contour, Rectangle

SIG = "%.17g"


# ---------------------------------------------------------------------------
# Matrices and vectors
# ---------------------------------------------------------------------------


def _entry_to_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 \
            and all(isinstance(p, (int, float)) for p in v):
        return complex(v[0], v[1])
    raise ParameterError(f"matrix entries must be numbers or [re, im] pairs, got {v!r}")


def matrix_from_json(obj) -> np.ndarray:
    """Matrix from {"n": int, "entries": rows}, {"matrix": rows}, or bare rows.

    Entries are plain reals or [re, im] pairs, row-major.
    """
    declared_n = None
    if isinstance(obj, dict):
        if "entries" in obj:
            declared_n = obj.get("n")
            obj = obj["entries"]
        elif "matrix" in obj:
            obj = obj["matrix"]
        else:
            raise ParameterError('matrix object needs an "entries" key')
    if not isinstance(obj, list) or not obj:
        raise ParameterError("matrix must be a non-empty list of rows")
    rows = []
    for row in obj:
        if not isinstance(row, list) or len(row) != len(obj[0]):
            raise ParameterError("matrix rows must be lists of equal length")
        rows.append([_entry_to_complex(v) for v in row])
    if declared_n is not None and int(declared_n) != len(rows):
        raise ParameterError(f'"n" is {declared_n} but the matrix has {len(rows)} rows')
    return np.array(rows, dtype=complex)


def load_matrix(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path} is not valid JSON: {exc}") from exc
    return matrix_from_json(obj)


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def write_json(path, payload: dict) -> None:
    """Canonical JSON dump: sorted keys, fixed separators, LF newline."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        fh.write("\n")


def meta_block(command: str, params: dict) -> dict:
    return {"tool": f"deltaop {__version__}", "command": command,
            "params": {k: params[k] for k in sorted(params)}}


def header_comment(command: str, params: dict) -> str:
    echo = " ".join(f"{k}={params[k]}" for k in sorted(params))
    return f"# deltaop {__version__} {command} {echo}".rstrip()


def write_csv(path, comment: str, columns: list[str], rows) -> None:
    """Rows of floats at 17 significant digits under a `#` header comment."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(comment + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(SIG % float(v) for v in row) + "\n")


def read_csv_columns(path) -> np.ndarray:
    """Numeric rows of a CSV written by this tool (comments and header skipped)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                continue  # header line
    if not rows:
        raise ParameterError(f"{path} contains no numeric rows")
    return np.array(rows, dtype=float)


# ---------------------------------------------------------------------------
# Spec strings
# ---------------------------------------------------------------------------


def parse_grid_spec(spec: str) -> np.ndarray:
    """`a:b:n` -> n uniformly spaced points, both endpoints included."""
    parts = str(spec).split(":")
    if len(parts) != 3:
        raise ParameterError(f"grid spec must be a:b:n, got {spec!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"malformed grid spec {spec!r}: {exc}") from exc
    if n < 2 or not a < b:
        raise ParameterError(f"grid spec needs a < b and n >= 2, got {spec!r}")
    return np.linspace(a, b, n)


def _parse_complex(v) -> complex:
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError as exc:
            raise ParameterError(f"cannot parse complex number {v!r}") from exc
    raise ParameterError(f"cannot parse complex number {v!r}")


def parse_vector_spec(spec: str, n: int) -> np.ndarray:
    """`e<k>` for a standard basis vector, or a comma list of entries."""
    spec = str(spec).strip()
    if spec.startswith("e") and spec[1:].isdigit():
        k = int(spec[1:])
        if k >= n:
            raise DimensionMismatch(f"basis index {k} out of range for dimension {n}")
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        return v
    entries = [_parse_complex(cell) for cell in spec.split(",")]
    if len(entries) != n:
        raise DimensionMismatch(f"expected {n} entries, got {len(entries)}")
    return np.array(entries, dtype=complex)


def parse_kernel_spec(spec, width_default: float | None = None) -> SmoothingKernel:
    """`lorentzian[:width]` / `gaussian[:width]`, or {"kind":..., "width":...}."""
    if isinstance(spec, SmoothingKernel):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        width = spec.get("width", width_default)
    else:
        parts = str(spec).split(":")
        kind = parts[0]
        width = float(parts[1]) if len(parts) > 1 else width_default
    if kind not in (LORENTZIAN, GAUSSIAN):
        raise ParameterError(f"kernel kind must be lorentzian or gaussian, got {kind!r}")
    if width is None:
        raise ParameterError("kernel width required (none given and no default)")
    return SmoothingKernel(kind, float(width))


def parse_contour_spec(spec) -> Contour:
    """{"kind":"circle","center":...,"radius":...} or {"kind":"rect",...}."""
    if isinstance(spec, (Circle, Rectangle)):
        return spec
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"contour spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParameterError('contour spec must be an object with a "kind"')
    kind = spec["kind"]
    n_nodes = int(spec.get("n_nodes", 256))
    try:
        if kind == "circle":
            return Circle(_parse_complex(spec["center"]), float(spec["radius"]), n_nodes)
        if kind == "rect":
            return Rectangle(_parse_complex(spec["corner_min"]),
                             _parse_complex(spec["corner_max"]), n_nodes)
    except KeyError as exc:
        raise ParameterError(f"contour spec missing field {exc}") from exc
    raise ParameterError(f"contour kind must be circle or rect, got {kind!r}")


_FUNCTION_KINDS = ("one", "identity", "square", "exp", "gaussian", "heaviside",
                   "reciprocal", "lorentzweight", "poly", "polygauss", "named")


def _coeff_list(text: str) -> tuple:
    return tuple(float(c) for c in text.split(","))


def parse_function_spec(spec) -> ScalarFunction:
    """Compact `kind[:args]` string or a {"kind": ...} JSON object.

    Compact forms: `one`, `identity`, `square`, `exp[:scale]`,
    `gaussian:center:width`, `heaviside:threshold`, `reciprocal:re:im`,
    `lorentzweight:center:eps`, `poly:c0,c1,...`,
    `polygauss:c0,c1,...:center:width`, `named:id`.
    """
    if isinstance(spec, ScalarFunction):
        return spec
    if isinstance(spec, dict):
        return _function_from_dict(spec)
    text = str(spec).strip()
    if text.startswith("{"):
        try:
            return _function_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParameterError(f"function spec is not valid JSON: {exc}") from exc
    head, _, rest = text.partition(":")
    try:
        if head == "one" or head == "identity" or head == "square":
            return NamedBuiltin(head)
        if head == "exp":
            return Exponential(float(rest)) if rest else NamedBuiltin("exp")
        if head == "gaussian":
            c, w = rest.split(":")
            return Gaussian(float(c), float(w))
        if head == "heaviside":
            return Heaviside(float(rest))
        if head == "reciprocal":
            re, _, im = rest.partition(":")
            return Reciprocal(complex(float(re), float(im) if im else 0.0))
        if head == "lorentzweight":
            c, e = rest.split(":")
            return LorentzianWeight(float(c), float(e))
        if head == "poly":
            return Polynomial(_coeff_list(rest))
        if head == "polygauss":
            coeffs, c, w = rest.split(":")
            return PolynomialGaussian(_coeff_list(coeffs), float(c), float(w))
        if head == "named":
            return NamedBuiltin(rest)
    except (ValueError, IndexError) as exc:
        raise ParameterError(f"malformed function spec {spec!r}: {exc}") from exc
    raise ParameterError(
        f"unknown function kind {head!r}; have {', '.join(_FUNCTION_KINDS)}")


def _function_from_dict(obj: dict) -> ScalarFunction:
    kind = obj.get("kind")
    try:
        if kind == "polynomial":
            return Polynomial(tuple(obj["coeffs"]))
        if kind == "exponential":
            return Exponential(float(obj.get("scale", 1.0)))
        if kind == "gaussian":
            return Gaussian(float(obj.get("center", 0.0)), float(obj.get("width", 1.0)))
        if kind == "heaviside":
            return Heaviside(float(obj.get("threshold", 0.0)))
        if kind == "reciprocal":
            return Reciprocal(_parse_complex(obj["shift"]))
        if kind == "lorentzian-weight":
            return LorentzianWeight(float(obj.get("center", 0.0)),
                                    float(obj.get("eps", 1.0)))
        if kind == "polynomial-gaussian":
            return PolynomialGaussian(tuple(obj["coeffs"]),
                                      float(obj.get("center", 0.0)),
                                      float(obj.get("width", 1.0)))
        if kind == "named":
            return NamedBuiltin(obj["id"])
    except KeyError as exc:
        raise ParameterError(f"function spec missing field {exc}") from exc
    raise ParameterError(f"unknown function kind {kind!r}")


def ensure_out_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
