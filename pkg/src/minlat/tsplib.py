"""TSPLib reader and a seeded random instance generator.

Distances follow the TSPLib conventions (Reinelt, TSPLIB 95): EUC_2D rounds
to the nearest integer, CEIL_2D rounds up, ATT is the pseudo-Euclidean
metric and GEO the idealised-sphere distance with degrees.minutes input.
The first node of a file becomes the depot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path

import numpy as np

from .core import Instance, MLPError, Variant


class TsplibParseError(MLPError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


COORD_TYPES = ("EUC_2D", "CEIL_2D", "ATT", "GEO")
EXPLICIT_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_ROW", "UPPER_DIAG_ROW", "LOWER_DIAG_ROW")

_SPEC_KEYWORDS = {
    "NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT",
    "DISPLAY_DATA_TYPE", "NODE_COORD_TYPE", "CAPACITY", "EDGE_DATA_FORMAT",
}

RRR = 6378.388


@dataclass
class TsplibFile:
    name: str = ""
    type: str = "TSP"
    dimension: int = 0
    edge_weight_type: str = ""
    edge_weight_format: str | None = None
    coords: np.ndarray | None = None
    weights: list[int] = field(default_factory=list)
    comment: str = ""


def _nint(x: float) -> int:
    return int(x + 0.5)


def euc_2d(coords: np.ndarray, rounding: str = "nint") -> np.ndarray:
    """Euclidean distances rounded to the nearest integer, or truncated.

    Truncation (``rounding="floor"``) is the convention of the published
    Hamiltonian-path MLP benchmark values for TSPLib instances.
    """
    diff = coords[:, None, :] - coords[None, :, :]
    exact = np.sqrt((diff ** 2).sum(axis=2))
    if rounding == "floor":
        return np.floor(exact).astype(np.int64)
    if rounding != "nint":
        raise ValueError(f"unknown rounding {rounding!r}")
    return np.floor(exact + 0.5).astype(np.int64)


def ceil_2d(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.ceil(np.sqrt((diff ** 2).sum(axis=2))).astype(np.int64)


def att_distance(xi, yi, xj, yj) -> int:
    r = math.sqrt(((xi - xj) ** 2 + (yi - yj) ** 2) / 10.0)
    t = _nint(r)
    return t + 1 if t < r else t


def _geo_radians(x: float) -> float:
    deg = int(x)  # truncation toward zero, as in the reference code
    minutes = x - deg
    return 3.141592 * (deg + 5.0 * minutes / 3.0) / 180.0


def geo_distance(xi, yi, xj, yj) -> int:
    lat_i, lon_i = _geo_radians(xi), _geo_radians(yi)
    lat_j, lon_j = _geo_radians(xj), _geo_radians(yj)
    q1 = math.cos(lon_i - lon_j)
    q2 = math.cos(lat_i - lat_j)
    q3 = math.cos(lat_i + lat_j)
    return int(RRR * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0)


def _pairwise(coords: np.ndarray, fn) -> np.ndarray:
    m = coords.shape[0]
    out = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        xi, yi = coords[i]
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = fn(xi, yi, coords[j, 0], coords[j, 1])
    return out


def _expand_explicit(fmt: str, weights: list[int], dim: int) -> np.ndarray:
    expected = {
        "FULL_MATRIX": dim * dim,
        "UPPER_ROW": dim * (dim - 1) // 2,
        "LOWER_ROW": dim * (dim - 1) // 2,
        "UPPER_DIAG_ROW": dim * (dim + 1) // 2,
        "LOWER_DIAG_ROW": dim * (dim + 1) // 2,
    }[fmt]
    if len(weights) != expected:
        raise TsplibParseError(f"{fmt} with dimension {dim} needs {expected} weights, got {len(weights)}")
    mat = np.zeros((dim, dim), dtype=np.int64)
    it = iter(weights)
    if fmt == "FULL_MATRIX":
        mat[:, :] = np.array(weights, dtype=np.int64).reshape(dim, dim)
        return mat
    for i in range(dim):
        if fmt == "UPPER_ROW":
            cols = range(i + 1, dim)
        elif fmt == "UPPER_DIAG_ROW":
            cols = range(i, dim)
        elif fmt == "LOWER_ROW":
            cols = range(0, i)
        else:
            cols = range(0, i + 1)
        for j in cols:
            mat[i, j] = mat[j, i] = next(it)
    return mat


def read_tsplib(text: str) -> TsplibFile:
    """Parse the header and data sections of a TSPLib file."""
    lines = text.splitlines()
    spec = TsplibFile()
    pos = 0

    def numbers_until(count: int, start: int, section: str) -> tuple[list[str], int]:
        out: list[str] = []
        k = start
        while len(out) < count and k < len(lines):
            stripped = lines[k].strip()
            if stripped and stripped.rstrip(":").strip().upper() == "EOF":
                break
            out.extend(stripped.split())
            k += 1
        if len(out) != count:
            raise TsplibParseError(f"{section} ended after {len(out)} of {count} values", k)
        return out, k

    while pos < len(lines):
        lineno = pos + 1
        raw = lines[pos].strip()
        pos += 1
        if not raw:
            continue
        if raw.upper().startswith("EOF"):
            break
        if ":" in raw:
            key, _, value = raw.partition(":")
            key, value = key.strip().upper(), value.strip()
        else:
            key, value = raw.split()[0].upper(), ""

        if key in _SPEC_KEYWORDS:
            if key == "NAME":
                spec.name = value
            elif key == "TYPE":
                spec.type = value.upper()
                if spec.type != "TSP":
                    raise TsplibParseError(f"unsupported problem type {value!r}", lineno)
            elif key == "COMMENT":
                spec.comment = value if not spec.comment else spec.comment + " " + value
            elif key == "DIMENSION":
                try:
                    spec.dimension = int(value)
                except ValueError:
                    raise TsplibParseError(f"bad DIMENSION {value!r}", lineno) from None
                if spec.dimension < 2:
                    raise TsplibParseError("DIMENSION must be at least 2", lineno)
            elif key == "EDGE_WEIGHT_TYPE":
                spec.edge_weight_type = value.upper()
                if spec.edge_weight_type not in COORD_TYPES + ("EXPLICIT",):
                    raise TsplibParseError(f"unsupported EDGE_WEIGHT_TYPE {value!r}", lineno)
            elif key == "EDGE_WEIGHT_FORMAT":
                spec.edge_weight_format = value.upper()
                # FUNCTION just says "computed from coordinates"
                if spec.edge_weight_format not in EXPLICIT_FORMATS + ("FUNCTION",):
                    raise TsplibParseError(f"unsupported EDGE_WEIGHT_FORMAT {value!r}", lineno)
            continue

        if key == "NODE_COORD_SECTION":
            if not spec.dimension:
                raise TsplibParseError("NODE_COORD_SECTION before DIMENSION", lineno)
            coords = np.zeros((spec.dimension, 2), dtype=np.float64)
            filled = 0
            while filled < spec.dimension:
                if pos >= len(lines):
                    raise TsplibParseError(f"expected {spec.dimension} nodes, found {filled}", pos)
                parts = lines[pos].split()
                pos += 1
                if not parts:
                    continue
                if parts[0].upper() == "EOF":
                    raise TsplibParseError(f"expected {spec.dimension} nodes, found {filled}", pos)
                try:
                    coords[filled] = float(parts[1]), float(parts[2])
                except (IndexError, ValueError):
                    raise TsplibParseError(f"malformed node line {lines[pos - 1]!r}", pos) from None
                filled += 1
            spec.coords = coords
        elif key == "EDGE_WEIGHT_SECTION":
            if not spec.dimension or not spec.edge_weight_format:
                raise TsplibParseError("EDGE_WEIGHT_SECTION needs DIMENSION and EDGE_WEIGHT_FORMAT first", lineno)
            dim = spec.dimension
            count = {"FULL_MATRIX": dim * dim, "UPPER_ROW": dim * (dim - 1) // 2,
                     "LOWER_ROW": dim * (dim - 1) // 2}.get(spec.edge_weight_format, dim * (dim + 1) // 2)
            tokens, pos = numbers_until(count, pos, key)
            try:
                spec.weights = [int(float(t)) for t in tokens]
            except ValueError:
                raise TsplibParseError("non-numeric edge weight", lineno) from None
        elif key == "DISPLAY_DATA_SECTION":
            _, pos = numbers_until(3 * spec.dimension, pos, key)
        else:
            raise TsplibParseError(f"unknown keyword {key!r}", lineno)

    if not spec.dimension:
        raise TsplibParseError("missing DIMENSION")
    if spec.edge_weight_type in COORD_TYPES and spec.coords is None:
        raise TsplibParseError(f"{spec.edge_weight_type} file has no NODE_COORD_SECTION")
    if spec.edge_weight_type == "EXPLICIT" and not spec.weights:
        raise TsplibParseError("EXPLICIT file has no EDGE_WEIGHT_SECTION")
    if not spec.edge_weight_type:
        raise TsplibParseError("missing EDGE_WEIGHT_TYPE")
    return spec


def distance_matrix(spec: TsplibFile, euclidean: str = "nint") -> np.ndarray:
    kind = spec.edge_weight_type
    if kind == "EXPLICIT":
        return _expand_explicit(spec.edge_weight_format, spec.weights, spec.dimension)
    if kind == "EUC_2D":
        return euc_2d(spec.coords, euclidean)
    if kind == "CEIL_2D":
        return ceil_2d(spec.coords)
    if kind == "ATT":
        return _pairwise(spec.coords, att_distance)
    if kind == "GEO":
        return _pairwise(spec.coords, geo_distance)
    raise TsplibParseError(f"unsupported EDGE_WEIGHT_TYPE {kind!r}")


def parse_tsplib(text: str, variant: Variant | str = Variant.CIRCUIT, euclidean: str = "nint") -> Instance:
    """Build an instance from TSPLib text.

    ``euclidean`` only affects EUC_2D files: ``"nint"`` is the TSPLib rule,
    ``"floor"`` truncates.
    """
    spec = read_tsplib(text)
    return Instance(distance_matrix(spec, euclidean), Variant(variant), spec.name, spec.coords)


def load_tsplib(path: str | PathLike, variant: Variant | str = Variant.CIRCUIT,
                euclidean: str = "nint") -> Instance:
    inst = parse_tsplib(Path(path).read_text(), variant, euclidean)
    if not inst.name:
        object.__setattr__(inst, "name", Path(path).stem)
    return inst


def generate_instance(n: int, seed: int, box: int = 100,
                      variant: Variant | str = Variant.PATH) -> Instance:
    """Uniform integer points in ``[0, box]^2`` with EUC_2D distances.

    Coordinates come from numpy's PCG64 stream seeded with ``seed``, so the
    same arguments give the same matrix on every platform.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if box < 1:
        raise ValueError("box must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    coords = rng.integers(0, box, size=(n + 1, 2), endpoint=True).astype(np.float64)
    return Instance(euc_2d(coords), Variant(variant), f"rand-n{n}-s{seed}", coords)


def dump_instance(instance: Instance) -> str:
    """Plain-text archive format: ``n`` then one ``id x y`` line per vertex."""
    if instance.coords is None:
        raise ValueError("only coordinate instances can be dumped")
    out = [str(instance.n)]
    for i, (x, y) in enumerate(instance.coords):
        out.append(f"{i} {int(x)} {int(y)}")
    return "\n".join(out) + "\n"


def parse_dump(text: str, variant: Variant | str = Variant.PATH, name: str = "") -> Instance:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n = int(lines[0][0])
        coords = np.array([[float(p[1]), float(p[2])] for p in lines[1:]], dtype=np.float64)
    except (IndexError, ValueError) as exc:
        raise TsplibParseError(f"malformed instance dump: {exc}") from None
    if coords.shape[0] != n + 1:
        raise TsplibParseError(f"dump declares n={n} but lists {coords.shape[0]} vertices")
    return Instance(euc_2d(coords), Variant(variant), name, coords)
