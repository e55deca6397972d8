"""Reading datasets from plain-text files.

Formats:

* ``edge_list``: whitespace separated ``u v`` per line, ``#`` comments allowed.
  Yields a coverage objective (``N(u)`` = out-neighbours) or a directed cut.
* ``feature_csv``: one comma separated feature row per element (facility location).
* ``kernel_csv``: a symmetric PSD ``n x n`` kernel matrix (log-det).
* ``movie_csv``: the user vector on the first row, then one row per movie.

The colors file holds one label per element; labels become color ids in
order of first appearance.  Without a colors file every element gets the
single color ``"all"``.
"""

from __future__ import annotations

import csv
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fairstream.core import GroundSet
from fairstream.objectives import Coverage, DirectedCut, FacilityLocation, LogDet, MovieUtility, Objective

FORMATS = ("edge_list", "feature_csv", "kernel_csv", "movie_csv")
KERNEL_TOLERANCE = 1e-8


class ParseError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        where = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{where}: {message}")


@dataclass
class DatasetBundle:
    ground: GroundSet
    labels: list[str]
    objective: Objective
    format: str
    provenance: dict = field(default_factory=dict)

    def color_id(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown color label {label!r}; known: {self.labels}") from None


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def read_colors(path) -> tuple[list[int], list[str]]:
    labels: list[str] = []
    index: dict[str, int] = {}
    colors = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            label = raw.strip()
            if not label:
                raise ParseError(path, lineno, "empty color label")
            if label not in index:
                index[label] = len(labels)
                labels.append(label)
            colors.append(index[label])
    return colors, labels


def read_edges(path, n: int) -> list[tuple[int, int]]:
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, f"expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer node id in {line!r}") from None
            if u < 0 or v < 0:
                raise ParseError(path, lineno, "node ids must be non-negative")
            if u >= n or v >= n:
                raise ParseError(
                    path, lineno, f"node id {max(u, v)} but the colors file lists only {n} elements"
                )
            edges.append((u, v))
    return edges


def read_matrix(path) -> np.ndarray:
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                bad = next(c for c in row if not _is_float(c))
                raise ParseError(path, lineno, f"non-numeric cell {bad!r}") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(path, lineno, f"ragged row: {len(values)} cells, expected {width}")
            rows.append(values)
    if not rows:
        raise ParseError(path, None, "no data rows")
    return np.array(rows, dtype=float)


def _is_float(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _check_count(path, rows, n, what):
    if rows != n:
        raise ParseError(path, None, f"{rows} {what} but the colors file lists {n} elements")


def _infer_size(path, format):
    """Element count when no colors file is given (everything gets one color)."""
    if format == "edge_list":
        edges = read_edges(path, n=1 << 62)
        return 1 + max((max(u, v) for u, v in edges), default=-1)
    rows = read_matrix(path).shape[0]
    return rows - 1 if format == "movie_csv" else rows


def ingest(
    path,
    format: str,
    colors_path=None,
    *,
    objective: str | None = None,
    directed: bool = True,
    epsilon: float = 0.1,
    alpha: float = 0.85,
) -> DatasetBundle:
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    if colors_path is None:
        n = _infer_size(path, format)
        colors, labels = [0] * n, ["all"]
    else:
        colors, labels = read_colors(colors_path)
        n = len(colors)
    ground = GroundSet(tuple(colors), len(labels))
    provenance = {
        "payload": os.fspath(path),
        "colors": None if colors_path is None else os.fspath(colors_path),
        "payload_sha256": file_digest(path),
        "colors_sha256": None if colors_path is None else file_digest(colors_path),
        "elements": n,
    }
    if format == "edge_list":
        edges = read_edges(path, n)
        provenance["rows"] = len(edges)
        kind = objective or "coverage"
        if kind == "coverage":
            oracle: Objective = Coverage.from_edges(n, edges, directed=directed)
        elif kind == "cut":
            arcs = edges if directed else edges + [(v, u) for u, v in edges]
            oracle = DirectedCut(n, arcs)
        else:
            raise ValueError(f"edge lists support objective 'coverage' or 'cut', got {kind!r}")
    elif format == "feature_csv":
        X = read_matrix(path)
        _check_count(path, X.shape[0], n, "feature rows")
        provenance["rows"] = X.shape[0]
        oracle = FacilityLocation(X)
    elif format == "kernel_csv":
        L = read_matrix(path)
        _check_count(path, L.shape[0], n, "kernel rows")
        if L.shape[1] != L.shape[0]:
            raise ParseError(path, None, f"kernel is {L.shape[0]}x{L.shape[1]}, not square")
        if not np.allclose(L, L.T, atol=KERNEL_TOLERANCE, rtol=0):
            raise ParseError(path, None, "kernel is not symmetric")
        lam_min = float(np.linalg.eigvalsh(L)[0])
        if lam_min < -KERNEL_TOLERANCE:
            raise ParseError(path, None, f"kernel is indefinite (smallest eigenvalue {lam_min:.3g})")
        provenance["rows"] = L.shape[0]
        provenance["kernel_lambda_min"] = lam_min
        oracle = LogDet(L, epsilon=epsilon)
    else:
        data = read_matrix(path)
        _check_count(path, data.shape[0] - 1, n, "movie rows (after the user row)")
        provenance["rows"] = data.shape[0]
        oracle = MovieUtility(data[0], data[1:], alpha=alpha)
    return DatasetBundle(ground, labels, oracle, format, provenance)


def write_edge_list(path, edges) -> None:
    with open(path, "w") as fh:
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def write_colors(path, colors, labels) -> None:
    with open(path, "w") as fh:
        for c in colors:
            fh.write(f"{labels[c]}\n")


def write_matrix(path, matrix) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(matrix, dtype=float):
            writer.writerow([repr(float(x)) for x in row])


def resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else base / p
