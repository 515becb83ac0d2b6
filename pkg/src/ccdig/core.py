"""Points, labeled datasets, distance matrices, box samplers, CSV ingestion.

Everything downstream works on plain float64 numpy arrays: a point is a
1-D array of coordinates, a point set is an (n, d) matrix. All containers
are frozen after construction so they can be shared across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np


class DatasetFormatError(ValueError):
    """Raised when CSV input violates the dataset format."""


def as_point(p) -> np.ndarray:
    """Coerce a single point to a 1-D float64 array of finite coordinates."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"a point must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def as_points(ps) -> np.ndarray:
    """Coerce a sequence of points to an (n, d) float64 matrix.

    A 1-D input is read as n scalar (one-dimensional) points.
    """
    arr = np.asarray(ps, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"a point set must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def distance(a, b) -> float:
    """Euclidean distance between two points of equal dimension."""
    pa = as_point(a)
    pb = as_point(b)
    if pa.shape != pb.shape:
        raise ValueError(f"dimension mismatch: {pa.size} vs {pb.size}")
    diff = pa - pb
    return float(np.sqrt((diff * diff).sum(axis=-1)))


def cross_distance_matrix(A, B) -> np.ndarray:
    """All pairwise Euclidean distances, entry (i, j) = distance(A[i], B[j])."""
    a = as_points(A)
    b = as_points(B)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("cannot build a distance matrix over an empty point set")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    out = np.empty((len(a), len(b)), dtype=np.float64)
    # chunk rows to bound the (chunk, m, d) broadcast buffer
    chunk = max(1, 4_000_000 // (b.shape[0] * b.shape[1] + 1))
    for i in range(0, len(a), chunk):
        diff = a[i : i + chunk, None, :] - b[None, :, :]
        out[i : i + chunk] = np.sqrt((diff * diff).sum(axis=-1))
    return out


def sample_uniform_box(d: int, low, high, n: int, seed) -> np.ndarray:
    """Draw n points with independent uniform coordinates on [low_i, high_i).

    `seed` may be an integer or a numpy Generator; an integer always yields
    the same sample. `low`/`high` may be scalars or length-d vectors.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if n < 1:
        raise ValueError("need at least one sample")
    lo = np.broadcast_to(np.asarray(low, dtype=np.float64), (d,)).copy()
    hi = np.broadcast_to(np.asarray(high, dtype=np.float64), (d,)).copy()
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("box bounds must be finite")
    if not np.all(lo < hi):
        raise ValueError("degenerate interval: low must be < high componentwise")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pts = lo + (hi - lo) * rng.random((n, d))
    # guard the half-open contract against upward rounding at the top edge
    return np.minimum(pts, np.nextafter(hi, lo))


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Points in d-dimensional space with dense integer class labels.

    Labels run 0..k-1 and every declared class is non-empty. `label_names`
    keeps the original spelling of each class for round trips to CSV.
    """

    points: np.ndarray
    labels: np.ndarray
    label_names: tuple[str, ...] = ()
    feature_names: tuple[str, ...] | None = None
    label_column: str = "class"

    def __post_init__(self):
        pts = as_points(self.points)
        labs = np.asarray(self.labels, dtype=np.int64)
        if labs.ndim != 1 or len(labs) != len(pts):
            raise ValueError("points and labels must have matching length")
        if len(pts) == 0:
            raise ValueError("dataset must contain at least one point")
        if labs.min() < 0:
            raise ValueError("labels must be non-negative")
        names = tuple(self.label_names) or tuple(str(i) for i in range(labs.max() + 1))
        if len(names) != labs.max() + 1:
            raise ValueError("label_names must list every class exactly once")
        counts = np.bincount(labs, minlength=len(names))
        if counts.min() == 0:
            raise ValueError("every declared class needs at least one point")
        feats = self.feature_names
        if feats is not None:
            feats = tuple(feats)
            if len(feats) != pts.shape[1]:
                raise ValueError("feature_names must match the dimension")
        pts = pts.copy()
        pts.flags.writeable = False
        labs = labs.copy()
        labs.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "label_names", names)
        object.__setattr__(self, "feature_names", feats)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def class_points(self, class_id: int) -> np.ndarray:
        return self.points[self.labels == class_id]


def parse_dataset(text) -> LabeledDataset:
    """Read a CSV dataset: header row, numeric feature columns, label last.

    Labels are remapped to 0..k-1 in first-appearance order; the original
    strings are preserved in `label_names`. Row numbers in error messages
    are 1-based and count the header.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    buf = io.StringIO(text) if isinstance(text, str) else text
    rows = list(csv.reader(buf))
    if len(rows) < 2:
        raise DatasetFormatError("row 2: expected a header row and at least one data row")
    header = rows[0]
    if len(header) < 2:
        raise DatasetFormatError("row 1: need at least one feature column and a label column")
    ncols = len(header)
    points: list[list[float]] = []
    labels: list[int] = []
    name_to_id: dict[str, int] = {}
    names: list[str] = []
    for i, row in enumerate(rows[1:]):
        rownum = i + 2
        if len(row) != ncols:
            raise DatasetFormatError(f"row {rownum}: expected {ncols} columns, got {len(row)}")
        coords = []
        for j, cell in enumerate(row[:-1]):
            try:
                value = float(cell)
            except ValueError:
                raise DatasetFormatError(
                    f"row {rownum}: non-numeric feature value {cell!r} in column {header[j]!r}"
                ) from None
            if not np.isfinite(value):
                raise DatasetFormatError(f"row {rownum}: non-finite feature value {cell!r}")
            coords.append(value)
        label = row[-1]
        if label not in name_to_id:
            name_to_id[label] = len(names)
            names.append(label)
        points.append(coords)
        labels.append(name_to_id[label])
    return LabeledDataset(
        points=np.array(points, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        label_names=tuple(names),
        feature_names=tuple(header[:-1]),
        label_column=header[-1],
    )


def dataset_to_csv(ds: LabeledDataset) -> str:
    """Serialize a dataset back to CSV; floats keep full round-trip precision."""
    feats = ds.feature_names or tuple(f"x{j + 1}" for j in range(ds.dim))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(feats) + [ds.label_column])
    for pt, lab in zip(ds.points, ds.labels):
        writer.writerow([repr(float(v)) for v in pt] + [ds.label_names[lab]])
    return out.getvalue()


def parse_feature_csv(text) -> tuple[np.ndarray, tuple[str, ...]]:
    """Read a label-free CSV of numeric features (header required)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    buf = io.StringIO(text) if isinstance(text, str) else text
    rows = list(csv.reader(buf))
    if len(rows) < 2:
        raise DatasetFormatError("row 2: expected a header row and at least one data row")
    header = rows[0]
    ncols = len(header)
    points = []
    for i, row in enumerate(rows[1:]):
        rownum = i + 2
        if len(row) != ncols:
            raise DatasetFormatError(f"row {rownum}: expected {ncols} columns, got {len(row)}")
        try:
            coords = [float(cell) for cell in row]
        except ValueError:
            raise DatasetFormatError(f"row {rownum}: non-numeric feature value") from None
        if not all(np.isfinite(c) for c in coords):
            raise DatasetFormatError(f"row {rownum}: non-finite feature value")
        points.append(coords)
    return np.array(points, dtype=np.float64), tuple(header)
