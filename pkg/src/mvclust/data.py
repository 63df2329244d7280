"""Multi-view dataset container, validation, min-max normalization, and file I/O.

A dataset is an ordered list of views. Every view is a dense float matrix with
one row per sample; all views share the same row count and row order. Ground
truth labels are optional. On disk a dataset is described by a small manifest:

    view = view_1.csv
    view = view_2.csv
    labels = labels.txt
    name.1 = first_view

``view`` lines are repeatable and their order defines the view index. Paths are
resolved relative to the manifest's directory. View files are plain CSV (one
sample per line, no header); label files hold one integer per line.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(Exception):
    """Base class for dataset construction and validation failures."""


class ManifestError(DatasetError):
    """Malformed manifest or missing referenced file."""


class MatrixFormatError(DatasetError):
    """Ragged or non-numeric view file; carries file and line context."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class RowCountMismatchError(DatasetError):
    """Views (or labels) disagree on the number of samples."""


class NonFiniteValueError(DatasetError):
    """NaN or infinite entry; carries (view, row, column) coordinates."""

    def __init__(self, view, row, col):
        super().__init__(f"non-finite value in view {view} at row {row}, column {col}")
        self.view = view
        self.row = row
        self.col = col


class EmptyDatasetError(DatasetError):
    """No views, no rows, or a view with no columns."""


class LabelValueError(DatasetError):
    """Label vector violates the dense 0-based class contract."""


def _freeze(arr):
    out = np.array(arr, dtype=float, order="C")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MultiViewDataset:
    """Immutable bundle of aligned view matrices plus optional labels.

    Parameters
    ----------
    views : sequence of (n, d_h) arrays
        One matrix per view, same row count everywhere.
    labels : (n,) int array or None
        Ground truth cluster ids, dense 0-based.
    view_names : tuple of str or None
        Optional display names, one per view.
    """

    views: tuple
    labels: np.ndarray | None = None
    view_names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "views", tuple(_freeze(v) for v in self.views))
        if self.labels is not None:
            lab = np.array(self.labels, dtype=int)
            lab.flags.writeable = False
            object.__setattr__(self, "labels", lab)
        if self.view_names is not None:
            object.__setattr__(self, "view_names", tuple(str(s) for s in self.view_names))

    @property
    def n_samples(self):
        return 0 if not self.views else self.views[0].shape[0]

    @property
    def n_views(self):
        return len(self.views)

    @property
    def dims(self):
        """Per-view column counts."""
        return [v.shape[1] for v in self.views]


@dataclass(frozen=True)
class NormalizationRecord:
    """Per-feature (min, max) pairs remembered by ``minmax_normalize``.

    ``apply`` replays the recorded affine map onto raw data. Columns recorded
    with min == max are constant and map to 0.5.
    """

    mins: tuple
    maxs: tuple

    def __post_init__(self):
        object.__setattr__(self, "mins", tuple(_freeze(m) for m in self.mins))
        object.__setattr__(self, "maxs", tuple(_freeze(m) for m in self.maxs))

    def apply(self, dataset: MultiViewDataset) -> MultiViewDataset:
        if len(self.mins) != dataset.n_views:
            raise ValueError("record view count does not match dataset")
        scaled = []
        for X, lo, hi in zip(dataset.views, self.mins, self.maxs):
            if X.shape[1] != lo.shape[0]:
                raise ValueError("record column count does not match view")
            span = hi - lo
            with np.errstate(divide="ignore", invalid="ignore"):
                Y = (X - lo) / span
            Y[:, span == 0] = 0.5
            scaled.append(Y)
        return MultiViewDataset(scaled, dataset.labels, dataset.view_names)


def validate(dataset: MultiViewDataset) -> None:
    """Check structural invariants; raise a specific DatasetError variant.

    Verifies: at least one view with rows and columns, equal row counts across
    views, finite entries everywhere, and (when present) labels of matching
    length that are dense 0-based with no empty class.
    """
    if dataset.n_views == 0:
        raise EmptyDatasetError("dataset has no views")
    n = dataset.views[0].shape[0]
    if n == 0:
        raise EmptyDatasetError("views have no rows")
    for h, X in enumerate(dataset.views):
        if X.ndim != 2 or X.shape[1] == 0:
            raise EmptyDatasetError(f"view {h} has no columns")
        if X.shape[0] != n:
            raise RowCountMismatchError(
                f"view {h} has {X.shape[0]} rows, expected {n}"
            )
        bad = ~np.isfinite(X)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise NonFiniteValueError(h, int(r), int(c))
    if dataset.labels is not None:
        lab = dataset.labels
        if lab.shape != (n,):
            raise RowCountMismatchError(
                f"labels have {lab.shape[0] if lab.ndim == 1 else '?'} rows, expected {n}"
            )
        _check_dense_labels(lab)


def _check_dense_labels(lab):
    # every class id in 0..c-1 must occur at least once
    if lab.min() < 0:
        raise LabelValueError(f"negative label {lab.min()}")
    present = np.unique(lab)
    if present[-1] + 1 != present.size:
        missing = next(i for i in range(present[-1] + 1) if i not in set(present))
        raise LabelValueError(f"label classes are not dense: class {missing} is empty")


def minmax_normalize(dataset: MultiViewDataset):
    """Rescale every feature column into [0, 1] independently.

    Constant columns become 0.5. Returns ``(normalized, record)`` where the
    record stores the per-column (min, max) used, so the same map can be
    replayed on other data. Idempotent: normalizing the output again changes
    nothing (within 1e-12).
    """
    mins = [X.min(axis=0) for X in dataset.views]
    maxs = [X.max(axis=0) for X in dataset.views]
    record = NormalizationRecord(tuple(mins), tuple(maxs))
    return record.apply(dataset), record


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

def _read_matrix(path: Path) -> np.ndarray:
    if not path.is_file():
        raise ManifestError(f"view file not found: {path}")
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise MatrixFormatError(
                    path, line_no, f"expected {width} columns, found {len(cells)}"
                )
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                bad = next(c for c in cells if not _is_number(c))
                raise MatrixFormatError(path, line_no, f"non-numeric cell {bad!r}") from None
    if not rows:
        raise EmptyDatasetError(f"view file is empty: {path}")
    return np.asarray(rows, dtype=float)


def _is_number(token):
    try:
        float(token)
        return True
    except ValueError:
        return False


def _read_labels(path: Path) -> np.ndarray:
    if not path.is_file():
        raise ManifestError(f"label file not found: {path}")
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise MatrixFormatError(path, line_no, f"non-integer label {line!r}") from None
    if not values:
        raise EmptyDatasetError(f"label file is empty: {path}")
    lab = np.asarray(values, dtype=int)
    # 1-based files are accepted and shifted down
    if lab.min() == 1:
        lab = lab - 1
    return lab


def parse_manifest(path) -> dict:
    """Parse a manifest file into ``{"views": [...], "labels": ..., "names": {...}}``.

    Blank lines and ``#`` comments are ignored. Paths are returned as written
    (resolution against the manifest directory happens in ``load_dataset``).
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    views, names, labels = [], {}, None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ManifestError(f"{path}:{line_no}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "view":
                views.append(value)
            elif key == "labels":
                labels = value
            elif key.startswith("name."):
                try:
                    idx = int(key[5:])
                except ValueError:
                    raise ManifestError(f"{path}:{line_no}: bad view index in {key!r}") from None
                names[idx] = value
            else:
                raise ManifestError(f"{path}:{line_no}: unknown key {key!r}")
    if not views:
        raise ManifestError(f"{path}: manifest lists no views")
    return {"views": views, "labels": labels, "names": names}


def load_dataset(manifest_path) -> MultiViewDataset:
    """Load and validate a dataset from a manifest file.

    Label files may be 0- or 1-based on disk; 1-based vectors are shifted so
    that labels are always dense 0-based in memory.
    """
    manifest_path = Path(manifest_path)
    spec = parse_manifest(manifest_path)
    base = manifest_path.parent
    views = [_read_matrix(base / rel) for rel in spec["views"]]
    labels = _read_labels(base / spec["labels"]) if spec["labels"] else None
    names = None
    if spec["names"]:
        names = tuple(
            spec["names"].get(i + 1, f"view_{i + 1}") for i in range(len(views))
        )
    dataset = MultiViewDataset(views, labels, names)
    validate(dataset)
    return dataset


def save_dataset(dataset: MultiViewDataset, out_dir, stem="view") -> Path:
    """Write views, labels, and a manifest into ``out_dir``; return manifest path.

    Values are printed with %.17g so a write/read round trip is exact.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["# mvclust dataset manifest"]
    for h, X in enumerate(dataset.views, start=1):
        fname = f"{stem}_{h}.csv"
        np.savetxt(out_dir / fname, X, fmt="%.17g", delimiter=",")
        lines.append(f"view = {fname}")
    if dataset.labels is not None:
        np.savetxt(out_dir / "labels.txt", dataset.labels, fmt="%d")
        lines.append("labels = labels.txt")
    if dataset.view_names is not None:
        for h, name in enumerate(dataset.view_names, start=1):
            lines.append(f"name.{h} = {name}")
    manifest = out_dir / "manifest.cfg"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def restrict(dataset: MultiViewDataset, view_indices, column_indices) -> MultiViewDataset:
    """Keep only the given views and, per kept view, the given columns."""
    views = [dataset.views[h][:, cols] for h, cols in zip(view_indices, column_indices)]
    names = None
    if dataset.view_names is not None:
        names = tuple(dataset.view_names[h] for h in view_indices)
    return MultiViewDataset(views, dataset.labels, names)
