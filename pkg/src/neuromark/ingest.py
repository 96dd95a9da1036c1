"""Neutral on-disk segment store: loading, validation, and filtering.

Store layout::

    <root>/
      manifest.csv   segment_id,subject_id,page_id,product_id,label,
                     sample_rate_hz,n_samples,file
      montage.txt    19 lines, one channel name each
      <file>.csv     one data file per segment; 19 columns in montage
                     order, one row per sample, >= 9 significant digits
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

N_CHANNELS = 19

MANIFEST_COLUMNS = [
    "segment_id",
    "subject_id",
    "page_id",
    "product_id",
    "label",
    "sample_rate_hz",
    "n_samples",
    "file",
]


class StoreError(ValueError):
    """Raised when a segment store or one of its files is invalid."""


@dataclass(frozen=True)
class SegmentRecord:
    """One product-viewing EEG segment (channels x samples, microvolts)."""

    segment_id: str
    subject_id: str
    page_id: int
    product_id: int
    label: int  # 0 = NoBuy, 1 = Buy
    sample_rate_hz: float
    channel_names: tuple[str, ...]
    data: np.ndarray  # shape (19, n_samples)

    def __post_init__(self):
        if self.label not in (0, 1):
            raise StoreError(f"label must be 0 or 1, got {self.label}")
        if self.sample_rate_hz <= 0:
            raise StoreError("sample_rate_hz must be positive")
        if len(self.channel_names) != N_CHANNELS:
            raise StoreError(
                f"montage length must be {N_CHANNELS}, got {len(self.channel_names)}"
            )
        if self.data.ndim != 2 or self.data.shape[0] != N_CHANNELS:
            raise StoreError(
                f"data must have {N_CHANNELS} rows, got shape {self.data.shape}"
            )
        if self.data.shape[1] < 1:
            raise StoreError("segment must contain at least one sample")
        if not np.all(np.isfinite(self.data)):
            raise StoreError(f"non-finite sample in segment {self.segment_id}")

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz


@dataclass(frozen=True)
class ManifestRow:
    segment_id: str
    subject_id: str
    page_id: int
    product_id: int
    label: int
    sample_rate_hz: float
    n_samples: int
    file: str


@dataclass(frozen=True)
class SegmentStore:
    """Validated read-only view of a segment store on disk."""

    root: Path
    rows: tuple[ManifestRow, ...]
    montage: tuple[str, ...]
    _index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {row.segment_id: row for row in self.rows}
        )

    def __len__(self) -> int:
        return len(self.rows)

    def segment_ids(self) -> list[str]:
        return [row.segment_id for row in self.rows]

    def label_counts(self) -> dict[int, int]:
        counts = {0: 0, 1: 0}
        for row in self.rows:
            counts[row.label] += 1
        return counts


def load_store(root_path) -> SegmentStore:
    """Load and validate a store without reading full data files.

    Checks manifest/montage structure, segment_id uniqueness, and that every
    referenced data file exists.
    """
    root = Path(root_path)
    manifest_path = root / "manifest.csv"
    montage_path = root / "montage.txt"
    if not manifest_path.is_file():
        raise StoreError(f"missing manifest: {manifest_path}")
    if not montage_path.is_file():
        raise StoreError(f"missing montage: {montage_path}")

    montage = tuple(
        line.strip() for line in montage_path.read_text().splitlines() if line.strip()
    )
    if len(montage) != N_CHANNELS:
        raise StoreError(
            f"montage length must be {N_CHANNELS}, got {len(montage)}"
        )

    rows: list[ManifestRow] = []
    seen: set[str] = set()
    with open(manifest_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != MANIFEST_COLUMNS:
            raise StoreError(
                f"manifest header must be {MANIFEST_COLUMNS}, got {reader.fieldnames}"
            )
        for rec in reader:
            row = ManifestRow(
                segment_id=rec["segment_id"],
                subject_id=rec["subject_id"],
                page_id=int(rec["page_id"]),
                product_id=int(rec["product_id"]),
                label=int(rec["label"]),
                sample_rate_hz=float(rec["sample_rate_hz"]),
                n_samples=int(rec["n_samples"]),
                file=rec["file"],
            )
            if row.segment_id in seen:
                raise StoreError(f"duplicate segment_id: {row.segment_id}")
            seen.add(row.segment_id)
            if row.label not in (0, 1):
                raise StoreError(f"label must be 0 or 1 in row {row.segment_id}")
            if not (root / row.file).is_file():
                raise StoreError(
                    f"missing data file for segment {row.segment_id}: {row.file}"
                )
            rows.append(row)
    return SegmentStore(root=root, rows=tuple(rows), montage=montage)


def read_segment(store: SegmentStore, segment_id: str) -> SegmentRecord:
    """Read one segment's data file and validate it against the manifest."""
    row = store._index.get(segment_id)
    if row is None:
        raise StoreError(f"unknown segment_id: {segment_id}")
    path = store.root / row.file
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] != N_CHANNELS:
        raise StoreError(
            f"segment {segment_id}: expected {N_CHANNELS} columns, got {data.shape[1]}"
        )
    if data.shape[0] != row.n_samples:
        raise StoreError(
            f"segment {segment_id}: length mismatch "
            f"(manifest says {row.n_samples}, file has {data.shape[0]})"
        )
    if not np.all(np.isfinite(data)):
        raise StoreError(f"segment {segment_id}: non-finite sample")
    return SegmentRecord(
        segment_id=row.segment_id,
        subject_id=row.subject_id,
        page_id=row.page_id,
        product_id=row.product_id,
        label=row.label,
        sample_rate_hz=row.sample_rate_hz,
        channel_names=store.montage,
        data=data.T.copy(),
    )


def iter_segments(store: SegmentStore):
    """Yield SegmentRecords in manifest order."""
    for row in store.rows:
        yield read_segment(store, row.segment_id)


def filter_min_duration(segments, min_seconds: float = 0.5):
    """Keep segments strictly longer than ``min_seconds``; order preserved."""
    if min_seconds < 0:
        raise ValueError("min_seconds must be >= 0")
    return [s for s in segments if s.duration_s > min_seconds]


def write_store(root_path, segments, montage=None) -> SegmentStore:
    """Write segments to a new store at ``root_path`` and return it loaded.

    Values are printed with 10 significant digits; re-reading reproduces the
    printed precision exactly.
    """
    root = Path(root_path)
    root.mkdir(parents=True, exist_ok=True)
    segments = list(segments)
    if montage is None:
        if not segments:
            raise StoreError("cannot infer montage from an empty segment list")
        montage = segments[0].channel_names
    if len(montage) != N_CHANNELS:
        raise StoreError(f"montage length must be {N_CHANNELS}")
    (root / "montage.txt").write_text("\n".join(montage) + "\n")

    data_dir = root / "data"
    data_dir.mkdir(exist_ok=True)
    with open(root / "manifest.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS)
        for seg in segments:
            if tuple(seg.channel_names) != tuple(montage):
                raise StoreError(
                    f"segment {seg.segment_id} montage differs from store montage"
                )
            rel = f"data/{seg.segment_id}.csv"
            np.savetxt(root / rel, seg.data.T, delimiter=",", fmt="%.10g")
            writer.writerow(
                [
                    seg.segment_id,
                    seg.subject_id,
                    seg.page_id,
                    seg.product_id,
                    seg.label,
                    "%.10g" % seg.sample_rate_hz,
                    seg.n_samples,
                    rel,
                ]
            )
    return load_store(root)
