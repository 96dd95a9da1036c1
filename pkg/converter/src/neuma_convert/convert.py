"""Convert release files into the neutral segment-store layout.

The converter is a format shim only: no filtering, no resampling. It
expects the source tree documented below and fails loudly on anything
else.

Expected source layout::

    SRC/
      montage.txt                   # 19 channel names, one per line
      <subject_id>/
        products.csv                # header page_id,product_id,label
        <page_id>_<product_id>.csv  # samples x 19 EEG matrix (microvolts)

Labels in ``products.csv`` must be the strings ``Buy`` or ``NoBuy``.
The emitted store is::

    OUT/
      montage.txt
      manifest.csv                  # segment_id,subject_id,page_id,
                                    # product_id,label,sample_rate_hz,
                                    # n_samples,file
      data/<segment_id>.csv         # samples x 19 matrix
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

N_CHANNELS = 19
SAMPLE_RATE_HZ = 300.0

MANIFEST_COLUMNS = ["segment_id", "subject_id", "page_id", "product_id",
                    "label", "sample_rate_hz", "n_samples", "file"]

LABELS = {"Buy": 1, "NoBuy": 0}

DEFAULT_MONTAGE = (
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
    "T3", "C3", "Cz", "C4", "T4",
    "T5", "P3", "Pz", "P4", "T6", "O1", "O2",
)


class ConversionError(ValueError):
    pass


@dataclass(frozen=True)
class ConversionManifest:
    source: str
    subjects: tuple[str, ...]
    n_segments: int
    buy_counts: dict[str, int]
    nobuy_counts: dict[str, int]

    def __post_init__(self):
        total = sum(self.buy_counts.values()) \
            + sum(self.nobuy_counts.values())
        if total != self.n_segments:
            raise ConversionError("per-subject counts do not sum to "
                                  "the emitted segment count")


class _StoreWriter:
    def __init__(self, out_dir: Path, montage: tuple[str, ...]):
        if len(montage) != N_CHANNELS:
            raise ConversionError(
                f"montage must list {N_CHANNELS} channels, "
                f"got {len(montage)}")
        self.out_dir = out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "data").mkdir(exist_ok=True)
        (out_dir / "montage.txt").write_text("\n".join(montage) + "\n")
        self._rows: list[list] = []

    def add(self, segment_id: str, subject_id: str, page_id: int,
            product_id: int, label: int, data: np.ndarray) -> None:
        if data.ndim != 2 or data.shape[1] != N_CHANNELS:
            raise ConversionError(
                f"segment {segment_id}: expected a samples x {N_CHANNELS} "
                f"matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ConversionError(f"segment {segment_id}: non-finite sample")
        rel = f"data/{segment_id}.csv"
        np.savetxt(self.out_dir / rel, data, delimiter=",", fmt="%.10g")
        self._rows.append([segment_id, subject_id, page_id, product_id,
                           label, f"{SAMPLE_RATE_HZ:g}", data.shape[0], rel])

    def finish(self) -> int:
        with open(self.out_dir / "manifest.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(MANIFEST_COLUMNS)
            writer.writerows(self._rows)
        return len(self._rows)


def _read_products(path: Path) -> list[tuple[int, int, str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["page_id", "product_id", "label"]:
            raise ConversionError(
                f"{path}: expected header page_id,product_id,label, "
                f"got {header}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != 3:
                raise ConversionError(f"{path} line {lineno}: "
                                      f"expected 3 fields")
            if rec[2] not in LABELS:
                raise ConversionError(
                    f"{path} line {lineno}: unknown label {rec[2]!r} "
                    f"(expected Buy or NoBuy)")
            rows.append((int(rec[0]), int(rec[1]), rec[2]))
    return rows


def convert(source_dir, out_dir, subjects=None) -> ConversionManifest:
    """Convert every (subject, page, product) viewing into a store segment."""
    src = Path(source_dir)
    if not src.is_dir():
        raise ConversionError(f"source directory not found: {source_dir}")
    montage_path = src / "montage.txt"
    if not montage_path.exists():
        raise ConversionError(f"missing montage file: {montage_path}")
    montage = tuple(montage_path.read_text().split())

    found = sorted(p.name for p in src.iterdir()
                   if p.is_dir() and (p / "products.csv").exists())
    if not found:
        raise ConversionError(
            f"no subject directories with products.csv under {source_dir}")
    if subjects is not None:
        missing = sorted(set(subjects) - set(found))
        if missing:
            raise ConversionError(
                f"requested subjects not in source: {', '.join(missing)}")
        found = [s for s in found if s in set(subjects)]

    writer = _StoreWriter(Path(out_dir), montage)
    buy_counts = {s: 0 for s in found}
    nobuy_counts = {s: 0 for s in found}
    for subject in found:
        for page_id, product_id, label in _read_products(
                src / subject / "products.csv"):
            eeg_path = src / subject / f"{page_id}_{product_id}.csv"
            if not eeg_path.exists():
                raise ConversionError(f"missing EEG file: {eeg_path}")
            data = np.atleast_2d(np.loadtxt(eeg_path, delimiter=",",
                                            ndmin=2))
            segment_id = f"{subject}_{page_id}_{product_id}"
            writer.add(segment_id, subject, page_id, product_id,
                       LABELS[label], data)
            if label == "Buy":
                buy_counts[subject] += 1
            else:
                nobuy_counts[subject] += 1
    n = writer.finish()
    return ConversionManifest(source=str(source_dir),
                              subjects=tuple(found), n_segments=n,
                              buy_counts=buy_counts,
                              nobuy_counts=nobuy_counts)


def synthesize(out_dir, n_segments: int, seed: int = 0,
               buy_fraction: float = 0.125,
               n_samples: int = 300) -> ConversionManifest:
    """Emit a seeded synthetic store with the same layout as ``convert``."""
    if n_segments < 1:
        raise ConversionError("n_segments must be >= 1")
    rng = np.random.default_rng(seed)
    writer = _StoreWriter(Path(out_dir), DEFAULT_MONTAGE)
    subject_ids = [f"sub-{i:02d}" for i in range(max(1, n_segments // 24))]
    buy_counts = {s: 0 for s in subject_ids}
    nobuy_counts = {s: 0 for s in subject_ids}
    for i in range(n_segments):
        subject = subject_ids[i % len(subject_ids)]
        label = int(rng.uniform() < buy_fraction)
        data = rng.normal(size=(n_samples, N_CHANNELS))
        writer.add(f"{subject}_{i // 24}_{i}", subject, i // 24, i, label,
                   data)
        if label:
            buy_counts[subject] += 1
        else:
            nobuy_counts[subject] += 1
    n = writer.finish()
    return ConversionManifest(source="<synthetic>",
                              subjects=tuple(subject_ids), n_segments=n,
                              buy_counts=buy_counts,
                              nobuy_counts=nobuy_counts)
