"""Per-segment feature assembly.

Classical path: one 760-value row per segment (19 channels x 5 bands x
8 statistics), channel-major, band order delta..gamma, statistic order
fft_mean, fft_std, fft_skew, fft_kurt, psd_mean, psd_std, psd_skew,
psd_kurt. Graph path: the same values grouped as a 19 x 40 per-electrode
matrix.

Spectrum statistics are computed over one-sided values excluding the DC
bin by default (the DC bin is dominated by residual offset); this is
configurable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dsp
from .ingest import SegmentRecord, SegmentStore, filter_min_duration, iter_segments

STAT_NAMES = (
    "fft_mean",
    "fft_std",
    "fft_skew",
    "fft_kurt",
    "psd_mean",
    "psd_std",
    "psd_skew",
    "psd_kurt",
)

N_FEATURES = 19 * 5 * 8  # 760


@dataclass(frozen=True)
class WelchConfig:
    segment_len: int | None = None  # None -> min(256, len(x))
    overlap_fraction: float = 0.5
    window: str = "hann"


@dataclass(frozen=True)
class FeatureConfig:
    bands: dict = field(default_factory=lambda: dict(dsp.BANDS))
    band_order: tuple = dsp.BAND_ORDER
    welch: WelchConfig = WelchConfig()
    filter_order: int = 3
    min_duration_s: float | None = 0.5
    include_dc: bool = False


@dataclass(frozen=True)
class FeatureRow:
    segment_id: str
    label: int
    values: np.ndarray  # length 760
    column_names: tuple[str, ...]


@dataclass(frozen=True)
class NodeFeatureMatrix:
    segment_id: str
    label: int
    matrix: np.ndarray  # (19, 40) by default
    feature_names: tuple[str, ...]  # per-electrode column names, length 40


def feature_column_names(channel_names, band_order=dsp.BAND_ORDER):
    """Full 760-name list: <channel>_<band>_<stat>, channel-major."""
    return tuple(
        f"{ch}_{band}_{stat}"
        for ch in channel_names
        for band in band_order
        for stat in STAT_NAMES
    )


def node_feature_names(band_order=dsp.BAND_ORDER):
    """Per-electrode 40-name list: <band>_<stat>."""
    return tuple(f"{band}_{stat}" for band in band_order for stat in STAT_NAMES)


class _FilterBank:
    """Caches band filters per (sample rate, band edges)."""

    def __init__(self, order: int):
        self.order = order
        self._cache: dict = {}

    def get(self, low: float, high: float, fs: float) -> dsp.IirFilter:
        key = (low, high, fs)
        filt = self._cache.get(key)
        if filt is None:
            filt = dsp.design_butterworth_bandpass(self.order, low, high, fs)
            self._cache[key] = filt
        return filt


def _channel_band_stats(
    x: np.ndarray, filt: dsp.IirFilter, fs: float, config: FeatureConfig
) -> np.ndarray:
    filtered = dsp.filtfilt(filt, x)
    start = 0 if config.include_dc else 1
    fft_vals = dsp.fft_magnitude(filtered, fs).values[start:]
    psd_vals = dsp.welch_psd(
        filtered,
        fs,
        segment_len=config.welch.segment_len,
        overlap_fraction=config.welch.overlap_fraction,
        window=config.welch.window,
    ).values[start:]
    return np.array(
        dsp.moments(fft_vals).as_tuple() + dsp.moments(psd_vals).as_tuple()
    )


def extract_node_features(
    segment: SegmentRecord,
    config: FeatureConfig = FeatureConfig(),
    bank: _FilterBank | None = None,
) -> NodeFeatureMatrix:
    """19 x 40 matrix: row i holds channel i's band statistics."""
    if bank is None:
        bank = _FilterBank(config.filter_order)
    fs = segment.sample_rate_hz
    rows = []
    for ch in range(segment.data.shape[0]):
        x = segment.data[ch]
        stats = [
            _channel_band_stats(x, bank.get(*config.bands[band], fs), fs, config)
            for band in config.band_order
        ]
        rows.append(np.concatenate(stats))
    return NodeFeatureMatrix(
        segment_id=segment.segment_id,
        label=segment.label,
        matrix=np.vstack(rows),
        feature_names=node_feature_names(config.band_order),
    )


def extract_feature_row(
    segment: SegmentRecord,
    config: FeatureConfig = FeatureConfig(),
    bank: _FilterBank | None = None,
) -> FeatureRow:
    """Flattened 760-value feature row (channel-major node features)."""
    node = extract_node_features(segment, config, bank)
    return FeatureRow(
        segment_id=segment.segment_id,
        label=segment.label,
        values=node.matrix.ravel().copy(),
        column_names=feature_column_names(segment.channel_names, config.band_order),
    )


def build_feature_matrix(
    store: SegmentStore,
    config: FeatureConfig = FeatureConfig(),
    out_path=None,
):
    """Extract rows for every (sufficiently long) segment in manifest order.

    Returns (X, y, segment_ids, column_names); writes ``features.csv`` when
    ``out_path`` is given. Re-running with identical store and config yields
    byte-identical output.
    """
    bank = _FilterBank(config.filter_order)
    segments = list(iter_segments(store))
    if config.min_duration_s is not None:
        segments = filter_min_duration(segments, config.min_duration_s)
    if not segments:
        raise ValueError("no segments left after duration filtering")
    columns = feature_column_names(store.montage, config.band_order)
    rows, labels, ids = [], [], []
    for seg in segments:
        try:
            row = extract_feature_row(seg, config, bank)
        except Exception as exc:
            raise RuntimeError(
                f"feature extraction failed for segment {seg.segment_id}: {exc}"
            ) from exc
        rows.append(row.values)
        labels.append(seg.label)
        ids.append(seg.segment_id)
    X = np.vstack(rows)
    y = np.asarray(labels, dtype=int)
    if out_path is not None:
        write_feature_csv(out_path, ids, y, X, columns)
    return X, y, ids, columns


def write_feature_csv(path, segment_ids, labels, X, column_names) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["segment_id", "label", *column_names])
        for sid, label, row in zip(segment_ids, labels, X):
            writer.writerow([sid, int(label), *("%.12g" % v for v in row)])


def read_feature_csv(path):
    """Inverse of write_feature_csv: (X, y, segment_ids, column_names)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["segment_id", "label"]:
            raise ValueError("feature CSV must start with segment_id,label columns")
        ids, labels, rows = [], [], []
        for rec in reader:
            ids.append(rec[0])
            labels.append(int(rec[1]))
            rows.append([float(v) for v in rec[2:]])
    return np.asarray(rows), np.asarray(labels, dtype=int), ids, tuple(header[2:])


def write_node_features(
    out_dir, store: SegmentStore, config: FeatureConfig = FeatureConfig()
):
    """Write node_features/<segment_id>.csv for every eligible segment."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bank = _FilterBank(config.filter_order)
    segments = list(iter_segments(store))
    if config.min_duration_s is not None:
        segments = filter_min_duration(segments, config.min_duration_s)
    written = []
    for seg in segments:
        node = extract_node_features(seg, config, bank)
        path = out_dir / f"{seg.segment_id}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["channel", *node.feature_names])
            for name, row in zip(seg.channel_names, node.matrix):
                writer.writerow([name, *("%.12g" % v for v in row)])
        written.append(path)
    return written
