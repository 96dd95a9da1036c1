"""Seeded synthetic EEG stores used by the demos and the test suite.

Two generators:
  * a balanced, strongly separable store where the Buy class carries extra
    alpha-band (10 Hz) power, and
  * a 79/21 imbalanced, nearly inseparable store that reproduces the
    structural failure mode of unweighted classifiers on skewed labels.
"""

from __future__ import annotations

import numpy as np

from .ingest import N_CHANNELS, SegmentRecord, SegmentStore, write_store

DEFAULT_MONTAGE = (
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
    "T3", "C3", "Cz", "C4", "T4",
    "T5", "P3", "Pz", "P4", "T6", "O1", "O2",
)

FIXTURE_KINDS = ("separable", "imbalanced")


def _synthetic_segment(rng: np.random.Generator, segment_id: str,
                       subject_id: str, page_id: int, product_id: int,
                       label: int, alpha_amp: float, fs: float = 300.0,
                       n_samples: int = 300) -> SegmentRecord:
    t = np.arange(n_samples) / fs
    data = np.empty((N_CHANNELS, n_samples))
    for ch in range(N_CHANNELS):
        noise = rng.normal(scale=1.0, size=n_samples)
        phase = rng.uniform(0, 2 * np.pi)
        amp = alpha_amp * rng.uniform(0.8, 1.2)
        theta = 0.5 * rng.uniform(0.8, 1.2)
        data[ch] = (noise
                    + amp * np.sin(2 * np.pi * 10.0 * t + phase)
                    + theta * np.sin(2 * np.pi * 6.0 * t + phase / 2))
    return SegmentRecord(
        segment_id=segment_id, subject_id=subject_id, page_id=page_id,
        product_id=product_id, label=label, sample_rate_hz=fs,
        channel_names=DEFAULT_MONTAGE, data=data,
    )


def make_separable_records(n_segments: int = 400,
                           seed: int = 0) -> list[SegmentRecord]:
    """Balanced records whose Buy class has roughly triple alpha power."""
    rng = np.random.default_rng([seed, 0xA1FA])
    records = []
    for i in range(n_segments):
        label = i % 2
        alpha = 3.0 if label == 1 else 1.0
        records.append(_synthetic_segment(
            rng, segment_id=f"sep{i:04d}", subject_id=f"S{i % 10:02d}",
            page_id=i // 4, product_id=i, label=label, alpha_amp=alpha))
    return records


def make_imbalanced_records(n_segments: int = 100, seed: int = 0,
                            class1_fraction: float = 0.21
                            ) -> list[SegmentRecord]:
    """79/21-style records with only a faint class difference."""
    rng = np.random.default_rng([seed, 0x1B1A])
    n_one = int(round(n_segments * class1_fraction))
    records = []
    for i in range(n_segments):
        label = 1 if i < n_one else 0
        alpha = 1.05 if label == 1 else 1.0
        records.append(_synthetic_segment(
            rng, segment_id=f"imb{i:04d}", subject_id=f"S{i % 5:02d}",
            page_id=i // 4, product_id=i, label=label, alpha_amp=alpha))
    # interleave deterministically so folds see both classes everywhere
    order = rng.permutation(n_segments)
    return [records[i] for i in order]


def generate_fixture_store(kind: str, out_dir, n_segments: int | None = None,
                           seed: int = 0) -> SegmentStore:
    """Write one of the named synthetic stores under ``out_dir``."""
    if kind == "separable":
        records = make_separable_records(n_segments or 400, seed)
    elif kind == "imbalanced":
        records = make_imbalanced_records(n_segments or 100, seed)
    else:
        raise ValueError(f"unknown fixture kind: {kind!r}")
    return write_store(out_dir, records)
