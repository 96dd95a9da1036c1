import numpy as np
import pytest

from neuromark.ingest import SegmentRecord, write_store

MONTAGE = (
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T3", "C3", "Cz",
    "C4", "T4", "T5", "P3", "Pz", "P4", "T6", "O1", "O2",
)


def make_segment(segment_id="s0", label=0, n_samples=300, fs=300.0, seed=0,
                 data=None):
    if data is None:
        rng = np.random.default_rng(seed)
        data = rng.standard_normal((19, n_samples))
    return SegmentRecord(
        segment_id=segment_id,
        subject_id="sub01",
        page_id=1,
        product_id=1,
        label=label,
        sample_rate_hz=fs,
        channel_names=MONTAGE,
        data=np.asarray(data, dtype=float),
    )


@pytest.fixture
def montage():
    return MONTAGE


@pytest.fixture
def small_store(tmp_path):
    segs = [make_segment(f"s{i}", label=i % 2, n_samples=300, seed=i)
            for i in range(3)]
    return write_store(tmp_path / "store", segs)
