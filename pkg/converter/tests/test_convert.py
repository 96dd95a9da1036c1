"""Converter tests; emitted stores are validated through the consumer's
published store reader."""

import numpy as np
import pytest

from neuma_convert import ConversionError, ConversionManifest, convert, \
    synthesize
from neuma_convert.cli import main

from neuromark.ingest import load_store

MONTAGE = ("Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
           "T3", "C3", "Cz", "C4", "T4",
           "T5", "P3", "Pz", "P4", "T6", "O1", "O2")


def write_source(root, subjects=("sub-00", "sub-01"), products=3,
                 n_samples=40, seed=0, montage=MONTAGE):
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    (root / "montage.txt").write_text("\n".join(montage) + "\n")
    for subject in subjects:
        sdir = root / subject
        sdir.mkdir()
        lines = ["page_id,product_id,label"]
        for p in range(products):
            label = "Buy" if p == 0 else "NoBuy"
            lines.append(f"0,{p},{label}")
            data = rng.normal(size=(n_samples, len(montage)))
            np.savetxt(sdir / f"0_{p}.csv", data, delimiter=",",
                       fmt="%.10g")
        (sdir / "products.csv").write_text("\n".join(lines) + "\n")
    return root


def test_convert_emits_store_that_passes_ingest(tmp_path):
    src = write_source(tmp_path / "src")
    manifest = convert(src, tmp_path / "out")
    assert manifest.n_segments == 6
    assert manifest.subjects == ("sub-00", "sub-01")
    assert manifest.buy_counts == {"sub-00": 1, "sub-01": 1}
    assert manifest.nobuy_counts == {"sub-00": 2, "sub-01": 2}
    store = load_store(tmp_path / "out")
    assert len(store.rows) == 6
    assert store.montage == MONTAGE
    assert store.label_counts() == {0: 4, 1: 2}
    for row in store.rows:
        assert row.sample_rate_hz == 300.0
        assert row.n_samples == 40


def test_convert_preserves_sample_values(tmp_path):
    src = write_source(tmp_path / "src", subjects=("sub-00",), products=1)
    convert(src, tmp_path / "out")
    original = np.loadtxt(src / "sub-00" / "0_0.csv", delimiter=",")
    emitted = np.loadtxt(tmp_path / "out" / "data" / "sub-00_0_0.csv",
                         delimiter=",")
    assert np.array_equal(original, emitted)


def test_subject_filter_restricts_manifest(tmp_path):
    src = write_source(tmp_path / "src")
    manifest = convert(src, tmp_path / "out", subjects=["sub-01"])
    assert manifest.subjects == ("sub-01",)
    store = load_store(tmp_path / "out")
    assert {row.subject_id for row in store.rows} == {"sub-01"}


def test_unknown_subject_rejected(tmp_path):
    src = write_source(tmp_path / "src")
    with pytest.raises(ConversionError, match="sub-99"):
        convert(src, tmp_path / "out", subjects=["sub-99"])


def test_missing_source_and_montage_fail_loudly(tmp_path):
    with pytest.raises(ConversionError, match="source directory"):
        convert(tmp_path / "nope", tmp_path / "out")
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(ConversionError, match="montage"):
        convert(empty, tmp_path / "out")


def test_wrong_channel_count_rejected(tmp_path):
    src = write_source(tmp_path / "src", subjects=("sub-00",), products=1,
                       montage=MONTAGE[:18])
    with pytest.raises(ConversionError, match="19"):
        convert(src, tmp_path / "out")


def test_bad_label_rejected_with_location(tmp_path):
    src = write_source(tmp_path / "src", subjects=("sub-00",), products=1)
    products = src / "sub-00" / "products.csv"
    products.write_text("page_id,product_id,label\n0,0,Maybe\n")
    with pytest.raises(ConversionError, match="line 2.*Maybe"):
        convert(src, tmp_path / "out")


def test_missing_eeg_file_rejected(tmp_path):
    src = write_source(tmp_path / "src", subjects=("sub-00",), products=1)
    (src / "sub-00" / "0_0.csv").unlink()
    with pytest.raises(ConversionError, match="missing EEG file"):
        convert(src, tmp_path / "out")


def test_conversion_is_deterministic(tmp_path):
    src = write_source(tmp_path / "src")
    convert(src, tmp_path / "a")
    convert(src, tmp_path / "b")
    for name in ("manifest.csv", "montage.txt"):
        assert (tmp_path / "a" / name).read_bytes() \
            == (tmp_path / "b" / name).read_bytes()


def test_synthetic_store_loads_cleanly(tmp_path):
    manifest = synthesize(tmp_path / "syn", n_segments=48, seed=5)
    assert manifest.n_segments == 48
    store = load_store(tmp_path / "syn")
    assert len(store.rows) == 48
    assert set(store.label_counts()) <= {0, 1}


def test_synthetic_is_seed_deterministic(tmp_path):
    synthesize(tmp_path / "a", n_segments=10, seed=3)
    synthesize(tmp_path / "b", n_segments=10, seed=3)
    assert (tmp_path / "a" / "manifest.csv").read_bytes() \
        == (tmp_path / "b" / "manifest.csv").read_bytes()


def test_manifest_count_invariant_enforced():
    with pytest.raises(ConversionError, match="counts do not sum"):
        ConversionManifest(source="x", subjects=("s",), n_segments=3,
                           buy_counts={"s": 1}, nobuy_counts={"s": 1})


def test_cli_convert_and_synthetic(tmp_path, capsys):
    src = write_source(tmp_path / "src")
    assert main([str(src), str(tmp_path / "out")]) == 0
    assert "wrote 6 segments" in capsys.readouterr().out
    assert main(["-", str(tmp_path / "syn"), "--synthetic", "12",
                 "--seed", "1"]) == 0
    assert load_store(tmp_path / "syn").rows


def test_cli_errors_exit_2(tmp_path, capsys):
    assert main([str(tmp_path / "nope"), str(tmp_path / "out")]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["-", str(tmp_path / "out")]) == 2
    assert "--synthetic" in capsys.readouterr().err
