"""Acceptance suite: one test per headline criterion.

Each test prints a single PASS line (visible with ``pytest -s`` or on
failure) summarizing the measured quantity against its tolerance.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest

from neuromark import dsp
from neuromark.classical import (
    GaussianNB,
    GradientBoostedTrees,
    KNearestNeighbors,
    LogisticRegression,
    RandomForest,
    StackingClassifier,
)
from neuromark.dimred import build_pipeline
from neuromark.eval import ExperimentPlan, run_experiment
from neuromark.features import (
    FeatureConfig,
    _FilterBank,
    extract_feature_row,
    extract_node_features,
    feature_column_names,
)
from neuromark.fixtures import (
    make_imbalanced_records,
    make_separable_records,
)
from neuromark.folds import stratified_split
from neuromark.gnn import (
    ARCHITECTURE_NAMES,
    AdamW,
    EarlyStopping,
    PlateauScheduler,
    TrainConfig,
    build_architecture,
    build_model,
    make_batch,
    weighted_cross_entropy,
)
from neuromark.gnn.tensor import Parameter
from neuromark.graph import BrainGraph, graph_from_node_features, \
    pearson_adjacency
from neuromark.metrics import metrics

FEATURE_CONFIG = FeatureConfig()


def report_line(name, detail):
    print(f"PASS {name}: {detail}")


@pytest.fixture(scope="module")
def separable_data():
    records = make_separable_records(400, seed=0)
    bank = _FilterBank(FEATURE_CONFIG.filter_order)
    nodes = [extract_node_features(r, FEATURE_CONFIG, bank)
             for r in records]
    X = np.vstack([n.matrix.ravel() for n in nodes])
    y = np.array([r.label for r in records])
    return X, y, nodes


@pytest.fixture(scope="module")
def imbalanced_data():
    records = make_imbalanced_records(150, seed=0)
    bank = _FilterBank(FEATURE_CONFIG.filter_order)
    nodes = [extract_node_features(r, FEATURE_CONFIG, bank)
             for r in records]
    X = np.vstack([n.matrix.ravel() for n in nodes])
    y = np.array([r.label for r in records])
    return X, y, nodes


def test_feature_shape_identity():
    records = make_separable_records(3, seed=1)
    start = time.perf_counter()
    rows = [extract_feature_row(r, FEATURE_CONFIG) for r in records]
    elapsed = time.perf_counter() - start
    names = feature_column_names(records[0].channel_names)
    for row in rows:
        assert row.values.shape == (760,)
        assert row.column_names == names
    # channel-major, band-middle, stat-minor ordering
    assert names[0] == "Fp1_delta_fft_mean"
    assert names[7] == "Fp1_delta_psd_kurt"
    assert names[8] == "Fp1_theta_fft_mean"
    assert names[40] == "Fp2_delta_fft_mean"
    assert elapsed < 1.0
    report_line("feature-shape", f"3x760 rows in {elapsed:.2f}s (< 1 s)")


def test_dsp_suite():
    start = time.perf_counter()

    def gain(filt, freq):
        return float(filt.frequency_response(freq)[0])

    filt = dsp.design_butterworth_bandpass(3, 8.0, 13.0, 300.0)
    center = np.sqrt(8.0 * 13.0)
    assert gain(filt, center) >= 0.95
    assert gain(filt, 0.5) <= 0.01
    assert gain(filt, 60.0) <= 0.01

    rng = np.random.default_rng(0)
    x = rng.normal(size=512)
    spec = np.fft.fft(x)
    parseval_rel = abs(np.sum(x ** 2) - np.sum(np.abs(spec) ** 2) / 512) \
        / np.sum(x ** 2)
    assert parseval_rel < 1e-9

    t = np.arange(1024) / 300.0
    sine = np.sin(2 * np.pi * 10.0 * t)
    psd = dsp.welch_psd(sine, 300.0)
    peak = psd.frequencies[np.argmax(psd.values)]
    assert abs(peak - 10.0) <= psd.frequencies[1] - psd.frequencies[0]

    noisy = sine + 0.1 * rng.normal(size=sine.size)
    filtered = dsp.filtfilt(filt, noisy)
    lags = np.arange(-20, 21)
    xc = [np.dot(sine[20:-20], filtered[20 + k:filtered.size - 20 + k])
          for k in lags]
    assert lags[int(np.argmax(xc))] == 0

    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report_line("dsp-suite", f"response/Parseval/peak/lag in {elapsed:.2f}s")


def test_adjacency_oracle_equivalence():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(25):
        nf = rng.normal(size=(19, 40))
        adj = pearson_adjacency(nf)
        brute = np.ones((19, 19))
        for i in range(19):
            for j in range(19):
                if i != j:
                    xi = nf[i] - nf[i].mean()
                    xj = nf[j] - nf[j].mean()
                    brute[i, j] = (np.sum(xi * xj)
                                   / np.sqrt(np.sum(xi ** 2)
                                             * np.sum(xj ** 2)))
        worst = max(worst, float(np.max(np.abs(adj - brute))))
        assert np.array_equal(adj, adj.T)
        assert np.all(np.diag(adj) == 1.0)
    assert worst < 1e-12
    report_line("adjacency-oracle", f"25 fixtures, max |diff| {worst:.2e}")


def _two_graph_batch(rng, node_dim):
    graphs = []
    for i in range(2):
        nf = rng.normal(size=(5, node_dim))
        adj = np.abs(pearson_adjacency(nf))
        graphs.append(BrainGraph(segment_id=f"g{i}", label=i,
                                 node_features=nf, adjacency=adj,
                                 edge_transform="abs"))
    return make_batch(graphs)


def test_gradient_suite_all_architectures():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    batch = _two_graph_batch(rng, node_dim=6)
    weights = np.array([0.8, 1.2])
    step = 1e-5
    worst = 0.0
    for name in ARCHITECTURE_NAMES:
        model = build_model(build_architecture(name, node_dim=6,
                                               hidden_dim=8), seed=1)

        def loss_value():
            logits = model.forward(batch, training=False)
            return float(weighted_cross_entropy(logits, batch.labels,
                                                weights).data)

        for p in model.parameters():
            p.zero_grad()
        logits = model.forward(batch, training=False)
        weighted_cross_entropy(logits, batch.labels, weights).backward()
        for p in model.parameters():
            analytic = p.grad.copy()
            numeric = np.zeros_like(p.data)
            it = np.nditer(p.data, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = p.data[idx]
                p.data[idx] = orig + step
                hi = loss_value()
                p.data[idx] = orig - step
                lo = loss_value()
                p.data[idx] = orig
                numeric[idx] = (hi - lo) / (2 * step)
            denom = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-6)
            rel = float(np.max(np.abs(analytic - numeric) / denom))
            worst = max(worst, rel)
            assert rel < 1e-4, f"{name}/{p.name}: rel err {rel:.2e}"
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    report_line("gradient-suite",
                f"11 architectures, worst rel err {worst:.2e}, "
                f"{elapsed:.1f}s (< 120 s)")


def test_permutation_invariance_all_architectures():
    rng = np.random.default_rng(9)
    graphs = []
    for i in range(3):
        nf = rng.normal(size=(7, 6))
        adj = np.abs(pearson_adjacency(nf))
        graphs.append(BrainGraph(segment_id=f"g{i}", label=i % 2,
                                 node_features=nf, adjacency=adj,
                                 edge_transform="abs"))
    worst = 0.0
    for name in ARCHITECTURE_NAMES:
        model = build_model(build_architecture(name, node_dim=6,
                                               hidden_dim=8), seed=2)
        base = model.forward(make_batch(graphs), training=False).data
        for trial in range(10):
            perm_rng = np.random.default_rng([13, trial])
            permed = []
            for g in graphs:
                perm = perm_rng.permutation(g.n_nodes)
                permed.append(BrainGraph(
                    segment_id=g.segment_id, label=g.label,
                    node_features=g.node_features[perm],
                    adjacency=g.adjacency[np.ix_(perm, perm)],
                    edge_transform=g.edge_transform))
            out = model.forward(make_batch(permed), training=False).data
            diff = float(np.max(np.abs(out - base)))
            worst = max(worst, diff)
            assert diff <= 1e-9, f"{name}: perm diff {diff:.2e}"
    report_line("permutation-invariance",
                f"11 architectures x 10 perms, worst diff {worst:.2e}")


def test_optimizer_scheduler_early_stop_traces():
    # flat-accuracy trace: reductions at stalls 5 and 10, two total
    opt = AdamW([Parameter(np.zeros(1), "w")], lr=0.001)
    sched = PlateauScheduler(opt, factor=0.5, patience=5)
    reduced = [e for e in range(11) if sched.step(0.5)]
    assert reduced == [5, 10]
    assert sched.n_reductions == 2
    assert np.isclose(opt.lr, 0.00025)

    # flat-loss trace: best at epoch 2, stop on the 15th stall (epoch 17)
    p = Parameter(np.zeros(1), "w")
    stopper = EarlyStopping([p], patience=15)
    fired = []
    for epoch, loss in enumerate([1.0, 0.6, 0.5] + [0.5] * 20):
        p.data = np.array([float(epoch)])
        if stopper.step(loss, epoch):
            fired.append(epoch)
            break
    assert fired == [17]
    assert stopper.best_epoch == 2
    stopper.restore()
    assert p.data[0] == 2.0
    report_line("control-traces",
                "scheduler halved at stalls {5,10}; stop at epoch 17, "
                "restored epoch-2 snapshot")


def test_synthetic_end_to_end(separable_data):
    start = time.perf_counter()
    X, y, nodes = separable_data
    train_idx, test_idx = stratified_split(y, 0.2, seed=0)
    pipe = build_pipeline("A")
    Z_train = pipe.fit_apply(X[train_idx], y[train_idx])
    Z_test = pipe.apply(X[test_idx])
    y_train, y_test = y[train_idx], y[test_idx]

    logreg = LogisticRegression(l2_lambda=0.01)
    logreg.fit(Z_train, y_train)
    logreg_acc = float(np.mean(logreg.predict(Z_test) == y_test))
    assert logreg_acc >= 0.90

    base_models = [GaussianNB(), LogisticRegression(l2_lambda=0.01),
                   KNearestNeighbors(k=5),
                   GradientBoostedTrees(n_rounds=100, depth=3,
                                        learning_rate=0.1)]
    base_accs = []
    for model in base_models:
        model.fit(Z_train, y_train)
        base_accs.append(float(np.mean(model.predict(Z_test) == y_test)))
    stack = StackingClassifier(seed=0)
    stack.fit(Z_train, y_train)
    stack_acc = float(np.mean(stack.predict(Z_test) == y_test))
    assert stack_acc >= max(base_accs) - 0.02

    plan = ExperimentPlan(
        pipelines=(), classical_models=(),
        architectures=("BaselineGCN", "BaselineGAT", "BaselineSAGE"),
        seed=0, train=TrainConfig(max_epochs=40))
    voted = {r.model: r.accuracy for r in run_experiment(X, y, nodes, plan)}
    for name, acc in voted.items():
        assert acc >= 0.90, f"{name}: voted accuracy {acc:.3f}"

    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    report_line("synthetic-end-to-end",
                f"logreg {logreg_acc:.3f}, stacking {stack_acc:.3f} vs best "
                f"base {max(base_accs):.3f}, voted {voted}, "
                f"{elapsed:.0f}s (< 600 s)")


def test_imbalance_pathology(imbalanced_data):
    X, y, nodes = imbalanced_data
    train_idx, test_idx = stratified_split(y, 0.2, seed=0)
    forest = RandomForest(n_trees=100, max_depth=12, seed=0)
    forest.fit(X[train_idx], y[train_idx])
    rf_metrics = metrics(y[test_idx], forest.predict(X[test_idx]))
    assert rf_metrics.per_class[1].recall < 0.1

    plan = ExperimentPlan(pipelines=(), classical_models=(),
                          architectures=("BaselineGCN",), seed=0,
                          train=TrainConfig())
    gnn_report = run_experiment(X, y, nodes, plan)[0]
    gnn_recall = gnn_report.result.per_class[1].recall
    assert gnn_recall >= 0.3
    report_line("imbalance-pathology",
                f"unweighted forest class-1 recall "
                f"{rf_metrics.per_class[1].recall:.2f} (< 0.1); weighted "
                f"GNN class-1 recall {gnn_recall:.2f} (>= 0.3)")


def test_metric_arithmetic_exact():
    rng = np.random.default_rng(123)
    for _ in range(100):
        n = int(rng.integers(4, 60))
        y_true = rng.integers(0, 2, size=n)
        y_pred = rng.integers(0, 2, size=n)
        m = metrics(y_true, y_pred)
        conf = np.zeros((2, 2))
        for t, p in zip(y_true, y_pred):
            conf[t, p] += 1
        assert np.array_equal(m.confusion, conf)
        assert m.accuracy == np.trace(conf) / n
        for c in (0, 1):
            tp = conf[c, c]
            fp = conf[1 - c, c]
            fn = conf[c, 1 - c]
            prec = tp / (tp + fp) if tp + fp else 0.0
            rec = tp / (tp + fn) if tp + fn else 0.0
            f1 = (2 * prec * rec / (prec + rec)) if prec + rec else 0.0
            assert m.per_class[c].precision == prec
            assert m.per_class[c].recall == rec
            assert m.per_class[c].f1 == f1
    report_line("metric-arithmetic", "100 random fixtures, exact agreement")


NEUMA_ROOT = os.environ.get("NEUMA_STORE", "")


@pytest.mark.skipif(not (NEUMA_ROOT and Path(NEUMA_ROOT).exists()),
                    reason="real dataset store not available "
                           "(set NEUMA_STORE to run)")
def test_real_dataset_integration():
    from neuromark.features import build_feature_matrix
    from neuromark.ingest import filter_min_duration, iter_segments, \
        load_store

    store = load_store(NEUMA_ROOT)
    X, y, ids, _ = build_feature_matrix(store)
    bank = _FilterBank(FEATURE_CONFIG.filter_order)
    segments = filter_min_duration(list(iter_segments(store)),
                                   FEATURE_CONFIG.min_duration_s)
    nodes = [extract_node_features(s, FEATURE_CONFIG, bank)
             for s in segments]
    plan = ExperimentPlan(pipelines=("A",),
                          classical_models=("logreg", "knn", "gaussian_nb",
                                            "random_forest"),
                          seed=0)
    reports = run_experiment(X, y, nodes, plan)
    for r in reports:
        assert 0.55 <= r.accuracy <= 0.85
    gnn_plan = ExperimentPlan(pipelines=(), classical_models=(),
                              architectures=("BaselineGCN",), seed=0)
    for r in run_experiment(X, y, nodes, gnn_plan):
        assert 0.55 <= r.accuracy <= 0.75
    report_line("real-dataset", "qualitative ranges hold")
