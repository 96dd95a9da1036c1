"""Compare the three dimensionality-reduction pipelines on one dataset.

Pipeline A prunes correlated columns, standardizes, and keeps enough
principal components for 90% explained variance. Pipeline B swaps the
final reducer for a fixed 50-component projection (a declared stand-in).
Pipeline C selects the top 100 columns by independent two-sample t-test
before standardizing and reducing to 95% explained variance.
"""

import numpy as np

from neuromark.dimred import build_pipeline
from neuromark.features import extract_feature_row
from neuromark.fixtures import make_separable_records


def main():
    records = make_separable_records(60, seed=2)
    X = np.vstack([extract_feature_row(r).values for r in records])
    y = np.array([r.label for r in records])
    print(f"feature matrix {X.shape}, labels {np.bincount(y)}")

    for kind in ("A", "B", "C"):
        pipe = build_pipeline(kind)
        Z = pipe.fit_apply(X, y)
        print(f"\npipeline {pipe.display_name}: {X.shape[1]} -> {Z.shape[1]}")
        for step in pipe.steps:
            print(f"  {type(step).__name__:22s} out_dim {step.out_dim}")


if __name__ == "__main__":
    main()
