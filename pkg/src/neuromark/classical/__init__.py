"""Native classical classifiers, grid search, and the stacking ensemble.

Every classifier exposes fit(X, y), predict(X) -> labels in {0, 1}, and
predict_proba(X) -> (n, 2) probabilities summing to 1.
"""

from .bayes import GaussianNB
from .linear import LogisticRegression
from .neighbors import KNearestNeighbors
from .search import ClassifierSpec, DEFAULT_GRIDS, grid_search, make_classifier
from .stacking import StackingClassifier
from .trees import GradientBoostedTrees, RandomForest

__all__ = [
    "ClassifierSpec",
    "DEFAULT_GRIDS",
    "GaussianNB",
    "GradientBoostedTrees",
    "KNearestNeighbors",
    "LogisticRegression",
    "RandomForest",
    "StackingClassifier",
    "grid_search",
    "make_classifier",
]
