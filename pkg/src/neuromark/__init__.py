"""EEG purchase-intent classification library.

Spectral feature extraction, dimensionality-reduction pipelines, native
classical classifiers with stacking, Pearson-correlation brain graphs, and
a dense-tensor graph neural network engine with eleven architectures,
evaluated under a stratified K-fold majority-voting protocol.
"""

__version__ = "0.1.0"
