"""Format shim from the published EEG release layout to the segment store."""

from .convert import (
    ConversionError,
    ConversionManifest,
    convert,
    synthesize,
)

__version__ = "0.1.0"

__all__ = ["ConversionError", "ConversionManifest", "convert", "synthesize"]
