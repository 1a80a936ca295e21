"""Swap-test based minority oversampling with angular outlier boosting."""

__version__ = "0.1.0"

from . import aol, data, demo, evaluate, pipeline, qdist, statevec, synth  # noqa: F401
