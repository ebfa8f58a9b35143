"""Periodic non-autonomous dynamical systems and finite-horizon detectors
for sensitivity and equicontinuity."""

__version__ = "0.1.0"

from .corpus import build_example, corpus_ids
from .detect import DetectorParams, Verdict, dichotomy_report
from .system import PeriodicSystem, induced, iterate, orbit_segment, window_compose

__all__ = [
    "DetectorParams",
    "PeriodicSystem",
    "Verdict",
    "build_example",
    "corpus_ids",
    "dichotomy_report",
    "induced",
    "iterate",
    "orbit_segment",
    "window_compose",
    "__version__",
]
