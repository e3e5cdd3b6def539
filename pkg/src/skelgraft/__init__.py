"""skelgraft: skeleton-guided repository translation and per-test evaluation.

Pipeline stages: parse -> skeletonize -> map -> instrument/trace -> graft ->
build/test -> score -> report, plus an LLM translation loop that feeds
diagnostics back across iterations.
"""

__version__ = "0.1.0"
