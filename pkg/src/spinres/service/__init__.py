"""HTTP service exposing the benchmark pipeline."""

from .app import app

__all__ = ["app"]
