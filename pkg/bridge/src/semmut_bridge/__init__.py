"""Adapter package: real classifier checkpoints -> semmut prediction JSONL."""

__version__ = "0.1.0"
