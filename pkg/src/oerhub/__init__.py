"""Federated search, collaborative resource sharing, and transcript
annotation platform with a WordNet-backed tooltip service."""

__version__ = "0.1.0"
