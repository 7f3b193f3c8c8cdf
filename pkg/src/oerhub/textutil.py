"""Tokenization shared by the index, the gloss machinery, and snippets."""

import re

# Alphanumeric runs; underscore is a separator (multiword lemmas split apart).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize_with_offsets(text: str) -> list[tuple[str, int, int]]:
    """Lowercase tokens with (start, end) character offsets into ``text``."""
    return [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> list[str]:
    """Lowercase tokens, offsets discarded."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]
