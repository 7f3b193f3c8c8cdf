"""Plain key/value configuration file support."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError


@dataclass
class Config:
    listen_addr: str = "127.0.0.1:8080"
    data_dir: str = "./data"
    wordnet_dir: str = "./fixtures/miniwn"
    fixture_dir: str = "./fixtures/sources"
    alpha: float = 0.5
    page_size: int = 10
    session_ttl_hours: int = 24
    max_upload_mb: int = 50


def load_config(path) -> Config:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    cfg = Config()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValidationError(f"config line {line_no}: expected key=value")
        key = key.strip()
        value = value.strip()
        if not hasattr(cfg, key):
            raise ValidationError(f"config line {line_no}: unknown key {key!r}")
        current = getattr(cfg, key)
        try:
            if isinstance(current, bool):
                setattr(cfg, key, value.lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(cfg, key, int(value))
            elif isinstance(current, float):
                setattr(cfg, key, float(value))
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ValidationError(f"config line {line_no}: {exc}") from exc
    return cfg
