import json
import logging
import os
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

SETTINGS_PATH = Path("config/settings.json")


def _cast(value: str):
    text = (value or "").strip()
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    try:
        return int(text) if not any(ch in text for ch in ".eE") else float(text)
    except ValueError:
        return text


def _read_overrides(path: Path) -> dict:
    if not path.exists():
        return {}
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, ValueError):
        return {}
    return data if isinstance(data, dict) else {}


def load_config() -> dict:
    """Load .env, then override with the local settings file when present."""
    load_dotenv(".env")

    cfg = {
        # Runtime
        "LOG_LEVEL": os.getenv("LOG_LEVEL", "INFO"),
        "VILENKIN_FORMAT": os.getenv("VILENKIN_FORMAT", "text"),

        # Enumeration and table sizes
        "VILENKIN_DEPTH": _cast(os.getenv("VILENKIN_DEPTH", "24")),
        "VILENKIN_REGION": _cast(os.getenv("VILENKIN_REGION", "3")),
        "VILENKIN_RESOLUTION": _cast(os.getenv("VILENKIN_RESOLUTION", "4")),
        "VILENKIN_MAX_CELLS": _cast(os.getenv("VILENKIN_MAX_CELLS", "1048576")),

        # Float mask backend
        "VILENKIN_FLOAT_TOLERANCE": _cast(os.getenv("VILENKIN_FLOAT_TOLERANCE", "1e-9")),
    }

    settings = Path(os.getenv("VILENKIN_SETTINGS_PATH", str(SETTINGS_PATH)))
    for k, v in _read_overrides(settings).items():
        if k in cfg:
            cfg[k] = v
        else:
            logger.warning("ignoring unknown key %r in %s", k, settings)

    return cfg


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Literal["verify", "construct", "mask", "export"]
    subcommand: str
    inputs: list[Path] = Field(default_factory=list)
    depth: int = Field(default=24, ge=0)
    region: int = Field(default=3, ge=0)
    resolution: int | None = Field(default=None, ge=0)
    n: int = Field(default=0, ge=0)
    output_format: Literal["text", "json"] = "text"
    out: Path | None = None
    closure_candidate: Path | None = None
    from_wavelet_set: Path | None = None
    tolerance: float = Field(default=1e-9, gt=0)
    max_cells: int = Field(default=1 << 20, gt=0)
