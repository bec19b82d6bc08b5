"""On-disk formats: catalog levels, summaries, realization files."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any

from . import __version__
from .equivalence import KEY_VERSION
from .generator import ClassCatalog

DEFAULT_OUT = "zscan-out"


def output_dir(cli_value: str | None) -> Path:
    if cli_value:
        return Path(cli_value)
    return Path(os.environ.get("ZSCAN_OUT") or DEFAULT_OUT)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def header(seed: int, config: dict) -> dict:
    return {
        "tool": "zscan",
        "version": __version__,
        "key_format": KEY_VERSION,
        "seed": seed,
        "config": config,
        "config_hash": config_hash(config),
    }


def dumps(data: Any) -> str:
    return json.dumps(data, indent=1, ensure_ascii=False) + "\n"


def write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps(data), encoding="utf-8")
    tmp.replace(path)


def read_json(path: Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def level_path(out: Path, j: int) -> Path:
    return out / f"classes-{j}.json"


def write_level(out: Path, catalog: ClassCatalog, head: dict) -> Path:
    path = level_path(out, catalog.n)
    write_json(path, {"header": head, **catalog.to_json()})
    return path


def read_level(path: Path, expect_hash: str | None = None) -> ClassCatalog | None:
    """Load a level file, or None when it is missing, unreadable or stale."""
    try:
        data = read_json(path)
        if expect_hash is not None and data.get("header", {}).get("config_hash") != expect_hash:
            return None
        return ClassCatalog.from_json(data)
    except (OSError, ValueError, KeyError, TypeError):
        return None


def key_level(key: str) -> int:
    if not key.startswith("n="):
        raise ValueError(f"not a class key: {key!r}")
    return int(key[2:].split(":", 1)[0])


def key_hash(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:12]
