"""Provenance manifests written next to each subcommand's outputs."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    config_hash: str = ""
    tool_version: str = __version__
    started: str = ""
    finished: str = ""

    @classmethod
    def begin(cls, subcommand: str, config: dict) -> "RunManifest":
        return cls(subcommand, config=config, config_hash=config_hash(config), started=_now())

    def add_input(self, path: str | Path | None) -> None:
        if path is not None and Path(path).is_file():
            self.inputs[str(path)] = sha256_file(path)

    def add_output(self, path: str | Path) -> None:
        self.outputs[str(path)] = sha256_file(path)

    def write(self, directory: str | Path) -> Path:
        self.finished = _now()
        target = Path(directory) / f"{self.subcommand}.manifest.json"
        target.write_text(json.dumps(asdict(self), indent=2, default=str) + "\n", encoding="utf-8")
        return target


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()
