"""key=value manifest formatting and parsing."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from configs.run_models import RunManifest

__all__ = ["format_manifest", "parse_manifest", "write_manifest", "read_manifest"]


def _line(field: str, value: str) -> str:
    """Return one correctly formatted *single* manifest line."""

    return f"{field}={value}\n"


def _render(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_render(item) for item in value)
    return str(value)


def format_manifest(manifest: RunManifest) -> str:
    lines: list[str] = []
    for field, value in manifest.model_dump().items():
        if isinstance(value, dict):
            for key, item in sorted(value.items()):
                lines.append(_line(f"{field}.{key}", _render(item)))
        else:
            lines.append(_line(field, _render(value)))
    return "".join(lines)


def parse_manifest(text: str) -> RunManifest:
    raw: dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"manifest line {number} is not key=value: {line!r}")
        key, value = line.split("=", 1)
        if "." in key:
            field, sub = key.split(".", 1)
            raw.setdefault(field, {})[sub] = value
        else:
            raw[key] = value
    return RunManifest.model_validate(raw)


def write_manifest(path: Path, manifest: RunManifest) -> None:
    tmp = path.with_suffix(".tmp")
    tmp.write_text(format_manifest(manifest))
    tmp.replace(path)


def read_manifest(path: Path) -> RunManifest:
    return parse_manifest(path.read_text())
