"""Small IO helpers: canonical JSON and atomic file writes."""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any

from .errors import IoFailure


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys and no insignificant whitespace.

    Equal values always produce identical bytes, which is what makes the
    persisted artifact formats byte-stable.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def atomic_write_text(path: str, text: str) -> None:
    """Write `text` to `path` via a temp file + rename, never leaving a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
