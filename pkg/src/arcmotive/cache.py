"""On-disk result cache for the command line front end.

Entries are JSON files keyed by (module, operation, bounds, artifact
version) and carry a content digest; a mismatching digest means the entry
is recomputed, not trusted.  Writes go through a temporary file and an
atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from . import __version__


def _digest(payload_text: str) -> str:
    return hashlib.sha256(payload_text.encode("utf-8")).hexdigest()


def cache_key(module: str, op: str, bounds: dict) -> str:
    flat = ",".join(f"{k}={bounds[k]}" for k in sorted(bounds))
    return f"{module}-{op}-{flat}-v{__version__}"


def cache_path(directory: str, key: str) -> str:
    return os.path.join(directory, key + ".json")


def load(directory: str | None, key: str):
    """Return the cached payload, or None when absent or corrupt."""
    if not directory:
        return None
    path = cache_path(directory, key)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            envelope = json.load(fh)
        payload_text = envelope["payload"]
        if envelope.get("digest") != _digest(payload_text):
            return None
        return json.loads(payload_text)
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store(directory: str | None, key: str, payload) -> None:
    if not directory:
        return
    os.makedirs(directory, exist_ok=True)
    payload_text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    envelope = {"key": key, "digest": _digest(payload_text), "payload": payload_text}
    path = cache_path(directory, key)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(envelope, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
