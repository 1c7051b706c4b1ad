"""On-disk cache of exact results, keyed by (kind, g, n, p, basis, format version).

Each entry is one JSON file holding the canonical payload and its sha256.
Writes go to a temporary file in the same directory followed by an atomic
rename, so concurrent writers never expose a partial file.  Entries with a
different format version or a bad checksum are ignored.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

FORMAT_VERSION = 1
KINDS = ("V", "T", "P", "omega", "Tgnp", "Hp", "intersection")
ENV_VAR = "WP_CACHE_DIR"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def checksum(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(Path.home(), ".cache")
    return Path(base) / "tightwp"


class DiskCache:
    def __init__(self, root: str | os.PathLike | None = None, version: int = FORMAT_VERSION):
        self.root = Path(root) if root is not None else default_dir()
        self.version = version

    @staticmethod
    def key(kind: str, g: int, n: int, p=None, basis: str = "-") -> dict:
        if kind not in KINDS:
            raise ValueError(f"unknown cache kind {kind!r}")
        return {"kind": kind, "g": int(g), "n": int(n), "p": p, "basis": basis}

    def path(self, key: dict) -> Path:
        p = key["p"]
        ptag = "" if p is None else "-p" + (str(p) if isinstance(p, int) else checksum(p)[:16])
        name = f"{key['kind']}-g{key['g']}-n{key['n']}{ptag}-{key['basis']}-v{self.version}.json"
        return self.root / name

    def get(self, key: dict):
        path = self.path(key)
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if not isinstance(entry, dict) or entry.get("version") != self.version:
            return None
        if entry.get("key") != key or entry.get("checksum") != checksum(entry.get("payload")):
            return None
        return entry["payload"]

    def put(self, key: dict, payload) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "version": self.version, "checksum": checksum(payload),
                 "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(canonical_json(entry))
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def fetch(self, key: dict, compute):
        """Cached payload for ``key``, computing and storing it on a miss."""
        hit = self.get(key)
        if hit is not None:
            return hit
        payload = json.loads(canonical_json(compute()))
        self.put(key, payload)
        return payload

    def clear(self) -> int:
        removed = 0
        if self.root.is_dir():
            for f in self.root.glob("*-v*.json"):
                f.unlink()
                removed += 1
        return removed


class NullCache(DiskCache):
    """Same interface, stores nothing."""

    def __init__(self):
        super().__init__(root=os.devnull)

    def get(self, key):
        return None

    def put(self, key, payload):
        pass

    def clear(self) -> int:
        return 0
