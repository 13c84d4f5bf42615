"""File-backed workspace for matches, models, and analysis bundles.

Layout under the workspace root:

    matches/<match_id>.log      raw match logs (telemetry line format)
    models/<name>.model         predictor checkpoints
    bundles/<match_id>.bundle   analysis bundles (JSON)

Every entity file starts with a one-line envelope header carrying a SHA-256
of the payload; the payload bytes follow verbatim. Writes go through a temp
file plus rename, so readers never observe partial files. Single writer per
match id; any number of concurrent readers.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

ENVELOPE_VERSION = 1


class StoreError(Exception):
    pass


class NotFound(StoreError):
    pass


class CorruptEntity(StoreError):
    """Payload hash does not match the envelope (e.g. bit rot, tampering)."""


class VersionSkew(StoreError):
    """A bundle was produced by a different model than the one requested."""


def _wrap(payload: bytes) -> bytes:
    header = json.dumps(
        {
            "envelope": ENVELOPE_VERSION,
            "sha256": hashlib.sha256(payload).hexdigest(),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return header.encode("utf-8") + b"\n" + payload


def _unwrap(data: bytes, path: Path) -> bytes:
    newline = data.find(b"\n")
    if newline < 0:
        raise CorruptEntity(f"{path}: missing envelope header")
    try:
        header = json.loads(data[:newline].decode("utf-8"))
        expected = header["sha256"]
        version = header["envelope"]
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise CorruptEntity(f"{path}: unreadable envelope") from exc
    if version != ENVELOPE_VERSION:
        raise CorruptEntity(f"{path}: unknown envelope version {version!r}")
    payload = data[newline + 1 :]
    if hashlib.sha256(payload).hexdigest() != expected:
        raise CorruptEntity(f"{path}: payload hash mismatch")
    return payload


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class AnalysisBundle:
    """Everything the service needs to answer per-match analysis queries."""

    match_id: str
    model_version: str
    created_at: str  # ISO-8601
    records: list  # InconsistencyRecord JSON objects
    impacts: dict  # event_id -> list of ImpactScore JSON objects
    attributions: dict  # "slot:frame_index" -> AttributionSeries JSON
    events: list  # PriorityEvent JSON objects
    profiles: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "match_id": self.match_id,
            "model_version": self.model_version,
            "created_at": self.created_at,
            "records": self.records,
            "impacts": self.impacts,
            "attributions": self.attributions,
            "events": self.events,
            "profiles": self.profiles,
        }

    @staticmethod
    def from_json(obj: dict) -> "AnalysisBundle":
        bundle = AnalysisBundle(
            match_id=obj["match_id"],
            model_version=obj["model_version"],
            created_at=obj["created_at"],
            records=obj["records"],
            impacts=obj["impacts"],
            attributions=obj["attributions"],
            events=obj["events"],
            profiles=obj.get("profiles", {}),
        )
        record_ids = {r["id"] for r in bundle.records}
        for impacts in bundle.impacts.values():
            for imp in impacts:
                if imp["record_id"] not in record_ids:
                    raise CorruptEntity(
                        f"bundle {bundle.match_id}: impact references unknown record "
                        f"{imp['record_id']!r}"
                    )
        return bundle

    def serialize(self) -> bytes:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode("utf-8")


class Workspace:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.matches_dir = self.root / "matches"
        self.models_dir = self.root / "models"
        self.bundles_dir = self.root / "bundles"

    def ensure_dirs(self) -> None:
        for d in (self.matches_dir, self.models_dir, self.bundles_dir):
            d.mkdir(parents=True, exist_ok=True)

    # -- generic plumbing ---------------------------------------------------

    def _get(self, path: Path) -> bytes:
        if not path.exists():
            raise NotFound(str(path))
        return _unwrap(path.read_bytes(), path)

    @staticmethod
    def _list(directory: Path, suffix: str) -> list[str]:
        if not directory.exists():
            return []
        return sorted(p.name[: -len(suffix)] for p in directory.glob(f"*{suffix}"))

    # -- matches ------------------------------------------------------------

    def put_match(self, match_id: str, raw_log: bytes) -> Path:
        path = self.matches_dir / f"{match_id}.log"
        _atomic_write(path, _wrap(raw_log))
        return path

    def get_match(self, match_id: str) -> bytes:
        return self._get(self.matches_dir / f"{match_id}.log")

    def list_matches(self) -> list[str]:
        return self._list(self.matches_dir, ".log")

    # -- models -------------------------------------------------------------

    def put_model(self, name: str, checkpoint: bytes) -> Path:
        path = self.models_dir / f"{name}.model"
        _atomic_write(path, _wrap(checkpoint))
        return path

    def get_model(self, name: str) -> bytes:
        return self._get(self.models_dir / f"{name}.model")

    def list_models(self) -> list[str]:
        return self._list(self.models_dir, ".model")

    # -- bundles ------------------------------------------------------------

    def put_bundle(self, bundle: AnalysisBundle) -> Path:
        path = self.bundles_dir / f"{bundle.match_id}.bundle"
        _atomic_write(path, _wrap(bundle.serialize()))
        return path

    def get_bundle(
        self, match_id: str, expected_model_version: Optional[str] = None
    ) -> AnalysisBundle:
        payload = self._get(self.bundles_dir / f"{match_id}.bundle")
        try:
            bundle = AnalysisBundle.from_json(json.loads(payload.decode("utf-8")))
        except (ValueError, KeyError) as exc:
            raise CorruptEntity(f"bundle {match_id}: {exc}") from exc
        if expected_model_version is not None and bundle.model_version != expected_model_version:
            raise VersionSkew(
                f"bundle {match_id} built by model {bundle.model_version}, "
                f"expected {expected_model_version}"
            )
        return bundle

    def list_bundles(self) -> list[str]:
        return self._list(self.bundles_dir, ".bundle")
