"""File-backed, append-oriented, contract-fronted persistence.

One JSON object per line, UTF-8, newline terminated. Single writer per
store (lock file), any number of readers; readers see a consistent prefix.
"""

from __future__ import annotations

import json
import os
import shutil
import time
from dataclasses import dataclass, field
from pathlib import Path

from .contracts import (
    LABEL_CONTRACT,
    METADATA_CONTRACT,
    MODEL_CONTRACT,
    PREDICTION_CONTRACT,
    RAW_DATA_CONTRACT,
    SNAPSHOT_CONTRACT,
    TELEMETRY_CONTRACT,
    DataContract,
    Violation,
    checksum_file,
    fnv1a_64,
    validate_model_dir,
    validate_record,
)
from .domain import GeoFix, filter_fixes, AreaOfInterest

STALE_LOCK_S = 600

STORE_FILES = {
    "raw": "raw.jsonl",
    "labels": "labels.jsonl",
    "predictions": "predictions.jsonl",
    "telemetry": "telemetry.jsonl",
    "metadata": "metadata.jsonl",
    "objects": "objects.jsonl",
}

STORE_CONTRACTS: dict[str, DataContract | None] = {
    "raw": RAW_DATA_CONTRACT,
    "labels": LABEL_CONTRACT,
    "predictions": PREDICTION_CONTRACT,
    "telemetry": TELEMETRY_CONTRACT,
    "metadata": METADATA_CONTRACT,
    "objects": None,  # auxiliary store, tolerant
}


class StoreError(Exception):
    pass


class BusyError(StoreError):
    """Another writer holds the store lock."""


class NotFoundError(StoreError):
    pass


class IntegrityError(StoreError):
    """Checksum or consistency failure."""


class ContractViolationError(StoreError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.as_line() for v in violations))


def data_dir(root: str | Path | None = None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get("OG_DATA_DIR")
    if not env:
        raise StoreError("no store root: pass a path or set OG_DATA_DIR")
    return Path(env)


def dumps_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


@dataclass
class ScanSummary:
    records: list = field(default_factory=list)
    skipped: int = 0

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


class StoreHandle:
    """Handle on one JSONL store; append mode holds an exclusive writer lock."""

    def __init__(self, root: Path, kind: str, mode: str = "read", break_stale: bool = False):
        if kind not in STORE_FILES:
            raise StoreError(f"unknown store kind {kind!r}")
        if mode not in ("read", "append"):
            raise StoreError(f"unknown mode {mode!r}")
        self.root = Path(root)
        self.kind = kind
        self.mode = mode
        self.contract = STORE_CONTRACTS[kind]
        self.path = self.root / STORE_FILES[kind]
        self.dropped_events = 0
        self._lock_path = self.path.with_suffix(".lock")
        self._locked = False
        if mode == "append":
            self.root.mkdir(parents=True, exist_ok=True)
            _acquire_lock(self._lock_path, break_stale=break_stale)
            self._locked = True

    def close(self):
        if self._locked:
            _release_lock(self._lock_path)
            self._locked = False

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def _acquire_lock(lock_path: Path, break_stale: bool = False):
    lock_path.parent.mkdir(parents=True, exist_ok=True)
    for _ in range(2):
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            try:
                info = json.loads(lock_path.read_text(encoding="utf-8"))
                age = time.time() - info.get("acquired_ts", 0)
            except (OSError, json.JSONDecodeError):
                age = float("inf")
            if break_stale and age > STALE_LOCK_S:
                lock_path.unlink(missing_ok=True)
                continue
            raise BusyError(f"store locked by pid {_lock_owner(lock_path)} ({lock_path})")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump({"pid": os.getpid(), "acquired_ts": time.time()}, fh)
        return
    raise BusyError(f"could not break stale lock {lock_path}")


def _lock_owner(lock_path: Path):
    try:
        return json.loads(lock_path.read_text(encoding="utf-8")).get("pid")
    except (OSError, json.JSONDecodeError):
        return None


def _release_lock(lock_path: Path):
    lock_path.unlink(missing_ok=True)


def open_store(root: str | Path | None, kind: str, mode: str = "read",
               break_stale: bool = False) -> StoreHandle:
    return StoreHandle(data_dir(root), kind, mode, break_stale=break_stale)


def append(handle: StoreHandle, records: list[dict]) -> int:
    """Append a batch atomically; a single non-conforming record rejects the batch."""
    if handle.mode != "append":
        raise StoreError("handle not opened for append")
    if handle.contract is not None:
        violations = []
        for i, rec in enumerate(records):
            violations.extend(validate_record(handle.contract, rec, location=f"record[{i}]"))
        if violations:
            raise ContractViolationError(violations)
    lines = "".join(dumps_record(r) + "\n" for r in records)
    with open(handle.path, "a", encoding="utf-8") as fh:
        fh.write(lines)
        fh.flush()
        os.fsync(fh.fileno())
    return len(records)


def append_jsonl(path: Path, records: list[dict]) -> int:
    """Raw line append without a contract (snapshot internals)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write("".join(dumps_record(r) + "\n" for r in records))
        fh.flush()
        os.fsync(fh.fileno())
    return len(records)


def scan_jsonl(path: Path) -> ScanSummary:
    out = ScanSummary()
    if not path.exists():
        return out
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            if not raw.endswith("\n"):
                out.skipped += 1  # truncated final line
                continue
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                out.skipped += 1
                continue
            if not isinstance(rec, dict):
                out.skipped += 1
                continue
            out.records.append(rec)
    return out


def scan(handle: StoreHandle, aoi: AreaOfInterest | None = None,
         object_id: str | None = None) -> ScanSummary:
    """Records in append order, optionally filtered; corrupt lines skipped and counted."""
    result = scan_jsonl(handle.path)
    records = result.records
    if object_id is not None:
        records = [r for r in records if r.get("object_id") == object_id]
    if aoi is not None:
        fixes = [GeoFix.from_record(r) for r in records]
        keep = {id(f) for f in filter_fixes(fixes, aoi)}
        records = [r for f, r in zip(fixes, records) if id(f) in keep]
    return ScanSummary(records=records, skipped=result.skipped)


# --- snapshots (Data Store) -------------------------------------------------

def snapshot_dir(root: str | Path | None, snapshot_id: str) -> Path:
    return data_dir(root) / "data" / snapshot_id


def write_snapshot(root: str | Path | None, snapshot_id: str, fixes: list[dict],
                   labels: list[dict], manifest: dict) -> str:
    base = snapshot_dir(root, snapshot_id)
    if base.exists():
        shutil.rmtree(base)
    base.mkdir(parents=True)
    violations = []
    for i, rec in enumerate(fixes):
        violations.extend(validate_record(SNAPSHOT_CONTRACT, rec, location=f"train[{i}]"))
    for i, rec in enumerate(labels):
        violations.extend(validate_record(LABEL_CONTRACT, rec, location=f"labels[{i}]"))
    if violations:
        shutil.rmtree(base)
        raise ContractViolationError(violations)
    append_jsonl(base / "train.jsonl", fixes)
    append_jsonl(base / "labels.jsonl", labels)
    manifest = dict(manifest)
    manifest["snapshot_id"] = snapshot_id
    manifest["record_count"] = len(fixes)
    manifest["checksum"] = checksum_file(base / "train.jsonl")
    (base / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return snapshot_id


def read_snapshot(root: str | Path | None, snapshot_id: str) -> tuple[list[dict], list[dict], dict]:
    base = snapshot_dir(root, snapshot_id)
    if not base.is_dir():
        raise NotFoundError(f"snapshot {snapshot_id!r} not found")
    manifest = json.loads((base / "manifest.json").read_text(encoding="utf-8"))
    fixes = scan_jsonl(base / "train.jsonl").records
    labels = scan_jsonl(base / "labels.jsonl").records
    return fixes, labels, manifest


def list_snapshots(root: str | Path | None) -> list[str]:
    base = data_dir(root) / "data"
    if not base.is_dir():
        return []
    return sorted(p.name for p in base.iterdir() if (p / "manifest.json").is_file())


# --- model registry ----------------------------------------------------------

def registry_dir(root: str | Path | None) -> Path:
    return data_dir(root) / "registry"


def _versions(reg: Path, name: str) -> list[int]:
    base = reg / name
    if not base.is_dir():
        return []
    return sorted(int(p.name) for p in base.iterdir() if p.name.isdigit())


def register_model(root: str | Path | None, manifest: dict, params: dict,
                   lineage: dict) -> str:
    """Write a new registry entry; version = previous max + 1; rollback on checksum failure."""
    if not lineage.get("training_run_id") or not lineage.get("data_snapshot_id"):
        raise StoreError("lineage requires training_run_id and data_snapshot_id")
    reg = registry_dir(root)
    name = manifest["name"]
    lock = reg / "registry.lock"
    _acquire_lock(lock)
    try:
        version = (max(_versions(reg, name)) if _versions(reg, name) else 0) + 1
        entry = reg / name / str(version)
        entry.mkdir(parents=True)
        params_path = entry / "params.json"
        params_path.write_text(
            json.dumps(params, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
        )
        full = dict(manifest)
        full["version"] = version
        full["params_checksum"] = checksum_file(params_path)
        full["created_ts"] = int(time.time())
        full["lineage"] = dict(lineage)
        (entry / "manifest.json").write_text(
            json.dumps(full, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        # verify before committing: re-read and recompute
        reread = json.loads((entry / "manifest.json").read_text(encoding="utf-8"))
        if checksum_file(params_path) != reread["params_checksum"]:
            shutil.rmtree(entry)
            raise IntegrityError(f"checksum mismatch registering {name} v{version}, rolled back")
        violations = validate_model_dir(MODEL_CONTRACT, entry)
        if violations:
            shutil.rmtree(entry)
            raise ContractViolationError(violations)
        return f"{name}:{version}"
    finally:
        _release_lock(lock)


@dataclass(frozen=True)
class ModelRegistryEntry:
    model_id: str
    name: str
    version: int
    manifest: dict
    params: dict
    path: Path


def resolve_model(root: str | Path | None, name: str,
                  version: int | str = "latest") -> ModelRegistryEntry:
    reg = registry_dir(root)
    versions = _versions(reg, name)
    if not versions:
        raise NotFoundError(f"no registered model named {name!r}")
    if version == "latest":
        v = versions[-1]
    else:
        v = int(version)
        if v not in versions:
            raise NotFoundError(f"model {name!r} has no version {v}")
    entry = reg / name / str(v)
    manifest = json.loads((entry / "manifest.json").read_text(encoding="utf-8"))
    params_path = entry / "params.json"
    if checksum_file(params_path) != manifest.get("params_checksum"):
        raise IntegrityError(f"checksum failure loading {name} v{v}")
    params = json.loads(params_path.read_text(encoding="utf-8"))
    return ModelRegistryEntry(
        model_id=f"{name}:{v}", name=name, version=v, manifest=manifest,
        params=params, path=entry,
    )


def list_models(root: str | Path | None) -> list[str]:
    reg = registry_dir(root)
    if not reg.is_dir():
        return []
    out = []
    for name_dir in sorted(p for p in reg.iterdir() if p.is_dir()):
        for v in _versions(reg, name_dir.name):
            out.append(f"{name_dir.name}:{v}")
    return out


# --- telemetry ---------------------------------------------------------------

def record_telemetry(handle: StoreHandle, event: dict) -> None:
    """Append one telemetry event; failures never propagate to the caller."""
    try:
        append(handle, [event])
    except Exception:
        handle.dropped_events += 1
