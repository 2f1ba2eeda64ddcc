"""Data acquisition: simulated sensors, crawlers behind an anti-corruption layer, provider labels."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .contracts import CRAWLER_CONTRACT, LABEL_CONTRACT, Violation, validate_record
from . import stores
from .simulate import make_tracks


class IngestionError(Exception):
    pass


class FormatError(IngestionError):
    """Payload wholly unparseable."""


class RetriableSourceError(IngestionError):
    """Transport failure talking to an upstream source; carries the source id."""

    def __init__(self, source_id: str, cause: Exception | None = None):
        self.source_id = source_id
        super().__init__(f"source {source_id!r} transport failure: {cause}")


@dataclass(frozen=True)
class Label:
    object_id: str
    start_ts: int
    end_ts: int
    verdict: str  # anomalous | normal
    annotator: str  # provider | investigator
    kind: str | None = None
    note: str | None = None

    def __post_init__(self):
        if self.start_ts > self.end_ts:
            raise ValueError("label window start > end")
        if self.verdict == "anomalous" and not self.kind:
            raise ValueError("anomalous label requires a kind")

    def to_record(self) -> dict:
        rec = {
            "object_id": self.object_id,
            "start_ts": self.start_ts,
            "end_ts": self.end_ts,
            "verdict": self.verdict,
            "annotator": self.annotator,
        }
        if self.kind is not None:
            rec["kind"] = self.kind
        if self.note is not None:
            rec["note"] = self.note
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Label":
        return cls(
            object_id=rec["object_id"],
            start_ts=int(rec["start_ts"]),
            end_ts=int(rec["end_ts"]),
            verdict=rec["verdict"],
            annotator=rec["annotator"],
            kind=rec.get("kind"),
            note=rec.get("note"),
        )


@dataclass(frozen=True)
class SourceConfig:
    source_id: str
    kind: str  # provider | sensor | crawler
    endpoint_or_seed: str | int = 0
    poll_interval_s: int = 60
    enabled: bool = True
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("provider", "sensor", "crawler"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.poll_interval_s < 1:
            raise ValueError("poll_interval_s must be >= 1")


def simulate_sensor_batch(config: SourceConfig, rng_seed: int, n_objects: int,
                          duration_s: int) -> list[dict]:
    """Deterministic simulated sensor fixes, one per object per 60 s, inclusive endpoints."""
    if n_objects < 1:
        raise ValueError("n_objects must be >= 1")
    tracks = make_tracks(rng_seed, n_objects, duration_s,
                         id_prefix=config.params.get("id_prefix", "sns"))
    records = []
    for t in tracks:
        records.extend(t.to_records(source="sensor"))
    return records


def object_records(tracks) -> list[dict]:
    return [
        {"object_id": t.object_id, "object_type": t.object_type, "metadata": t.metadata}
        for t in tracks
    ]


@dataclass
class CrawlResult:
    fixes: list[dict]
    dropped: int
    violations: list[Violation] = field(default_factory=list)


Fetcher = Callable[[str], object]


def crawl_source(config: SourceConfig, fetcher: Fetcher) -> CrawlResult:
    """Fetch and translate upstream documents, dropping anything off-contract.

    Never raises on malformed upstream data; transport failures raise
    RetriableSourceError so a cycle can retry later.
    """
    try:
        document = fetcher(str(config.endpoint_or_seed))
    except Exception as exc:
        raise RetriableSourceError(config.source_id, exc) from exc
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError:
            return CrawlResult(fixes=[], dropped=1)
    if not isinstance(document, list):
        return CrawlResult(fixes=[], dropped=1)
    fixes = []
    dropped = 0
    all_violations = []
    for i, rec in enumerate(document):
        violations = validate_record(CRAWLER_CONTRACT, rec, location=f"upstream[{i}]")
        if violations:
            dropped += 1
            all_violations.extend(violations)
            continue
        fixes.append(
            {
                "object_id": rec["id"],
                "lat": rec["lat"],
                "lon": rec["lon"],
                "timestamp": int(rec["ts"]),
                "source": "crawler",
                "object_type": rec.get("type", "unidentified"),
                **({"sog": rec["sog"]} if rec.get("sog") is not None else {}),
                **({"cog": rec["cog"]} if rec.get("cog") is not None else {}),
            }
        )
    return CrawlResult(fixes=fixes, dropped=dropped, violations=all_violations)


def ingest_provider_labels(payload) -> tuple[list[Label], list[tuple[int, str]]]:
    """Parse a provider label document; invalid entries rejected per-entry."""
    if isinstance(payload, (str, bytes)):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise FormatError(f"label payload unparseable: {exc}") from exc
    if not isinstance(payload, list):
        raise FormatError("label payload must be a JSON array")
    labels = []
    rejected = []
    for i, rec in enumerate(payload):
        violations = validate_record(LABEL_CONTRACT, rec, location=f"label[{i}]")
        if violations:
            rejected.append((i, "; ".join(v.as_line() for v in violations)))
            continue
        try:
            labels.append(Label.from_record(rec))
        except (ValueError, KeyError) as exc:
            rejected.append((i, str(exc)))
    return labels, rejected


@dataclass
class IngestReport:
    per_source: dict = field(default_factory=dict)  # source_id -> {fetched, appended, dropped}
    errors: dict = field(default_factory=dict)  # source_id -> message

    def to_dict(self) -> dict:
        return {"per_source": self.per_source, "errors": self.errors}


def run_ingestion_cycle(configs: list[SourceConfig], root=None,
                        fetcher: Fetcher | None = None) -> IngestReport:
    """Run all enabled sources sequentially; a failing source aborts only itself."""
    report = IngestReport()
    for config in configs:
        if not config.enabled:
            continue
        try:
            if config.kind == "sensor":
                records = simulate_sensor_batch(
                    config,
                    rng_seed=int(config.endpoint_or_seed),
                    n_objects=int(config.params.get("n_objects", 1)),
                    duration_s=int(config.params.get("duration_s", 3600)),
                )
                dropped = 0
                fetched = len(records)
                _append_objects(root, make_tracks(
                    int(config.endpoint_or_seed),
                    int(config.params.get("n_objects", 1)),
                    0,
                    id_prefix=config.params.get("id_prefix", "sns"),
                ))
            elif config.kind == "crawler":
                use_fetcher = fetcher or _file_fetcher
                result = crawl_source(config, use_fetcher)
                records, dropped = result.fixes, result.dropped
                fetched = len(records) + dropped
            elif config.kind == "provider":
                payload = Path(str(config.endpoint_or_seed)).read_text(encoding="utf-8")
                labels, rejected = ingest_provider_labels(payload)
                with stores.open_store(root, "labels", "append") as handle:
                    appended = stores.append(handle, [lb.to_record() for lb in labels])
                report.per_source[config.source_id] = {
                    "fetched": len(labels) + len(rejected),
                    "appended": appended,
                    "dropped": len(rejected),
                }
                continue
            else:  # pragma: no cover - SourceConfig forbids this
                raise IngestionError(f"unknown kind {config.kind}")
            with stores.open_store(root, "raw", "append") as handle:
                appended = stores.append(handle, records)
            report.per_source[config.source_id] = {
                "fetched": fetched,
                "appended": appended,
                "dropped": dropped,
            }
        except (stores.StoreError, IngestionError, OSError, ValueError) as exc:
            report.errors[config.source_id] = str(exc)
    return report


def _append_objects(root, tracks) -> None:
    """Record object metadata once per object id."""
    with stores.open_store(root, "objects", "append") as handle:
        known = {r.get("object_id") for r in stores.scan(handle)}
        fresh = [r for r in object_records(tracks) if r["object_id"] not in known]
        if fresh:
            stores.append(handle, fresh)


def _file_fetcher(endpoint: str):
    """Default fetcher: reads fixture documents from a local path (fixtures/provider/*.json)."""
    return Path(endpoint).read_text(encoding="utf-8")
