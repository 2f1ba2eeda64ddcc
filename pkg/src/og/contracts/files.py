"""Serialization of contracts to their versioned JSON file form."""

from __future__ import annotations

import json
from pathlib import Path

from .types import CodeContract, ContractDefinitionError, DataContract, ModelContract

SCHEMA_TAG = "og-contract/1"

Contract = DataContract | ModelContract | CodeContract

_KINDS = {DataContract: "data", ModelContract: "model", CodeContract: "code"}


def contract_to_document(contract: Contract) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "kind": _KINDS[type(contract)],
        "name": contract.name,
        "version": contract.version,
        "body": contract.to_body(),
    }


def contract_from_document(doc: dict) -> Contract:
    if doc.get("schema") != SCHEMA_TAG:
        raise ContractDefinitionError(f"unknown contract schema tag {doc.get('schema')!r}")
    kind = doc.get("kind")
    cls = {"data": DataContract, "model": ModelContract, "code": CodeContract}.get(kind)
    if cls is None:
        raise ContractDefinitionError(f"unknown contract kind {kind!r}")
    return cls.from_body(doc["name"], int(doc["version"]), doc["body"])


def dump_contract(contract: Contract, path: str | Path) -> None:
    doc = contract_to_document(contract)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_contract(path: str | Path) -> Contract:
    return contract_from_document(json.loads(Path(path).read_text(encoding="utf-8")))


def load_contract_dir(directory: str | Path) -> dict[str, Contract]:
    """Load every *.json contract in a directory, keyed by name."""
    out = {}
    for p in sorted(Path(directory).glob("*.json")):
        c = load_contract(p)
        out[c.name] = c
    return out
