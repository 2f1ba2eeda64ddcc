"""Contract kit: machine-checkable code, data, and model contracts."""

from .builtin import (
    ALL_CONTRACTS,
    API_CONTRACT,
    CRAWLER_CONTRACT,
    LABEL_CONTRACT,
    METADATA_CONTRACT,
    MODEL_CONTRACT,
    PREDICTION_CONTRACT,
    RAW_DATA_CONTRACT,
    SNAPSHOT_CONTRACT,
    TELEMETRY_CONTRACT,
)
from .files import (
    SCHEMA_TAG,
    contract_from_document,
    contract_to_document,
    dump_contract,
    load_contract,
    load_contract_dir,
)
from .mock import mock_responder
from .types import (
    Bound,
    CodeContract,
    ContractDefinitionError,
    DataContract,
    Endpoint,
    FieldSpec,
    ModelContract,
    ParamSpec,
    Violation,
)
from .validate import (
    checksum_file,
    fnv1a_64,
    match_endpoint,
    validate_http_exchange,
    validate_model_dir,
    validate_record,
)

__all__ = [
    "ALL_CONTRACTS",
    "API_CONTRACT",
    "CRAWLER_CONTRACT",
    "LABEL_CONTRACT",
    "METADATA_CONTRACT",
    "MODEL_CONTRACT",
    "PREDICTION_CONTRACT",
    "RAW_DATA_CONTRACT",
    "SNAPSHOT_CONTRACT",
    "TELEMETRY_CONTRACT",
    "SCHEMA_TAG",
    "Bound",
    "CodeContract",
    "ContractDefinitionError",
    "DataContract",
    "Endpoint",
    "FieldSpec",
    "ModelContract",
    "ParamSpec",
    "Violation",
    "checksum_file",
    "contract_from_document",
    "contract_to_document",
    "dump_contract",
    "fnv1a_64",
    "load_contract",
    "load_contract_dir",
    "match_endpoint",
    "mock_responder",
    "validate_http_exchange",
    "validate_model_dir",
    "validate_record",
]
