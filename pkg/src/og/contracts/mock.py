"""Canned-response mock of a code contract, for building consumers in parallel."""

from __future__ import annotations

from typing import Callable

from .types import CodeContract, ContractDefinitionError
from .validate import match_endpoint, request_violations, validate_http_exchange

Responder = Callable[[dict], dict]


def mock_responder(contract: CodeContract, canned: dict[tuple[str, str], dict]) -> Responder:
    """Build a pure request -> response function from canned examples.

    `canned` maps (method, path template) to a {status, body} response.
    Construction fails if any canned example violates the contract.
    The responder returns the canned response for any conforming request,
    and a 400 carrying serialized violations otherwise.
    """
    endpoints = {(e.method, e.path): e for e in contract.endpoints}
    for key, response in canned.items():
        if key not in endpoints:
            raise ContractDefinitionError(f"canned example for undeclared endpoint {key}")
        method, path = key
        probe = {"method": method, "path": path, "query": {}, "body": None}
        bad = [
            v
            for v in validate_http_exchange(contract, probe, response)
            if v.location.endswith(("#status",)) or "#response" in v.location
        ]
        if bad:
            raise ContractDefinitionError(
                f"canned example for {key} violates contract: " + "; ".join(v.as_line() for v in bad)
            )

    def respond(request: dict) -> dict:
        violations = request_violations(contract, request)
        if violations:
            return {
                "status": 400,
                "body": {
                    "error": {
                        "kind": "contract_violation",
                        "message": "request does not conform to the code contract",
                        "violations": [v.to_record() for v in violations],
                    }
                },
            }
        endpoint = match_endpoint(contract, request.get("method", "GET"), request.get("path", ""))
        response = canned.get((endpoint.method, endpoint.path))
        if response is None:
            return {
                "status": 400,
                "body": {
                    "error": {
                        "kind": "no_canned_example",
                        "message": f"no canned example for {endpoint.method} {endpoint.path}",
                    }
                },
            }
        return response

    return respond
