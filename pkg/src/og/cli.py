"""Command line entry point: ingestion cycles, pipeline runs, serving, governance."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import stores
from .contracts import (
    API_CONTRACT,
    MODEL_CONTRACT,
    load_contract_dir,
    validate_http_exchange,
    validate_model_dir,
    validate_record,
)
from .ingestion import SourceConfig, run_ingestion_cycle
from .pipelines import (
    augment,
    batch_predict,
    measure_against_labels,
    synth_generate,
    train_ml,
    train_rule,
)
from .service import ApiConfig, build_app

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

STORE_CONTRACT_NAMES = {
    "raw": "raw-data",
    "labels": "labels",
    "predictions": "predictions",
    "telemetry": "telemetry",
    "metadata": "training-runs",
}


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise SystemExit(f"--params expects k=v, got {pair!r}")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def _root(args) -> str:
    root = args.data_dir or os.environ.get("OG_DATA_DIR")
    if not root:
        print("no data dir: pass --data-dir or set OG_DATA_DIR", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return root


def _emit(args, payload: dict, plain: str | None = None) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    elif plain is not None:
        print(plain)


# --- verbs --------------------------------------------------------------------


def cmd_ingest(args) -> int:
    root = _root(args)
    configs = [
        SourceConfig(
            source_id="sensor-sim", kind="sensor", endpoint_or_seed=args.seed,
            params={"n_objects": args.objects, "duration_s": args.duration},
        )
    ]
    if args.crawler_fixture:
        configs.append(SourceConfig(
            source_id="crawler-0", kind="crawler", endpoint_or_seed=args.crawler_fixture,
        ))
    if args.label_fixture:
        configs.append(SourceConfig(
            source_id="provider-labels", kind="provider", endpoint_or_seed=args.label_fixture,
        ))
    report = run_ingestion_cycle(configs, root)
    _emit(args, report.to_dict(), plain="\n".join(
        f"{sid}: fetched={c['fetched']} appended={c['appended']} dropped={c['dropped']}"
        for sid, c in report.per_source.items()
    ) + ("" if not report.errors else "\nerrors: " + json.dumps(report.errors)))
    return EXIT_DOMAIN if report.errors else EXIT_OK


def cmd_generate(args) -> int:
    root = _root(args)
    rates = {k: float(v) for k, v in _parse_params(args.params).items()} if args.params else None
    result = synth_generate(root, seed=args.seed, n_objects=args.objects,
                            duration_s=args.duration, anomaly_rates=rates)
    _emit(args, {"snapshot_id": result.snapshot_id, "n_fixes": result.n_fixes,
                 "n_labels": len(result.labels)},
          plain=result.snapshot_id)
    return EXIT_OK


def cmd_augment(args) -> int:
    root = _root(args)
    params = _parse_params(args.params)
    new_id = augment(
        root, args.snapshot,
        jitter_sigma_deg=float(params.get("jitter_sigma_deg", 0.0)),
        resample_period_s=(int(params["resample_period_s"])
                           if params.get("resample_period_s") else None),
        seed=args.seed,
    )
    _emit(args, {"snapshot_id": new_id}, plain=new_id)
    return EXIT_OK


def cmd_train_rule(args) -> int:
    root = _root(args)
    model_id = train_rule(root, args.snapshot, hyperparams=_parse_params(args.params))
    _emit(args, {"model_id": model_id}, plain=model_id)
    return EXIT_OK


def cmd_train_ml(args) -> int:
    root = _root(args)
    model_id = train_ml(root, args.snapshot, hyperparams=_parse_params(args.params))
    _emit(args, {"model_id": model_id}, plain=model_id)
    return EXIT_OK


def cmd_batch_predict(args) -> int:
    root = _root(args)
    count = batch_predict(root, args.model, snapshot_id=args.snapshot)
    _emit(args, {"anomalies": count}, plain=str(count))
    return EXIT_OK


def cmd_serve(args) -> int:  # pragma: no cover - long-running process
    from .service import serve

    config = ApiConfig.from_env()
    if args.data_dir:
        config = ApiConfig(port=config.port, data_dir=args.data_dir,
                           model_name=config.model_name, model_version=config.model_version,
                           auth_token=config.auth_token)
    serve(config)
    return EXIT_OK


def cmd_validate_contracts(args) -> int:
    contract_dir = Path(args.dir)
    contracts = load_contract_dir(contract_dir) if contract_dir.is_dir() else {}
    violations = []
    target = args.against
    if target.startswith("store:"):
        kind = target.split(":", 1)[1]
        if kind not in STORE_CONTRACT_NAMES:
            print(f"unknown store {kind!r}", file=sys.stderr)
            return EXIT_USAGE
        contract = contracts.get(STORE_CONTRACT_NAMES[kind]) or stores.STORE_CONTRACTS[kind]
        handle = stores.StoreHandle(Path(_root(args)), kind, mode="read")
        for i, rec in enumerate(stores.scan(handle)):
            violations.extend(validate_record(contract, rec, location=f"{kind}[{i}]"))
    elif target == "models":
        root = _root(args)
        contract = contracts.get("detector") or MODEL_CONTRACT
        for model_id in stores.list_models(root):
            name, _, version = model_id.partition(":")
            entry_dir = stores.registry_dir(root) / name / version
            violations.extend(validate_model_dir(contract, entry_dir))
    elif target.startswith("capture:"):
        capture_path = Path(target.split(":", 1)[1])
        contract = contracts.get("api-v1") or API_CONTRACT
        if not capture_path.is_file():
            print(f"capture file {capture_path} not found", file=sys.stderr)
            return EXIT_USAGE
        for line in capture_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            exchange = json.loads(line)
            violations.extend(
                validate_http_exchange(contract, exchange["request"], exchange["response"])
            )
    else:
        print(f"unknown target {target!r}; use store:<kind>, models, or capture:<path>",
              file=sys.stderr)
        return EXIT_USAGE
    for v in violations:
        print(v.as_line())
    if getattr(args, "json", False):
        print(json.dumps({"violations": len(violations)}))
    return EXIT_DOMAIN if violations else EXIT_OK


def _nearest_rank(values: list[float], q: float) -> float:
    ordered = sorted(values)
    return ordered[max(1, math.ceil(q * len(ordered))) - 1]


def cmd_telemetry_report(args) -> int:
    root = _root(args)
    handle = stores.StoreHandle(Path(root), "telemetry", mode="read")
    events = [e for e in stores.scan(handle)
              if args.from_ts is None or e["ts"] >= args.from_ts]
    by_endpoint: dict[str, list[float]] = {}
    for e in events:
        by_endpoint.setdefault(e["endpoint"], []).append(float(e["latency_ms"]))
    report = {
        endpoint: {
            "requests": len(latencies),
            "p50_ms": _nearest_rank(latencies, 0.50),
            "p95_ms": _nearest_rank(latencies, 0.95),
        }
        for endpoint, latencies in sorted(by_endpoint.items())
    }
    for endpoint, stats in report.items():
        print(f"{endpoint}\t{stats['requests']}\t"
              f"p50={stats['p50_ms']:.2f}ms\tp95={stats['p95_ms']:.2f}ms")
    if args.json:
        print(json.dumps({"endpoints": report, "total": len(events)}, sort_keys=True))
    return EXIT_OK


def _probe_api(root: str, model_id: str) -> tuple[int, Path]:
    """Boot the service in-process, hit every read endpoint, capture the exchanges."""
    from fastapi.testclient import TestClient

    config = ApiConfig(data_dir=root, model_name=model_id.split(":")[0])
    app = build_app(config)
    capture_path = Path(root) / "capture.jsonl"
    exchanges = []
    with TestClient(app) as client:
        requests = [
            ("GET", "/api/v1/health", {}),
            ("GET", "/api/v1/geolocations", {"limit": "100"}),
            ("GET", "/api/v1/anomalies", {}),
        ]
        anomalies = client.get("/api/v1/anomalies").json()["anomalies"]
        if anomalies:
            first = anomalies[0]
            requests.append(("GET", f"/api/v1/anomalies/{first['anomaly_id']}/explanation", {}))
            requests.append(("GET", f"/api/v1/objects/{first['object_id']}", {}))
            requests.append(("GET", f"/api/v1/objects/{first['object_id']}/trajectory", {}))
        for method, path, query in requests:
            response = client.request(method, path, params=query)
            exchanges.append({
                "request": {"method": method, "path": path, "query": query, "body": None},
                "response": {"status": response.status_code, "body": response.json()},
            })
    with open(capture_path, "w", encoding="utf-8") as fh:
        for exchange in exchanges:
            fh.write(json.dumps(exchange, sort_keys=True) + "\n")
    bad = sum(
        len(validate_http_exchange(API_CONTRACT, ex["request"], ex["response"]))
        for ex in exchanges
    )
    return bad, capture_path


def cmd_demo(args) -> int:
    root = Path(_root(args))
    if root.exists() and any(root.iterdir()):
        print(f"refusing to run demo: {root} is not empty", file=sys.stderr)
        return EXIT_DOMAIN
    stage = "generate"
    try:
        result = synth_generate(root, seed=args.seed, n_objects=args.objects,
                                duration_s=args.duration)
        print(f"generate: snapshot {result.snapshot_id} ({result.n_fixes} fixes)")
        stage = "augment"
        aug_id = augment(root, result.snapshot_id, jitter_sigma_deg=1e-6, seed=args.seed)
        print(f"augment: snapshot {aug_id}")
        stage = "train-rule"
        rule_id = train_rule(root, aug_id)
        print(f"train-rule: {rule_id}")
        stage = "train-ml"
        ml_id = train_ml(root, aug_id)
        print(f"train-ml: {ml_id}")
        stage = "batch-predict"
        rule_count = batch_predict(root, rule_id, snapshot_id=aug_id)
        ml_count = batch_predict(root, ml_id, snapshot_id=aug_id)
        print(f"batch-predict: {rule_count} rule anomalies, {ml_count} ml anomalies")
        stage = "serve-and-probe"
        bad, capture_path = _probe_api(str(root), rule_id)
        print(f"serve-and-probe: {bad} contract violations, capture at {capture_path}")
        metrics = {
            "rule": measure_against_labels(root, rule_id, aug_id),
            "ml": measure_against_labels(root, ml_id, aug_id),
        }
        for name, m in metrics.items():
            print(f"{name}: recall={m['recall']:.3f} precision={m['precision']:.3f} "
                  f"predictions={m['predictions']}")
        if args.json:
            print(json.dumps({"snapshot_id": aug_id, "models": [rule_id, ml_id],
                              "metrics": metrics, "contract_violations": bad},
                             sort_keys=True))
        return EXIT_DOMAIN if bad else EXIT_OK
    except Exception as exc:
        print(f"demo failed at stage {stage}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="og", description=__doc__)
    parser.add_argument("--data-dir", help="store root (defaults to OG_DATA_DIR)")
    parser.add_argument("--json", action="store_true",
                        help="emit one JSON object on the final line")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("ingest", help="run one ingestion cycle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objects", type=int, default=3)
    p.add_argument("--duration", type=int, default=3600)
    p.add_argument("--crawler-fixture", help="path to a crawler fixture document")
    p.add_argument("--label-fixture", help="path to a provider label document")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("generate", help="synthetic data generation pipeline")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--objects", type=int, default=10)
    p.add_argument("--duration", type=int, default=86400)
    p.add_argument("--params", nargs="*", help="anomaly rates as kind=rate")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("augment", help="data augmentation pipeline")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--params", nargs="*",
                   help="jitter_sigma_deg=<float> resample_period_s=<int>")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train-rule", help="rule-based training pipeline")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--params", nargs="*")
    p.set_defaults(func=cmd_train_rule)

    p = sub.add_parser("train-ml", help="ML-based training pipeline")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--params", nargs="*")
    p.set_defaults(func=cmd_train_ml)

    p = sub.add_parser("batch-predict", help="batch prediction pipeline")
    p.add_argument("--model", required=True, help="name[:version]")
    p.add_argument("--snapshot", help="snapshot id (defaults to the raw store)")
    p.set_defaults(func=cmd_batch_predict)

    p = sub.add_parser("serve", help="run the API prediction service")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate-contracts", help="contract gate")
    p.add_argument("--dir", default="contracts", help="contract documents directory")
    p.add_argument("--against", required=True,
                   help="store:<kind> | models | capture:<path>")
    p.set_defaults(func=cmd_validate_contracts)

    p = sub.add_parser("telemetry-report", help="governance: usage summary")
    p.add_argument("--from", dest="from_ts", type=int)
    p.set_defaults(func=cmd_telemetry_report)

    p = sub.add_parser("demo_end_to_end", aliases=["demo"],
                       help="end-to-end pipeline demonstration")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--objects", type=int, default=10)
    p.add_argument("--duration", type=int, default=86400)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
