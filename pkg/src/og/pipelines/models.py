"""Detector models and window scoring with explanation traces."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..domain import Explanation, ExplanationStep
from .features import gaps_s, implied_speeds, window_features

DEFAULT_MAX_SPEED_KN = 30.0
DEFAULT_GAP_THRESHOLD_S = 21600.0
DEFAULT_JUMP_SPEED_KN = 100.0

# forbidden box just north of the simulated sailing region
DEFAULT_ZONES = (
    {"name": "restricted-north", "min_lat": 45.0, "max_lat": 46.0,
     "min_lon": -12.0, "max_lon": -11.0},
)


class ModelError(Exception):
    pass


class InsufficientWindowError(ModelError):
    pass


@dataclass(frozen=True)
class RuleModel:
    max_speed_kn: float = DEFAULT_MAX_SPEED_KN
    gap_threshold_s: float = DEFAULT_GAP_THRESHOLD_S
    jump_speed_kn: float = DEFAULT_JUMP_SPEED_KN
    zones: tuple[dict, ...] = DEFAULT_ZONES

    def __post_init__(self):
        for name, value in (("max_speed_kn", self.max_speed_kn),
                            ("gap_threshold_s", self.gap_threshold_s),
                            ("jump_speed_kn", self.jump_speed_kn)):
            if value <= 0:
                raise ModelError(f"rule threshold {name} must be strictly positive")

    def to_params(self) -> dict:
        return {
            "kind": "rule",
            "max_speed_kn": self.max_speed_kn,
            "gap_threshold_s": self.gap_threshold_s,
            "jump_speed_kn": self.jump_speed_kn,
            "zones": [dict(z) for z in self.zones],
        }

    @classmethod
    def from_params(cls, params: dict) -> "RuleModel":
        return cls(
            max_speed_kn=float(params["max_speed_kn"]),
            gap_threshold_s=float(params["gap_threshold_s"]),
            jump_speed_kn=float(params["jump_speed_kn"]),
            zones=tuple(params.get("zones", DEFAULT_ZONES)),
        )


@dataclass(frozen=True)
class MlModel:
    """Robust z-score outlier detector with exact additive attribution."""

    centers: dict[str, float]  # per-feature median
    scales: dict[str, float]  # per-feature MAD * 1.4826, degenerate features absent
    score_threshold: float
    quantile_q: float = 0.99

    def __post_init__(self):
        if not self.scales:
            raise ModelError("all features degenerate: nothing to score")
        if any(s <= 0 for s in self.scales.values()):
            raise ModelError("feature scales must be strictly positive")

    def to_params(self) -> dict:
        return {
            "kind": "ml",
            "features": [
                {"name": n, "center": self.centers[n], "scale": self.scales[n]}
                for n in self.scales
            ],
            "score_threshold": self.score_threshold,
            "quantile_q": self.quantile_q,
        }

    @classmethod
    def from_params(cls, params: dict) -> "MlModel":
        return cls(
            centers={f["name"]: float(f["center"]) for f in params["features"]},
            scales={f["name"]: float(f["scale"]) for f in params["features"]},
            score_threshold=float(params["score_threshold"]),
            quantile_q=float(params.get("quantile_q", 0.99)),
        )


def model_from_params(params: dict) -> RuleModel | MlModel:
    kind = params.get("kind")
    if kind == "rule":
        return RuleModel.from_params(params)
    if kind == "ml":
        return MlModel.from_params(params)
    raise ModelError(f"unknown model kind {kind!r}")


@dataclass(frozen=True)
class WindowFinding:
    kind: str
    severity: float
    fix_index: int  # representative fix within the window


@dataclass(frozen=True)
class WindowScore:
    score: float
    explanation: Explanation
    fired: bool
    findings: tuple[WindowFinding, ...] = field(default=())


def _in_zone(fix: dict, zone: dict) -> bool:
    return (zone["min_lat"] <= fix["lat"] <= zone["max_lat"]
            and zone["min_lon"] <= fix["lon"] <= zone["max_lon"])


def _score_rule(model: RuleModel, fixes: list[dict]) -> WindowScore:
    speeds = implied_speeds(fixes)
    gaps = gaps_s(fixes)
    max_speed = max(speeds)
    max_speed_at = speeds.index(max_speed) + 1
    max_gap = max(gaps)
    max_gap_at = gaps.index(max_gap) + 1
    in_zone_idx = [i for i, f in enumerate(fixes) if any(_in_zone(f, z) for z in model.zones)]

    checks = [
        ("excessive_speed", max_speed, model.max_speed_kn, max_speed_at,
         f"max implied speed {max_speed:.1f} kn vs limit {model.max_speed_kn:.1f} kn"),
        ("ais_gap", max_gap, model.gap_threshold_s, max_gap_at,
         f"max report gap {max_gap:.0f} s vs limit {model.gap_threshold_s:.0f} s"),
        ("impossible_jump", max_speed, model.jump_speed_kn, max_speed_at,
         f"max implied speed {max_speed:.1f} kn vs physical limit {model.jump_speed_kn:.1f} kn"),
        ("zone_violation", float(len(in_zone_idx)), 0.0,
         in_zone_idx[0] if in_zone_idx else 0,
         f"{len(in_zone_idx)} fixes inside a forbidden zone"),
    ]
    steps = []
    findings = []
    fired_parts = []
    for kind, observed, threshold, fix_index, detail in checks:
        fired = observed > threshold
        steps.append(ExplanationStep(
            rule_or_feature=kind,
            observed=observed,
            threshold_or_baseline=threshold,
            contribution=1.0 if fired else 0.0,
            fired=fired,
        ))
        if fired:
            findings.append(WindowFinding(kind=kind, severity=1.0, fix_index=fix_index))
            fired_parts.append(detail)
    score = float(len(findings))
    summary = "; ".join(fired_parts) if fired_parts else "no rule fired"
    return WindowScore(
        score=score,
        explanation=Explanation(steps=tuple(steps), summary=summary),
        fired=bool(findings),
        findings=tuple(findings),
    )


def _score_ml(model: MlModel, fixes: list[dict]) -> WindowScore:
    x = window_features(fixes)
    contributions = {
        name: abs(x[name] - model.centers[name]) / model.scales[name]
        for name in model.scales
    }
    score = sum(contributions.values())
    threshold = max(model.score_threshold, 1e-9)
    fired = score > threshold
    max_contribution = max(contributions.values())
    steps = tuple(
        ExplanationStep(
            rule_or_feature=name,
            observed=x[name],
            threshold_or_baseline=model.centers[name],
            contribution=contributions[name],
            fired=fired and contributions[name] == max_contribution,
        )
        for name in model.scales
    )
    severity = min(1.0, score / (2.0 * threshold))
    top = max(contributions, key=contributions.get)
    summary = (
        f"robust z-score {score:.3f} vs threshold {threshold:.3f}; "
        f"largest deviation in {top}"
        if fired
        else f"robust z-score {score:.3f} within threshold {threshold:.3f}"
    )
    findings = (WindowFinding(kind="kinematic_outlier", severity=severity,
                              fix_index=len(fixes) // 2),) if fired else ()
    return WindowScore(
        score=score,
        explanation=Explanation(steps=steps, summary=summary),
        fired=fired,
        findings=findings,
    )


def score_fix_window(model: RuleModel | MlModel, fixes: list[dict]) -> WindowScore:
    """Evaluate one trajectory window, producing a full decision trace."""
    if len(fixes) < 2:
        raise InsufficientWindowError(
            f"window has {len(fixes)} fixes; kinematic features need at least 2"
        )
    if isinstance(model, RuleModel):
        return _score_rule(model, fixes)
    return _score_ml(model, fixes)
