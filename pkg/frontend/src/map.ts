/** Pure render model for the map: markers, polylines, graticule fallback.
 *
 * Everything here is plain data so tests can assert on layers without a DOM.
 */

import { AnomalyRecord, Fix } from "./mock.js";
import { Bbox } from "./state.js";

export interface Marker {
  id: string;
  lat: number;
  lon: number;
  shape: "circle" | "square" | "diamond"; // styled by object_type
  color: string; // colored by source
  kind: "fix" | "anomaly";
  severity?: number;
}

export interface Polyline {
  objectId: string;
  vertices: Array<{ lat: number; lon: number; timestamp: number }>;
}

export interface GraticuleLine {
  orientation: "parallel" | "meridian";
  at: number;
}

const SHAPE_BY_TYPE: Record<string, Marker["shape"]> = {
  vessel: "circle",
  structure: "square",
  unidentified: "diamond",
};

const COLOR_BY_SOURCE: Record<string, string> = {
  sensor: "#1f77b4",
  crawler: "#ff7f0e",
  provider: "#2ca02c",
  synthetic: "#9467bd",
};

const ANOMALY_COLOR = "#d62728";

export function fixMarkers(fixes: Fix[]): Marker[] {
  return fixes.map((f) => ({
    id: `${f.object_id}@${f.timestamp}`,
    lat: f.lat,
    lon: f.lon,
    shape: SHAPE_BY_TYPE[f.object_type] ?? "diamond",
    color: COLOR_BY_SOURCE[f.source] ?? "#7f7f7f",
    kind: "fix" as const,
  }));
}

export function anomalyMarkers(anomalies: AnomalyRecord[]): Marker[] {
  return anomalies.map((a) => ({
    id: a.anomaly_id,
    lat: a.lat,
    lon: a.lon,
    shape: "diamond" as const,
    color: ANOMALY_COLOR,
    kind: "anomaly" as const,
    severity: a.severity,
  }));
}

export function trajectoryPolyline(
  objectId: string,
  fixes: Array<{ lat: number; lon: number; timestamp: number }>,
): Polyline {
  return {
    objectId,
    vertices: fixes.map((f) => ({ lat: f.lat, lon: f.lon, timestamp: f.timestamp })),
  };
}

/** Offline fallback: a plain lat/lon grid covering the visible box. */
export function graticule(bbox: Bbox, stepDeg = 1): GraticuleLine[] {
  const lines: GraticuleLine[] = [];
  for (let lat = Math.ceil(bbox.minLat / stepDeg) * stepDeg; lat <= bbox.maxLat; lat += stepDeg) {
    lines.push({ orientation: "parallel", at: lat });
  }
  for (let lon = Math.ceil(bbox.minLon / stepDeg) * stepDeg; lon <= bbox.maxLon; lon += stepDeg) {
    lines.push({ orientation: "meridian", at: lon });
  }
  return lines;
}

export interface ExplanationRow {
  ruleOrFeature: string;
  observed: number;
  thresholdOrBaseline: number;
  contribution: number;
  fired: boolean;
}

export interface ExplanationTable {
  summary: string;
  rows: ExplanationRow[];
  contributionTotal: number;
}

/** Render the explanation step table verbatim; fired rows are emphasized by callers. */
export function explanationTable(explanation: {
  summary: string;
  steps: Array<{
    rule_or_feature: string;
    observed: number;
    threshold_or_baseline: number;
    contribution: number;
    fired: boolean;
  }>;
}): ExplanationTable {
  const rows = explanation.steps.map((s) => ({
    ruleOrFeature: s.rule_or_feature,
    observed: s.observed,
    thresholdOrBaseline: s.threshold_or_baseline,
    contribution: s.contribution,
    fired: s.fired,
  }));
  return {
    summary: explanation.summary,
    rows,
    contributionTotal: rows.reduce((acc, r) => acc + r.contribution, 0),
  };
}
