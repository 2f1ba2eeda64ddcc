/** Investigator view state: viewport, filters, selections, layer toggles. */

export interface Viewport {
  centerLat: number;
  centerLon: number;
  zoom: number; // 1 (whole world) .. 18
}

export interface Bbox {
  minLat: number;
  minLon: number;
  maxLat: number;
  maxLon: number;
}

export interface LayerToggles {
  fixes: boolean;
  trajectories: boolean;
  anomalies: boolean;
}

export interface TimeWindow {
  from?: number;
  to?: number;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

/** Derive the visible bbox from the viewport; always a valid box. */
export function viewportToBbox(viewport: Viewport): Bbox {
  const spanLon = 360 / Math.pow(2, clamp(viewport.zoom, 1, 18));
  const spanLat = spanLon / 2;
  const minLat = clamp(viewport.centerLat - spanLat / 2, -90, 90);
  const maxLat = clamp(viewport.centerLat + spanLat / 2, -90, 90);
  let minLon = viewport.centerLon - spanLon / 2;
  let maxLon = viewport.centerLon + spanLon / 2;
  if (minLon < -180 || maxLon > 180) {
    // keep the request simple: clamp instead of wrapping at desk scale
    minLon = clamp(minLon, -180, 180);
    maxLon = clamp(maxLon, -180, 180);
  }
  return {
    minLat: Math.min(minLat, maxLat),
    maxLat: Math.max(minLat, maxLat),
    minLon: Math.min(minLon, maxLon),
    maxLon: Math.max(minLon, maxLon),
  };
}

export function bboxParam(bbox: Bbox): string {
  const f = (v: number) => v.toFixed(6);
  return `${f(bbox.minLat)},${f(bbox.minLon)},${f(bbox.maxLat)},${f(bbox.maxLon)}`;
}

export class ViewState {
  viewport: Viewport = { centerLat: 39.0, centerLon: -12.0, zoom: 5 };
  timeWindow: TimeWindow = {};
  sources: string[] = [];
  types: string[] = [];
  layers: LayerToggles = { fixes: true, trajectories: true, anomalies: true };
  selectedObjectId: string | null = null;
  selectedAnomalyId: string | null = null;

  get bbox(): Bbox {
    return viewportToBbox(this.viewport);
  }

  /** Query params for the geolocations layer, straight from the view state. */
  geolocationQuery(): Record<string, string> {
    const query: Record<string, string> = { bbox: bboxParam(this.bbox) };
    if (this.timeWindow.from !== undefined) query.from = String(this.timeWindow.from);
    if (this.timeWindow.to !== undefined) query.to = String(this.timeWindow.to);
    if (this.sources.length > 0) query.sources = this.sources.join(",");
    if (this.types.length > 0) query.types = this.types.join(",");
    return query;
  }

  anomalyQuery(): Record<string, string> {
    const query: Record<string, string> = { bbox: bboxParam(this.bbox) };
    if (this.timeWindow.from !== undefined) query.from = String(this.timeWindow.from);
    if (this.timeWindow.to !== undefined) query.to = String(this.timeWindow.to);
    return query;
  }

  /** Selections must exist in the last fetched page or be cleared. */
  reconcileSelections(visibleObjectIds: Set<string>, visibleAnomalyIds: Set<string>): void {
    if (this.selectedObjectId !== null && !visibleObjectIds.has(this.selectedObjectId)) {
      this.selectedObjectId = null;
    }
    if (this.selectedAnomalyId !== null && !visibleAnomalyIds.has(this.selectedAnomalyId)) {
      this.selectedAnomalyId = null;
    }
  }
}
