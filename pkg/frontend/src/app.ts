/** Investigator application controller: ties view state, client, and render model. */

import { ApiClient, Transport, UiConfig } from "./client.js";
import { ContractDocument } from "./contract.js";
import {
  anomalyMarkers,
  explanationTable,
  ExplanationTable,
  fixMarkers,
  graticule,
  GraticuleLine,
  Marker,
  Polyline,
  trajectoryPolyline,
} from "./map.js";
import { AnomalyRecord, Fix, ObjectInfo } from "./mock.js";
import { ViewState, Viewport } from "./state.js";

export type { UiConfig } from "./client.js";

export type PanelState =
  | { kind: "hidden" }
  | { kind: "not_found"; objectId: string }
  | { kind: "loaded"; info: ObjectInfo; polyline: Polyline };

export type ExplanationState =
  | { kind: "hidden" }
  | { kind: "not_found"; anomalyId: string }
  | { kind: "error"; anomalyId: string; retry: () => Promise<void> }
  | { kind: "loaded"; anomalyId: string; table: ExplanationTable };

export interface LabelDraft {
  object_id: string;
  start_ts: number;
  end_ts: number;
  verdict: "normal" | "anomalous";
  kind?: string;
  note?: string;
}

export interface QueuedLabel {
  draft: LabelDraft;
  attempts: number;
}

export class InvestigatorApp {
  readonly state = new ViewState();
  readonly client: ApiClient;

  fixLayer: Marker[] = [];
  anomalyLayer: Marker[] = [];
  visibleAnomalies: AnomalyRecord[] = [];
  panel: PanelState = { kind: "hidden" };
  explanation: ExplanationState = { kind: "hidden" };
  banner: string | null = null;
  toast: string | null = null;
  fieldErrors: Record<string, string> = {};
  labelQueue: QueuedLabel[] = [];

  private generation = 0;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    contract: ContractDocument,
    transport: Transport,
    readonly config: UiConfig,
  ) {
    this.client = new ApiClient(contract, transport);
  }

  /** Background grid when no tile URL is configured (offline-friendly tests). */
  baseLayer(): GraticuleLine[] | { tileUrl: string } {
    return this.config.tile_url
      ? { tileUrl: this.config.tile_url }
      : graticule(this.state.bbox);
  }

  get offlineQueued(): boolean {
    return this.labelQueue.length > 0;
  }

  /** Pan/zoom: refresh fix and anomaly layers for the visible bbox. Latest viewport wins. */
  async exploreMap(viewport?: Partial<Viewport>): Promise<void> {
    if (viewport) this.state.viewport = { ...this.state.viewport, ...viewport };
    const generation = ++this.generation;
    try {
      const [geo, anomalies] = await Promise.all([
        this.state.layers.fixes
          ? this.client.geolocations(this.state.geolocationQuery())
          : null,
        this.state.layers.anomalies
          ? this.client.anomalies(this.state.anomalyQuery())
          : null,
      ]);
      if (generation !== this.generation) return; // a newer viewport superseded us
      if ((geo && geo.status !== 200) || (anomalies && anomalies.status !== 200)) {
        this.banner = "layer refresh failed; showing last data";
        return; // stale layers retained
      }
      this.banner = null;
      let objectIds = new Set(this.fixLayer.map((m) => m.id.split("@")[0]));
      if (geo) {
        const fixes = (geo.body as { fixes: Fix[] }).fixes;
        this.fixLayer = fixMarkers(fixes);
        objectIds = new Set(fixes.map((f) => f.object_id));
      }
      if (anomalies) {
        this.visibleAnomalies = (anomalies.body as { anomalies: AnomalyRecord[] }).anomalies;
        this.anomalyLayer = anomalyMarkers(this.visibleAnomalies);
      }
      this.state.reconcileSelections(
        objectIds,
        new Set(this.visibleAnomalies.map((a) => a.anomaly_id)),
      );
      if (this.state.selectedObjectId === null && this.panel.kind === "loaded") {
        this.panel = { kind: "hidden" };
      }
    } catch {
      if (generation === this.generation) {
        this.banner = "service unreachable; showing last data";
      }
    }
  }

  setFilters(filters: { sources?: string[]; types?: string[]; from?: number; to?: number }):
    Promise<void> {
    if (filters.sources !== undefined) this.state.sources = filters.sources;
    if (filters.types !== undefined) this.state.types = filters.types;
    this.state.timeWindow = {
      from: filters.from ?? this.state.timeWindow.from,
      to: filters.to ?? this.state.timeWindow.to,
    };
    return this.exploreMap();
  }

  /** Object click: metadata panel plus highlighted trajectory. */
  async inspectObject(objectId: string): Promise<void> {
    const [info, trajectory] = await Promise.all([
      this.client.object(objectId),
      this.client.trajectory(objectId),
    ]);
    if (info.status === 404 || trajectory.status === 404) {
      this.panel = { kind: "not_found", objectId };
      this.state.selectedObjectId = null;
      return;
    }
    const fixes = (trajectory.body as { fixes: Fix[] }).fixes;
    this.panel = {
      kind: "loaded",
      info: info.body as ObjectInfo,
      polyline: trajectoryPolyline(objectId, fixes),
    };
    this.state.selectedObjectId = objectId;
  }

  deselectObject(): void {
    this.state.selectedObjectId = null;
    this.panel = { kind: "hidden" };
  }

  /** Anomaly click: render the explanation step table verbatim. */
  async inspectAnomaly(anomalyId: string): Promise<void> {
    try {
      const response = await this.client.explanation(anomalyId);
      if (response.status === 404) {
        this.explanation = { kind: "not_found", anomalyId };
        this.state.selectedAnomalyId = null;
        return;
      }
      this.explanation = {
        kind: "loaded",
        anomalyId,
        table: explanationTable(response.body as Parameters<typeof explanationTable>[0]),
      };
      this.state.selectedAnomalyId = anomalyId;
    } catch {
      this.explanation = {
        kind: "error",
        anomalyId,
        retry: () => this.inspectAnomaly(anomalyId),
      };
    }
  }

  /** Inline validation before anything is sent. */
  validateLabel(draft: LabelDraft): Record<string, string> {
    const errors: Record<string, string> = {};
    if (!draft.object_id) errors.object_id = "an object must be selected";
    if (draft.start_ts > draft.end_ts) errors.end_ts = "window end precedes start";
    if (draft.verdict === "anomalous" && !draft.kind) {
      errors.kind = "an anomalous verdict needs a kind";
    }
    return errors;
  }

  async submitLabel(draft: LabelDraft): Promise<string | null> {
    this.fieldErrors = this.validateLabel(draft);
    if (Object.keys(this.fieldErrors).length > 0) return null;
    try {
      const response = await this.client.submitLabel({ ...draft });
      if (response.status === 400) {
        const body = response.body as { error: { message: string } };
        this.fieldErrors = { form: body.error.message };
        return null;
      }
      const labelId = (response.body as { label_id: string }).label_id;
      this.toast = `label ${labelId} stored`;
      return labelId;
    } catch {
      this.labelQueue.push({ draft, attempts: 1 });
      this.toast = "offline: label queued for retry";
      return null;
    }
  }

  /** Retry everything queued while offline; keeps what still fails. */
  async flushLabelQueue(): Promise<number> {
    const pending = this.labelQueue;
    this.labelQueue = [];
    let stored = 0;
    for (const item of pending) {
      try {
        const response = await this.client.submitLabel({ ...item.draft });
        if (response.status === 201) stored += 1;
      } catch {
        this.labelQueue.push({ draft: item.draft, attempts: item.attempts + 1 });
      }
    }
    return stored;
  }

  /** Experimental: on-demand detection over the selected window. */
  async analyzeWindow(objectId: string, fromTs: number, toTs: number):
    Promise<AnomalyRecord[]> {
    const response = await this.client.detect({
      object_id: objectId, from_ts: fromTs, to_ts: toTs,
    });
    if (response.status !== 200) return [];
    return (response.body as { anomalies: AnomalyRecord[] }).anomalies;
  }

  startPolling(): void {
    if (this.pollTimer !== null) return;
    this.pollTimer = setInterval(() => {
      void this.exploreMap();
      void this.flushLabelQueue();
    }, this.config.poll_interval_s * 1000);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
