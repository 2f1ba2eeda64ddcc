/** Browser entry point: wires the controller to a minimal DOM shell. */

import { InvestigatorApp } from "./app.js";
import { httpTransport, UiConfig } from "./client.js";
import { loadContract } from "./contract.js";

async function boot(): Promise<void> {
  const config = (await (await fetch("./ui.config.json")).json()) as UiConfig;
  const health = await fetch(new URL("/api/v1/health", config.api_base_url));
  const contract = loadContract((await health.json()).contract);
  const app = new InvestigatorApp(contract, httpTransport(config), config);

  const status = document.getElementById("status")!;
  const layers = document.getElementById("layers")!;
  const panel = document.getElementById("panel")!;

  const render = () => {
    status.textContent = app.banner
      ?? (app.offlineQueued ? `offline: ${app.labelQueue.length} labels queued` : "live");
    layers.textContent =
      `${app.fixLayer.length} fixes, ${app.anomalyLayer.length} anomalies in view`;
    if (app.panel.kind === "loaded") {
      const meta = Object.entries(app.panel.info.metadata)
        .map(([k, v]) => `${k}: ${v}`).join("\n") || "(no metadata)";
      panel.textContent =
        `${app.panel.info.object_id} (${app.panel.info.object_type})\n${meta}\n` +
        `trajectory: ${app.panel.polyline.vertices.length} fixes`;
    } else if (app.panel.kind === "not_found") {
      panel.textContent = `object ${app.panel.objectId}: not found`;
    } else {
      panel.textContent = "";
    }
  };

  await app.exploreMap();
  render();
  app.startPolling();
  setInterval(render, 1000);
}

void boot();
