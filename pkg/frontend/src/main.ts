/** DOM wiring: renders the view-model and forwards clicks to the controller. */

import { GatewayClient } from "./api";
import { PortalController } from "./controller";
import { PortalViewModel, doseRows, noFertilizerNeeded } from "./state";

const SPARK_POINTS = 120;

const api = new GatewayClient("");
const controller = new PortalController(api, 1000);
const moistureTrail: number[] = [];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function fmt(value: number | null, digits = 1, suffix = ""): string {
  return value === null ? "—" : `${value.toFixed(digits)}${suffix}`;
}

function renderSparkline(canvas: HTMLCanvasElement, values: number[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (values.length < 2) return;
  ctx.strokeStyle = "#2f81f7";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  values.forEach((v, i) => {
    const x = (i / (SPARK_POINTS - 1)) * canvas.width;
    const y = canvas.height - (v / 100) * canvas.height;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

function render(vm: PortalViewModel): void {
  const badge = el<HTMLSpanElement>("status-badge");
  badge.textContent = vm.status;
  badge.className = `badge ${vm.status}`;

  el<HTMLSpanElement>("moisture-value").textContent = fmt(vm.moisturePct, 1, " %");
  el<HTMLDivElement>("moisture-bar").style.width = `${vm.moisturePct ?? 0}%`;

  const pump = el<HTMLSpanElement>("pump-state");
  pump.textContent = vm.pumpOn === null ? "—" : vm.pumpOn ? "ON" : "OFF";
  pump.className = vm.pumpOn ? "pump on" : "pump off";
  el<HTMLSpanElement>("mode-state").textContent = vm.mode;

  el<HTMLSpanElement>("npk-n").textContent = fmt(vm.npk.n);
  el<HTMLSpanElement>("npk-p").textContent = fmt(vm.npk.p);
  el<HTMLSpanElement>("npk-k").textContent = fmt(vm.npk.k);

  const toast = el<HTMLDivElement>("toast");
  toast.textContent = vm.toast ?? "";
  toast.style.display = vm.toast ? "block" : "none";

  if (vm.moisturePct !== null && vm.status === "live") {
    moistureTrail.push(vm.moisturePct);
    if (moistureTrail.length > SPARK_POINTS) moistureTrail.shift();
  }
  renderSparkline(el<HTMLCanvasElement>("sparkline"), moistureTrail);

  const doses = el<HTMLDivElement>("dose-result");
  if (vm.lastDoses) {
    if (noFertilizerNeeded(vm.lastDoses)) {
      doses.innerHTML = `<p class="ok">No fertilizer needed for ${vm.lastDoses.crop}.</p>`;
    } else {
      const rows = doseRows(vm.lastDoses)
        .map((r) => `<tr><td>${r.product}</td><td>${r.kgPerHa}</td></tr>`)
        .join("");
      doses.innerHTML = `
        <table>
          <thead><tr><th>Product</th><th>kg/ha</th></tr></thead>
          <tbody>${rows}</tbody>
        </table>`;
    }
  }
}

function soilFromForm(): { n: number; p: number; k: number } | undefined {
  const read = (id: string) => {
    const raw = el<HTMLInputElement>(id).value.trim();
    return raw === "" ? null : Number(raw);
  };
  const n = read("soil-n");
  const p = read("soil-p");
  const k = read("soil-k");
  if (n === null && p === null && k === null) return undefined;
  return { n: n ?? 0, p: p ?? 0, k: k ?? 0 };
}

async function onRecommend(): Promise<void> {
  const crop = el<HTMLInputElement>("crop-name").value.trim();
  if (!crop) return;
  const outcome = await controller.requestRecommendation(crop, soilFromForm());
  const prompt = el<HTMLParagraphElement>("soil-prompt");
  prompt.style.display = outcome === "needs-soil" ? "block" : "none";
}

export function boot(): void {
  controller.subscribe(render);
  el<HTMLButtonElement>("pump-on").addEventListener("click", () => {
    void controller.togglePump(true);
  });
  el<HTMLButtonElement>("pump-off").addEventListener("click", () => {
    void controller.togglePump(false);
  });
  el<HTMLButtonElement>("pump-auto").addEventListener("click", () => {
    void controller.setAuto();
  });
  el<HTMLButtonElement>("recommend").addEventListener("click", () => {
    void onRecommend();
  });
  controller.start();
}

if (typeof document !== "undefined" && document.getElementById("portal-root")) {
  boot();
}
