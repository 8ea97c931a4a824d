/**
 * Portal view-model and its pure transition functions.
 *
 * The model only ever reflects the most recent successful poll; a counter of
 * consecutive misses drives the stale badge (visible from the third miss).
 * Pump toggles update optimistically and are rolled back if the gateway
 * rejects the command.
 */

import { DoseResponse, StateResponse } from "./types";

export const STALE_AFTER_MISSES = 3;

export type ConnectionStatus = "connecting" | "live" | "degraded" | "stale";

export interface PortalViewModel {
  moisturePct: number | null;
  pumpOn: boolean | null;
  mode: string;
  npk: { n: number | null; p: number | null; k: number | null };
  lastTick: number | null;
  missedPolls: number;
  status: ConnectionStatus;
  lastDoses: DoseResponse | null;
  toast: string | null;
  /* snapshot of the last server truth, for rolling back optimistic flips */
  confirmed: { pumpOn: boolean | null; mode: string };
}

export function initialViewModel(): PortalViewModel {
  return {
    moisturePct: null,
    pumpOn: null,
    mode: "auto",
    npk: { n: null, p: null, k: null },
    lastTick: null,
    missedPolls: 0,
    status: "connecting",
    lastDoses: null,
    toast: null,
    confirmed: { pumpOn: null, mode: "auto" },
  };
}

/** A successful poll replaces every displayed value and clears staleness. */
export function applyPoll(vm: PortalViewModel, state: StateResponse): PortalViewModel {
  return {
    ...vm,
    moisturePct: state.moisture_pct,
    pumpOn: state.pump_on,
    mode: state.mode,
    npk: state.npk,
    lastTick: state.last_tick,
    missedPolls: 0,
    status: "live",
    confirmed: { pumpOn: state.pump_on, mode: state.mode },
  };
}

/** A failed poll degrades the connection; three misses flag the data stale. */
export function applyPollFailure(vm: PortalViewModel): PortalViewModel {
  const missed = vm.missedPolls + 1;
  return {
    ...vm,
    missedPolls: missed,
    status: missed >= STALE_AFTER_MISSES ? "stale" : "degraded",
  };
}

/** Optimistic local flip, shown until the next poll confirms or rolls back. */
export function applyOptimisticPump(
  vm: PortalViewModel,
  mode: "auto" | "manual",
  on: boolean,
): PortalViewModel {
  return {
    ...vm,
    mode,
    pumpOn: mode === "manual" ? on : vm.pumpOn,
    toast: null,
  };
}

/** Server rejected the command: restore the last confirmed truth. */
export function rollbackPump(vm: PortalViewModel, message: string): PortalViewModel {
  return {
    ...vm,
    pumpOn: vm.confirmed.pumpOn,
    mode: vm.confirmed.mode,
    toast: message,
  };
}

export function applyDoses(vm: PortalViewModel, doses: DoseResponse): PortalViewModel {
  return { ...vm, lastDoses: doses, toast: null };
}

export interface DoseRow {
  product: string;
  kgPerHa: string;
}

/** Format the server's dose numbers; nothing is computed client-side. */
export function doseRows(doses: DoseResponse): DoseRow[] {
  return [
    { product: "MOP", kgPerHa: doses.mop_kg_ha.toFixed(2) },
    { product: "DAP", kgPerHa: doses.dap_kg_ha.toFixed(2) },
    { product: "urea", kgPerHa: doses.urea_kg_ha.toFixed(2) },
  ];
}

export function noFertilizerNeeded(doses: DoseResponse): boolean {
  return doses.mop_kg_ha === 0 && doses.dap_kg_ha === 0 && doses.urea_kg_ha === 0;
}
