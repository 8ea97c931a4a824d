/** Wire types for the five gateway endpoints. */

export interface NpkTriple {
  n: number | null;
  p: number | null;
  k: number | null;
}

export interface StateResponse {
  moisture_pct: number | null;
  pump_on: boolean | null;
  mode: string;
  npk: NpkTriple;
  last_tick: number | null;
}

export interface HistoryRecord {
  device_id: string;
  metric: string;
  value: number;
  tick: number;
  received_at: number;
}

export interface HistoryResponse {
  metric: string;
  records: HistoryRecord[];
}

export interface PumpCommand {
  mode: "auto" | "manual";
  on?: boolean;
}

export interface SoilValues {
  n: number;
  p: number;
  k: number;
}

export interface DoseResponse {
  crop: string;
  soil: SoilValues;
  required: SoilValues;
  deficit: SoilValues;
  mop_kg_ha: number;
  dap_kg_ha: number;
  urea_kg_ha: number;
  supplied: SoilValues;
}

/** Error carrying the HTTP status so callers can branch on 400/404/412. */
export class GatewayError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`gateway ${status}: ${detail}`);
    this.name = "GatewayError";
  }
}
