/**
 * Portal controller: owns the view-model, the poll loop and the command
 * queue. At most one poll is in flight at a time; failed polls back off
 * exponentially and recover to the base interval on the next success.
 * Commands are serialized so a rapid series of clicks cannot reorder.
 */

import { GatewayClient } from "./api";
import {
  PortalViewModel,
  applyDoses,
  applyOptimisticPump,
  applyPoll,
  applyPollFailure,
  initialViewModel,
  rollbackPump,
} from "./state";
import { GatewayError, SoilValues } from "./types";

export type Listener = (vm: PortalViewModel) => void;

export class PortalController {
  private vm: PortalViewModel = initialViewModel();
  private listeners: Listener[] = [];
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private pollInFlight = false;
  private backoffFactor = 1;
  private commandChain: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly api: GatewayClient,
    private readonly pollIntervalMs = 1000,
    private readonly maxBackoff = 8,
  ) {}

  get viewModel(): PortalViewModel {
    return this.vm;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.vm);
  }

  private update(next: PortalViewModel): void {
    this.vm = next;
    for (const listener of this.listeners) listener(next);
  }

  /** One poll cycle; safe to call directly (tests) or from the timer. */
  async pollOnce(): Promise<void> {
    if (this.pollInFlight) return;
    this.pollInFlight = true;
    try {
      const state = await this.api.getState();
      this.backoffFactor = 1;
      this.update(applyPoll(this.vm, state));
    } catch {
      this.backoffFactor = Math.min(this.backoffFactor * 2, this.maxBackoff);
      this.update(applyPollFailure(this.vm));
    } finally {
      this.pollInFlight = false;
    }
  }

  start(): void {
    const loop = async () => {
      await this.pollOnce();
      this.pollTimer = setTimeout(loop, this.pollIntervalMs * this.backoffFactor);
    };
    void loop();
  }

  stop(): void {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }

  /** Manual pump switch; optimistic, rolled back on rejection. */
  togglePump(on: boolean): Promise<void> {
    return this.enqueue({ mode: "manual" as const, on }, on);
  }

  /** Hand control back to the moisture threshold rule. */
  setAuto(): Promise<void> {
    return this.enqueue({ mode: "auto" as const }, undefined);
  }

  private enqueue(command: { mode: "auto" | "manual"; on?: boolean }, on?: boolean): Promise<void> {
    this.update(applyOptimisticPump(this.vm, command.mode, on ?? false));
    const run = async () => {
      try {
        await this.api.setPump(command);
      } catch (err) {
        const message = err instanceof GatewayError ? err.detail : "command failed";
        this.update(rollbackPump(this.vm, message));
        await this.pollOnce(); // re-sync with the server's truth
      }
    };
    this.commandChain = this.commandChain.then(run);
    return this.commandChain as Promise<void>;
  }

  /**
   * Ask the gateway for doses. A 412 (no NPK telemetry) surfaces as
   * "needs-soil" so the form can prompt for manual soil entry; a 404 surfaces
   * the unknown-crop message inline.
   */
  async requestRecommendation(
    crop: string,
    soil?: SoilValues,
  ): Promise<"ok" | "needs-soil" | "unknown-crop"> {
    try {
      const doses = await this.api.recommend(crop, soil);
      this.update(applyDoses(this.vm, doses));
      return "ok";
    } catch (err) {
      if (err instanceof GatewayError && err.status === 412) return "needs-soil";
      if (err instanceof GatewayError && err.status === 404) {
        this.update({ ...this.vm, toast: err.detail });
        return "unknown-crop";
      }
      throw err;
    }
  }
}
