import { describe, expect, it } from "vitest";

import {
  applyDoses,
  applyOptimisticPump,
  applyPoll,
  applyPollFailure,
  doseRows,
  initialViewModel,
  noFertilizerNeeded,
  rollbackPump,
} from "../src/state";
import { DoseResponse, StateResponse } from "../src/types";

const SERVER_STATE: StateResponse = {
  moisture_pct: 42.0,
  pump_on: false,
  mode: "auto",
  npk: { n: 10, p: 5, k: 10 },
  last_tick: 3,
};

const WHEAT_DOSES: DoseResponse = {
  crop: "wheat",
  soil: { n: 10, p: 5, k: 10 },
  required: { n: 100, p: 20, k: 60 },
  deficit: { n: 90, p: 15, k: 50 },
  mop_kg_ha: 83.33333333333334,
  dap_kg_ha: 32.608695652173914,
  urea_kg_ha: 182.89224952741017,
  supplied: { n: 90, p: 15, k: 50 },
};

describe("poll transitions", () => {
  it("a successful poll replaces every displayed value", () => {
    const vm = applyPoll(initialViewModel(), SERVER_STATE);
    expect(vm.moisturePct).toBe(42.0);
    expect(vm.pumpOn).toBe(false);
    expect(vm.status).toBe("live");
    expect(vm.missedPolls).toBe(0);
  });

  it("data goes stale on the third consecutive miss", () => {
    let vm = applyPoll(initialViewModel(), SERVER_STATE);
    vm = applyPollFailure(vm);
    expect(vm.status).toBe("degraded");
    vm = applyPollFailure(vm);
    expect(vm.status).toBe("degraded");
    vm = applyPollFailure(vm);
    expect(vm.status).toBe("stale");
    expect(vm.moisturePct).toBe(42.0); // last good value still shown
  });

  it("a success after misses clears the stale flag", () => {
    let vm = applyPoll(initialViewModel(), SERVER_STATE);
    for (let i = 0; i < 5; i++) vm = applyPollFailure(vm);
    vm = applyPoll(vm, SERVER_STATE);
    expect(vm.status).toBe("live");
    expect(vm.missedPolls).toBe(0);
  });
});

describe("optimistic pump updates", () => {
  it("manual on shows immediately", () => {
    const vm = applyOptimisticPump(applyPoll(initialViewModel(), SERVER_STATE), "manual", true);
    expect(vm.pumpOn).toBe(true);
    expect(vm.mode).toBe("manual");
  });

  it("rollback restores the last confirmed truth and raises a toast", () => {
    let vm = applyPoll(initialViewModel(), SERVER_STATE);
    vm = applyOptimisticPump(vm, "manual", true);
    vm = rollbackPump(vm, "rejected");
    expect(vm.pumpOn).toBe(false);
    expect(vm.mode).toBe("auto");
    expect(vm.toast).toBe("rejected");
  });

  it("switching to auto keeps the displayed pump state until the next poll", () => {
    let vm = applyPoll(initialViewModel(), { ...SERVER_STATE, pump_on: true });
    vm = applyOptimisticPump(vm, "auto", false);
    expect(vm.mode).toBe("auto");
    expect(vm.pumpOn).toBe(true);
  });
});

describe("dose rendering", () => {
  it("formats the three product doses from the server response", () => {
    const vm = applyDoses(initialViewModel(), WHEAT_DOSES);
    expect(doseRows(vm.lastDoses!)).toEqual([
      { product: "MOP", kgPerHa: "83.33" },
      { product: "DAP", kgPerHa: "32.61" },
      { product: "urea", kgPerHa: "182.89" },
    ]);
  });

  it("flags the zero-deficit case", () => {
    const zero = { ...WHEAT_DOSES, mop_kg_ha: 0, dap_kg_ha: 0, urea_kg_ha: 0 };
    expect(noFertilizerNeeded(zero)).toBe(true);
    expect(noFertilizerNeeded(WHEAT_DOSES)).toBe(false);
  });
});
