import { describe, expect, it } from "vitest";

import { RadiusScheduler } from "../src/radius.js";

interface Deferred {
  r: number;
  resolve: (v: string) => void;
}

function harness(initial = 0.1) {
  let current = initial;
  const pendingSends: Deferred[] = [];
  const applied: Array<{ r: number; value: string }> = [];
  const busyLog: boolean[] = [];
  const scheduler = new RadiusScheduler<string>(
    (r) => new Promise<string>((resolve) => pendingSends.push({ r, resolve })),
    () => current,
    ({ value }, r) => {
      current = r;
      applied.push({ r, value });
    },
    () => undefined,
    (busy) => busyLog.push(busy),
  );
  return { scheduler, pendingSends, applied, busyLog, current: () => current };
}

const tick = () => new Promise<void>((r) => setTimeout(r, 0));

describe("RadiusScheduler", () => {
  it("sends nothing for an equal radius", () => {
    const h = harness(0.1);
    h.scheduler.intend(0.1);
    expect(h.pendingSends.length).toBe(0);
    expect(h.scheduler.requestsSent).toBe(0);
  });

  it("keeps exactly one request in flight; the last intent wins", async () => {
    const h = harness(0.1);
    h.scheduler.intend(0.09);
    h.scheduler.intend(0.08);
    h.scheduler.intend(0.07);
    h.scheduler.intend(0.06);
    h.scheduler.intend(0.05);
    expect(h.pendingSends.length).toBe(1); // only the first fired
    expect(h.pendingSends[0]!.r).toBe(0.09);

    h.pendingSends[0]!.resolve("first");
    await tick();
    // the four intermediate intents collapsed into one trailing request
    expect(h.pendingSends.length).toBe(2);
    expect(h.pendingSends[1]!.r).toBe(0.05);

    h.pendingSends[1]!.resolve("second");
    await tick();
    expect(h.pendingSends.length).toBe(2);
    expect(h.scheduler.requestsSent).toBe(2);
    expect(h.applied.map((a) => a.r)).toEqual([0.09, 0.05]);
    expect(h.current()).toBe(0.05);
  });

  it("reports busy state around each request", async () => {
    const h = harness(0.1);
    h.scheduler.intend(0.2);
    expect(h.scheduler.inFlight).toBe(true);
    expect(h.busyLog).toEqual([true]);
    h.pendingSends[0]!.resolve("done");
    await tick();
    expect(h.scheduler.inFlight).toBe(false);
    expect(h.busyLog).toEqual([true, false]);
  });

  it("drops a trailing intent that equals the radius reached meanwhile", async () => {
    const h = harness(0.1);
    h.scheduler.intend(0.2);
    h.scheduler.intend(0.2); // duplicate while busy
    h.pendingSends[0]!.resolve("done");
    await tick();
    expect(h.pendingSends.length).toBe(1);
    expect(h.applied.length).toBe(1);
  });

  it("surfaces send failures through the error hook and recovers", async () => {
    let current = 0.1;
    const errors: unknown[] = [];
    let failNext = true;
    const sent: number[] = [];
    const scheduler = new RadiusScheduler<string>(
      (r) => {
        sent.push(r);
        return failNext
          ? Promise.reject(new Error("409 busy"))
          : Promise.resolve("ok");
      },
      () => current,
      (_out, r) => { current = r; },
      (err) => errors.push(err),
    );
    scheduler.intend(0.2);
    await tick();
    expect(errors.length).toBe(1);
    expect(current).toBe(0.1); // nothing applied on failure
    failNext = false;
    scheduler.intend(0.2);
    await tick();
    expect(current).toBe(0.2);
    expect(sent).toEqual([0.2, 0.2]);
  });
});
