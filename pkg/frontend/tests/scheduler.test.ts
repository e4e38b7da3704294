import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, NewestWins } from "../src/scheduler.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once with the last arguments", () => {
    const calls: string[] = [];
    const d = debounce((s: string) => calls.push(s), 100);
    d("a");
    d("ab");
    d("abc");
    vi.advanceTimersByTime(99);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual(["abc"]);
  });

  it("cancel drops the pending call", () => {
    const calls: string[] = [];
    const d = debounce((s: string) => calls.push(s), 50);
    d("x");
    d.cancel();
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([]);
  });

  it("flush delivers immediately", () => {
    const calls: string[] = [];
    const d = debounce((s: string) => calls.push(s), 50);
    d("y");
    d.flush();
    expect(calls).toEqual(["y"]);
    d.flush(); // no pending call: no-op
    expect(calls).toEqual(["y"]);
  });
});

describe("newest-wins render gate", () => {
  it("delivers only the latest of overlapping submissions", async () => {
    const gate = new NewestWins<number>();
    const painted: number[] = [];
    const resolvers: Array<(v: number) => void> = [];
    const slot = (): Promise<number> =>
      new Promise((resolve) => resolvers.push(resolve));

    const p1 = gate.submit(() => slot(), (v) => painted.push(v));
    const p2 = gate.submit(() => slot(), (v) => painted.push(v));
    resolvers[0]!(1); // older response lands first...
    resolvers[1]!(2);
    await Promise.all([p1, p2]);
    expect(painted).toEqual([2]); // ...but is never painted
  });

  it("drops a slow stale response arriving after the newest", async () => {
    const gate = new NewestWins<number>();
    const painted: number[] = [];
    const resolvers: Array<(v: number) => void> = [];
    const slot = (): Promise<number> =>
      new Promise((resolve) => resolvers.push(resolve));

    const p1 = gate.submit(() => slot(), (v) => painted.push(v));
    const p2 = gate.submit(() => slot(), (v) => painted.push(v));
    resolvers[1]!(2); // newest resolves first
    await p2;
    resolvers[0]!(1); // stale straggler
    await p1;
    expect(painted).toEqual([2]);
  });

  it("aborts the superseded request's signal", async () => {
    const gate = new NewestWins<string>();
    const aborted: boolean[] = [];
    const p1 = gate.submit(
      (signal) =>
        new Promise<string>((_, reject) => {
          signal.addEventListener("abort", () => {
            aborted.push(true);
            reject(new Error("aborted"));
          });
        }),
      () => {},
    );
    await gate.submit(async () => "new", () => {});
    await p1;
    expect(aborted).toEqual([true]);
  });

  it("reports errors only for the latest request", async () => {
    const gate = new NewestWins<string>();
    const errors: unknown[] = [];
    await gate.submit(
      async () => {
        throw new Error("boom");
      },
      () => {},
      (e) => errors.push(e),
    );
    expect(errors).toHaveLength(1);
    expect((errors[0] as Error).message).toBe("boom");
  });
});
