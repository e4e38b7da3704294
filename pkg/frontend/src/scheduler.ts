/** Async plumbing for the editor loop: a debouncer for keystroke-driven
 * validation and a newest-wins gate for render requests. */

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const wrapped = (...args: A): void => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending!;
      pending = null;
      fn(...args2);
    }, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapped.flush = () => {
    if (timer === null) return;
    clearTimeout(timer);
    timer = null;
    const args = pending!;
    pending = null;
    fn(...args);
  };
  return wrapped;
}

/** Serializes an async producer so only the newest result is delivered.
 * Each `submit` aborts the previous in-flight request (via AbortSignal) and
 * stamps the task with a monotonic sequence number; responses that are not
 * the latest are dropped, never painted. */
export class NewestWins<T> {
  private seq = 0;
  private painted = 0;
  private controller: AbortController | null = null;

  async submit(
    task: (signal: AbortSignal) => Promise<T>,
    deliver: (value: T) => void,
    onError?: (err: unknown) => void,
  ): Promise<void> {
    const mySeq = ++this.seq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      const value = await task(controller.signal);
      if (mySeq > this.painted && mySeq === this.seq) {
        this.painted = mySeq;
        deliver(value);
      }
    } catch (err) {
      if (controller.signal.aborted) return; // superseded, expected
      if (mySeq === this.seq && onError) onError(err);
    }
  }

  get inFlight(): boolean {
    return this.controller !== null && !this.controller.signal.aborted;
  }
}
