/** Debounce with injectable timers so tests can drive the clock. */

export interface TimerHost {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const realTimers: TimerHost = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
  timers: TimerHost = realTimers,
): Debounced<A> {
  let handle: unknown = null;
  let pending: A | null = null;

  const invoke = () => {
    handle = null;
    if (pending !== null) {
      const args = pending;
      pending = null;
      fn(...args);
    }
  };

  const wrapper = (...args: A) => {
    pending = args;
    if (handle !== null) timers.clear(handle);
    handle = timers.set(invoke, delayMs);
  };
  wrapper.cancel = () => {
    if (handle !== null) timers.clear(handle);
    handle = null;
    pending = null;
  };
  wrapper.flush = () => {
    if (handle !== null) timers.clear(handle);
    invoke();
  };
  return wrapper;
}
