/** Radius-drag scheduling: one mutation in flight, the last intent wins.
 *
 * The service serializes mutations per dataset (409 on overlap), so the
 * control keeps at most one request outstanding. Intents arriving while a
 * request runs collapse into a single trailing request for the newest
 * value; stale responses are discarded by token.
 */

export interface ZoomOutcome<T> {
  token: number;
  value: T;
}

export class RadiusScheduler<T> {
  private busy = false;
  private pending: number | null = null;
  private token = 0;
  requestsSent = 0;

  constructor(
    private readonly send: (r: number) => Promise<T>,
    private readonly current: () => number,
    private readonly apply: (outcome: ZoomOutcome<T>, r: number) => void,
    private readonly onError: (err: unknown) => void = () => undefined,
    private readonly onBusyChange: (busy: boolean) => void = () => undefined,
  ) {}

  get inFlight(): boolean {
    return this.busy;
  }

  /** Register the user's newest radius intent. */
  intend(r: number): void {
    if (r === this.current() || r <= 0) {
      return; // equal radius: no request at all
    }
    if (this.busy) {
      this.pending = r; // overwrite: only the last intent survives
      return;
    }
    void this.fire(r);
  }

  private async fire(r: number): Promise<void> {
    this.busy = true;
    this.onBusyChange(true);
    this.requestsSent += 1;
    const token = ++this.token;
    try {
      const value = await this.send(r);
      if (token === this.token) {
        this.apply({ token, value }, r);
      }
    } catch (err) {
      this.onError(err);
    } finally {
      this.busy = false;
      this.onBusyChange(false);
      const next = this.pending;
      this.pending = null;
      if (next !== null && next !== this.current()) {
        void this.fire(next);
      }
    }
  }
}
