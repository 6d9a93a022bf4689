/**
 * DOM-free application model for the interactive re-fitting loop.
 *
 * Holds the selection state (words, mode, target), the latest server
 * payloads, and the version the client believes is current. Views
 * subscribe via the onChange callback and render from the snapshot; the
 * model never invents numbers, it only stores what the API returned.
 *
 * Mutating calls are single-flight: while one is in progress the others
 * are rejected, and every mutation carries the client's current version so
 * a concurrent editor surfaces as a version-conflict banner rather than a
 * silent overwrite of unseen state.
 */

import {
  ApiClient,
  ApiError,
  DistanceReport,
  Hit,
  JournalRecord,
  ProjectResponse,
  RefitResponse,
} from "./api.js";

export type Mode = "target" | "set";

export interface ScatterData {
  words: string[];
  before: Array<[number, number]>;
  after: Array<[number, number]>;
}

export interface ModelState {
  version: number | null;
  vocabSize: number | null;
  dim: number | null;
  queryHits: Hit[];
  lastQuery: string | null;
  selection: string[];
  mode: Mode;
  target: string | null;
  busy: boolean;
  error: string | null;
  staleVersion: boolean;
  lastRefit: RefitResponse | null;
  distanceTable: DistanceReport | null;
  scatter: ScatterData | null;
  journal: JournalRecord[];
}

function initialState(): ModelState {
  return {
    version: null,
    vocabSize: null,
    dim: null,
    queryHits: [],
    lastQuery: null,
    selection: [],
    mode: "set",
    target: null,
    busy: false,
    error: null,
    staleVersion: false,
    lastRefit: null,
    distanceTable: null,
    scatter: null,
    journal: [],
  };
}

export class AppModel {
  private state: ModelState = initialState();

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: () => void = () => {},
  ) {}

  get snapshot(): Readonly<ModelState> {
    return this.state;
  }

  private update(patch: Partial<ModelState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange();
  }

  get canRefit(): boolean {
    if (this.state.busy || this.state.selection.length < 2) return false;
    if (this.state.mode === "target" && this.state.target === null) return false;
    return true;
  }

  async init(): Promise<void> {
    const meta = await this.api.meta();
    const journal = await this.api.journal();
    this.update({
      version: meta.version,
      vocabSize: meta.vocab_size,
      dim: meta.dim,
      journal: journal.records,
    });
  }

  /** Poll hook: adopt the server's version; flag if it moved under us. */
  async refreshMeta(): Promise<void> {
    const meta = await this.api.meta();
    const moved =
      this.state.version !== null && meta.version !== this.state.version;
    this.update({
      version: meta.version,
      vocabSize: meta.vocab_size,
      dim: meta.dim,
      staleVersion: this.state.staleVersion || moved,
    });
  }

  async search(query: string, k: number): Promise<void> {
    try {
      const result = await this.api.search(query, k);
      this.update({
        queryHits: result.hits,
        lastQuery: result.query,
        version: result.version,
        error: null,
      });
      await this.refreshJournal();
    } catch (err) {
      this.fail(err);
    }
  }

  toggleWord(word: string): void {
    const selection = this.state.selection.includes(word)
      ? this.state.selection.filter((w) => w !== word)
      : [...this.state.selection, word];
    const target =
      this.state.target !== null && !selection.includes(this.state.target)
        ? null
        : this.state.target;
    this.update({ selection, target });
  }

  clearSelection(): void {
    this.update({ selection: [], target: null });
  }

  setMode(mode: Mode): void {
    this.update({ mode, target: mode === "set" ? null : this.state.target });
  }

  setTarget(word: string): void {
    if (!this.state.selection.includes(word)) return;
    this.update({ target: word, mode: "target" });
  }

  async refit(): Promise<void> {
    if (!this.canRefit || this.state.version === null) return;
    this.update({ busy: true, error: null });
    try {
      const result = await this.api.refit({
        mode: this.state.mode,
        words: this.state.selection,
        target: this.state.mode === "target" ? this.state.target! : undefined,
        base_version: this.state.version,
      });
      this.update({
        lastRefit: result,
        version: result.version,
        staleVersion: false,
      });
      await this.refreshDistances();
      await this.refreshScatter(result);
      await this.refreshJournal();
    } catch (err) {
      this.fail(err);
    } finally {
      this.update({ busy: false });
    }
  }

  async undo(): Promise<void> {
    if (this.state.busy) return;
    this.update({ busy: true, error: null });
    try {
      const result = await this.api.undo();
      this.update({ version: result.version, staleVersion: false, scatter: null });
      if (this.state.selection.length > 0) {
        await this.refreshDistances();
      }
      await this.refreshJournal();
    } catch (err) {
      this.fail(err);
    } finally {
      this.update({ busy: false });
    }
  }

  /** Current-version distance table for the selection, straight from the API. */
  async refreshDistances(): Promise<void> {
    if (this.state.selection.length === 0) {
      this.update({ distanceTable: null });
      return;
    }
    const table = await this.api.distances(this.state.selection);
    this.update({ distanceTable: table });
  }

  private async refreshScatter(refit: RefitResponse): Promise<void> {
    const projection: ProjectResponse = await this.api.project(
      refit.members,
      refit.version,
      refit.base_version,
    );
    this.update({
      scatter: {
        words: projection.words,
        before: projection.baseline_coords ?? [],
        after: projection.coords,
      },
    });
  }

  async refreshJournal(): Promise<void> {
    const journal = await this.api.journal();
    this.update({ journal: journal.records });
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError && err.code === "version_conflict") {
      // someone else committed first: ask the user to refresh, never refit blind
      this.update({ staleVersion: true, error: err.message });
      return;
    }
    this.update({ error: err instanceof Error ? err.message : String(err) });
  }
}
