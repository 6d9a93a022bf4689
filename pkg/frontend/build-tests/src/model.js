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
import { ApiError, } from "./api.js";
function initialState() {
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
    api;
    onChange;
    state = initialState();
    constructor(api, onChange = () => { }) {
        this.api = api;
        this.onChange = onChange;
    }
    get snapshot() {
        return this.state;
    }
    update(patch) {
        this.state = { ...this.state, ...patch };
        this.onChange();
    }
    get canRefit() {
        if (this.state.busy || this.state.selection.length < 2)
            return false;
        if (this.state.mode === "target" && this.state.target === null)
            return false;
        return true;
    }
    async init() {
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
    async refreshMeta() {
        const meta = await this.api.meta();
        const moved = this.state.version !== null && meta.version !== this.state.version;
        this.update({
            version: meta.version,
            vocabSize: meta.vocab_size,
            dim: meta.dim,
            staleVersion: this.state.staleVersion || moved,
        });
    }
    async search(query, k) {
        try {
            const result = await this.api.search(query, k);
            this.update({
                queryHits: result.hits,
                lastQuery: result.query,
                version: result.version,
                error: null,
            });
            await this.refreshJournal();
        }
        catch (err) {
            this.fail(err);
        }
    }
    toggleWord(word) {
        const selection = this.state.selection.includes(word)
            ? this.state.selection.filter((w) => w !== word)
            : [...this.state.selection, word];
        const target = this.state.target !== null && !selection.includes(this.state.target)
            ? null
            : this.state.target;
        this.update({ selection, target });
    }
    clearSelection() {
        this.update({ selection: [], target: null });
    }
    setMode(mode) {
        this.update({ mode, target: mode === "set" ? null : this.state.target });
    }
    setTarget(word) {
        if (!this.state.selection.includes(word))
            return;
        this.update({ target: word, mode: "target" });
    }
    async refit() {
        if (!this.canRefit || this.state.version === null)
            return;
        this.update({ busy: true, error: null });
        try {
            const result = await this.api.refit({
                mode: this.state.mode,
                words: this.state.selection,
                target: this.state.mode === "target" ? this.state.target : undefined,
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
        }
        catch (err) {
            this.fail(err);
        }
        finally {
            this.update({ busy: false });
        }
    }
    async undo() {
        if (this.state.busy)
            return;
        this.update({ busy: true, error: null });
        try {
            const result = await this.api.undo();
            this.update({ version: result.version, staleVersion: false, scatter: null });
            if (this.state.selection.length > 0) {
                await this.refreshDistances();
            }
            await this.refreshJournal();
        }
        catch (err) {
            this.fail(err);
        }
        finally {
            this.update({ busy: false });
        }
    }
    /** Current-version distance table for the selection, straight from the API. */
    async refreshDistances() {
        if (this.state.selection.length === 0) {
            this.update({ distanceTable: null });
            return;
        }
        const table = await this.api.distances(this.state.selection);
        this.update({ distanceTable: table });
    }
    async refreshScatter(refit) {
        const projection = await this.api.project(refit.members, refit.version, refit.base_version);
        this.update({
            scatter: {
                words: projection.words,
                before: projection.baseline_coords ?? [],
                after: projection.coords,
            },
        });
    }
    async refreshJournal() {
        const journal = await this.api.journal();
        this.update({ journal: journal.records });
    }
    fail(err) {
        if (err instanceof ApiError && err.code === "version_conflict") {
            // someone else committed first: ask the user to refresh, never refit blind
            this.update({ staleVersion: true, error: err.message });
            return;
        }
        this.update({ error: err instanceof Error ? err.message : String(err) });
    }
}
