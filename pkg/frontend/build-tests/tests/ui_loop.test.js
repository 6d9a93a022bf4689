/**
 * Full interactive loop against a live service process: search a toy
 * space, select three words, trigger a set refit, check the distance
 * table against /distances, see the journal grow, and undo back to the
 * prior version's table.
 */
import assert from "node:assert/strict";
import { after, before, test } from "node:test";
import { spawn } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { ApiClient } from "../src/api.js";
import { AppModel } from "../src/model.js";
const repoRoot = join(dirname(fileURLToPath(import.meta.url)), "..", "..", "..");
const embeddings = join(repoRoot, "demos", "data", "toy_vectors.txt");
const port = 20000 + Math.floor(Math.random() * 20000);
const baseUrl = `http://127.0.0.1:${port}`;
let server;
async function waitForServer(timeoutMs = 30000) {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
        try {
            const response = await fetch(`${baseUrl}/api/v1/meta`);
            if (response.ok)
                return;
        }
        catch {
            // not up yet
        }
        await new Promise((resolve) => setTimeout(resolve, 150));
    }
    throw new Error("service did not come up in time");
}
before(async () => {
    server = spawn("python3", ["-m", "refitlab.cli", "serve", "--embeddings", embeddings,
        "--listen", `127.0.0.1:${port}`], { stdio: "ignore" });
    await waitForServer();
});
after(() => {
    server.kill("SIGTERM");
});
test("search → select 3 → set refit → tables refresh → journal → undo", async () => {
    const api = new ApiClient(baseUrl);
    const model = new AppModel(api);
    await model.init();
    assert.equal(model.snapshot.version, 1);
    assert.equal(model.snapshot.mode, "set");
    // search the toy space and pick three words from the hit list
    await model.search("science", 8);
    assert.ok(model.snapshot.queryHits.length >= 3);
    const picked = model.snapshot.queryHits.slice(0, 3).map((h) => h.word);
    for (const word of picked)
        model.toggleWord(word);
    assert.deepEqual(model.snapshot.selection, picked);
    assert.equal(model.canRefit, true);
    const tableBefore = await api.distances(picked); // version-1 table
    // trigger the set refit
    await model.refit();
    const refit = model.snapshot.lastRefit;
    assert.ok(refit, "refit response recorded");
    assert.equal(refit.version, 2);
    assert.equal(model.snapshot.version, 2);
    assert.equal(model.snapshot.error, null);
    // the distance table refreshed with post-refit values matching /distances
    const tableNow = await api.distances(picked);
    assert.deepEqual(model.snapshot.distanceTable, tableNow);
    assert.deepEqual(refit.distance_after, tableNow);
    assert.notDeepEqual(tableNow, tableBefore);
    // scatter frames came from the shared-basis projection endpoint
    assert.ok(model.snapshot.scatter);
    assert.deepEqual(model.snapshot.scatter.words, picked);
    assert.equal(model.snapshot.scatter.before.length, picked.length);
    // journal panel shows the new record
    const kinds = model.snapshot.journal.map((r) => r.kind);
    assert.deepEqual(kinds, ["search", "refit"]);
    const refitRecord = model.snapshot.journal[1];
    assert.equal(refitRecord.result_version, 2);
    // undo restores the prior version's table
    await model.undo();
    assert.equal(model.snapshot.version, 1);
    assert.deepEqual(model.snapshot.distanceTable, tableBefore);
    assert.equal(model.snapshot.journal.at(-1)?.kind, "undo");
});
test("a stale client gets the conflict banner, not a silent refit", async () => {
    const api = new ApiClient(baseUrl);
    const model = new AppModel(api);
    await model.init();
    await model.search("coffee", 5);
    const picked = model.snapshot.queryHits.slice(0, 2).map((h) => h.word);
    for (const word of picked)
        model.toggleWord(word);
    // another session commits first
    const other = new ApiClient(baseUrl);
    const meta = await other.meta();
    const committed = await other.refit({
        mode: "set",
        words: ["river", "mountain"],
        base_version: meta.version,
    });
    await model.refit(); // still carries the old version
    assert.equal(model.snapshot.staleVersion, true);
    // refreshing adopts the other session's version
    await model.refreshMeta();
    assert.equal(model.snapshot.version, committed.version);
});
