/**
 * Typed client for the workbench HTTP API (/api/v1).
 *
 * Every method resolves to the parsed JSON payload exactly as the server
 * sent it; non-2xx responses reject with an ApiError carrying the server's
 * error code so callers can branch on version conflicts, missing words, etc.
 */
export class ApiError extends Error {
    code;
    status;
    detail;
    constructor(code, message, status, detail) {
        super(message);
        this.code = code;
        this.status = status;
        this.detail = detail;
        this.name = "ApiError";
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        const response = await this.fetchFn(this.baseUrl + path, init);
        const body = await response.json().catch(() => null);
        if (!response.ok) {
            const code = body?.code ?? "internal";
            const message = body?.message ?? `HTTP ${response.status}`;
            throw new ApiError(code, message, response.status, body?.detail);
        }
        return body;
    }
    search(query, k) {
        const params = new URLSearchParams({ q: query, k: String(k) });
        return this.request(`/api/v1/search?${params}`);
    }
    refit(body) {
        return this.request("/api/v1/refit", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    undo() {
        return this.request("/api/v1/undo", { method: "POST" });
    }
    journal() {
        return this.request("/api/v1/journal");
    }
    project(words, version, baselineVersion) {
        const body = { words };
        if (version !== undefined)
            body.version = version;
        if (baselineVersion !== undefined)
            body.baseline_version = baselineVersion;
        return this.request("/api/v1/project", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    distances(words, version) {
        const params = new URLSearchParams({ words: words.join(",") });
        if (version !== undefined)
            params.set("version", String(version));
        return this.request(`/api/v1/distances?${params}`);
    }
    meta() {
        return this.request("/api/v1/meta");
    }
}
