import type { SessionView, VocabEntryJson } from "./types.js";

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        message: string,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

async function toApiError(response: Response): Promise<ApiError> {
    let code = "unknown";
    let message = `HTTP ${response.status}`;
    try {
        const body = await response.json();
        if (typeof body.code === "string") code = body.code;
        if (typeof body.error === "string") message = body.error;
    } catch {
        /* non-JSON error body; keep defaults */
    }
    return new ApiError(response.status, code, message);
}

/** Thin typed client for the curation service. All state lives server-side. */
export class ApiClient {
    constructor(readonly baseUrl: string = "") {}

    private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await fetch(this.baseUrl + path, init);
        if (!response.ok) {
            throw await toApiError(response);
        }
        return (await response.json()) as T;
    }

    createSession(url: string, token?: string): Promise<SessionView> {
        return this.requestJson<SessionView>("/api/sessions", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(token ? { url, token } : { url }),
        });
    }

    getSession(id: string): Promise<SessionView> {
        return this.requestJson<SessionView>(`/api/sessions/${encodeURIComponent(id)}`);
    }

    patchField(id: string, path: string, value: unknown): Promise<SessionView> {
        return this.requestJson<SessionView>(
            `/api/sessions/${encodeURIComponent(id)}/fields`,
            {
                method: "PATCH",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify({ path, value }),
            },
        );
    }

    importDocument(text: string, sessionId?: string): Promise<SessionView> {
        const query = sessionId ? `?session=${encodeURIComponent(sessionId)}` : "";
        return this.requestJson<SessionView>(`/api/sessions/import${query}`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: text,
        });
    }

    exportUrl(id: string): string {
        return `${this.baseUrl}/api/sessions/${encodeURIComponent(id)}/export`;
    }

    /** The exact bytes of the exported codemeta.json, as text. */
    async fetchExport(id: string): Promise<string> {
        const response = await fetch(this.exportUrl(id));
        if (!response.ok) {
            throw await toApiError(response);
        }
        return await response.text();
    }

    async vocab(kind: "licenses" | "languages", q: string, limit = 8): Promise<VocabEntryJson[]> {
        const params = new URLSearchParams({ q, limit: String(limit) });
        const body = await this.requestJson<{ entries: VocabEntryJson[] }>(
            `/api/vocab/${kind}?${params}`,
        );
        return body.entries;
    }

    health(): Promise<{ status: string }> {
        return this.requestJson<{ status: string }>("/api/health");
    }
}
