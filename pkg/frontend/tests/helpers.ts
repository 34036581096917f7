import type { CurationStatus, SessionView } from "../src/types.js";

/** A plausible session view for render tests: one field per status class. */
export function sampleView(overrides: Partial<SessionView> = {}): SessionView {
    const statuses: Record<string, CurationStatus> = {
        name: "extracted",
        description: "edited",
        version: "missing",
        codeRepository: "review",
        url: "review",
        issueTracker: "review",
        downloadUrl: "missing",
        identifier: "missing",
        license: "missing",
        programmingLanguage: "extracted",
        keywords: "review",
        dateCreated: "extracted",
        dateModified: "extracted",
        datePublished: "missing",
        developmentStatus: "missing",
        persons: "extracted",
    };
    return {
        id: "test-session",
        record: {
            name: "Demo Analyzer",
            description: "Curated text",
            codeRepository: "https://github.com/acme/demo",
            url: "https://acme.github.io/demo",
            issueTracker: "https://github.com/acme/demo/issues",
            programmingLanguage: ["Python", "TypeScript"],
            keywords: ["metadata", "energy-systems"],
            dateCreated: "2021-03-02",
            dateModified: "2025-07-01",
            persons: [
                {
                    givenName: "Jane",
                    familyName: "Doe",
                    email: "jane.doe@example.org",
                    id: "https://orcid.org/0000-0002-1825-0097",
                    roles: ["author"],
                },
                { familyName: "jdoe", roles: ["contributor"] },
            ],
        },
        statuses,
        provenance: {
            fields: { name: "codemeta-file", keywords: "cff-file" },
            persons: {},
        },
        report: [
            { source: "github-api", outcome: "ok" },
            { source: "cff-file", outcome: "ok" },
            { source: "codemeta-file", outcome: "absent" },
        ],
        violations: [],
        createdAt: "2026-08-10T12:00:00Z",
        modifiedAt: "2026-08-10T12:00:00Z",
        ...overrides,
    };
}

export interface RecordedRequest {
    url: string;
    method: string;
    body: string | null;
}

/** Install a fetch stub returning canned responses by URL prefix. */
export function stubFetch(
    routes: Array<{ match: (url: string) => boolean; status?: number; body: unknown }>,
): { requests: RecordedRequest[]; restore: () => void } {
    const requests: RecordedRequest[] = [];
    const original = globalThis.fetch;
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
        const url = String(input);
        requests.push({
            url,
            method: init?.method ?? "GET",
            body: typeof init?.body === "string" ? init.body : null,
        });
        const route = routes.find((r) => r.match(url));
        if (!route) {
            return new Response(JSON.stringify({ error: "no route", code: "not-found" }), {
                status: 404,
                headers: { "Content-Type": "application/json" },
            });
        }
        const body =
            typeof route.body === "string" ? route.body : JSON.stringify(route.body);
        return new Response(body, {
            status: route.status ?? 200,
            headers: { "Content-Type": "application/json" },
        });
    }) as typeof fetch;
    return {
        requests,
        restore: () => {
            globalThis.fetch = original;
        },
    };
}
