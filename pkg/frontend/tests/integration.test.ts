// @vitest-environment happy-dom
//
// UI contract against the real service with the demo fixtures: styling maps
// exactly onto statuses, the last role cannot be deselected, copy bytes
// equal the download endpoint bytes, and a reload reproduces the same state.

import { spawn, type ChildProcess } from "node:child_process";
import { resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderForm } from "../src/form.js";
import { refreshJsonPanel } from "../src/jsonPanel.js";
import { renderPersonTable } from "../src/persons.js";
import type { SessionView } from "../src/types.js";

const PORT = 18300 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const api = new ApiClient(BASE);

async function waitForHealth(timeoutMs = 30000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    let lastError: unknown = null;
    while (Date.now() < deadline) {
        try {
            const response = await fetch(`${BASE}/api/health`);
            if (response.ok) return;
        } catch (error) {
            lastError = error;
        }
        await new Promise((resolve) => setTimeout(resolve, 250));
    }
    throw new Error(`service did not come up on ${BASE}: ${lastError}`);
}

beforeAll(async () => {
    // vitest's root is frontend/; the package and its fixtures live one up
    const frontendRoot = process.cwd();
    server = spawn(
        process.env.PYTHON ?? "python3",
        [
            "-m", "smecs.cli", "serve",
            "--host", "127.0.0.1",
            "--port", String(PORT),
            "--fixtures", resolve(frontendRoot, "..", "tests", "fixtures", "demo"),
            "--static-dir", resolve(frontendRoot, "dist"),
        ],
        { stdio: "ignore" },
    );
    await waitForHealth();
}, 60000);

afterAll(() => {
    server?.kill("SIGTERM");
});

async function freshSession(url = "https://github.com/acme/demo"): Promise<SessionView> {
    return api.createSession(url);
}

function renderedStatuses(container: HTMLElement): Map<string, { missing: boolean; review: boolean }> {
    const result = new Map<string, { missing: boolean; review: boolean }>();
    for (const field of container.querySelectorAll<HTMLElement>(".field")) {
        result.set(field.dataset.field as string, {
            missing: field.classList.contains("field--missing"),
            review: field.classList.contains("field--review"),
        });
    }
    return result;
}

describe("curation UI against the live service", () => {
    it("red styling appears exactly on missing fields, yellow exactly on review", async () => {
        const view = await freshSession("https://github.com/acme/bare");
        document.body.innerHTML = "<div id='form'></div>";
        const container = document.getElementById("form") as HTMLElement;
        renderForm(container, view, {
            onEdit: () => {},
            vocabFetcher: (kind, q) => api.vocab(kind, q),
        });
        const rendered = renderedStatuses(container);
        expect(rendered.size).toBeGreaterThan(0);
        for (const [path, flags] of rendered) {
            expect(flags.missing, `${path} red?`).toBe(view.statuses[path] === "missing");
            expect(flags.review, `${path} yellow?`).toBe(view.statuses[path] === "review");
        }
        // the bare fixture really exercises both colors
        expect(view.statuses.license).toBe("missing");
        expect(view.statuses.codeRepository).toBe("review");
    });

    it("unchecking a person's last role is blocked in the UI and by the server", async () => {
        const view = await freshSession();
        document.body.innerHTML = "<div id='persons'></div>";
        const container = document.getElementById("persons") as HTMLElement;
        const onBlocked = vi.fn();
        const onRolesChange = vi.fn();
        renderPersonTable(container, view, {
            onRolesChange,
            onFieldChange: () => {},
            onRemove: () => {},
            onAdd: () => {},
            onBlocked,
        });
        const authorBox = container.querySelector(
            "tr.person-row input[data-role=author]",
        ) as HTMLInputElement;
        authorBox.checked = false;
        authorBox.dispatchEvent(new Event("change"));
        expect(onBlocked).toHaveBeenCalledOnce();
        expect(onRolesChange).not.toHaveBeenCalled();

        // server-side enforcement of the same invariant
        const denied = await api.patchField(view.id, "persons/0/roles", []).catch((e) => e);
        expect(denied.code).toBe("invariant-violation");
        expect(denied.status).toBe(409);
    });

    it("copy-to-clipboard bytes equal the download endpoint bytes", async () => {
        const view = await freshSession();
        document.body.innerHTML =
            "<pre id='json-view'></pre><button id='copy'></button>" +
            "<button id='download'></button><p id='hint'></p>";
        const copied: string[] = [];
        Object.defineProperty(navigator, "clipboard", {
            value: { writeText: async (text: string) => void copied.push(text) },
            configurable: true,
        });
        const text = await refreshJsonPanel(
            {
                pre: document.getElementById("json-view") as HTMLPreElement,
                copyButton: document.getElementById("copy") as HTMLButtonElement,
                downloadButton: document.getElementById("download") as HTMLButtonElement,
                hint: document.getElementById("hint") as HTMLElement,
            },
            api,
            view.id,
        );
        (document.getElementById("copy") as HTMLButtonElement).click();
        await new Promise((resolve) => setTimeout(resolve, 10));

        const downloadResponse = await fetch(api.exportUrl(view.id));
        expect(downloadResponse.headers.get("content-disposition")).toContain("codemeta.json");
        const downloadBytes = Buffer.from(await downloadResponse.arrayBuffer());
        expect(copied.length).toBe(1);
        expect(Buffer.from(copied[0], "utf-8").equals(downloadBytes)).toBe(true);
        expect(Buffer.from(text ?? "", "utf-8").equals(downloadBytes)).toBe(true);
    });

    it("a reload reproduces identical rendered state from the session id", async () => {
        const created = await freshSession();
        await api.patchField(created.id, "description", "Reload me");

        interface Snapshot {
            html: string;
            values: Record<string, string>;
            checks: Record<string, boolean>;
        }

        const renderOnce = async (): Promise<Snapshot> => {
            const view = await api.getSession(created.id); // what a page load does
            document.body.innerHTML = "<div id='form'></div><div id='persons'></div>";
            renderForm(document.getElementById("form") as HTMLElement, view, {
                onEdit: () => {},
                vocabFetcher: async () => [],
            });
            renderPersonTable(document.getElementById("persons") as HTMLElement, view, {
                onRolesChange: () => {},
                onFieldChange: () => {},
                onRemove: () => {},
                onAdd: () => {},
                onBlocked: () => {},
            });
            // input values and checkbox states live in DOM properties, not
            // in the serialized markup, so the snapshot collects both
            const values: Record<string, string> = {};
            const checks: Record<string, boolean> = {};
            document
                .querySelectorAll<HTMLInputElement | HTMLTextAreaElement>("input[type=text], textarea")
                .forEach((element, index) => {
                    values[element.id || `anon-${index}`] = element.value;
                });
            document
                .querySelectorAll<HTMLInputElement>("input[type=checkbox]")
                .forEach((element, index) => {
                    checks[`${element.dataset.person ?? "add"}:${element.dataset.role ?? index}`] =
                        element.checked;
                });
            return { html: document.body.innerHTML, values, checks };
        };

        const first = await renderOnce();
        const second = await renderOnce();
        expect(second).toEqual(first);
        expect(first.values["field-description"]).toBe("Reload me");
    });

    it("export is blocked with a hint while the name is missing", async () => {
        const view = await freshSession();
        await api.patchField(view.id, "name", null);
        document.body.innerHTML =
            "<pre id='json-view'></pre><button id='copy'></button>" +
            "<button id='download'></button><p id='hint'></p>";
        const elements = {
            pre: document.getElementById("json-view") as HTMLPreElement,
            copyButton: document.getElementById("copy") as HTMLButtonElement,
            downloadButton: document.getElementById("download") as HTMLButtonElement,
            hint: document.getElementById("hint") as HTMLElement,
        };
        const text = await refreshJsonPanel(elements, api, view.id);
        expect(text).toBeNull();
        expect(elements.hint.textContent).toContain("name");
        expect(elements.copyButton.disabled).toBe(true);
    });

    it("serves the built UI as static assets", async () => {
        const index = await fetch(`${BASE}/`);
        expect(index.status).toBe(200);
        expect(await index.text()).toContain("SMECS");
    });
});
