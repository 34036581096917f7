import { ApiClient, ApiError } from "./api.js";
import { renderForm } from "./form.js";
import { refreshJsonPanel } from "./jsonPanel.js";
import { renderPersonTable } from "./persons.js";
import { STATUS_LEGEND, statusClass } from "./status.js";
import type { RoleName, SessionView } from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
    const found = document.getElementById(id);
    if (!found) throw new Error(`missing element #${id}`);
    return found as T;
}

function sessionIdFromHash(): string | null {
    const match = /^#\/session\/(.+)$/.exec(window.location.hash);
    return match ? decodeURIComponent(match[1]) : null;
}

function showBanner(message: string, kind: "error" | "info" = "error"): void {
    const banner = el<HTMLElement>("banner");
    banner.textContent = message;
    banner.className = message ? `banner banner--${kind}` : "banner";
}

function renderLegend(): void {
    const legend = el<HTMLElement>("legend");
    legend.innerHTML = "";
    for (const { status, text } of STATUS_LEGEND) {
        const item = document.createElement("span");
        item.className = `legend-item ${statusClass(status)}`;
        item.textContent = text;
        legend.appendChild(item);
    }
}

function renderReport(view: SessionView): void {
    const report = el<HTMLElement>("report");
    report.innerHTML = "";
    for (const entry of view.report) {
        const line = document.createElement("span");
        line.className = `report-item report--${entry.outcome}`;
        line.textContent = `${entry.source}: ${entry.outcome}`;
        line.title = entry.detail ?? "";
        report.appendChild(line);
    }
}

async function applyEdit(view: SessionView, path: string, value: unknown): Promise<void> {
    try {
        const updated = await api.patchField(view.id, path, value);
        showBanner("");
        renderCuration(updated);
    } catch (error) {
        if (error instanceof ApiError) {
            showBanner(error.message);
            renderCuration(await api.getSession(view.id));
        } else {
            throw error;
        }
    }
}

function renderCuration(view: SessionView): void {
    el<HTMLElement>("start-screen").hidden = true;
    el<HTMLElement>("curation-screen").hidden = false;
    el<HTMLElement>("session-label").textContent = view.id;

    renderLegend();
    renderReport(view);
    renderForm(el<HTMLElement>("form"), view, {
        onEdit: (path, value) => void applyEdit(view, path, value),
        vocabFetcher: (kind, query) => api.vocab(kind, query),
    });
    renderPersonTable(el<HTMLElement>("persons"), view, {
        onRolesChange: (index, roles: RoleName[]) =>
            void applyEdit(view, `persons/${index}/roles`, roles),
        onFieldChange: (index, field, value) =>
            void applyEdit(view, `persons/${index}/${field}`, value),
        onRemove: (index) => void applyEdit(view, `persons/${index}/remove`, null),
        onAdd: (person) => void applyEdit(view, "persons/add", person),
        onBlocked: (message) => showBanner(message),
    });
    void refreshJsonPanel(
        {
            pre: el<HTMLPreElement>("json-view"),
            copyButton: el<HTMLButtonElement>("copy-json"),
            downloadButton: el<HTMLButtonElement>("download-json"),
            hint: el<HTMLElement>("json-hint"),
        },
        api,
        view.id,
    );
}

async function openSession(id: string): Promise<void> {
    try {
        renderCuration(await api.getSession(id));
    } catch (error) {
        window.location.hash = "";
        showStart(error instanceof ApiError ? error.message : String(error));
    }
}

function showStart(message = ""): void {
    el<HTMLElement>("curation-screen").hidden = true;
    el<HTMLElement>("start-screen").hidden = false;
    showBanner(message);
}

function wireStartScreen(): void {
    const form = el<HTMLFormElement>("start-form");
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        const url = el<HTMLInputElement>("repo-url").value.trim();
        const token = el<HTMLInputElement>("repo-token").value.trim();
        el<HTMLButtonElement>("start-button").disabled = true;
        api.createSession(url, token || undefined)
            .then((view) => {
                window.location.hash = `#/session/${encodeURIComponent(view.id)}`;
                showBanner("");
                renderCuration(view);
            })
            .catch((error) => {
                if (error instanceof ApiError && error.code === "auth-required") {
                    showBanner(`${error.message} — paste a personal access token and retry.`);
                } else if (error instanceof ApiError) {
                    showBanner(error.message);
                } else {
                    showBanner(String(error));
                }
            })
            .finally(() => {
                el<HTMLButtonElement>("start-button").disabled = false;
            });
    });

    const importInput = el<HTMLInputElement>("import-file");
    importInput.addEventListener("change", async () => {
        const file = importInput.files?.[0];
        if (!file) return;
        const text = await file.text();
        try {
            const view = await api.importDocument(text, sessionIdFromHash() ?? undefined);
            window.location.hash = `#/session/${encodeURIComponent(view.id)}`;
            showBanner("");
            renderCuration(view);
        } catch (error) {
            showBanner(error instanceof ApiError ? error.message : String(error));
        } finally {
            importInput.value = "";
        }
    });
}

export function boot(): void {
    wireStartScreen();
    window.addEventListener("hashchange", () => {
        const id = sessionIdFromHash();
        if (id) void openSession(id);
        else showStart();
    });
    const id = sessionIdFromHash();
    if (id) void openSession(id);
    else showStart();
}

boot();
