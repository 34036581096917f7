import type { SessionView, VocabEntryJson } from "./types.js";
import { FORM_FIELDS, displayValue, parseListInput, parseScalarInput } from "./schema.js";
import { statusBadge, statusClass } from "./status.js";
import { attachAutocomplete } from "./autocomplete.js";

export interface FormHandlers {
    onEdit(path: string, value: unknown): void;
    vocabFetcher(kind: "licenses" | "languages", query: string): Promise<VocabEntryJson[]>;
}

function fieldInput(spec: (typeof FORM_FIELDS)[number], value: string): HTMLInputElement | HTMLTextAreaElement {
    if (spec.kind === "textarea") {
        const area = document.createElement("textarea");
        area.rows = 3;
        area.value = value;
        return area;
    }
    const input = document.createElement("input");
    input.type = "text";
    if (spec.kind === "date") {
        input.placeholder = "YYYY-MM-DD";
    }
    input.value = value;
    return input;
}

/** Render the whole curation form from a session view. Every schema field
 * appears; the wrapper class encodes the curation status (red = missing,
 * yellow = review). Edits PATCH the service and the caller re-renders from
 * the response. */
export function renderForm(container: HTMLElement, view: SessionView, handlers: FormHandlers): void {
    container.innerHTML = "";
    const violationsByField = new Map<string, string[]>();
    for (const violation of view.violations) {
        const existing = violationsByField.get(violation.field) ?? [];
        existing.push(violation.message);
        violationsByField.set(violation.field, existing);
    }

    for (const spec of FORM_FIELDS) {
        const status = view.statuses[spec.path];
        const wrapper = document.createElement("div");
        wrapper.className = `field ${statusClass(status)}`;
        wrapper.dataset.field = spec.path;
        wrapper.dataset.status = status;

        const label = document.createElement("label");
        label.textContent = spec.label;
        const badge = statusBadge(status);
        if (badge) {
            const mark = document.createElement("span");
            mark.className = "badge";
            mark.textContent = badge;
            label.appendChild(mark);
        }
        const source = view.provenance.fields[spec.path];
        if (source) {
            const origin = document.createElement("span");
            origin.className = "origin";
            origin.textContent = source;
            label.appendChild(origin);
        }
        wrapper.appendChild(label);

        const raw = (view.record as unknown as Record<string, unknown>)[spec.path];
        const input = fieldInput(spec, displayValue(raw));
        input.id = `field-${spec.path}`;
        if (spec.hint) {
            input.placeholder = spec.hint;
        }
        input.addEventListener("change", () => {
            const value =
                spec.kind === "list" || spec.kind === "languages"
                    ? parseListInput(input.value)
                    : parseScalarInput(input.value);
            handlers.onEdit(spec.path, value);
        });
        wrapper.appendChild(input);

        if (spec.kind === "license" && input instanceof HTMLInputElement) {
            attachAutocomplete({
                input,
                fetcher: (query) => handlers.vocabFetcher("licenses", query),
                onPick: (entry) => {
                    input.value = entry.id;
                    handlers.onEdit(spec.path, entry.id);
                },
            });
        }
        if (spec.kind === "languages" && input instanceof HTMLInputElement) {
            attachAutocomplete({
                input,
                fetcher: (query) => {
                    const tail = query.split(",").pop()?.trim() ?? "";
                    return handlers.vocabFetcher("languages", tail);
                },
                onPick: (entry) => {
                    const parts = input.value.split(",").map((p) => p.trim()).filter(Boolean);
                    parts.pop();
                    parts.push(entry.id);
                    input.value = parts.join(", ");
                    handlers.onEdit(spec.path, parseListInput(input.value));
                },
            });
        }

        for (const message of violationsByField.get(spec.path) ?? []) {
            const note = document.createElement("p");
            note.className = "violation";
            note.textContent = message;
            wrapper.appendChild(note);
        }
        container.appendChild(wrapper);
    }
}
