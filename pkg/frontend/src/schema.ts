/** Curation-form layout: one entry per schema field, in form order.
 * "list" fields edit as comma-separated tags; "license" and "language"
 * fields get vocabulary autocomplete. */

export type FieldKind = "text" | "textarea" | "date" | "list" | "license" | "languages";

export interface FieldSpec {
    path: string;
    label: string;
    kind: FieldKind;
    hint?: string;
}

export const FORM_FIELDS: FieldSpec[] = [
    { path: "name", label: "Name", kind: "text" },
    { path: "description", label: "Description", kind: "textarea" },
    { path: "version", label: "Version", kind: "text" },
    { path: "codeRepository", label: "Code repository", kind: "text" },
    { path: "url", label: "Homepage", kind: "text" },
    { path: "issueTracker", label: "Issue tracker", kind: "text" },
    { path: "downloadUrl", label: "Download URL", kind: "text" },
    { path: "identifier", label: "Identifier (DOI)", kind: "text" },
    { path: "license", label: "License (SPDX)", kind: "license" },
    {
        path: "programmingLanguage",
        label: "Programming languages",
        kind: "languages",
        hint: "comma-separated",
    },
    { path: "keywords", label: "Keywords", kind: "list", hint: "comma-separated" },
    { path: "dateCreated", label: "Date created", kind: "date" },
    { path: "dateModified", label: "Date modified", kind: "date" },
    { path: "datePublished", label: "Date published", kind: "date" },
    { path: "developmentStatus", label: "Development status", kind: "text" },
];

export const LIST_FIELDS = new Set(["programmingLanguage", "keywords"]);

/** Comma-separated user input -> list value for PATCH (null clears). */
export function parseListInput(raw: string): string[] | null {
    const items = raw
        .split(",")
        .map((item) => item.trim())
        .filter((item) => item.length > 0);
    return items.length > 0 ? items : null;
}

/** Scalar user input -> PATCH value (null clears). */
export function parseScalarInput(raw: string): string | null {
    const text = raw.trim();
    return text.length > 0 ? text : null;
}

export function displayValue(value: unknown): string {
    if (value == null) return "";
    if (Array.isArray(value)) return value.join(", ");
    return String(value);
}
