import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";

export interface JsonPanelElements {
    pre: HTMLPreElement;
    copyButton: HTMLButtonElement;
    downloadButton: HTMLButtonElement;
    hint: HTMLElement;
}

/** Live JSON viewer: always shows the current export, refreshed after every
 * successful edit. Copy places the exact export bytes on the clipboard; the
 * download button saves the same text as codemeta.json. While the name is
 * missing, export is blocked and the panel says why. */
export async function refreshJsonPanel(
    elements: JsonPanelElements,
    api: ApiClient,
    sessionId: string,
): Promise<string | null> {
    let text: string;
    try {
        text = await api.fetchExport(sessionId);
    } catch (error) {
        if (error instanceof ApiError && error.code === "missing-name") {
            elements.pre.textContent = "";
            elements.hint.textContent =
                "Export is blocked until the software name is filled in.";
            elements.copyButton.disabled = true;
            elements.downloadButton.disabled = true;
            return null;
        }
        throw error;
    }
    elements.pre.textContent = text;
    elements.hint.textContent = "";
    elements.copyButton.disabled = false;
    elements.downloadButton.disabled = false;

    elements.copyButton.onclick = async () => {
        await navigator.clipboard.writeText(text);
        elements.hint.textContent = "Copied to clipboard.";
    };
    elements.downloadButton.onclick = () => {
        const blob = new Blob([text], { type: "application/json" });
        const url = URL.createObjectURL(blob);
        const anchor = document.createElement("a");
        anchor.href = url;
        anchor.download = "codemeta.json";
        anchor.click();
        URL.revokeObjectURL(url);
    };
    return text;
}
