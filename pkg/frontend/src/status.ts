import type { CurationStatus } from "./types.js";

/** Status -> CSS class. A pure function so the color coding is testable:
 * red marks fields needing manual input, yellow marks extracted values
 * suggested for review. */
export function statusClass(status: CurationStatus): string {
    switch (status) {
        case "missing":
            return "field--missing";
        case "review":
            return "field--review";
        case "edited":
            return "field--edited";
        case "extracted":
            return "field--extracted";
    }
}

/** Badge text shown next to the label, if any. */
export function statusBadge(status: CurationStatus): string | null {
    if (status === "edited") {
        return "edited";
    }
    if (status === "review") {
        return "review";
    }
    if (status === "missing") {
        return "needs input";
    }
    return null;
}

export const STATUS_LEGEND: Array<{ status: CurationStatus; text: string }> = [
    { status: "missing", text: "missing — manual input needed" },
    { status: "review", text: "extracted — please review" },
    { status: "extracted", text: "extracted" },
    { status: "edited", text: "edited by you" },
];
