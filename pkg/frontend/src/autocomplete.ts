import type { VocabEntryJson } from "./types.js";

export interface AutocompleteOptions {
    input: HTMLInputElement;
    fetcher: (query: string) => Promise<VocabEntryJson[]>;
    onPick: (entry: VocabEntryJson) => void;
    debounceMs?: number;
}

/** Debounced vocabulary dropdown. Free text stays allowed — picking a
 * suggestion is a shortcut, not a constraint (validation flags unknown
 * values server-side). */
export function attachAutocomplete(options: AutocompleteOptions): { destroy: () => void } {
    const { input, fetcher, onPick } = options;
    const debounceMs = options.debounceMs ?? 150;

    const list = document.createElement("div");
    list.className = "autocomplete-list";
    list.style.display = "none";
    input.insertAdjacentElement("afterend", list);

    let timer: ReturnType<typeof setTimeout> | null = null;
    let activeIndex = -1;
    let entries: VocabEntryJson[] = [];
    let generation = 0;

    const close = () => {
        list.style.display = "none";
        list.innerHTML = "";
        activeIndex = -1;
        entries = [];
    };

    const render = () => {
        list.innerHTML = "";
        if (entries.length === 0) {
            list.style.display = "none";
            return;
        }
        entries.forEach((entry, index) => {
            const item = document.createElement("div");
            item.className = "autocomplete-item" + (index === activeIndex ? " is-active" : "");
            item.textContent = entry.id === entry.label ? entry.id : `${entry.id} — ${entry.label}`;
            item.addEventListener("mousedown", (event) => {
                event.preventDefault();
                onPick(entry);
                close();
            });
            list.appendChild(item);
        });
        list.style.display = "block";
    };

    const query = () => {
        const wanted = ++generation;
        fetcher(input.value)
            .then((found) => {
                if (wanted !== generation) return; // stale response
                entries = found;
                activeIndex = -1;
                render();
            })
            .catch(close);
    };

    const onInput = () => {
        if (timer !== null) clearTimeout(timer);
        timer = setTimeout(query, debounceMs);
    };

    const onKeydown = (event: KeyboardEvent) => {
        if (entries.length === 0) return;
        if (event.key === "ArrowDown") {
            event.preventDefault();
            activeIndex = (activeIndex + 1) % entries.length;
            render();
        } else if (event.key === "ArrowUp") {
            event.preventDefault();
            activeIndex = (activeIndex - 1 + entries.length) % entries.length;
            render();
        } else if (event.key === "Enter" && activeIndex >= 0) {
            event.preventDefault();
            onPick(entries[activeIndex]);
            close();
        } else if (event.key === "Escape") {
            close();
        }
    };

    const onBlur = () => {
        setTimeout(close, 120);
    };

    input.addEventListener("input", onInput);
    input.addEventListener("keydown", onKeydown);
    input.addEventListener("blur", onBlur);

    return {
        destroy() {
            input.removeEventListener("input", onInput);
            input.removeEventListener("keydown", onKeydown);
            input.removeEventListener("blur", onBlur);
            list.remove();
        },
    };
}
