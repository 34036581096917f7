import type { PersonJson, RoleName, SessionView } from "./types.js";
import { statusBadge, statusClass } from "./status.js";

/** A person is an author, a contributor, or both — never neither. Unchecking
 * the last role is blocked client-side (the server enforces it too). */
export function canDeselectRole(person: PersonJson, role: RoleName): boolean {
    if (!person.roles.includes(role)) {
        return true; // not a deselect at all
    }
    return person.roles.length > 1;
}

export function toggledRoles(person: PersonJson, role: RoleName): RoleName[] {
    if (person.roles.includes(role)) {
        return person.roles.filter((existing) => existing !== role);
    }
    return [...person.roles, role].sort();
}

export interface PersonTableHandlers {
    onRolesChange(index: number, roles: RoleName[]): void;
    onFieldChange(index: number, field: string, value: string | null): void;
    onRemove(index: number): void;
    onAdd(person: Partial<PersonJson>): void;
    onBlocked(message: string): void;
}

const PERSON_COLUMNS: Array<{ field: string; label: string }> = [
    { field: "givenName", label: "Given name" },
    { field: "familyName", label: "Family name" },
    { field: "email", label: "Email" },
    { field: "id", label: "ORCID / id" },
    { field: "affiliation", label: "Affiliation" },
];

function roleCell(
    person: PersonJson,
    index: number,
    role: RoleName,
    handlers: PersonTableHandlers,
): HTMLTableCellElement {
    const cell = document.createElement("td");
    cell.className = "person-role-cell";
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = person.roles.includes(role);
    checkbox.dataset.role = role;
    checkbox.dataset.person = String(index);
    checkbox.addEventListener("change", () => {
        if (checkbox.checked === person.roles.includes(role)) {
            return;
        }
        if (!checkbox.checked && !canDeselectRole(person, role)) {
            checkbox.checked = true; // revert
            handlers.onBlocked(
                "A person needs at least one role — author, contributor, or both.",
            );
            return;
        }
        handlers.onRolesChange(index, toggledRoles(person, role));
    });
    cell.appendChild(checkbox);
    return cell;
}

export function renderPersonTable(
    container: HTMLElement,
    view: SessionView,
    handlers: PersonTableHandlers,
): void {
    container.innerHTML = "";
    const wrapper = document.createElement("section");
    wrapper.className = `person-table ${statusClass(view.statuses.persons)}`;
    wrapper.dataset.status = view.statuses.persons;

    const heading = document.createElement("h2");
    heading.textContent = "Authors & contributors";
    const badge = statusBadge(view.statuses.persons);
    if (badge) {
        const mark = document.createElement("span");
        mark.className = "badge";
        mark.textContent = badge;
        heading.appendChild(mark);
    }
    wrapper.appendChild(heading);

    const table = document.createElement("table");
    const head = document.createElement("tr");
    for (const column of [...PERSON_COLUMNS.map((c) => c.label), "Author", "Contributor", ""]) {
        const th = document.createElement("th");
        th.textContent = column;
        head.appendChild(th);
    }
    table.appendChild(head);

    view.record.persons.forEach((person, index) => {
        const row = document.createElement("tr");
        row.className = "person-row";
        row.dataset.identity = person.id ?? person.email ?? person.familyName ?? String(index);
        for (const column of PERSON_COLUMNS) {
            const cell = document.createElement("td");
            const input = document.createElement("input");
            input.type = "text";
            input.value = (person as unknown as Record<string, string | undefined>)[column.field] ?? "";
            input.dataset.personField = column.field;
            input.addEventListener("change", () => {
                const text = input.value.trim();
                handlers.onFieldChange(index, column.field, text.length > 0 ? text : null);
            });
            cell.appendChild(input);
            row.appendChild(cell);
        }
        row.appendChild(roleCell(person, index, "author", handlers));
        row.appendChild(roleCell(person, index, "contributor", handlers));

        const removeCell = document.createElement("td");
        const removeButton = document.createElement("button");
        removeButton.type = "button";
        removeButton.textContent = "remove";
        removeButton.addEventListener("click", () => handlers.onRemove(index));
        removeCell.appendChild(removeButton);
        row.appendChild(removeCell);
        table.appendChild(row);
    });
    wrapper.appendChild(table);

    const addRow = document.createElement("div");
    addRow.className = "person-add";
    const familyInput = document.createElement("input");
    familyInput.type = "text";
    familyInput.placeholder = "Family name (or login)";
    familyInput.id = "person-add-family";
    const authorLabel = document.createElement("label");
    const authorBox = document.createElement("input");
    authorBox.type = "checkbox";
    authorBox.checked = true;
    authorLabel.append(authorBox, " author");
    const contributorLabel = document.createElement("label");
    const contributorBox = document.createElement("input");
    contributorBox.type = "checkbox";
    contributorLabel.append(contributorBox, " contributor");
    const addButton = document.createElement("button");
    addButton.type = "button";
    addButton.textContent = "add person";
    addButton.addEventListener("click", () => {
        const roles: RoleName[] = [];
        if (authorBox.checked) roles.push("author");
        if (contributorBox.checked) roles.push("contributor");
        if (roles.length === 0) {
            handlers.onBlocked("Pick at least one role for the new person.");
            return;
        }
        if (familyInput.value.trim().length === 0) {
            handlers.onBlocked("A person needs at least a family name, email, or id.");
            return;
        }
        handlers.onAdd({ familyName: familyInput.value.trim(), roles });
        familyInput.value = "";
    });
    addRow.append(familyInput, authorLabel, contributorLabel, addButton);
    wrapper.appendChild(addRow);

    container.appendChild(wrapper);
}
