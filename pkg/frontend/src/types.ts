/** Mirror of the service's session view JSON. The UI renders exclusively
 * from these responses and holds no merge or crosswalk logic of its own. */

export type CurationStatus = "missing" | "review" | "extracted" | "edited";

export type RoleName = "author" | "contributor";

export interface PersonJson {
    givenName?: string;
    familyName?: string;
    email?: string;
    id?: string;
    affiliation?: string;
    roles: RoleName[];
}

export interface RecordJson {
    name?: string;
    description?: string;
    version?: string;
    codeRepository?: string;
    url?: string;
    issueTracker?: string;
    downloadUrl?: string;
    identifier?: string;
    license?: string;
    programmingLanguage?: string[];
    keywords?: string[];
    dateCreated?: string;
    dateModified?: string;
    datePublished?: string;
    developmentStatus?: string;
    persons: PersonJson[];
    extras?: Record<string, unknown>;
}

export interface ViolationJson {
    field: string;
    rule: string;
    message: string;
}

export interface HarvestOutcomeJson {
    source: string;
    outcome: string;
    detail?: string;
}

export interface SessionView {
    id: string;
    record: RecordJson;
    statuses: Record<string, CurationStatus>;
    provenance: {
        fields: Record<string, string>;
        persons: Record<string, string[]>;
    };
    report: HarvestOutcomeJson[];
    violations: ViolationJson[];
    createdAt: string;
    modifiedAt: string;
}

export interface VocabEntryJson {
    id: string;
    label: string;
}
