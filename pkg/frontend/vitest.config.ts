import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "happy-dom",
        environmentOptions: {
            happyDOM: {
                // the integration suite talks to a locally spawned service
                settings: { fetch: { disableSameOriginPolicy: true } },
            },
        },
        include: ["tests/**/*.test.ts"],
        testTimeout: 30000,
        hookTimeout: 60000,
    },
});
