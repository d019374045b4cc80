/**
 * Cross-boundary parity: replaying a native CLI rollout through the HTTP
 * client must reproduce rewards, done flags and observations bit-exactly.
 * Both sides serialize doubles in shortest round-trip form, so strict
 * equality on the parsed numbers is the correct comparison.
 */

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TerraClient } from "../src/client.js";
import { readTrajectory, runCli, startServer, type RunningServer } from "./server.js";

const ENV_NAME = "PD_Biped2D_Walk-Mixed-v0";
const SEED = 1234;
const STEPS = 100;

let server: RunningServer;
let client: TerraClient;
let tmpDir: string;

beforeAll(async () => {
    server = await startServer();
    client = new TerraClient(server.baseUrl);
    await client.connect();
    tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "terrasuite-parity-"));
}, 120_000);

afterAll(async () => {
    await server?.stop();
    fs.rmSync(tmpDir, { recursive: true, force: true });
});

describe("catalog parity", () => {
    it("mirrors the native list in content and order", async () => {
        const cliDoc = JSON.parse(runCli(["list", "--json"])) as Array<{
            name: string;
            obs_dim: number;
            act_dim: number;
        }>;
        const remote = await client.getCatalog();
        expect(remote.length).toBe(cliDoc.length);
        expect(remote.length).toBeGreaterThanOrEqual(89);
        remote.forEach((entry, i) => {
            const native = cliDoc[i]!;
            expect(entry.name).toBe(native.name);
            expect(entry.obs_dim).toBe(native.obs_dim);
            expect(entry.act_dim).toBe(native.act_dim);
        });
    });

    it("getEnvsList returns stable ordering across calls", async () => {
        const a = await client.getEnvsList();
        const b = await client.getEnvsList();
        expect(a).toEqual(b);
    });
});

describe("rollout parity", () => {
    it(
        `replays a ${STEPS}-step seed-${SEED} rollout bit-exactly`,
        { timeout: 120_000 },
        async () => {
            const file = path.join(tmpDir, "native.jsonl");
            runCli([
                "rollout",
                ENV_NAME,
                "--seed",
                String(SEED),
                "--steps",
                String(STEPS),
                "--policy",
                "random",
                "--out",
                file,
            ]);
            const { header, records } = readTrajectory(file);
            expect(header.env).toBe(ENV_NAME);
            expect(records.length).toBe(STEPS);

            const env = await client.getEnv(ENV_NAME);
            expect(env.obsDim).toBe(records[0]!.observation.length);
            await env.setRandomSeed(SEED);
            await env.reset();

            for (const record of records) {
                const result = await env.step(record.action);
                expect(result.reward).toBe(record.reward);
                expect(result.done).toBe(record.done);
                expect(result.observation.length).toBe(record.observation.length);
                for (let i = 0; i < record.observation.length; i++) {
                    if (result.observation[i] !== record.observation[i]) {
                        expect.fail(
                            `observation[${i}] diverged at episode ${record.episode} ` +
                            `step ${record.step}: ${result.observation[i]} != ${record.observation[i]}`,
                        );
                    }
                }
                if (record.done) {
                    await env.reset();
                }
            }
            await env.finish();
        },
    );

    it("observation length equals terrain plus agent features", async () => {
        const env = await client.getEnv(ENV_NAME);
        const obs = await env.reset();
        expect(obs.length).toBe(env.obsDim);
        expect(env.obsDim).toBe(env.terrainLen + 29); // biped7 agent slice
        await env.finish();
    });
});
