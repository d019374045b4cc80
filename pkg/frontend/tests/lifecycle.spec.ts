/** Handle lifecycle: sessions must not leak across many create/close
 * cycles, and a finished handle must refuse further use. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TerraClient } from "../src/client.js";
import {
    CatalogMissError,
    DimensionMismatchError,
    EpisodeFinishedError,
    NotResetError,
    SessionClosedError,
    SessionNotFoundError,
} from "../src/errors.js";
import { startServer, type RunningServer } from "./server.js";

let server: RunningServer;
let client: TerraClient;

beforeAll(async () => {
    server = await startServer();
    client = new TerraClient(server.baseUrl);
    await client.connect();
}, 120_000);

afterAll(async () => {
    await server?.stop();
});

describe("handle lifecycle", () => {
    it(
        "10,000 create/close cycles leak no sessions",
        { timeout: 300_000 },
        async () => {
            const total = 10_000;
            const concurrency = 25;
            let opened = 0;
            const worker = async () => {
                for (;;) {
                    if (opened >= total) {
                        return;
                    }
                    opened += 1;
                    const env = await client.getEnv("PD_Biped2D_Walk-Flat-v0");
                    await env.finish();
                }
            };
            await Promise.all(Array.from({ length: concurrency }, worker));
            expect(opened).toBeGreaterThanOrEqual(total);
            expect(await client.openSessionCount()).toBe(0);
            // service still fully responsive afterwards
            const env = await client.getEnv("PD_Biped2D_Walk-Flat-v0");
            await env.setRandomSeed(3);
            const obs = await env.reset();
            expect(obs.length).toBe(env.obsDim);
            await env.finish();
            expect(await client.openSessionCount()).toBe(0);
        },
    );

    it("finish is idempotent and operations after it throw", async () => {
        const env = await client.getEnv("PD_Biped2D_Walk-Flat-v0");
        await env.finish();
        await env.finish(); // no error
        await expect(env.reset()).rejects.toThrow(SessionClosedError);
        await expect(env.step([0])).rejects.toThrow(SessionClosedError);
        await expect(env.setRandomSeed(1)).rejects.toThrow(SessionClosedError);
    });

    it("foreign session ids map to SessionNotFoundError", async () => {
        await expect(
            client.call("POST", "/sessions/s999999/reset"),
        ).rejects.toThrow(SessionNotFoundError);
    });
});

describe("error mapping", () => {
    it("unknown env name throws CatalogMissError with suggestions", async () => {
        try {
            await client.getEnv("PD_Biped2D_Walk-Mxed-v0");
            expect.fail("expected CatalogMissError");
        } catch (err) {
            expect(err).toBeInstanceOf(CatalogMissError);
            expect((err as CatalogMissError).suggestions).toContain(
                "PD_Biped2D_Walk-Mixed-v0",
            );
        }
    });

    it("step before reset throws NotResetError", async () => {
        const env = await client.getEnv("PD_Biped2D_Walk-Flat-v0");
        await expect(env.step(new Array<number>(env.actDim).fill(0))).rejects.toThrow(
            NotResetError,
        );
        await env.finish();
    });

    it("step after done throws EpisodeFinishedError", async () => {
        const env = await client.getEnv("Torque_Biped2D_Walk-Flat-v0", 1);
        await env.reset();
        const zeros = new Array<number>(env.actDim).fill(0);
        let finished = false;
        for (let i = 0; i < 200; i++) {
            const res = await env.step(zeros);
            if (res.done) {
                finished = true;
                break;
            }
        }
        expect(finished).toBe(true);
        await expect(env.step(zeros)).rejects.toThrow(EpisodeFinishedError);
        await env.finish();
    });

    it("wrong action dimension throws DimensionMismatchError", async () => {
        const env = await client.getEnv("PD_Biped2D_Walk-Flat-v0", 2);
        await env.reset();
        await expect(env.step([0])).rejects.toThrow(DimensionMismatchError);
        await env.finish();
    });

    it("spaces have the advertised dimensions", async () => {
        const env = await client.getEnv("Muscle_Dog2D_Walk-Flat-v0");
        const action = await env.actionSpace();
        const obs = await env.observationSpace();
        expect(action.minimum.length).toBe(env.actDim);
        expect(action.maximum.every((v, i) => v >= action.minimum[i]!)).toBe(true);
        expect(obs.minimum.length).toBe(env.obsDim);
        await env.finish();
    });
});
