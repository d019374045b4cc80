/**
 * HTTP client for the terrasuite environment service.
 *
 * A TerraClient talks to one running service; getEnv() opens a server-side
 * session and returns a BoundEnv handle with the familiar
 * reset/step/setRandomSeed surface. Numbers cross the wire as JSON doubles
 * in shortest round-trip form, so a fixed (env, seed, actions) replay
 * reproduces the native harness bit for bit.
 */

import { errorFromResponse, SessionClosedError, VersionMismatchError } from "./errors.js";
import type {
    CatalogEntry,
    CatalogResponse,
    HealthResponse,
    ResetResponse,
    SessionResponse,
    Spaces,
    StepResponse,
} from "./types.js";

export const CLIENT_VERSION = "0.1.0";

async function parseError(res: Response): Promise<Error> {
    let detail: unknown;
    try {
        const body = (await res.json()) as { detail?: unknown };
        detail = body.detail ?? body;
    } catch {
        detail = { code: "unknown", message: `HTTP ${res.status}` };
    }
    return errorFromResponse(res.status, detail as { code?: string; message?: string });
}

export class TerraClient {
    constructor(readonly baseUrl: string) {
        this.baseUrl = baseUrl.replace(/\/+$/, "");
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const res = await fetch(this.baseUrl + path, {
            method,
            headers: body === undefined ? undefined : { "content-type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!res.ok) {
            throw await parseError(res);
        }
        return (await res.json()) as T;
    }

    /** Service health plus a client/server version compatibility check. */
    async connect(): Promise<HealthResponse> {
        const health = await this.request<HealthResponse>("GET", "/health");
        const [maj, min] = health.version.split(".");
        const [cmaj, cmin] = CLIENT_VERSION.split(".");
        if (maj !== cmaj || min !== cmin) {
            throw new VersionMismatchError(CLIENT_VERSION, health.version);
        }
        return health;
    }

    async getCatalog(filter?: string): Promise<CatalogEntry[]> {
        const qs = filter === undefined ? "" : `?filter=${encodeURIComponent(filter)}`;
        const body = await this.request<CatalogResponse>("GET", `/envs${qs}`);
        return body.envs;
    }

    /** Environment names, in catalog order. */
    async getEnvsList(): Promise<string[]> {
        return (await this.getCatalog()).map((e) => e.name);
    }

    async getEnv(envName: string, seed?: number): Promise<BoundEnv> {
        const session = await this.request<SessionResponse>("POST", "/sessions", {
            env_name: envName,
            ...(seed === undefined ? {} : { seed }),
        });
        return new BoundEnv(this, session);
    }

    async openSessionCount(): Promise<number> {
        const body = await this.request<{ open_sessions: number }>("GET", "/sessions");
        return body.open_sessions;
    }

    /** @internal */
    async call<T>(method: string, path: string, body?: unknown): Promise<T> {
        return this.request<T>(method, path, body);
    }
}

export class BoundEnv {
    readonly envName: string;
    readonly obsDim: number;
    readonly actDim: number;
    readonly terrainLen: number;
    private closed = false;

    constructor(private readonly client: TerraClient, session: SessionResponse) {
        this.sessionId = session.session_id;
        this.envName = session.env_name;
        this.obsDim = session.obs_dim;
        this.actDim = session.act_dim;
        this.terrainLen = session.terrain_len;
    }

    readonly sessionId: string;

    private guard(op: string): void {
        if (this.closed) {
            throw new SessionClosedError(op);
        }
    }

    async setRandomSeed(seed: number): Promise<void> {
        this.guard("setRandomSeed");
        await this.client.call("POST", `/sessions/${this.sessionId}/seed`, { seed });
    }

    async reset(): Promise<number[]> {
        this.guard("reset");
        const body = await this.client.call<ResetResponse>(
            "POST", `/sessions/${this.sessionId}/reset`,
        );
        return body.observation;
    }

    async step(action: number[]): Promise<StepResponse> {
        this.guard("step");
        return this.client.call<StepResponse>(
            "POST", `/sessions/${this.sessionId}/step`, { action },
        );
    }

    async actionSpace(): Promise<{ minimum: number[]; maximum: number[] }> {
        const s = await this.spaces();
        return { minimum: s.action_min, maximum: s.action_max };
    }

    async observationSpace(): Promise<{ minimum: number[]; maximum: number[] }> {
        const s = await this.spaces();
        return { minimum: s.observation_min, maximum: s.observation_max };
    }

    private async spaces(): Promise<Spaces> {
        this.guard("spaces");
        return this.client.call<Spaces>("GET", `/sessions/${this.sessionId}/spaces`);
    }

    /** Close the server-side session; the handle is unusable afterwards. */
    async finish(): Promise<void> {
        if (this.closed) {
            return;
        }
        this.closed = true;
        await this.client.call("DELETE", `/sessions/${this.sessionId}`);
    }
}
