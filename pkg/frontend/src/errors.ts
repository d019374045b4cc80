/** Typed errors mapped from service error codes. */

export class TerraClientError extends Error {
    constructor(message: string, readonly code: string, readonly status: number) {
        super(message);
        this.name = new.target.name;
    }
}

export class CatalogMissError extends TerraClientError {
    constructor(message: string, readonly suggestions: string[]) {
        super(message, "catalog_miss", 404);
    }
}

export class SessionNotFoundError extends TerraClientError {
    constructor(message: string) {
        super(message, "session_not_found", 404);
    }
}

export class EpisodeFinishedError extends TerraClientError {
    constructor(message: string) {
        super(message, "episode_finished", 409);
    }
}

export class NotResetError extends TerraClientError {
    constructor(message: string) {
        super(message, "not_reset", 409);
    }
}

export class DimensionMismatchError extends TerraClientError {
    constructor(message: string) {
        super(message, "bad_request", 400);
    }
}

export class SessionClosedError extends Error {
    constructor(op: string) {
        super(`env handle is finished; cannot ${op}`);
        this.name = "SessionClosedError";
    }
}

export class VersionMismatchError extends Error {
    constructor(clientVersion: string, serverVersion: string) {
        super(
            `client ${clientVersion} does not match service ${serverVersion}; ` +
            "upgrade whichever side is behind",
        );
        this.name = "VersionMismatchError";
    }
}

export function errorFromResponse(status: number, detail: ErrorDetailLike): Error {
    const message = detail.message ?? JSON.stringify(detail);
    switch (detail.code) {
        case "catalog_miss":
            return new CatalogMissError(message, detail.suggestions ?? []);
        case "session_not_found":
            return new SessionNotFoundError(message);
        case "episode_finished":
            return new EpisodeFinishedError(message);
        case "not_reset":
            return new NotResetError(message);
        case "bad_request":
            return new DimensionMismatchError(message);
        default:
            return new TerraClientError(message, detail.code ?? "unknown", status);
    }
}

interface ErrorDetailLike {
    code?: string;
    message?: string;
    suggestions?: string[];
}
