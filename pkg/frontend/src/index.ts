export { TerraClient, BoundEnv, CLIENT_VERSION } from "./client.js";
export {
    TerraClientError,
    CatalogMissError,
    SessionNotFoundError,
    EpisodeFinishedError,
    NotResetError,
    DimensionMismatchError,
    SessionClosedError,
    VersionMismatchError,
} from "./errors.js";
export type {
    CatalogEntry,
    CatalogResponse,
    SessionResponse,
    ResetResponse,
    StepResponse,
    Spaces,
    HealthResponse,
    ErrorDetail,
} from "./types.js";
