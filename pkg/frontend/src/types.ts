/** Wire types for the terrasuite HTTP service. */

export interface CatalogEntry {
    name: string;
    obs_dim: number;
    act_dim: number;
    description: string;
}

export interface CatalogResponse {
    count: number;
    envs: CatalogEntry[];
}

export interface SessionResponse {
    session_id: string;
    env_name: string;
    obs_dim: number;
    act_dim: number;
    terrain_len: number;
}

export interface ResetResponse {
    observation: number[];
    terrain_len: number;
}

export interface StepResponse {
    observation: number[];
    reward: number;
    done: boolean;
    info: Record<string, unknown>;
}

export interface Spaces {
    action_min: number[];
    action_max: number[];
    observation_min: number[];
    observation_max: number[];
}

export interface HealthResponse {
    status: string;
    version: string;
}

export interface ErrorDetail {
    code: string;
    message: string;
    suggestions?: string[];
}
