/* tslint:disable */
/* eslint-disable */

/**
 * ML boundaries, accuracy, sensitivities and the weighted densities.
 */
export function boundaries(mu0: number, sigma0: number, mu1: number, sigma1: number, p0: number, eta: number): string;

/**
 * ML, linear and two-boundary general tradeoff curves.
 */
export function curves(mu0: number, sigma0: number, mu1: number, sigma1: number, p0: number, norm: string, zeta_steps: number, grid: number): string;

/**
 * Monte Carlo accuracy of the ML classifier after the parameter shift
 * `(mu_bar_0, sigma_bar_0, mu_bar_1, sigma_bar_1)`.
 */
export function simulate(mu0: number, sigma0: number, mu1: number, sigma1: number, p0: number, eta: number, mu_bar_0: number, sigma_bar_0: number, mu_bar_1: number, sigma_bar_1: number, n_obs: number, n_trials: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly boundaries: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number, m: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
