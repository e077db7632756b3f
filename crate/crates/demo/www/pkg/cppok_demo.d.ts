/* tslint:disable */
/* eslint-disable */

/**
 * `Var[Z(t)] - E[Z(t)]` for exponential jumps at `points` rates spanning
 * `[rate_min, rate_max]`.
 */
export function dispersion_gaps(k: number, lambda: number, t: number, rate_min: number, rate_max: number, points: number): Float64Array;

/**
 * Theoretical mean on the same grid as [`sample_paths`]; the large-`t`
 * asymptote for `z2`.
 */
export function mean_curve(kind: string, k: number, lambda: number, jump_rate: number, alpha: number, mu: number, tmax: number, points: number): Float64Array;

/**
 * `P[N(t) = n]` for `n = 0..=nmax`.
 */
export function pmf(k: number, lambda: number, t: number, nmax: number): Float64Array;

/**
 * `paths` sampled paths at `points` equally spaced times in `(0, tmax]`,
 * flattened path by path. `kind` is `cppok`, `z1` or `z2`.
 */
export function sample_paths(kind: string, k: number, lambda: number, jump_rate: number, alpha: number, mu: number, tmax: number, points: number, paths: number, seed: bigint): Float64Array;

/**
 * Exponential rate at which the gap changes sign.
 */
export function threshold_rate(k: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dispersion_gaps: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly mean_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly pmf: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly sample_paths: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: bigint) => [number, number, number, number];
    readonly threshold_rate: (a: number) => number;
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
