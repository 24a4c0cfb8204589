/* tslint:disable */
/* eslint-disable */

/**
 * Proposed and FMCW estimates for one noisy echo. Fields are NaN when an
 * estimator reports failure; `message` then carries the reason.
 */
export class RadarDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    f_down_hz: number;
    f_up_hz: number;
    fmcw_range_m: number;
    fmcw_velocity_mps: number;
    message: string;
    range_m: number;
    velocity_mps: number;
}

export class Surface {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    delayCut(): Float64Array;
    dopplerCut(): Float64Array;
    /**
     * Doppler axis in Hz.
     */
    readonly fd: Float64Array;
    /**
     * Normalized magnitude, row-major in delay.
     */
    readonly mag: Float64Array;
    /**
     * Delay axis in seconds.
     */
    readonly tau: Float64Array;
}

export function ambiguitySurface(preset: string, shape: string, points: number, numeric: boolean): Surface;

export function radarEstimate(preset: string, shape: string, range_m: number, velocity_mps: number, snr_db: number, seed: bigint): RadarDemo;

export function timeFrequency(preset: string, bits: string): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_radardemo_f_down_hz: (a: number) => number;
    readonly __wbg_get_radardemo_f_up_hz: (a: number) => number;
    readonly __wbg_get_radardemo_fmcw_range_m: (a: number) => number;
    readonly __wbg_get_radardemo_fmcw_velocity_mps: (a: number) => number;
    readonly __wbg_get_radardemo_message: (a: number) => [number, number];
    readonly __wbg_get_radardemo_range_m: (a: number) => number;
    readonly __wbg_get_radardemo_velocity_mps: (a: number) => number;
    readonly __wbg_radardemo_free: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_f_down_hz: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_f_up_hz: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_fmcw_range_m: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_fmcw_velocity_mps: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_message: (a: number, b: number, c: number) => void;
    readonly __wbg_set_radardemo_range_m: (a: number, b: number) => void;
    readonly __wbg_set_radardemo_velocity_mps: (a: number, b: number) => void;
    readonly __wbg_surface_free: (a: number, b: number) => void;
    readonly ambiguitySurface: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly radarEstimate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
    readonly surface_delayCut: (a: number) => [number, number];
    readonly surface_dopplerCut: (a: number) => [number, number];
    readonly surface_fd: (a: number) => [number, number];
    readonly surface_mag: (a: number) => [number, number];
    readonly surface_tau: (a: number) => [number, number];
    readonly timeFrequency: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
