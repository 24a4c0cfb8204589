/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_radardemo_f_down_hz: (a: number) => number;
export const __wbg_get_radardemo_f_up_hz: (a: number) => number;
export const __wbg_get_radardemo_fmcw_range_m: (a: number) => number;
export const __wbg_get_radardemo_fmcw_velocity_mps: (a: number) => number;
export const __wbg_get_radardemo_message: (a: number) => [number, number];
export const __wbg_get_radardemo_range_m: (a: number) => number;
export const __wbg_get_radardemo_velocity_mps: (a: number) => number;
export const __wbg_radardemo_free: (a: number, b: number) => void;
export const __wbg_set_radardemo_f_down_hz: (a: number, b: number) => void;
export const __wbg_set_radardemo_f_up_hz: (a: number, b: number) => void;
export const __wbg_set_radardemo_fmcw_range_m: (a: number, b: number) => void;
export const __wbg_set_radardemo_fmcw_velocity_mps: (a: number, b: number) => void;
export const __wbg_set_radardemo_message: (a: number, b: number, c: number) => void;
export const __wbg_set_radardemo_range_m: (a: number, b: number) => void;
export const __wbg_set_radardemo_velocity_mps: (a: number, b: number) => void;
export const __wbg_surface_free: (a: number, b: number) => void;
export const ambiguitySurface: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const radarEstimate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
export const surface_delayCut: (a: number) => [number, number];
export const surface_dopplerCut: (a: number) => [number, number];
export const surface_fd: (a: number) => [number, number];
export const surface_mag: (a: number) => [number, number];
export const surface_tau: (a: number) => [number, number];
export const timeFrequency: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
