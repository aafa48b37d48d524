/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_estimate: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const demo_frame_rgba: (a: number, b: number) => [number, number];
export const demo_last_aae: (a: number) => number;
export const demo_last_epe: (a: number) => number;
export const demo_last_iterations: (a: number) => number;
export const demo_level_dims: (a: number, b: number) => [number, number];
export const demo_level_rgba: (a: number, b: number) => [number, number];
export const demo_lk_vectors: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const demo_pyramid_levels: (a: number) => number;
export const demo_size: (a: number) => number;
export const demo_truth_rgba: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
