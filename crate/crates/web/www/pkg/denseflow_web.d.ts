/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    estimate(alpha: number, levels: number, max_iterations: number): Uint8Array;
    frame_rgba(which: number): Uint8Array;
    last_aae(): number;
    last_epe(): number;
    last_iterations(): number;
    /**
     * Width and height of a level, `[0, 0]` past the coarsest.
     */
    level_dims(index: number): Uint32Array;
    level_rgba(index: number): Uint8Array;
    lk_vectors(stride: number, radius: number): Float64Array;
    constructor(kind: string, amount: number, size: number, seed: number);
    pyramid_levels(): number;
    size(): number;
    truth_rgba(): Uint8Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_estimate: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_frame_rgba: (a: number, b: number) => [number, number];
    readonly demo_last_aae: (a: number) => number;
    readonly demo_last_epe: (a: number) => number;
    readonly demo_last_iterations: (a: number) => number;
    readonly demo_level_dims: (a: number, b: number) => [number, number];
    readonly demo_level_rgba: (a: number, b: number) => [number, number];
    readonly demo_lk_vectors: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly demo_pyramid_levels: (a: number) => number;
    readonly demo_size: (a: number) => number;
    readonly demo_truth_rgba: (a: number) => [number, number];
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
