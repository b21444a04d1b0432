/* tslint:disable */
/* eslint-disable */

export class RoundTripView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    error(): Uint8Array;
    original(): Uint8Array;
    restored(): Uint8Array;
    readonly height: number;
    readonly psnr: number;
    readonly width: number;
}

/**
 * `[bd_rate_percent, bd_psnr_db]` for two `bitrate,psnr` point lists.
 */
export function bdMetrics(anchor: string, test: string): Float64Array;

/**
 * Interleaved `[x0, y0, x1, y1, ...]` samples of the Lanczos3 kernel.
 */
export function kernelCurve(samples: number): Float64Array;

/**
 * Phases as JSON: `[{"offset": -5, "taps": [...]}, ...]`.
 */
export function kernelTaps(down: boolean): string;

/**
 * Trained QP group whose model the decoder would load for `qp_base`.
 */
export function modelGroup(qp_base: number): number;

/**
 * Runs a test pattern through down-sampling and/or bit-depth reduction and
 * back. `upsampler` is "lanczos3", "nearest" or "none" (no spatial step).
 */
export function roundTrip(pattern: string, width: number, height: number, period: number, upsampler: string, ebd_bits: number, error_gain: number): RoundTripView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_roundtripview_free: (a: number, b: number) => void;
    readonly bdMetrics: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly kernelCurve: (a: number) => [number, number];
    readonly kernelTaps: (a: number) => [number, number];
    readonly modelGroup: (a: number) => number;
    readonly roundTrip: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly roundtripview_error: (a: number) => [number, number];
    readonly roundtripview_height: (a: number) => number;
    readonly roundtripview_original: (a: number) => [number, number];
    readonly roundtripview_psnr: (a: number) => number;
    readonly roundtripview_restored: (a: number) => [number, number];
    readonly roundtripview_width: (a: number) => number;
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
