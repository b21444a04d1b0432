/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_roundtripview_free: (a: number, b: number) => void;
export const bdMetrics: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const kernelCurve: (a: number) => [number, number];
export const kernelTaps: (a: number) => [number, number];
export const modelGroup: (a: number) => number;
export const roundTrip: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const roundtripview_error: (a: number) => [number, number];
export const roundtripview_height: (a: number) => number;
export const roundtripview_original: (a: number) => [number, number];
export const roundtripview_psnr: (a: number) => number;
export const roundtripview_restored: (a: number) => [number, number];
export const roundtripview_width: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
