/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_camera_rgba: (a: number) => [number, number];
export const demo_flow_rgba: (a: number) => [number, number];
export const demo_height: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const demo_status: (a: number) => [number, number];
export const demo_step: (a: number, b: number) => [number, number];
export const demo_trail: (a: number) => [number, number];
export const demo_walls: (a: number) => [number, number];
export const demo_width: (a: number) => number;
export const infer: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const scenario_names: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
