/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Last rendered camera frame, RGBA.
     */
    camera_rgba(): Uint8Array;
    /**
     * Last flow field as an RGBA magnitude image.
     */
    flow_rgba(): Uint8Array;
    height(): number;
    /**
     * Loads a bundled scenario. `controller` may be empty to keep the
     * scenario's own model.
     */
    constructor(scenario: string, controller: string);
    /**
     * Pose and the latest controller signals, as `key=value` lines.
     */
    status(): string;
    /**
     * Runs `n` control ticks.
     */
    step(n: number): void;
    /**
     * Robot positions so far as `x, y` pairs.
     */
    trail(): Float64Array;
    /**
     * Current wall endpoints as `x0, y0, x1, y1` quadruples.
     */
    walls(): Float64Array;
    width(): number;
}

/**
 * Runs a controller on explicit region flows (universe units, 0..10).
 * Returns `[angle, speed, lateral m/s, forward m/s]`; `speed` is NaN for
 * models without a speed output.
 */
export function infer(controller: string, l: number, r: number): Float64Array;

/**
 * Bundled scenario names, one per line.
 */
export function scenario_names(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_camera_rgba: (a: number) => [number, number];
    readonly demo_flow_rgba: (a: number) => [number, number];
    readonly demo_height: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_status: (a: number) => [number, number];
    readonly demo_step: (a: number, b: number) => [number, number];
    readonly demo_trail: (a: number) => [number, number];
    readonly demo_walls: (a: number) => [number, number];
    readonly demo_width: (a: number) => number;
    readonly infer: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly scenario_names: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
