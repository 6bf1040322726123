/* tslint:disable */
/* eslint-disable */

/**
 * A Gabriel graph with its spectral decomposition, kept alive between
 * path queries.
 */
export class PathDemo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Flattened `(x, y)` per vertex.
     */
    coords(): Float64Array;
    /**
     * Flattened `(u, v)` per edge.
     */
    edges(): Uint32Array;
    /**
     * Hop distance, or -1 when unreachable.
     */
    hops(src: number, dst: number): number;
    constructor(n: number, seed: number);
    shortest_path(alpha: number, t: number, j: number, epsilon: number, src: number, dst: number): Uint32Array;
    vertex_count(): number;
}

export function relaxation_curve(alpha: number, lambda: number, epsilon: number, j: number, t_min: number, t_max: number, points: number): Float64Array;

export function soe_coefficients(alpha: number, epsilon: number, j: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_pathdemo_free: (a: number, b: number) => void;
    readonly pathdemo_coords: (a: number) => [number, number];
    readonly pathdemo_edges: (a: number) => [number, number];
    readonly pathdemo_hops: (a: number, b: number, c: number) => number;
    readonly pathdemo_new: (a: number, b: number) => [number, number, number];
    readonly pathdemo_shortest_path: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly pathdemo_vertex_count: (a: number) => number;
    readonly relaxation_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly soe_coefficients: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
