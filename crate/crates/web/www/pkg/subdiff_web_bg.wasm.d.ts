/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_pathdemo_free: (a: number, b: number) => void;
export const pathdemo_coords: (a: number) => [number, number];
export const pathdemo_edges: (a: number) => [number, number];
export const pathdemo_hops: (a: number, b: number, c: number) => number;
export const pathdemo_new: (a: number, b: number) => [number, number, number];
export const pathdemo_shortest_path: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const pathdemo_vertex_count: (a: number) => number;
export const relaxation_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const soe_coefficients: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
