/** Display-side constants: instance catalog and surface-code reference
 * rates used by the comparison figure.  These mirror the values bundled
 * with the experiment library; the plots never recompute them from raw
 * data.
 */

/** Logical-qubit counts of the bundled instances, for break-even guide
 * lines p_L = k p on threshold figures. */
export const INSTANCE_LOGICAL_QUBITS: Record<string, number> = {
  "d4-36": 8,
  "d6-54": 11,
  "d8-72": 14,
  "d8-200": 10,
  "d10-250": 10,
};

export interface SurfaceReference {
  distance: number;
  overheadPerLogical: number;
  plPhenom: number;
  plCircuit: number;
}

/** Reported logical error rates per logical qubit at p = 1e-3 for
 * distance-d surface codes ([[d^2, 1, d]]). */
export const SURFACE_CODE_REFERENCE: SurfaceReference[] = [
  { distance: 3, overheadPerLogical: 600, plPhenom: 3.0e-5, plCircuit: 6.9e-4 },
  { distance: 4, overheadPerLogical: 1568, plPhenom: 5.0e-6, plCircuit: 2.6e-4 },
  { distance: 5, overheadPerLogical: 3240, plPhenom: 8.0e-7, plCircuit: 4.8e-5 },
  { distance: 7, overheadPerLogical: 9464, plPhenom: 2.9e-9, plCircuit: 2.9e-6 },
  { distance: 9, overheadPerLogical: 20808, plPhenom: 2e-10, plCircuit: 1e-6 },
  { distance: 15, overheadPerLogical: 100920, plPhenom: 2.3e-18, plCircuit: 2.2e-10 },
];

/** Aggregate rate of k independent copies: 1 - (1 - pL)^k. */
export function kCopyRate(pL: number, k: number): number {
  return 1 - Math.pow(1 - pL, k);
}
