/** Singleton loader for the reference toolkit's WASM module. */

import initRDKitModule from "@rdkit/rdkit";

// The published typings do not describe the JSMol surface we use, so keep a
// narrow structural type here.
export interface RefMol {
  get_smiles(): string;
  get_molblock(): string;
  get_inchi(): string;
  get_morgan_fp(options: string): string;
  delete(): void;
}

export interface RefToolkit {
  version(): string;
  get_mol(input: string): RefMol | null;
}

let toolkit: Promise<RefToolkit> | null = null;

export function loadToolkit(): Promise<RefToolkit> {
  if (toolkit === null) {
    toolkit = (initRDKitModule as unknown as () => Promise<RefToolkit>)();
  }
  return toolkit;
}

/** Parse, returning null on failure (the toolkit may also log to stderr). */
export function tryMol(rdkit: RefToolkit, smiles: string): RefMol | null {
  try {
    const mol = rdkit.get_mol(smiles);
    return mol ?? null;
  } catch {
    return null;
  }
}
