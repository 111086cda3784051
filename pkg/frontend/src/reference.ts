/** Reference-toolkit computations used for fixtures and cross-validation. */

import { RefMol, RefToolkit, tryMol } from "./rdkit";
import { referenceScaffold } from "./scaffold";

export const MORGAN_OPTIONS = JSON.stringify({ radius: 2, nBits: 2048 });

export interface ReferenceEntry {
  smiles: string;
  reference_canonical: string;
  reference_formula: string;
  reference_scaffold: string;
  reference_tanimoto_pairs: Array<[string, string, number]>;
}

export interface FixtureSet {
  version: string;
  skipped: number;
  entries: ReferenceEntry[];
}

/** Formula layer of the InChI string (informational, toolkit-native form). */
export function formulaFromInchi(inchi: string): string {
  const parts = inchi.split("/");
  return parts.length > 1 ? parts[1] : "";
}

export function morganBits(mol: RefMol): Uint8Array {
  const text = mol.get_morgan_fp(MORGAN_OPTIONS);
  const bits = new Uint8Array(text.length);
  for (let i = 0; i < text.length; i++) bits[i] = text[i] === "1" ? 1 : 0;
  return bits;
}

export function tanimoto(a: Uint8Array, b: Uint8Array): number {
  let inter = 0;
  let union = 0;
  for (let i = 0; i < a.length; i++) {
    const bothOn = a[i] & b[i];
    inter += bothOn;
    union += a[i] | b[i];
  }
  return union === 0 ? 1.0 : inter / union;
}

export interface ReferenceRecord {
  smiles: string;
  canonical: string;
  formula: string;
  scaffold: string;
  bits: Uint8Array;
}

export function computeRecord(
  rdkit: RefToolkit,
  smiles: string,
): ReferenceRecord | null {
  const mol = tryMol(rdkit, smiles);
  if (!mol) return null;
  try {
    const scaffold = referenceScaffold(rdkit, mol);
    if (scaffold === null) return null;
    return {
      smiles,
      canonical: mol.get_smiles(),
      formula: formulaFromInchi(mol.get_inchi()),
      scaffold,
      bits: morganBits(mol),
    };
  } finally {
    mol.delete();
  }
}

export function buildFixtureSet(
  rdkit: RefToolkit,
  smilesList: string[],
): FixtureSet {
  const records: ReferenceRecord[] = [];
  let skipped = 0;
  for (const smiles of smilesList) {
    const record = computeRecord(rdkit, smiles);
    if (record === null) {
      skipped++;
      continue;
    }
    records.push(record);
  }
  const entries: ReferenceEntry[] = records.map((record, i) => {
    const pairs: Array<[string, string, number]> = [];
    if (i + 1 < records.length) {
      pairs.push([
        record.smiles,
        records[i + 1].smiles,
        tanimoto(record.bits, records[i + 1].bits),
      ]);
    }
    return {
      smiles: record.smiles,
      reference_canonical: record.canonical,
      reference_formula: record.formula,
      reference_scaffold: record.scaffold,
      reference_tanimoto_pairs: pairs,
    };
  });
  return { version: rdkit.version(), skipped, entries };
}
