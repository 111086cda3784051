/** Fixture-set generation and the cross-validation report. */

import { readFileSync, writeFileSync } from "node:fs";

import {
  buildFixtureSet,
  computeRecord,
  FixtureSet,
  ReferenceRecord,
} from "./reference";
import { loadToolkit } from "./rdkit";
import {
  primaryCanonical,
  primaryMorganTanimoto,
  primaryScaffoldKeys,
} from "./primary";
import { pairAgreement, spearman } from "./stats";
import { tanimoto } from "./reference";

export async function generateFixtures(
  smilesPath: string,
  outPath: string,
): Promise<FixtureSet> {
  const rdkit = await loadToolkit();
  const smilesList = readFileSync(smilesPath, "utf-8")
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  const fixtures = buildFixtureSet(rdkit, smilesList);
  writeFileSync(outPath, JSON.stringify(fixtures, null, 2) + "\n");
  return fixtures;
}

export interface CrossValidation {
  n: number;
  canonicalAgreement: number;
  scaffoldAgreement: number;
  ftsSpearman: number;
  ftsPairs: number;
}

/**
 * Cross-validate the primary toolkit (driven through its CLI) against the
 * reference toolkit on a corpus the reference can parse.
 */
export async function crossValidate(
  smilesList: string[],
): Promise<CrossValidation> {
  const rdkit = await loadToolkit();
  const records: ReferenceRecord[] = [];
  for (const smiles of smilesList) {
    const record = computeRecord(rdkit, smiles);
    if (record) records.push(record);
  }
  const corpus = records.map((r) => r.smiles);

  const refCanonical = records.map((r) => `ref:${r.canonical}`);
  const ourCanonical = primaryCanonical(corpus).map((line, i) =>
    line.startsWith("ERROR:") ? `err:${i}` : `ours:${line}`,
  );
  const canonicalAgreement = pairAgreement(refCanonical, ourCanonical);

  const refScaffold = records.map((r) => `ref:${r.scaffold}`);
  const ourScaffold = primaryScaffoldKeys(corpus).map((line, i) =>
    line.startsWith("ERROR:") ? `err:${i}` : `ours:${line}`,
  );
  const scaffoldAgreement = pairAgreement(refScaffold, ourScaffold);

  const evenCount = corpus.length - (corpus.length % 2);
  const paired = corpus.slice(0, evenCount);
  const ourFts = primaryMorganTanimoto(paired);
  const refFts: number[] = [];
  for (let i = 0; i < evenCount; i += 2) {
    refFts.push(tanimoto(records[i].bits, records[i + 1].bits));
  }
  const ftsSpearman = spearman(ourFts, refFts);

  return {
    n: corpus.length,
    canonicalAgreement,
    scaffoldAgreement,
    ftsSpearman,
    ftsPairs: refFts.length,
  };
}
