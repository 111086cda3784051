/**
 * Command entry: `generate <smiles.txt> <fixtures.json>` writes a fixture
 * set from the reference toolkit; `crossval <smiles.txt>` prints the
 * agreement statistics against the primary CLI; `corpus <out.txt> [n]`
 * writes the deterministic corpus.
 */

import { writeFileSync } from "node:fs";

import { buildCorpus } from "./corpus";
import { crossValidate, generateFixtures } from "./fixtures";
import { loadToolkit, tryMol } from "./rdkit";
import { readLines } from "./primary";

async function main(): Promise<number> {
  const [command, ...args] = process.argv.slice(2);
  if (command === "corpus") {
    const [out, n] = args;
    if (!out) {
      console.error("usage: cli corpus <out.txt> [n]");
      return 2;
    }
    const rdkit = await loadToolkit();
    const corpus = buildCorpus(n ? parseInt(n, 10) : 1000, (smiles) => {
      const mol = tryMol(rdkit, smiles);
      if (!mol) return false;
      mol.delete();
      return true;
    });
    writeFileSync(out, corpus.join("\n") + "\n");
    console.log(`wrote ${corpus.length} reference-parseable SMILES to ${out}`);
    return 0;
  }
  if (command === "generate") {
    const [smilesPath, outPath] = args;
    if (!smilesPath || !outPath) {
      console.error("usage: cli generate <smiles.txt> <fixtures.json>");
      return 2;
    }
    const fixtures = await generateFixtures(smilesPath, outPath);
    console.log(
      `wrote ${fixtures.entries.length} entries ` +
        `(${fixtures.skipped} skipped) to ${outPath}`,
    );
    return 0;
  }
  if (command === "crossval") {
    const [smilesPath] = args;
    if (!smilesPath) {
      console.error("usage: cli crossval <smiles.txt>");
      return 2;
    }
    const report = await crossValidate(readLines(smilesPath));
    console.log(JSON.stringify(report, null, 2));
    return 0;
  }
  console.error("usage: cli corpus|generate|crossval ...");
  return 2;
}

main().then(
  (code) => process.exit(code),
  (error) => {
    console.error(error);
    process.exit(1);
  },
);
