/**
 * Deterministic SMILES corpus for cross-validation.
 *
 * The list mixes ring/substituent template products with textual rewrites
 * of the same molecule (reversed chains, rotated ring starts, reordered
 * branches) so that same/different decisions carry real information.
 * Aromatic rings are always written lowercase and nothing carries stereo
 * marks, keeping both toolkits inside their shared conventions.
 */

const RINGS = [
  "c1ccccc1", "C1CCCCC1", "c1ccncc1", "C1CCNCC1", "c1ccoc1", "c1ccsc1",
  "C1CCOCC1", "c1cc[nH]c1", "C1CC1", "C1CCC1", "C1CCCC1", "c1ccc2ccccc2c1",
  "C1CC2CCC1CC2", "C1CCOC1", "C1CCSC1", "c1cncnc1", "C1CNCCN1", "C1COCCO1",
  "O=C1CCCC1", "O=C1CCCCC1", "c1ccc2[nH]ccc2c1", "N1CCCCC1",
];

const SUBS = [
  "C", "CC", "CCC", "CC(C)", "O", "OC", "N", "NC", "F", "Cl", "Br", "I",
  "C(=O)O", "C(=O)OC", "C(=O)N", "C#N", "C(F)(F)F", "S", "SC", "OCC",
  "NCC", "CCO", "CCCC", "C(C)(C)C",
];

/** [original, equivalent rewrite] pairs, same molecule by construction. */
const REWRITE_PAIRS: Array<[string, string]> = [
  ["CCO", "OCC"],
  ["CCN", "NCC"],
  ["CCCl", "ClCC"],
  ["CC(C)C", "C(C)(C)C"],
  ["CC(=O)O", "OC(=O)C"],
  ["CC(=O)OC", "COC(=O)C"],
  ["CCOCC", "C(C)OCC"],
  ["Cc1ccccc1", "c1ccccc1C"],
  ["Oc1ccccc1", "c1ccccc1O"],
  ["Nc1ccc(O)cc1", "Oc1ccc(N)cc1"],
  ["c1ccncc1", "c1cnccc1"],
  ["c1ccoc1", "c1occc1"],
  ["CC(=O)Nc1ccccc1", "c1ccccc1NC(=O)C"],
  ["OCC(O)CO", "C(O)(CO)CO"],
  ["CCC#N", "N#CCC"],
  ["FC(F)(F)c1ccccc1", "c1ccccc1C(F)(F)F"],
  ["CSC", "S(C)C"],
  ["CN(C)C", "N(C)(C)C"],
  ["O=C(O)CCC(=O)O", "OC(=O)CCC(O)=O"],
  ["Clc1ccc(Cl)cc1", "c1cc(Cl)ccc1Cl"],
  ["CC1CCCCC1", "C1CCCCC1C"],
  ["OC1CCCCC1", "C1CCCCC1O"],
  ["CC(=O)c1ccccc1", "c1ccccc1C(C)=O"],
  ["COc1ccccc1", "c1ccccc1OC"],
  ["CC(O)C", "C(C)(O)C"],
];

const EXTRAS = [
  "[NH4+]", "[OH-]", "[Na+].[Cl-]", "CC(=O)[O-].[Na+]", "[13CH4]",
  "C[N+](C)(C)C", "O=[N+]([O-])c1ccccc1", "O=S(=O)(O)O", "N#Cc1ccccc1",
  "OS(=O)(=O)c1ccccc1", "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
  "CC(=O)Oc1ccccc1C(=O)O", "CC(=O)Nc1ccc(O)cc1", "NCCc1ccc(O)c(O)c1",
  "O=C(Nc1ccccc1)c1ccccc1", "COc1ccc(CC#N)cc1", "C1CCCCC1C1CCCCC1",
  "c1ccc(cc1)c1ccccc1", "Brc1ccc(Br)cc1", "O=C(O)CCCCC(=O)O",
];

const TAILS = ["", "C", "CC", "O", "N", "F", "Cl", "OC", "C#N", "C(=O)O"];

export function buildCorpus(
  target: number,
  isValid: (smiles: string) => boolean = () => true,
): string[] {
  const seen = new Set<string>();
  const out: string[] = [];
  const push = (smiles: string) => {
    if (!seen.has(smiles) && isValid(smiles)) {
      seen.add(smiles);
      out.push(smiles);
    }
  };
  for (const [a, b] of REWRITE_PAIRS) {
    push(a);
    push(b);
  }
  for (const smiles of EXTRAS) push(smiles);
  outer: for (const tail of TAILS) {
    for (const sub of SUBS) {
      for (const ring of RINGS) {
        push(sub + ring + tail);
        if (out.length >= target) break outer;
      }
    }
  }
  if (out.length < target) {
    throw new Error(
      `corpus templates exhausted at ${out.length} of ${target}`,
    );
  }
  return out.slice(0, target);
}
