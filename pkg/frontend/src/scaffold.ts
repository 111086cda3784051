/**
 * Reference scaffold extraction over the toolkit's own molblock graph:
 * keep ring systems (cycle membership via bridge detection), the atoms on
 * paths between rings, and atoms attached to a kept atom by a double or
 * triple bond; acyclic molecules reduce to the empty scaffold ("").
 *
 * The pruned subgraph goes back through the reference toolkit, so the
 * scaffold's canonical form is entirely the toolkit's.
 */

import { MolGraph, emitSubgraph, parseMolblock } from "./molblock";
import { RefMol, RefToolkit } from "./rdkit";

/** Bond indices that lie on some cycle (non-bridges), via iterative DFS. */
function ringBonds(nAtoms: number, bonds: MolGraph["bonds"]): Set<number> {
  const adj: Array<Array<[number, number]>> = Array.from(
    { length: nAtoms },
    () => [],
  );
  bonds.forEach((bond, i) => {
    adj[bond.a].push([bond.b, i]);
    adj[bond.b].push([bond.a, i]);
  });
  const disc = new Array<number>(nAtoms).fill(-1);
  const low = new Array<number>(nAtoms).fill(0);
  const bridges = new Set<number>();
  let timer = 0;
  for (let root = 0; root < nAtoms; root++) {
    if (disc[root] !== -1) continue;
    const stack: Array<[number, number, number]> = [[root, -1, 0]];
    while (stack.length) {
      const [v, parentEdge, ptr] = stack.pop()!;
      if (ptr === 0) {
        disc[v] = low[v] = timer++;
      }
      if (ptr < adj[v].length) {
        stack.push([v, parentEdge, ptr + 1]);
        const [w, edge] = adj[v][ptr];
        if (disc[w] === -1) {
          stack.push([w, edge, 0]);
        } else if (edge !== parentEdge) {
          low[v] = Math.min(low[v], disc[w]);
        }
      } else if (parentEdge !== -1) {
        const bond = bonds[parentEdge];
        const parent = disc[bond.a] < disc[bond.b] ? bond.a : bond.b;
        const child = parent === bond.a ? bond.b : bond.a;
        low[parent] = Math.min(low[parent], low[child]);
        if (low[child] > disc[parent]) bridges.add(parentEdge);
      }
    }
  }
  const out = new Set<number>();
  bonds.forEach((_, i) => {
    if (!bridges.has(i)) out.add(i);
  });
  return out;
}

export function scaffoldAtomSet(graph: MolGraph): Set<number> {
  const n = graph.atomLines.length;
  const inRing = new Array<boolean>(n).fill(false);
  for (const bi of ringBonds(n, graph.bonds)) {
    inRing[graph.bonds[bi].a] = true;
    inRing[graph.bonds[bi].b] = true;
  }
  if (!inRing.some(Boolean)) return new Set();

  const degree = new Array<number>(n).fill(0);
  const neighbors: number[][] = Array.from({ length: n }, () => []);
  for (const bond of graph.bonds) {
    degree[bond.a]++;
    degree[bond.b]++;
    neighbors[bond.a].push(bond.b);
    neighbors[bond.b].push(bond.a);
  }
  const removed = new Array<boolean>(n).fill(false);
  let frontier: number[] = [];
  for (let i = 0; i < n; i++) {
    if (degree[i] <= 1 && !inRing[i]) frontier.push(i);
  }
  while (frontier.length) {
    const next: number[] = [];
    for (const i of frontier) {
      if (removed[i]) continue;
      removed[i] = true;
      for (const w of neighbors[i]) {
        if (removed[w]) continue;
        degree[w]--;
        if (degree[w] <= 1 && !inRing[w]) next.push(w);
      }
    }
    frontier = next;
  }
  const keep = new Set<number>();
  for (let i = 0; i < n; i++) if (!removed[i]) keep.add(i);

  // re-attach atoms held by a double or triple bond, transitively
  let changed = true;
  while (changed) {
    changed = false;
    for (const bond of graph.bonds) {
      if (bond.type !== 2 && bond.type !== 3) continue;
      const hasA = keep.has(bond.a);
      const hasB = keep.has(bond.b);
      if (hasA !== hasB) {
        keep.add(bond.a);
        keep.add(bond.b);
        changed = true;
      }
    }
  }
  return keep;
}

/**
 * Canonical scaffold key from the reference toolkit; "" for acyclic
 * molecules, null when the toolkit rejects the pruned subgraph.
 */
export function referenceScaffold(rdkit: RefToolkit, mol: RefMol): string | null {
  const graph = parseMolblock(mol.get_molblock());
  const keep = scaffoldAtomSet(graph);
  if (keep.size === 0) return "";
  const scaffoldBlock = emitSubgraph(graph, keep);
  const scaffoldMol = rdkit.get_mol(scaffoldBlock);
  if (!scaffoldMol) return null;
  const smiles = scaffoldMol.get_smiles();
  scaffoldMol.delete();
  return smiles;
}
