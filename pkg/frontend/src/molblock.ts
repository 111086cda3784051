/**
 * Minimal V2000 molblock surgery: parse the atom/bond/property blocks the
 * reference toolkit writes, and re-emit a molblock restricted to a subset
 * of atoms.  Deleting side-chain atoms frees valence, so the reader
 * refills implicit hydrogens on the kept atoms, which is exactly the
 * behavior scaffold extraction needs.
 */

export interface MolGraph {
  header: string[]; // three header lines
  atomLines: string[];
  bonds: Array<{ a: number; b: number; type: number; line: string }>;
  /** property entries like ["CHG", atomIndex, value] (atomIndex 0-based) */
  props: Array<{ tag: string; atom: number; value: number }>;
}

export function parseMolblock(text: string): MolGraph {
  const lines = text.split("\n");
  const counts = lines[3];
  const nAtoms = parseInt(counts.slice(0, 3), 10);
  const nBonds = parseInt(counts.slice(3, 6), 10);
  const atomLines = lines.slice(4, 4 + nAtoms);
  const bonds = [];
  for (let i = 0; i < nBonds; i++) {
    const line = lines[4 + nAtoms + i];
    bonds.push({
      a: parseInt(line.slice(0, 3), 10) - 1,
      b: parseInt(line.slice(3, 6), 10) - 1,
      type: parseInt(line.slice(6, 9), 10),
      line,
    });
  }
  const props: MolGraph["props"] = [];
  for (const line of lines.slice(4 + nAtoms + nBonds)) {
    const match = line.match(/^M {2}(CHG|ISO|RAD)\s+(\d+)((?:\s+-?\d+)+)\s*$/);
    if (!match) continue;
    const numbers = match[3].trim().split(/\s+/).map(Number);
    for (let i = 0; i + 1 < numbers.length; i += 2) {
      props.push({ tag: match[1], atom: numbers[i] - 1, value: numbers[i + 1] });
    }
  }
  return { header: lines.slice(0, 3), atomLines, bonds, props };
}

const pad3 = (n: number) => String(n).padStart(3, " ");

export function emitSubgraph(graph: MolGraph, keep: Set<number>): string {
  const order = [...keep].sort((x, y) => x - y);
  const newIndex = new Map<number, number>();
  order.forEach((old, i) => newIndex.set(old, i));
  const bonds = graph.bonds.filter((b) => keep.has(b.a) && keep.has(b.b));

  const lines: string[] = [...graph.header];
  lines.push(
    `${pad3(order.length)}${pad3(bonds.length)}  0  0  0  0  0  0  0  0999 V2000`,
  );
  for (const old of order) lines.push(graph.atomLines[old]);
  for (const bond of bonds) {
    const a = pad3(newIndex.get(bond.a)! + 1);
    const b = pad3(newIndex.get(bond.b)! + 1);
    lines.push(`${a}${b}${bond.line.slice(6)}`);
  }
  const pad4 = (n: number) => String(n).padStart(4, " ");
  for (const tag of ["CHG", "ISO", "RAD"]) {
    const kept = graph.props.filter((p) => p.tag === tag && keep.has(p.atom));
    for (let i = 0; i < kept.length; i += 8) {
      const chunk = kept.slice(i, i + 8);
      const body = chunk
        .map((p) => pad4(newIndex.get(p.atom)! + 1) + pad4(p.value))
        .join("");
      lines.push(`M  ${tag}${pad3(chunk.length)}${body}`);
    }
  }
  lines.push("M  END");
  return lines.join("\n") + "\n";
}
