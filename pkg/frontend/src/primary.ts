/**
 * Drivers for the primary toolkit's command-line interface.  Everything
 * the cross-validation learns about the primary flows through its public
 * CLI (batch canonicalization, scaffold keys, fingerprints, Tanimoto);
 * nothing links against its internals.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

const PYTHON = process.env.CHEMBENCH_PYTHON ?? "python3";

function runCli(args: string[], stdin: string): string {
  const result = spawnSync(PYTHON, ["-m", "chembench.cli", ...args], {
    input: stdin,
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (result.status !== 0) {
    throw new Error(
      `chembench ${args.join(" ")} exited ${result.status}: ${result.stderr}`,
    );
  }
  return result.stdout;
}

function batchLines(args: string[], inputs: string[]): string[] {
  const out = runCli(args, inputs.join("\n") + "\n");
  const lines = out.split("\n");
  if (lines[lines.length - 1] === "") lines.pop();
  if (lines.length !== inputs.length) {
    throw new Error(
      `expected ${inputs.length} output lines, got ${lines.length}`,
    );
  }
  return lines;
}

/** Canonical SMILES per line; parse failures keep their ERROR: line. */
export function primaryCanonical(smilesList: string[]): string[] {
  return batchLines(["canon"], smilesList);
}

/** Scaffold canonical key per line ("" for acyclic molecules). */
export function primaryScaffoldKeys(smilesList: string[]): string[] {
  return batchLines(["scaffold-key"], smilesList);
}

/**
 * Morgan-fingerprint Tanimoto for consecutive pairs (0,1), (2,3), ... via
 * the fp and tanimoto subcommands.
 */
export function primaryMorganTanimoto(smilesList: string[]): number[] {
  if (smilesList.length % 2 !== 0) {
    throw new Error("need an even number of SMILES");
  }
  const fpOut = runCli(
    ["fp", "--kind", "morgan"],
    smilesList.join("\n") + "\n",
  );
  const lines = fpOut.trim().split("\n");
  const header = lines[0];
  const body = lines.slice(1);
  if (body.some((line) => line.startsWith("ERROR:"))) {
    throw new Error("primary failed to fingerprint a corpus molecule");
  }
  const even = body.filter((_, i) => i % 2 === 0);
  const odd = body.filter((_, i) => i % 2 === 1);
  const dir = mkdtempSync(join(tmpdir(), "chembench-fts-"));
  try {
    const fileA = join(dir, "a.fp");
    const fileB = join(dir, "b.fp");
    writeFileSync(fileA, [header, ...even].join("\n") + "\n");
    writeFileSync(fileB, [header, ...odd].join("\n") + "\n");
    const out = runCli(["tanimoto", fileA, fileB], "");
    return out
      .trim()
      .split("\n")
      .map((line) => parseFloat(line));
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function readLines(path: string): string[] {
  return readFileSync(path, "utf-8")
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}
