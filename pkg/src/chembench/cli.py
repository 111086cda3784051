"""Command-line entry point.

Subcommands are thin adapters over the library: ``canon``, ``formula``,
``fp``, ``tanimoto``, ``scaffold-key``, ``scaffold-split``,
``build-dataset``, ``mix``, ``run-bench``, ``score``, ``report``, and
``mock-serve`` (a deterministic endpoint for offline end-to-end runs).

Exit codes: 0 success, 1 input error, 2 usage/config error.  Data goes to
stdout or ``--out`` files; logs and diagnostics go to stderr.  Defaults
may come from a key=value config file named by ``--config`` or the
``CHEMBENCH_CONFIG`` environment variable; explicit flags win over the
config file, which wins over built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from .chemgraph import (
    ParseDiagnostic,
    canonical_smiles,
    canonicalize_stream,
    molecular_formula,
    parse_smiles,
)
from .fingerprint import (
    KEYS_VERSION,
    BitFingerprint,
    FingerprintKind,
    compute_fingerprint,
    tanimoto,
)
from .harness.endpoint import ModelEndpointConfig
from .harness.mock import MockEndpoint, gold_answer_map
from .harness.report import BenchReport, render_report
from .harness.runner import (
    parse_task_kind,
    rescore_records,
    run_benchmark,
)
from .harness.score import EvalRecord, score_record, score_task
from .harness.tasks import BenchmarkTask, load_dataset
from .scaffold import DegenerateSplit, scaffold_key, scaffold_split
from .taskgen import (
    MNA_DIRECTIONS,
    ReactionRecord,
    TemplatePool,
    build_md,
    build_mna,
    build_mpp,
    build_rc,
    build_tbmd,
    mix_datasets,
    read_jsonl,
    write_jsonl,
)

log = logging.getLogger("chembench")


class InputError(Exception):
    """Bad input data: exit code 1."""


class ConfigError(Exception):
    """Bad configuration: exit code 2."""


def load_config(path: str | None) -> dict[str, str]:
    """Flat key=value file; '#' starts a comment."""
    chosen = path or os.environ.get("CHEMBENCH_CONFIG", "")
    if not chosen:
        return {}
    if not os.path.exists(chosen):
        raise ConfigError(f"config file not found: {chosen}")
    out: dict[str, str] = {}
    with open(chosen, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{chosen}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _read_lines(path: str | None):
    if path and path != "-":
        with open(path, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from sys.stdin


def _write_output(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommand implementations ----------------------------------------------


def cmd_canon(args) -> int:
    lines = list(_read_lines(args.input))
    _write_output(
        "".join(line + "\n" for line in canonicalize_stream(lines)),
        args.out)
    return 0


def cmd_formula(args) -> int:
    out_lines = []
    for line in _read_lines(args.input):
        text = line.strip()
        if not text:
            continue
        result = parse_smiles(text)
        if isinstance(result, ParseDiagnostic):
            out_lines.append(
                f"ERROR:{result.kind.value}:{result.position}:"
                f"{result.message}")
        else:
            out_lines.append(molecular_formula(result))
    _write_output("".join(line + "\n" for line in out_lines), args.out)
    return 0


def cmd_scaffold_key(args) -> int:
    out_lines = []
    for line in _read_lines(args.input):
        text = line.strip()
        if not text:
            continue
        result = parse_smiles(text)
        if isinstance(result, ParseDiagnostic):
            out_lines.append(
                f"ERROR:{result.kind.value}:{result.position}:"
                f"{result.message}")
        else:
            out_lines.append(scaffold_key(result).key)
    _write_output("".join(line + "\n" for line in out_lines), args.out)
    return 0


def cmd_fp(args) -> int:
    kind = FingerprintKind(args.kind)
    kwargs = {}
    if kind is FingerprintKind.MORGAN:
        kwargs = {"radius": args.radius, "nbits": args.nbits}
        width = args.nbits
    elif kind is FingerprintKind.PATH:
        kwargs = {"max_len": args.max_len, "nbits": args.nbits}
        width = args.nbits
    else:
        from .fingerprint import KEY_TABLE
        width = len(KEY_TABLE)
    header = (f"# kind={kind.value} width={width} version={KEYS_VERSION}"
              if kind is FingerprintKind.KEYS
              else f"# kind={kind.value} width={width} version=1")
    out_lines = [header]
    for line in _read_lines(args.input):
        text = line.strip()
        if not text:
            continue
        result = parse_smiles(text)
        if isinstance(result, ParseDiagnostic):
            out_lines.append(
                f"ERROR:{result.kind.value}:{result.position}:"
                f"{result.message}")
        else:
            out_lines.append(compute_fingerprint(result, kind, **kwargs).hex())
    _write_output("".join(line + "\n" for line in out_lines), args.out)
    return 0


def _read_fp_file(path: str) -> list[BitFingerprint]:
    with open(path, encoding="utf-8") as handle:
        lines = [line.strip() for line in handle if line.strip()]
    if not lines or not lines[0].startswith("#"):
        raise InputError(f"{path}: missing fingerprint header")
    fields = dict(
        part.split("=", 1)
        for part in lines[0][1:].split()
        if "=" in part
    )
    try:
        kind = FingerprintKind(fields["kind"])
        width = int(fields["width"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: bad header: {exc}") from exc
    out = []
    for line in lines[1:]:
        if line.startswith("ERROR:"):
            raise InputError(f"{path}: diagnostic line in input: {line}")
        out.append(BitFingerprint.from_hex(kind, width, line))
    return out


def cmd_tanimoto(args) -> int:
    left = _read_fp_file(args.file_a)
    right = _read_fp_file(args.file_b)
    if len(left) != len(right):
        raise InputError(
            f"fingerprint files differ in length: {len(left)} vs {len(right)}")
    out = "".join(f"{tanimoto(a, b):.6f}\n" for a, b in zip(left, right))
    _write_output(out, args.out)
    return 0


def cmd_scaffold_split(args) -> int:
    from .chemgraph import mol_from_smiles, SmilesParseError

    rows = []
    with open(args.input, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise InputError("empty input CSV")
        for row in reader:
            if row:
                rows.append(row)
    records = []
    for row in rows:
        try:
            records.append((row[0], mol_from_smiles(row[1])))
        except (IndexError, SmilesParseError) as exc:
            raise InputError(f"record {row[:1]}: {exc}") from exc
    try:
        assignment = scaffold_split(records, args.fraction, args.seed)
    except (DegenerateSplit, ValueError) as exc:
        raise InputError(str(exc)) from exc

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_id = {row[0]: row for row in rows}
    for name, ids in (("train", assignment.train), ("test", assignment.test)):
        with open(out_dir / f"{name}.csv", "w", encoding="utf-8",
                  newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for rid in ids:
                writer.writerow(by_id[rid])
    groups = {scaffold_key(mol).key for _, mol in records}
    manifest = {
        "seed": assignment.seed,
        "requested_train_fraction": assignment.requested_train_fraction,
        "achieved_train_fraction": assignment.achieved_train_fraction,
        "group_count": len(groups),
        "n_train": len(assignment.train),
        "n_test": len(assignment.test),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return 0


def _load_template_pool(task: str, path: str) -> TemplatePool:
    with open(path, encoding="utf-8") as handle:
        return TemplatePool.from_lines(task, handle)


def cmd_build_dataset(args) -> int:
    family = args.family
    pool = _load_template_pool(family, args.templates)
    if family in ("md", "tbmd"):
        records = _read_pair_records(args.input, "smiles", "description")
        builder = build_md if family == "md" else build_tbmd
        instances = builder(records, pool, args.seed)
    elif family == "mpp":
        instances = build_mpp(
            _read_mpp_table(args.input), pool, args.seed,
            dataset=args.dataset_name or "moleculenet")
    elif family == "rc":
        reactions = [
            ReactionRecord.from_string(line)
            for line in _read_lines(args.input)
            if line.strip()
        ]
        instances = build_rc(reactions, pool, args.seed)
    elif family == "mna":
        if args.direction not in MNA_DIRECTIONS:
            raise ConfigError(
                f"--direction must be one of {MNA_DIRECTIONS}")
        records = _read_pair_records(args.input, "smiles", "iupac")
        instances = build_mna(records, pool, args.seed, args.direction)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown family {family}")
    _write_output(write_jsonl(instances), args.out)
    return 0


def _read_pair_records(path: str, first: str, second: str):
    """CSV with a header naming the two columns, or JSONL objects."""
    text = Path(path).read_text(encoding="utf-8")
    records = []
    if text.lstrip().startswith("{"):
        for line in text.splitlines():
            if line.strip():
                obj = json.loads(line)
                records.append((obj[first], obj[second]))
        return records
    reader = csv.DictReader(text.splitlines())
    for row in reader:
        if row:
            records.append((row[first], row[second]))
    return records


def _read_mpp_table(path: str):
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.DictReader(text.splitlines())
    table = []
    for row in reader:
        smiles = row.pop("smiles")
        labels = {}
        for key, value in row.items():
            value = (value or "").strip()
            labels[key] = int(value) if value != "" else None
        table.append((smiles, labels))
    return table


def cmd_mix(args) -> int:
    chem = read_jsonl(Path(args.chem).read_text(encoding="utf-8"))
    general = read_jsonl(Path(args.general).read_text(encoding="utf-8"))
    try:
        a, b = (int(part) for part in args.ratio.split(":"))
    except ValueError as exc:
        raise ConfigError(f"--ratio must look like 1:2, got {args.ratio!r}"
                          ) from exc
    mixed = mix_datasets(chem, general, (a, b), args.seed,
                         allow_upsample=args.allow_upsample)
    _write_output(write_jsonl(mixed), args.out)
    return 0


def _endpoint_from(args, config: dict[str, str]) -> ModelEndpointConfig:
    def pick(flag_value, key: str, default):
        if flag_value is not None:
            return flag_value
        if key in config:
            raw = config[key]
            return type(default)(raw) if default is not None else raw
        return default

    base_url = pick(args.endpoint, "endpoint.base_url", None)
    if not base_url:
        raise ConfigError("an endpoint URL is required "
                          "(--endpoint or endpoint.base_url in config)")
    return ModelEndpointConfig(
        base_url=base_url,
        model_name=pick(args.model, "endpoint.model", "unknown-model"),
        api_key_env=pick(None, "endpoint.api_key_env", "CHEMBENCH_API_KEY"),
        temperature=pick(args.temperature, "endpoint.temperature", 0.0),
        max_tokens=pick(args.max_tokens, "endpoint.max_tokens", 512),
        timeout=pick(None, "endpoint.timeout", 60.0),
        max_retries=pick(None, "endpoint.max_retries", 3),
        parallelism=pick(args.parallelism, "endpoint.parallelism", 1),
        cache_dir=pick(args.cache_dir, "endpoint.cache_dir", ""),
    )


def cmd_run_bench(args, config: dict[str, str]) -> int:
    kind = parse_task_kind(args.task)
    task = BenchmarkTask(
        kind=kind,
        dataset_path=args.dataset,
        sample_size=args.n,
        seed=args.seed,
        variant=args.variant or "",
        dataset_name=args.dataset_name or "",
        train_path=args.train or "",
        prompt_template=(
            Path(args.prompt_template).read_text(encoding="utf-8").strip()
            if args.prompt_template else ""),
    )
    cfg = _endpoint_from(args, config)
    report = run_benchmark([task], cfg, args.out, shots=args.shots)
    log.info("run complete: %s", args.out)
    for task_report in report.tasks:
        for metric, value in sorted(task_report.metrics.items()):
            log.info("  %s %s=%.4f", task_report.name, metric, value)
    return 0


def cmd_score(args) -> int:
    """Score a JSONL stream of {id, prediction, reference, task} objects."""
    by_task: dict[str, list[EvalRecord]] = {}
    for line in _read_lines(args.input):
        if not line.strip():
            continue
        obj = json.loads(line)
        record = EvalRecord(
            instance_id=str(obj["id"]),
            prompt="",
            reference=obj["reference"],
            raw_output=obj.get("prediction", ""),
            extracted=obj.get("prediction", ""),
        )
        by_task.setdefault(obj["task"], []).append(record)
    reports = []
    for task_name in sorted(by_task):
        kind = parse_task_kind(task_name.split(":")[0])
        task = BenchmarkTask(
            kind=kind,
            dataset_path="",
            name=task_name,
            sample_size=len(by_task[task_name]),
            variant=(task_name.split(":")[1]
                     if ":" in task_name else ""),
        )
        records = by_task[task_name]
        for record in records:
            record.scores = score_record(task, record)
        reports.append(score_task(task, records))
    bench = BenchReport(manifest={"model": args.label}, tasks=reports)
    _write_output(bench.to_json(), args.out)
    return 0


def cmd_report(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    obj = json.loads(text)
    if isinstance(obj, list):
        reports = [BenchReport.from_json(json.dumps(o)) for o in obj]
    else:
        reports = [BenchReport.from_json(text)]
    _write_output(render_report(reports, args.format), args.out)
    return 0


def cmd_rescore(args) -> int:
    kind = parse_task_kind(args.task)
    task = BenchmarkTask(kind=kind, dataset_path="", name=args.task_name
                         or kind.value)
    report = rescore_records([task], args.records)
    _write_output(report.to_json(), args.out)
    return 0


def cmd_mock_serve(args) -> int:
    kind = parse_task_kind(args.task)
    task = BenchmarkTask(kind=kind, dataset_path=args.dataset,
                         variant=args.variant or "")
    instances = load_dataset(args.dataset)
    answers = gold_answer_map(task, instances)
    mock = MockEndpoint(answers=answers, mode=args.mode)
    with mock:
        print(mock.base_url, flush=True)
        log.info("mock endpoint on %s (mode=%s); Ctrl-C to stop",
                 mock.base_url, args.mode)
        try:
            import time
            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chembench",
        description="Chemical-language toolkit and benchmark harness.",
    )
    parser.add_argument("--config", help="key=value config file "
                        "(or set CHEMBENCH_CONFIG)")
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p, default_out="-"):
        p.add_argument("--input", "-i", default="-",
                       help="input file (default stdin)")
        p.add_argument("--out", "-o", default=default_out,
                       help="output file (default stdout)")

    p = sub.add_parser("canon", help="canonicalize SMILES, one per line")
    io_args(p)
    p = sub.add_parser("formula", help="Hill formulas, one per line")
    io_args(p)
    p = sub.add_parser("scaffold-key",
                       help="scaffold canonical SMILES, one per line")
    io_args(p)

    p = sub.add_parser("fp", help="hex fingerprints, one per line")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in FingerprintKind])
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--max-len", type=int, default=7, dest="max_len")
    p.add_argument("--nbits", type=int, default=2048)
    io_args(p)

    p = sub.add_parser("tanimoto",
                       help="pairwise Tanimoto between two fp files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--out", "-o", default="-")

    p = sub.add_parser("scaffold-split",
                       help="leakage-free scaffold split of an (id,smiles) CSV")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True,
                   help="output directory for train.csv/test.csv/manifest")

    p = sub.add_parser("build-dataset",
                       help="build instruction-tuning instances")
    p.add_argument("--family", required=True,
                   choices=["md", "tbmd", "mpp", "rc", "mna"])
    p.add_argument("--templates", required=True,
                   help="template file, one instruction per line")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--direction", choices=list(MNA_DIRECTIONS),
                   help="mna only")
    p.add_argument("--dataset-name", dest="dataset_name")
    io_args(p)

    p = sub.add_parser("mix", help="mix chem and general instance files")
    p.add_argument("--chem", required=True)
    p.add_argument("--general", required=True)
    p.add_argument("--ratio", default="1:2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-upsample", action="store_true")
    p.add_argument("--out", "-o", default="-")

    p = sub.add_parser("run-bench", help="run one benchmark task")
    p.add_argument("--task", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--endpoint", help="chat-completion URL")
    p.add_argument("--model")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--train", help="train split for few-shot exemplars")
    p.add_argument("--parallelism", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--max-tokens", type=int, dest="max_tokens")
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--variant", help="reagent_selection variant")
    p.add_argument("--dataset-name", dest="dataset_name")
    p.add_argument("--prompt-template", dest="prompt_template",
                   help="file with a custom prompt template")
    p.add_argument("--out", "-o", required=True, help="run directory")

    p = sub.add_parser("score",
                       help="score {id,prediction,reference,task} JSONL")
    p.add_argument("--label", default="model")
    io_args(p)

    p = sub.add_parser("rescore",
                       help="re-aggregate a records.jsonl into a report")
    p.add_argument("--task", required=True)
    p.add_argument("--task-name", dest="task_name")
    p.add_argument("--records", required=True)
    p.add_argument("--out", "-o", default="-")

    p = sub.add_parser("report", help="render report JSON to markdown")
    p.add_argument("--format", default="markdown",
                   choices=["markdown", "json"])
    io_args(p)

    p = sub.add_parser("mock-serve",
                       help="serve a deterministic mock endpoint")
    p.add_argument("--task", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--mode", default="gold", choices=["gold", "garbage"])
    p.add_argument("--variant")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = load_config(args.config)
        handler = {
            "canon": cmd_canon,
            "formula": cmd_formula,
            "scaffold-key": cmd_scaffold_key,
            "fp": cmd_fp,
            "tanimoto": cmd_tanimoto,
            "scaffold-split": cmd_scaffold_split,
            "build-dataset": cmd_build_dataset,
            "mix": cmd_mix,
            "score": cmd_score,
            "rescore": cmd_rescore,
            "report": cmd_report,
            "mock-serve": cmd_mock_serve,
        }.get(args.command)
        if handler is not None:
            return handler(args)
        if args.command == "run-bench":
            return cmd_run_bench(args, config)
        raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
