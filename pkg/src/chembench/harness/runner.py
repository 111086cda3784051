"""End-to-end benchmark execution.

A run samples instances, renders prompts (optionally with few-shot
exemplars from a training split), queries the endpoint with bounded
parallelism, extracts and scores answers, and writes a run directory:

    manifest.json   seed, sample ids, model, timestamps, cache stats
    records.jsonl   one EvalRecord per sampled instance, id-ordered
    report.json     per-task metric tables (no volatile fields, so two
                    seeded runs against a deterministic endpoint are
                    byte-identical)
    report.md       rendered tables

No record is ever dropped: transport or extraction failures produce
zero-scored records carrying the error text.
"""

from __future__ import annotations

import datetime
import json
import os
from concurrent.futures import ThreadPoolExecutor

from .. import __version__
from .endpoint import EndpointClient, ModelEndpointConfig, TransportError
from .extract import NoAnswerFound, extract_answer
from .report import BenchReport, render_report
from .score import EvalRecord, score_record, score_task
from .tasks import (
    BenchmarkTask,
    Instance,
    TaskKind,
    load_dataset,
    reference_answer,
    sample_instances,
)


def build_prompt(task: BenchmarkTask, instance: Instance,
                 exemplars: list[Instance] | None = None) -> str:
    blocks = []
    for shot in exemplars or []:
        gold = reference_answer(task.kind, shot.reference)
        blocks.append(f"{task.render_prompt(shot)}\nAnswer: {gold}")
    blocks.append(task.render_prompt(instance))
    return "\n\n".join(blocks)


def run_task(
    task: BenchmarkTask,
    cfg: ModelEndpointConfig,
    shots: int = 0,
) -> tuple[list[EvalRecord], dict]:
    dataset = load_dataset(task.dataset_path)
    sampled = sample_instances(dataset, task.sample_size, task.seed)
    exemplars: list[Instance] = []
    if shots:
        if not task.train_path:
            raise ValueError("few-shot prompts need a train_path")
        train = load_dataset(task.train_path)
        exemplars = sample_instances(train, shots, task.seed + 1)

    client = EndpointClient(cfg)

    def evaluate(instance: Instance) -> EvalRecord:
        prompt = build_prompt(task, instance, exemplars)
        record = EvalRecord(
            instance_id=instance.id,
            prompt=prompt,
            reference=instance.reference,
        )
        try:
            record.raw_output = client.query(prompt)
        except TransportError as exc:
            record.error = f"transport: {exc}"
        if not record.error:
            candidates = instance.prompt_fields.get("candidates")
            try:
                record.extracted = extract_answer(
                    record.raw_output, task.kind, candidates)
            except NoAnswerFound as exc:
                record.error = f"extraction: {exc}"
        record.scores = score_record(task, record)
        return record

    if cfg.parallelism > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            records = list(pool.map(evaluate, sampled))
    else:
        records = [evaluate(instance) for instance in sampled]
    records.sort(key=lambda r: r.instance_id)

    task_manifest = {
        "task": task.name,
        "kind": task.kind.value,
        "dataset": task.dataset_path,
        "sample_size": task.sample_size,
        "seed": task.seed,
        "shots": shots,
        "sample_ids": [instance.id for instance in sampled],
        "requests": client.stats.requests,
        "cache_hits": client.stats.cache_hits,
        "retries": client.stats.retries,
    }
    return records, task_manifest


def run_benchmark(
    tasks: list[BenchmarkTask],
    cfg: ModelEndpointConfig,
    out_dir: str,
    shots: int = 0,
) -> BenchReport:
    os.makedirs(out_dir, exist_ok=True)
    started = datetime.datetime.now(datetime.timezone.utc)

    all_records: list[tuple[str, EvalRecord]] = []
    task_reports = []
    task_manifests = []
    for task in tasks:
        records, task_manifest = run_task(task, cfg, shots=shots)
        task_manifests.append(task_manifest)
        task_reports.append(score_task(task, records))
        all_records.extend((task.name, record) for record in records)

    # stable manifest without volatile fields feeds report.json
    stable_manifest = {
        "model": cfg.model_name,
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_tokens,
        "shots": shots,
        "toolkit_version": __version__,
        "tasks": [
            {k: v for k, v in m.items()
             if k not in ("requests", "cache_hits", "retries")}
            for m in task_manifests
        ],
    }
    report = BenchReport(manifest=stable_manifest, tasks=task_reports)

    finished = datetime.datetime.now(datetime.timezone.utc)
    full_manifest = dict(stable_manifest)
    full_manifest.update({
        "started": started.isoformat(),
        "finished": finished.isoformat(),
        "base_url": cfg.base_url,
        "parallelism": cfg.parallelism,
        "task_stats": task_manifests,
    })

    with open(os.path.join(out_dir, "manifest.json"), "w",
              encoding="utf-8") as handle:
        json.dump(full_manifest, handle, ensure_ascii=False, indent=2,
                  sort_keys=True)
    with open(os.path.join(out_dir, "records.jsonl"), "w",
              encoding="utf-8") as handle:
        for task_name, record in all_records:
            obj = {"task": task_name}
            obj.update(record.to_json_obj())
            handle.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            handle.write("\n")
    with open(os.path.join(out_dir, "report.json"), "w",
              encoding="utf-8") as handle:
        handle.write(report.to_json())
    with open(os.path.join(out_dir, "report.md"), "w",
              encoding="utf-8") as handle:
        handle.write(render_report([report], "markdown"))
    return report


def rescore_records(
    tasks: list[BenchmarkTask], records_path: str
) -> BenchReport:
    """Re-aggregate stored records; used to audit that every reported mean
    is recomputable."""
    by_task: dict[str, list[EvalRecord]] = {}
    with open(records_path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            by_task.setdefault(obj["task"], []).append(
                EvalRecord.from_json_obj(obj))
    reports = []
    for task in tasks:
        if task.name in by_task:
            reports.append(score_task(task, by_task[task.name]))
    return BenchReport(manifest={"rescored_from": records_path},
                       tasks=reports)


def parse_task_kind(value: str) -> TaskKind:
    try:
        return TaskKind(value)
    except ValueError:
        valid = ", ".join(k.value for k in TaskKind)
        raise ValueError(f"unknown task kind {value!r}; expected one of "
                         f"{valid}") from None
