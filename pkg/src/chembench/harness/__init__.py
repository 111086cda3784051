"""Benchmark harness: task battery, endpoint client, scoring, reports."""

from .endpoint import (
    EndpointClient,
    HttpError,
    MalformedResponse,
    ModelEndpointConfig,
    Timeout,
    TransportError,
    query_model,
)
from .extract import NoAnswerFound, extract_answer
from .mock import GARBAGE_OUTPUT, MockEndpoint, gold_answer_map, mock_for_task
from .report import BenchReport, format_value, render_report
from .runner import build_prompt, rescore_records, run_benchmark, run_task
from .score import EvalRecord, MetricUnavailable, TaskReport, score_record, score_task
from .tasks import (
    BenchmarkTask,
    Instance,
    SampleTooLarge,
    TaskKind,
    load_dataset,
    sample_instances,
)

__all__ = [
    "BenchReport",
    "BenchmarkTask",
    "EndpointClient",
    "EvalRecord",
    "GARBAGE_OUTPUT",
    "HttpError",
    "Instance",
    "MalformedResponse",
    "MetricUnavailable",
    "MockEndpoint",
    "ModelEndpointConfig",
    "NoAnswerFound",
    "SampleTooLarge",
    "TaskKind",
    "TaskReport",
    "Timeout",
    "TransportError",
    "build_prompt",
    "extract_answer",
    "format_value",
    "gold_answer_map",
    "load_dataset",
    "mock_for_task",
    "query_model",
    "render_report",
    "rescore_records",
    "run_benchmark",
    "run_task",
    "sample_instances",
    "score_record",
    "score_task",
]
