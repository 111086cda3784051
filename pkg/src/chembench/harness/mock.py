"""Deterministic mock chat endpoints for tests and offline runs.

``gold`` mode answers every prompt with the gold answer of the instance
whose rendered prompt matches (it is built from the same dataset and task
the harness runs, so a run against it must score 100% on accuracy-type
metrics).  ``garbage`` mode returns a constant non-answer.  ``flaky``
wraps another mode and fails with HTTP 500 a fixed number of times per
prompt before succeeding, to exercise retry logic.
"""

from __future__ import annotations

import json
import threading
from collections import defaultdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .runner import build_prompt
from .tasks import BenchmarkTask, Instance, load_dataset, reference_answer

GARBAGE_OUTPUT = "UNKNOWN ??? there is nothing useful here !!!"


def gold_answer_map(task: BenchmarkTask,
                    instances: list[Instance],
                    exemplars: list[Instance] | None = None) -> dict[str, str]:
    return {
        build_prompt(task, instance, exemplars):
            reference_answer(task.kind, instance.reference)
        for instance in instances
    }


class MockEndpoint:
    """In-process HTTP chat endpoint; use as a context manager."""

    def __init__(self, answers: dict[str, str] | None = None,
                 mode: str = "gold", fail_first: int = 0):
        if mode not in ("gold", "garbage"):
            raise ValueError("mode must be gold or garbage")
        self.answers = answers or {}
        self.mode = mode
        self.fail_first = fail_first
        self._failures: dict[str, int] = defaultdict(int)
        self._lock = threading.Lock()
        self.server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    def answer_for(self, prompt: str) -> str | None:
        if self.mode == "garbage":
            return GARBAGE_OUTPUT
        return self.answers.get(prompt)

    def should_fail(self, prompt: str) -> bool:
        if not self.fail_first:
            return False
        with self._lock:
            if self._failures[prompt] < self.fail_first:
                self._failures[prompt] += 1
                return True
        return False

    @property
    def base_url(self) -> str:
        assert self.server is not None
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}/v1/chat/completions"

    def __enter__(self) -> "MockEndpoint":
        endpoint = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # keep test output clean
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                try:
                    body = json.loads(self.rfile.read(length))
                    prompt = body["messages"][0]["content"]
                except (ValueError, KeyError, IndexError):
                    self.send_error(400, "bad request body")
                    return
                if endpoint.should_fail(prompt):
                    self.send_error(500, "synthetic failure")
                    return
                answer = endpoint.answer_for(prompt)
                if answer is None:
                    self.send_error(404, "prompt not in gold map")
                    return
                payload = json.dumps({
                    "choices": [{"message": {"role": "assistant",
                                             "content": answer}}],
                }).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(
            target=self.server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc_info):
        assert self.server is not None
        self.server.shutdown()
        self.server.server_close()
        self._thread.join(timeout=5)
        return False


def mock_for_task(task: BenchmarkTask, mode: str = "gold",
                  fail_first: int = 0) -> MockEndpoint:
    """Mock endpoint preloaded with gold answers for every dataset instance."""
    instances = load_dataset(task.dataset_path)
    return MockEndpoint(
        answers=gold_answer_map(task, instances),
        mode=mode,
        fail_first=fail_first,
    )
