"""Chat-completion endpoint client with retries and a resumable disk cache.

Requests follow the common JSON chat shape::

    {"model": ..., "messages": [{"role": "user", "content": prompt}],
     "temperature": ..., "max_tokens": ...}

and the first choice's message content is returned.  Responses are cached
on disk keyed by a content hash of (model, prompt, temperature,
max_tokens), so interrupted runs resume without re-querying; transport
errors and 5xx responses are retried with exponential backoff.  The API
key is read from an environment variable at call time and never persisted.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass

import requests


class TransportError(RuntimeError):
    pass


class Timeout(TransportError):
    pass


class HttpError(TransportError):
    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"HTTP {status} {detail}".strip())
        self.status = status


class MalformedResponse(TransportError):
    pass


@dataclass
class ModelEndpointConfig:
    base_url: str
    model_name: str
    api_key_env: str = "CHEMBENCH_API_KEY"
    temperature: float = 0.0
    max_tokens: int = 512
    timeout: float = 60.0
    max_retries: int = 3
    parallelism: int = 1
    cache_dir: str = ""
    backoff_base: float = 0.25

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass
class EndpointStats:
    requests: int = 0
    cache_hits: int = 0
    retries: int = 0


class EndpointClient:
    def __init__(self, cfg: ModelEndpointConfig):
        self.cfg = cfg
        self.stats = EndpointStats()
        self._lock = threading.Lock()
        if cfg.cache_dir:
            os.makedirs(cfg.cache_dir, exist_ok=True)

    def cache_key(self, prompt: str) -> str:
        payload = json.dumps(
            {
                "model": self.cfg.model_name,
                "prompt": prompt,
                "temperature": self.cfg.temperature,
                "max_tokens": self.cfg.max_tokens,
            },
            ensure_ascii=False,
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _cache_path(self, key: str) -> str:
        return os.path.join(self.cfg.cache_dir, f"{key}.json")

    def _cache_read(self, key: str) -> str | None:
        if not self.cfg.cache_dir:
            return None
        path = self._cache_path(key)
        try:
            with open(path, encoding="utf-8") as handle:
                return json.load(handle)["raw"]
        except (OSError, ValueError, KeyError):
            return None

    def _cache_write(self, key: str, raw: str) -> None:
        if not self.cfg.cache_dir:
            return
        path = self._cache_path(key)
        tmp = f"{path}.tmp.{os.getpid()}.{threading.get_ident()}"
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump({"raw": raw}, handle, ensure_ascii=False)
        os.replace(tmp, path)

    def query(self, prompt: str) -> str:
        key = self.cache_key(prompt)
        cached = self._cache_read(key)
        if cached is not None:
            with self._lock:
                self.stats.cache_hits += 1
            return cached
        raw = self._query_network(prompt)
        self._cache_write(key, raw)
        return raw

    def _query_network(self, prompt: str) -> str:
        body = {
            "model": self.cfg.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.cfg.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_error: TransportError | None = None
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                with self._lock:
                    self.stats.retries += 1
                time.sleep(self.cfg.backoff_base * 2 ** (attempt - 1))
            with self._lock:
                self.stats.requests += 1
            try:
                response = requests.post(
                    self.cfg.base_url,
                    json=body,
                    headers=headers,
                    timeout=self.cfg.timeout,
                )
            except requests.Timeout:
                last_error = Timeout(f"no response in {self.cfg.timeout}s")
                continue
            except requests.RequestException as exc:
                last_error = TransportError(str(exc))
                continue
            if response.status_code >= 500:
                last_error = HttpError(response.status_code, "server error")
                continue
            if response.status_code != 200:
                raise HttpError(response.status_code, response.text[:200])
            try:
                payload = response.json()
                return payload["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponse(
                    f"unexpected response shape: {exc}") from exc
        assert last_error is not None
        raise last_error


def query_model(cfg: ModelEndpointConfig, prompt: str) -> str:
    """One-shot convenience wrapper around :class:`EndpointClient`."""
    return EndpointClient(cfg).query(prompt)
