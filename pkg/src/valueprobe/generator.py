"""Run probe sets against an OpenAI-compatible chat-completions endpoint.

Requests go out in parallel (at most ``max_in_flight`` at once); records
reach the corpus file in (prompt index, run index) order no matter when
they complete.
"""
from __future__ import annotations

import json
import logging
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Any, Optional

import httpx

from .errors import AuthenticationError, ConfigError, InputError, NetworkError, ValidationError
from .probes import ProbeSet, clean_response

log = logging.getLogger(__name__)

API_KEY_ENV = "VALUEPROBE_API_KEY"
RETRY_STATUS = frozenset({408, 409, 429, 500, 502, 503, 504})
AUTH_STATUS = frozenset({401, 403})


@dataclass
class GenerationConfig:
    model: str = "gpt-3.5-turbo"
    max_tokens: int = 300
    temperature: float = 1.0
    top_p: float = 1.0
    runs_per_prompt: int = 5
    base_url: str = "https://api.openai.com/v1"
    max_in_flight: int = 4
    max_attempts: int = 5
    backoff_base: float = 1.0
    timeout: float = 60.0

    def __post_init__(self):
        if not self.model:
            raise ConfigError("model must be a non-empty string")
        if int(self.max_tokens) < 1:
            raise ConfigError("max_tokens must be positive")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if not 0 < self.top_p <= 1:
            raise ConfigError("top_p must lie in (0, 1]")
        for name in ("runs_per_prompt", "max_in_flight", "max_attempts"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.backoff_base < 0 or self.timeout <= 0:
            raise ConfigError("backoff_base must be >= 0 and timeout > 0")

    def request_params(self) -> dict:
        return {
            "model": self.model,
            "max_tokens": int(self.max_tokens),
            "temperature": float(self.temperature),
            "top_p": float(self.top_p),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown generation config keys: {unknown}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "GenerationConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)


@dataclass
class ResponseRecord:
    probe_kind: str
    fine_type_id: str
    prompt_index: int
    prompt_text: str
    run_index: int
    status: str
    raw_text: Optional[str]
    cleaned_text: Optional[str]
    model: str
    request: dict
    timestamp: str
    finish_reason: Optional[str] = None
    usage: Optional[dict] = None
    response_id: Optional[str] = None
    attempts: int = 0
    error: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def key(self) -> tuple:
        return (self.probe_kind, self.fine_type_id, self.prompt_text, self.run_index)

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ResponseRecord":
        return cls(**{f.name: data.get(f.name) for f in fields(cls) if f.name in data or f.default is not None})


def read_corpus(path: str | Path) -> list[ResponseRecord]:
    path = Path(path)
    records, seen = [], set()
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read corpus {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = ResponseRecord.from_dict(json.loads(line))
        except (json.JSONDecodeError, TypeError) as exc:
            raise ValidationError(f"{path}:line {lineno}: malformed corpus record ({exc})") from None
        if rec.key in seen:
            raise ValidationError(f"{path}:line {lineno}: duplicate record {rec.key}")
        seen.add(rec.key)
        records.append(rec)
    return records


class CorpusWriter:
    """Thread-safe JSONL sink that buffers out-of-order records and emits them in sequence."""

    def __init__(self, stream: IO[str]):
        self._stream = stream
        self._lock = threading.Lock()
        self._pending: dict[int, ResponseRecord] = {}
        self._next = 0
        self.written = 0

    def put(self, seq: int, record: ResponseRecord) -> None:
        with self._lock:
            if seq < self._next or seq in self._pending:
                raise ValueError(f"sequence number {seq} already submitted")
            self._pending[seq] = record
            while self._next in self._pending:
                rec = self._pending.pop(self._next)
                self._stream.write(rec.to_json() + "\n")
                self._next += 1
                self.written += 1
            self._stream.flush()

    @property
    def buffered(self) -> int:
        return len(self._pending)


@dataclass
class RunSummary:
    prompts: int
    runs_per_prompt: int
    written: int = 0
    succeeded: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def expected(self) -> int:
        return self.prompts * self.runs_per_prompt


class RequestFailed(Exception):
    def __init__(self, kind: str, message: str, status_code: int | None = None, payload: Any = None,
                 attempts: int = 1):
        super().__init__(message)
        self.kind = kind
        self.attempts = attempts
        self.status_code = status_code
        self.payload = payload


@dataclass
class Completion:
    text: str
    model: str
    finish_reason: Optional[str]
    usage: Optional[dict]
    response_id: Optional[str]
    created: Optional[int]
    attempts: int


class ChatClient:
    """Minimal chat-completions client with retry on rate limits and server errors."""

    def __init__(self, config: GenerationConfig, api_key: str, http: httpx.Client | None = None):
        self.config = config
        self.api_key = api_key
        self._http = http or httpx.Client(timeout=config.timeout)
        self._own_http = http is None

    def close(self):
        if self._own_http:
            self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    @property
    def endpoint(self) -> str:
        return self.config.base_url.rstrip("/") + "/chat/completions"

    def body(self, prompt: str) -> dict:
        # user turn only, no system message
        return {"messages": [{"role": "user", "content": prompt}], **self.config.request_params()}

    def complete(self, prompt: str) -> Completion:
        cfg = self.config
        last: RequestFailed | None = None
        for attempt in range(1, cfg.max_attempts + 1):
            try:
                resp = self._http.post(
                    self.endpoint,
                    json=self.body(prompt),
                    headers={"Authorization": f"Bearer {self.api_key}"},
                )
            except httpx.TransportError as exc:
                last = RequestFailed("transport", f"{type(exc).__name__}: {exc}")
            else:
                if resp.status_code in AUTH_STATUS:
                    raise AuthenticationError(f"endpoint rejected the credential (HTTP {resp.status_code})")
                if resp.status_code == 200:
                    return self._parse(resp, attempt)
                last = RequestFailed("http", f"HTTP {resp.status_code}", resp.status_code, _payload(resp), attempt)
                if resp.status_code not in RETRY_STATUS:
                    raise last
            if attempt < cfg.max_attempts:
                delay = cfg.backoff_base * 2 ** (attempt - 1)
                time.sleep(delay + random.uniform(0, delay / 2))
        raise RequestFailed("retries_exhausted", f"gave up after {cfg.max_attempts} attempts: {last}",
                            last.status_code if last else None, last.payload if last else None, cfg.max_attempts)

    def _parse(self, resp: httpx.Response, attempt: int) -> Completion:
        try:
            data = resp.json()
            choice = data["choices"][0]
            text = choice["message"]["content"]
            if not isinstance(text, str):
                raise TypeError("content is not a string")
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise RequestFailed("malformed_response", f"unusable response body: {exc}", 200, _payload(resp),
                                attempt) from None
        created = data.get("created")
        return Completion(
            text=text,
            model=data.get("model") or self.config.model,
            finish_reason=choice.get("finish_reason"),
            usage=data.get("usage"),
            response_id=data.get("id"),
            created=created if isinstance(created, int) else None,
            attempts=attempt,
        )


def _payload(resp: httpx.Response):
    try:
        return resp.json()
    except ValueError:
        return resp.text


def _timestamp(created: int | None) -> str:
    # server-side creation time when reported, so replays against a fixed server are reproducible
    if created is not None:
        return datetime.fromtimestamp(created, tz=timezone.utc).isoformat()
    return datetime.now(timezone.utc).isoformat()


def resolve_api_key(api_key: str | None = None) -> str:
    key = api_key or os.environ.get(API_KEY_ENV, "").strip()
    if not key:
        raise AuthenticationError(f"no API credential: set {API_KEY_ENV}")
    return key


def run_probes(
    probes: ProbeSet,
    config: GenerationConfig,
    sink: CorpusWriter,
    api_key: str | None = None,
    client: ChatClient | None = None,
) -> RunSummary:
    """Send every prompt ``runs_per_prompt`` times and write one record per request.

    Failed requests become ``status="failed"`` records; an authentication
    failure aborts the run with :class:`AuthenticationError`.
    """
    runs = config.runs_per_prompt
    summary = RunSummary(len(probes), runs)
    if not len(probes):
        return summary
    own_client = client is None
    if client is None:
        client = ChatClient(config, resolve_api_key(api_key))
    abort = threading.Event()
    params = config.request_params()

    def work(seq: int, prompt_index: int, run_index: int) -> ResponseRecord:
        prompt = probes.prompts[prompt_index]
        base = dict(
            probe_kind=probes.kind,
            fine_type_id=prompt.fine_type_id,
            prompt_index=prompt_index,
            prompt_text=prompt.text,
            run_index=run_index,
            request=dict(params),
        )
        if abort.is_set():
            raise AuthenticationError("run aborted")
        try:
            c = client.complete(prompt.text)
        except RequestFailed as exc:
            return ResponseRecord(
                **base, status="failed", raw_text=None, cleaned_text=None, model=config.model,
                timestamp=_timestamp(None), attempts=exc.attempts,
                error={"kind": exc.kind, "message": str(exc), "status_code": exc.status_code, "payload": exc.payload},
            )
        return ResponseRecord(
            **base, status="ok", raw_text=c.text, cleaned_text=clean_response(c.text), model=c.model,
            timestamp=_timestamp(c.created), finish_reason=c.finish_reason, usage=c.usage,
            response_id=c.response_id, attempts=c.attempts,
        )

    try:
        with ThreadPoolExecutor(max_workers=config.max_in_flight) as pool:
            futures = {}
            for p in range(len(probes)):
                for r in range(runs):
                    seq = p * runs + r
                    futures[pool.submit(work, seq, p, r)] = seq
            try:
                for fut in as_completed(futures):
                    rec = fut.result()
                    sink.put(futures[fut], rec)
                    if rec.ok:
                        summary.succeeded += 1
                    else:
                        summary.failed += 1
                        summary.failures.append({"seq": futures[fut], "prompt": rec.prompt_text,
                                                 "run_index": rec.run_index, **rec.error})
                        log.warning("request failed: %s run %d: %s", rec.fine_type_id, rec.run_index,
                                    rec.error["message"])
            except AuthenticationError:
                abort.set()
                pool.shutdown(wait=True, cancel_futures=True)
                raise
    finally:
        if own_client:
            client.close()
    summary.written = sink.written
    if summary.written != summary.expected:
        raise NetworkError(f"wrote {summary.written} of {summary.expected} records")
    return summary
