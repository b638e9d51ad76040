"""Local OpenAI-compatible chat-completions stub with canned, deterministic replies.

Replies depend only on the prompt text, so two runs against the server
produce identical corpora. Faults (rate limits, server errors, malformed
bodies) can be scripted per prompt substring for retry tests.

    python3 -m valueprobe.mockserver --port 8089
"""
from __future__ import annotations

import argparse
import hashlib
import json
import threading
import time
from collections import deque
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterable

FIXED_CREATED = 1_700_000_000

_PASSAGES = {
    "SE": "Safety and security matter because danger and threat create alarm. "
          "Caution and stability keep order and offer protection in daily life.",
    "CO": "Following rules and norms shows discipline. "
          "People obey and comply out of duty and avoid upsetting others.",
    "TR": "Tradition and custom connect people to their heritage. "
          "Ritual and faith honour the ancestors and keep a person humble.",
    "BE": "Caring for family and friends builds trust. "
          "Being loyal and honest and helping others is central.",
    "UN": "Justice and equality for all of society matter. "
          "Tolerance and peace protect nature and the environment.",
    "SD": "Independence and freedom let an individual choose and explore. "
          "Creative and curious thinking guides everyday activities.",
    "ST": "Excitement and adventure bring novelty. "
          "Daring challenges and variety open different opportunities.",
    "HE": "Pleasure and enjoyment matter. Fun and delight bring gratification.",
    "AC": "Achievement and success require ambition. "
          "Capable and competent people accomplish goals and become influential.",
    "PO": "Power and wealth bring control and status. "
          "Authority lets people lead and dominate the weak.",
}
_NEIGHBOUR = {"SE": "CO", "CO": "TR", "TR": "BE", "BE": "UN", "UN": "SD",
              "SD": "ST", "ST": "HE", "HE": "AC", "AC": "PO", "PO": "SE"}
# first keyword found in the prompt decides the reply topic
_KEYWORDS = (
    ("self-direction", "SD"), ("self direction", "SD"), ("security", "SE"), ("conformity", "CO"),
    ("tradition", "TR"), ("humility", "TR"), ("benevolence", "BE"), ("universalism", "UN"),
    ("stimulation", "ST"), ("hedonism", "HE"), ("achievement", "AC"), ("power", "PO"), ("face", "PO"),
)
_OPENERS = (
    "",
    "As an AI language model, I do not hold personal values. ",
    "",
    "As an AI, I can offer a general overview. ",
    "",
)
_GENERIC = "Values guide how people set priorities and make decisions in everyday life."


def _digest(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def topic_of(prompt: str) -> str | None:
    low = prompt.lower()
    hits = [(low.find(word), code) for word, code in _KEYWORDS if word in low]
    return min(hits)[1] if hits else None


def canned_reply(prompt: str) -> str:
    h = _digest(prompt)
    code = topic_of(prompt)
    parts = [_OPENERS[h % len(_OPENERS)]]
    if code is None:
        parts.append(_GENERIC)
    else:
        parts.append(_PASSAGES[code])
        if (h >> 8) % 3 == 0:
            parts.append(" " + _PASSAGES[_NEIGHBOUR[code]])
    return "".join(parts)


def completion_body(prompt: str, model: str, created: int = FIXED_CREATED) -> dict:
    text = canned_reply(prompt)
    prompt_tokens = len(prompt.split())
    completion_tokens = len(text.split())
    return {
        "id": f"chatcmpl-mock-{_digest(prompt):016x}",
        "object": "chat.completion",
        "created": created,
        "model": model,
        "choices": [{"index": 0, "message": {"role": "assistant", "content": text}, "finish_reason": "stop"}],
        "usage": {"prompt_tokens": prompt_tokens, "completion_tokens": completion_tokens,
                  "total_tokens": prompt_tokens + completion_tokens},
    }


class MockChatServer:
    """Threaded stub server; use as a context manager and point ``base_url`` at ``.url``.

    ``faults`` maps a prompt substring to a sequence of outcomes consumed
    one per matching request: an HTTP status code or ``"malformed"``.
    Once a sequence is used up, matching prompts get normal replies.
    """

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        api_key: str | None = None,
        faults: dict[str, Iterable] | None = None,
        latency: float = 0.0,
        created: int = FIXED_CREATED,
    ):
        self.api_key = api_key
        self.latency = latency
        self.created = created
        self.requests: list[dict] = []
        self.max_concurrent = 0
        self._active = 0
        self._lock = threading.Lock()
        self._faults = {k: deque(v) for k, v in (faults or {}).items()}
        self._httpd = ThreadingHTTPServer((host, port), self._handler_class())
        self._httpd.daemon_threads = True
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}/v1"

    def start(self) -> "MockChatServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def _next_fault(self, prompt: str):
        with self._lock:
            for needle, queue in self._faults.items():
                if needle in prompt and queue:
                    return queue.popleft()
        return None

    def _handler_class(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send(self, status: int, payload) -> None:
                raw = payload if isinstance(payload, bytes) else json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(raw)))
                self.end_headers()
                self.wfile.write(raw)

            def do_POST(self):
                with server._lock:
                    server._active += 1
                    server.max_concurrent = max(server.max_concurrent, server._active)
                try:
                    self._handle()
                finally:
                    with server._lock:
                        server._active -= 1

            def _handle(self):
                if not self.path.rstrip("/").endswith("/chat/completions"):
                    self._send(404, {"error": {"message": f"no route {self.path}"}})
                    return
                length = int(self.headers.get("Content-Length", 0))
                try:
                    body = json.loads(self.rfile.read(length) or b"{}")
                except json.JSONDecodeError:
                    self._send(400, {"error": {"message": "request body is not JSON"}})
                    return
                with server._lock:
                    server.requests.append(body)
                if server.api_key is not None:
                    if self.headers.get("Authorization") != f"Bearer {server.api_key}":
                        self._send(401, {"error": {"message": "invalid api key", "type": "invalid_request_error"}})
                        return
                if server.latency:
                    time.sleep(server.latency)
                messages = body.get("messages") or [{}]
                prompt = str(messages[-1].get("content", ""))
                fault = server._next_fault(prompt)
                if fault == "malformed":
                    self._send(200, {"id": "chatcmpl-mock-broken", "choices": []})
                elif fault is not None:
                    self._send(int(fault), {"error": {"message": f"injected status {fault}"}})
                else:
                    self._send(200, completion_body(prompt, body.get("model", "mock"), server.created))

        return Handler


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description="Serve canned chat completions for offline runs.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8089)
    parser.add_argument("--api-key", default=None, help="reject requests without this bearer token")
    args = parser.parse_args(argv)
    server = MockChatServer(args.host, args.port, api_key=args.api_key)
    print(f"serving on {server.url}", flush=True)
    try:
        server._httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server._httpd.server_close()


if __name__ == "__main__":
    main()
