"""Remote client against a threaded reference server wrapping the toy backend."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from mixsd.backend import Context
from mixsd.errors import RemoteError
from mixsd.remote import RemoteBackend
from mixsd.toy import ToyBackend


class ToyProtocolHandler(BaseHTTPRequestHandler):
    backend: ToyBackend
    fail_next: list  # mutable flag shared with tests: server errors to inject

    def log_message(self, *args):
        pass

    def _send(self, obj, status=200):
        body = json.dumps(obj).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path != "/v1/vocab":
            self._send({"error": "not found"}, 404)
            return
        backend = self.backend
        pieces = [{"id": i, "text": backend.detokenize([i])} for i in range(backend.vocab_size)]
        self._send({"size": backend.vocab_size, "eos_id": backend.eos_id, "pieces": pieces})

    def do_POST(self):
        if self.fail_next:
            self.fail_next.pop()
            self._send({"error": "injected"}, 503)
            return
        length = int(self.headers["Content-Length"])
        payload = json.loads(self.rfile.read(length))
        backend = self.backend
        if self.path == "/v1/next":
            dist = backend.next_distribution(
                Context.from_text(payload["context"]),
                payload["prefix_ids"],
                k=payload["k"],
                temperature=payload["temperature"],
            )
            self._send(
                {
                    "entries": [{"id": i, "logprob": lp} for i, lp in dist.entries],
                    "eos_id": backend.eos_id,
                }
            )
        elif self.path == "/v1/score":
            scored = backend.score(Context.from_text(payload["context"]), payload["target_ids"])
            self._send({"nll": scored.per_token_nll})
        else:
            self._send({"error": "not found"}, 404)


@pytest.fixture(scope="module")
def server():
    handler = ToyProtocolHandler
    handler.backend = ToyBackend()
    handler.fail_next = []
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}", handler
    httpd.shutdown()


@pytest.fixture()
def client(server):
    url, _ = server
    return RemoteBackend(url, retry_sleep=lambda _s: None)


def test_vocab_cached_at_startup(client, toy):
    assert client.vocab_size == toy.vocab_size
    assert client.eos_id == toy.eos_id


def test_tokenize_round_trip_via_pieces(client):
    text = "The answer is 42."
    assert client.detokenize(client.tokenize(text)) == text


def test_next_matches_local_toy(client, toy):
    ctx = "What? Reference: The answer is 7. \\boxed{7}"
    prefix = toy.tokenize("The ")
    remote = client.next_distribution(Context.from_text(ctx), prefix, k=8)
    local = toy.next_distribution(Context.from_text(ctx), prefix, k=8)
    assert remote.entries[0][0] == local.entries[0][0]
    for (ri, rlp), (li, llp) in zip(remote.entries, local.entries):
        assert ri == li
        assert abs(rlp - llp) < 1e-12


def test_score_matches_local_toy(client, toy):
    ctx = "Some context"
    ids = toy.tokenize("The answer is 9.")
    remote = client.score(Context.from_text(ctx), ids)
    local = toy.score(Context.from_text(ctx), ids)
    assert remote.tokens == local.tokens
    for r, l in zip(remote.per_token_nll, local.per_token_nll):
        assert abs(r - l) < 1e-12


def test_retries_recover_from_transient_5xx(server, client):
    _, handler = server
    handler.fail_next.extend([True, True])  # two failures, third attempt wins
    scored = client.score(Context.from_text("x"), client.tokenize("ab"))
    assert len(scored.per_token_nll) == 2


def test_retries_exhausted_raises_retryable(server, client):
    _, handler = server
    handler.fail_next.extend([True] * 5)
    with pytest.raises(RemoteError) as info:
        client.score(Context.from_text("x"), client.tokenize("a"))
    assert info.value.retryable
    handler.fail_next.clear()


def test_connection_refused_is_retryable():
    with pytest.raises(RemoteError) as info:
        RemoteBackend("http://127.0.0.1:1", retry_sleep=lambda _s: None)
    assert info.value.retryable
