"""HTTP client for a remote conditional-model server.

Wire protocol (JSON over HTTP, all floats 64-bit, logprobs natural-log):

    POST /v1/next   {context, prefix_ids, k, temperature}
                    -> {entries: [{id, logprob}], eos_id}
    POST /v1/score  {context, target_ids} -> {nll: [float]}
    GET  /v1/vocab  -> {size, eos_id, pieces: [{id, text}]}

The server owns tokenization; the client fetches the id<->text mapping
once at startup.  Client-side tokenize() is a greedy longest-match over
the cached pieces, which is exact for character-level servers and a
best-effort convenience otherwise.
"""

from __future__ import annotations

import threading
import time

import requests

from .backend import Backend, Context, ScoredSequence, TopKDistribution
from .errors import ConfigError, ContextOverflow, EncodingError, RemoteError

RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 0.2


class RemoteBackend(Backend):
    def __init__(
        self,
        base_url: str,
        max_in_flight: int = 8,
        max_seq_len: int | None = None,
        timeout: float = 30.0,
        session: requests.Session | None = None,
        retry_sleep=time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self._timeout = timeout
        self._session = session or requests.Session()
        self._gate = threading.Semaphore(max_in_flight)
        self._retry_sleep = retry_sleep
        vocab = self._request("GET", "/v1/vocab")
        self._size = int(vocab["size"])
        self._eos = int(vocab["eos_id"])
        self._id_to_text = {int(p["id"]): p["text"] for p in vocab["pieces"]}
        self._pieces_by_length = sorted(
            ((text, pid) for pid, text in self._id_to_text.items() if text),
            key=lambda it: (-len(it[0]), it[1]),
        )
        self._max_seq_len = max_seq_len

    # ---------------------------------------------------------- transport

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        url = self.base_url + path
        last: Exception | None = None
        for attempt in range(RETRY_ATTEMPTS):
            if attempt:
                self._retry_sleep(RETRY_BASE_DELAY * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    resp = self._session.request(
                        method, url, json=payload, timeout=self._timeout
                    )
            except requests.RequestException as exc:
                last = RemoteError(f"{method} {path}: {exc}", retryable=True)
                continue
            if resp.status_code >= 500:
                last = RemoteError(f"{method} {path}: HTTP {resp.status_code}", retryable=True)
                continue
            if resp.status_code >= 400:
                raise RemoteError(f"{method} {path}: HTTP {resp.status_code}", retryable=False)
            try:
                return resp.json()
            except ValueError as exc:
                raise RemoteError(f"{method} {path}: bad JSON body ({exc})", retryable=False)
        assert last is not None
        raise last

    # ------------------------------------------------------------- basics

    @property
    def vocab_size(self) -> int:
        return self._size

    @property
    def eos_id(self) -> int:
        return self._eos

    @property
    def max_seq_len(self) -> int:
        return self._max_seq_len if self._max_seq_len is not None else 1 << 31

    def tokenize(self, text: str) -> list[int]:
        out: list[int] = []
        pos = 0
        while pos < len(text):
            for piece, pid in self._pieces_by_length:
                if text.startswith(piece, pos):
                    out.append(pid)
                    pos += len(piece)
                    break
            else:
                raise EncodingError(f"no vocabulary piece matches text at offset {pos}")
        return out

    def detokenize(self, tokens) -> str:
        return "".join(self._id_to_text.get(t, "") for t in tokens if t != self._eos)

    # ---------------------------------------------------------------- api

    def _check_lengths(self, context_text: str, extra: int) -> None:
        if self._max_seq_len is not None and len(context_text) + extra > self._max_seq_len:
            raise ContextOverflow(
                f"context ({len(context_text)}) + {extra} tokens exceeds {self._max_seq_len}"
            )

    def next_distribution(
        self, context: Context, prefix, k: int, temperature: float = 0.0
    ) -> TopKDistribution:
        if k < 1:
            raise ConfigError("k must be >= 1")
        if temperature < 0:
            raise ConfigError("temperature must be >= 0")
        text = self.context_text(context)
        prefix = [int(t) for t in prefix]
        self._check_lengths(text, len(prefix))
        body = self._request(
            "POST",
            "/v1/next",
            {"context": text, "prefix_ids": prefix, "k": k, "temperature": temperature},
        )
        entries = [(int(e["id"]), float(e["logprob"])) for e in body["entries"]]
        entries.sort(key=lambda e: (-e[1], e[0]))
        eos = int(body.get("eos_id", self._eos))
        return TopKDistribution(
            entries=entries[:k], k=k, is_eos_in_top_k=any(i == eos for i, _ in entries[:k])
        )

    def score(self, context: Context, target) -> ScoredSequence:
        text = self.context_text(context)
        target = [int(t) for t in target]
        self._check_lengths(text, len(target))
        body = self._request("POST", "/v1/score", {"context": text, "target_ids": target})
        nll = [float(v) for v in body["nll"]]
        if len(nll) != len(target):
            raise RemoteError(
                f"/v1/score returned {len(nll)} values for {len(target)} targets",
                retryable=False,
            )
        return ScoredSequence(per_token_nll=nll, tokens=target)
