"""Summarizer bridge: runs any summarizer as a black box.

Three interchangeable transports:

* ``file`` — reads precomputed ``<id>.summary`` files from a directory.
* ``subprocess`` — speaks a line protocol over a child process's stdio.
  Request line: the decimal byte length of the escaped payload, one space,
  then the UTF-8 document with backslash, LF, and CR escaped as ``\\\\``,
  ``\\n``, ``\\r``. The response line mirrors this for the summary; a line
  starting with ``ERR `` reports a backend failure for that request.
* ``http`` — POSTs the document as plain text and reads the summary body.

Summaries pass through byte-identical except for stripped trailing
whitespace, which keeps token counts transport-invariant.
"""

from __future__ import annotations

import queue
import shlex
import subprocess
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

TRANSPORTS = ("file", "subprocess", "http")


class BridgeError(RuntimeError):
    """Base for backend failures; carries the document id when known."""

    def __init__(self, message: str, document_id: str = "") -> None:
        super().__init__(f"[{document_id}] {message}" if document_id else message)
        self.document_id = document_id


class BackendTimeoutError(BridgeError):
    pass


class ProtocolError(BridgeError):
    """Malformed request or response line."""


class BackendUnavailableError(BridgeError):
    pass


@dataclass(frozen=True)
class BackendSpec:
    transport: str
    location: str
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if self.transport not in TRANSPORTS:
            raise ValueError(f"unknown transport {self.transport!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max-retries cannot be negative")


class Document(Protocol):
    id: str
    text: str


# --- line protocol codec --------------------------------------------------------


def escape_payload(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\n", "\\n").replace("\r", "\\r")


def unescape_payload(payload: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(payload):
        ch = payload[i]
        if ch == "\\":
            if i + 1 >= len(payload):
                raise ProtocolError("dangling escape at end of payload")
            nxt = payload[i + 1]
            if nxt == "\\":
                out.append("\\")
            elif nxt == "n":
                out.append("\n")
            elif nxt == "r":
                out.append("\r")
            else:
                raise ProtocolError(f"unknown escape sequence \\{nxt}")
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def encode_line(text: str) -> str:
    """Frame a document or summary as one protocol line (no newline)."""
    payload = escape_payload(text)
    return f"{len(payload.encode('utf-8'))} {payload}"


def decode_line(line: str) -> str:
    """Parse a protocol line back to its text; raises ProtocolError on a
    malformed frame or an ERR line from the backend."""
    line = line.rstrip("\r\n")
    if line.startswith("ERR "):
        raise ProtocolError(f"backend error: {unescape_payload(line[4:])}")
    length_s, sep, payload = line.partition(" ")
    if not sep or not length_s.isdigit():
        raise ProtocolError(f"malformed protocol line: {line[:80]!r}")
    expected = int(length_s)
    actual = len(payload.encode("utf-8"))
    if actual != expected:
        raise ProtocolError(f"length mismatch: header {expected}, payload {actual}")
    return unescape_payload(payload)


def encode_error_line(message: str) -> str:
    return "ERR " + escape_payload(message)


# --- transports -----------------------------------------------------------------


class _FileBackend:
    def __init__(self, spec: BackendSpec) -> None:
        self.directory = Path(spec.location)

    def request(self, document_id: str, text: str, timeout: float) -> str:
        path = self.directory / f"{document_id}.summary"
        if not path.is_file():
            raise BackendUnavailableError(f"no summary file {path}", document_id)
        return path.read_text(encoding="utf-8")

    def close(self) -> None:
        pass


class _SubprocessBackend:
    """One child process, one in-flight request at a time."""

    def __init__(self, spec: BackendSpec) -> None:
        self.argv = shlex.split(spec.location)
        self.proc: subprocess.Popen[bytes] | None = None
        self.lock = threading.Lock()

    def _ensure_process(self) -> subprocess.Popen[bytes]:
        if self.proc is None or self.proc.poll() is not None:
            try:
                self.proc = subprocess.Popen(
                    self.argv,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                )
            except OSError as exc:
                raise BackendUnavailableError(f"cannot start backend: {exc}") from exc
        return self.proc

    def _kill(self) -> None:
        if self.proc is not None:
            self.proc.kill()
            self.proc.wait()
            self.proc = None

    def request(self, document_id: str, text: str, timeout: float) -> str:
        with self.lock:
            proc = self._ensure_process()
            assert proc.stdin is not None and proc.stdout is not None
            line = (encode_line(text) + "\n").encode("utf-8")
            try:
                proc.stdin.write(line)
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                self._kill()
                raise BackendUnavailableError(f"backend pipe closed: {exc}", document_id) from exc
            answer: queue.Queue[bytes] = queue.Queue()
            reader = threading.Thread(
                target=lambda: answer.put(proc.stdout.readline()), daemon=True
            )
            reader.start()
            try:
                raw = answer.get(timeout=timeout)
            except queue.Empty:
                self._kill()
                raise BackendTimeoutError(
                    f"no response within {timeout}s", document_id
                ) from None
            if not raw:
                self._kill()
                raise BackendUnavailableError("backend closed its output", document_id)
            try:
                return decode_line(raw.decode("utf-8"))
            except ProtocolError as exc:
                raise ProtocolError(str(exc), document_id) from exc

    def close(self) -> None:
        with self.lock:
            if self.proc is not None and self.proc.stdin is not None:
                try:
                    self.proc.stdin.close()
                    self.proc.wait(timeout=2)
                except (OSError, subprocess.TimeoutExpired):
                    self._kill()
                self.proc = None


class _HttpBackend:
    def __init__(self, spec: BackendSpec) -> None:
        self.url = spec.location

    def request(self, document_id: str, text: str, timeout: float) -> str:
        req = urllib.request.Request(
            self.url,
            data=text.encode("utf-8"),
            headers={"Content-Type": "text/plain; charset=utf-8"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=timeout) as resp:
                if resp.status != 200:
                    raise ProtocolError(f"backend returned status {resp.status}", document_id)
                return resp.read().decode("utf-8")
        except TimeoutError as exc:
            raise BackendTimeoutError(f"http timeout: {exc}", document_id) from exc
        except urllib.error.URLError as exc:
            raise BackendUnavailableError(f"http backend unreachable: {exc}", document_id) from exc

    def close(self) -> None:
        pass


_BACKENDS = {"file": _FileBackend, "subprocess": _SubprocessBackend, "http": _HttpBackend}


class SummarizerClient:
    """Bridge handle for one backend; retries are bounded and idempotent
    per document."""

    def __init__(self, spec: BackendSpec) -> None:
        self.spec = spec
        self._backend = _BACKENDS[spec.transport](spec)

    def summarize(self, document: Document) -> str:
        last: BridgeError | None = None
        for _ in range(self.spec.max_retries + 1):
            try:
                raw = self._backend.request(document.id, document.text, self.spec.timeout)
                return raw.rstrip()
            except BridgeError as exc:
                last = exc
        assert last is not None
        raise last

    def close(self) -> None:
        self._backend.close()

    def __enter__(self) -> "SummarizerClient":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()


def summarize(document: Document, backend: BackendSpec) -> str:
    """One-shot convenience wrapper around SummarizerClient."""
    with SummarizerClient(backend) as client:
        return client.summarize(document)
