"""Bridge <-> adapter integration; skipped unless the adapter is built.

The primary suite never requires the adapter: build it with
``cd adapter && npm install && npm run build`` to enable these.
"""

import shutil
import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

from factharness.bridge import BackendSpec, SummarizerClient

ADAPTER = Path(__file__).resolve().parent.parent / "adapter" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    not ADAPTER.is_file() or shutil.which("node") is None,
    reason="adapter not built or node unavailable",
)


@dataclass
class Doc:
    id: str
    text: str


def test_stub_adapter_round_trip():
    spec = BackendSpec("subprocess", f"node {ADAPTER} --stub", timeout=15)
    with SummarizerClient(spec) as client:
        for i, text in enumerate([
            "plain document",
            "multi\nline\ndocument",
            "escapes \\ and \\n literals",
            "",
        ]):
            assert client.summarize(Doc(f"doc-{i}", text)) == text.rstrip()


def test_stub_adapter_sequential_requests():
    spec = BackendSpec("subprocess", f"node {ADAPTER} --stub", timeout=15)
    with SummarizerClient(spec) as client:
        for i in range(10):
            text = f"document number {i}"
            assert client.summarize(Doc(f"d{i}", text)) == text
