#!/usr/bin/env python3
"""Regenerate the frozen cross-validation report for the bundled toy corpus.

Run after an intentional behavior change, review the diff, and commit the new
golden file; tests/test_acceptance.py compares byte-for-byte against it.
"""

from __future__ import annotations

from pathlib import Path

from decisum.cli import main

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "src" / "decisum" / "data" / "toy_corpus.jsonl"
GOLDEN = ROOT / "tests" / "golden" / "xval_toy_seed7.json"

if __name__ == "__main__":
    code = main(["xval", "--corpus", str(CORPUS), "--seed", "7", "--out", str(GOLDEN)])
    raise SystemExit(code or print(f"wrote {GOLDEN}"))
