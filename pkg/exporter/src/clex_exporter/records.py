"""Record file writing and validation.

One record per sentence, newline-delimited JSON: ``sentence_id``, ``period``,
``dim``, ``layer_count``, ``piece_count``, ``words`` (ordered, non-overlapping
half-open spans over the pieces), and ``tensor`` (base64 little-endian
float32, layer-major then piece-major then dimension).  The validator
re-checks every invariant the consumer's reader enforces, so both sides of
the interchange agree on the contract.
"""

from __future__ import annotations

import base64
import binascii
import json
from pathlib import Path
from typing import IO

import numpy as np

__all__ = ["write_record", "validate_record_file"]


def write_record(
    fh: IO[str],
    sentence_id: str,
    period: str,
    layers: np.ndarray,
    words: list[tuple[str, int, int]],
) -> None:
    """Append one record; ``layers`` is (layer_count, piece_count, dim)."""
    layers = np.ascontiguousarray(layers, dtype="<f4")
    k, l, d = layers.shape
    obj = {
        "sentence_id": sentence_id,
        "period": period,
        "dim": d,
        "layer_count": k,
        "piece_count": l,
        "words": [{"surface": s, "span": [a, b]} for s, a, b in words],
        "tensor": base64.b64encode(layers.tobytes()).decode("ascii"),
    }
    fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _check_record(obj: dict, where: str, violations: list[str]) -> None:
    def fail(message: str) -> None:
        violations.append(f"{where}: {message}")

    for key in ("sentence_id", "period", "dim", "layer_count", "piece_count", "words", "tensor"):
        if key not in obj:
            fail(f"missing field {key!r}")
            return
    try:
        k, l, d = int(obj["layer_count"]), int(obj["piece_count"]), int(obj["dim"])
    except (TypeError, ValueError):
        fail("non-integer tensor dimensions")
        return
    if k < 1 or l < 1 or d < 1:
        fail("layer_count, piece_count, and dim must be positive")
        return
    try:
        payload = base64.b64decode(obj["tensor"], validate=True)
    except (TypeError, binascii.Error):
        fail("tensor is not valid base64")
        return
    if len(payload) != k * l * d * 4:
        fail(f"tensor payload is {len(payload)} bytes, expected {k * l * d * 4}")
        return
    tensor = np.frombuffer(payload, dtype="<f4")
    if not np.isfinite(tensor).all():
        fail("tensor contains non-finite values")
    previous_end = 0
    for entry in obj["words"]:
        try:
            surface, (start, end) = entry["surface"], entry["span"]
            start, end = int(start), int(end)
        except (TypeError, KeyError, ValueError):
            fail("malformed word entry")
            return
        if not surface:
            fail("empty word surface")
        if start >= end:
            fail(f"empty span [{start}, {end}) for {surface!r}")
        elif start < previous_end:
            fail(f"span [{start}, {end}) overlaps or reorders")
        elif end > l:
            fail(f"span [{start}, {end}) exceeds piece count {l}")
        else:
            previous_end = end  # only valid spans advance, so one bad span
            # yields one violation instead of cascading into its successors


def validate_record_file(path: str | Path) -> list[str]:
    """Return a list of violation messages; an empty list means the file is
    a valid record stream."""
    violations: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                violations.append(f"line {lineno}: invalid JSON ({exc.msg})")
                continue
            where = str(obj.get("sentence_id", f"line {lineno}"))
            _check_record(obj, where, violations)
    return violations
