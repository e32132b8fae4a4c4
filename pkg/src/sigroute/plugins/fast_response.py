"""Synthetic OpenAI-compatible completions for the fast-response plugin."""

from __future__ import annotations

import json
import time
import uuid
from typing import Optional

FAST_RESPONSE_MODEL = "sigroute/fast-response"


def _chunk_id() -> str:
    return f"chatcmpl-{uuid.uuid4().hex[:24]}"


def build_completion(
    message: str,
    model: str = FAST_RESPONSE_MODEL,
    completion_id: Optional[str] = None,
    created: Optional[int] = None,
) -> dict:
    """Single chat.completion document with finish_reason \"stop\"."""
    return {
        "id": completion_id or _chunk_id(),
        "object": "chat.completion",
        "created": created if created is not None else int(time.time()),
        "model": model,
        "choices": [
            {
                "index": 0,
                "message": {"role": "assistant", "content": message},
                "finish_reason": "stop",
            }
        ],
        "usage": {"prompt_tokens": 0, "completion_tokens": 0, "total_tokens": 0},
    }


def _chunk(completion_id: str, created: int, model: str, delta: dict,
           finish_reason: Optional[str] = None) -> str:
    payload = {
        "id": completion_id,
        "object": "chat.completion.chunk",
        "created": created,
        "model": model,
        "choices": [{"index": 0, "delta": delta, "finish_reason": finish_reason}],
    }
    return f"data: {json.dumps(payload, separators=(',', ':'))}\n\n"


def build_stream_events(
    message: str,
    model: str = FAST_RESPONSE_MODEL,
    completion_id: Optional[str] = None,
    created: Optional[int] = None,
) -> list[str]:
    """SSE sequence: role chunk, one chunk per whitespace-delimited word, a
    final chunk with finish_reason \"stop\", then the [DONE] sentinel."""
    completion_id = completion_id or _chunk_id()
    created = created if created is not None else int(time.time())
    events = [_chunk(completion_id, created, model, {"role": "assistant"})]
    for index, word in enumerate(message.split()):
        content = word if index == 0 else f" {word}"
        events.append(_chunk(completion_id, created, model, {"content": content}))
    events.append(_chunk(completion_id, created, model, {}, finish_reason="stop"))
    events.append("data: [DONE]\n\n")
    return events
