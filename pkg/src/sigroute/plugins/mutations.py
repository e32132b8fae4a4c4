"""Request mutation plugins: system prompt injection and header mutation."""

from __future__ import annotations

from ..config import HeaderMutation


def system_prompt_apply(messages: list[dict], text: str, mode: str) -> list[dict]:
    """replace: the system message content becomes `text` (created at index 0
    if absent). insert: `text` + newline is prepended to the existing system
    content (or a new system message is created)."""
    if mode not in ("replace", "insert"):
        raise ValueError(f"unknown system prompt mode {mode!r}")
    result = [dict(m) for m in messages]
    for message in result:
        if message.get("role") == "system":
            if mode == "replace":
                message["content"] = text
            else:
                existing = message.get("content") or ""
                message["content"] = f"{text}\n{existing}" if existing else text
            return result
    return [{"role": "system", "content": text}] + result


def header_mutate(headers: dict[str, str], mutations: list[HeaderMutation]) -> dict[str, str]:
    """Apply ordered mutations: add sets only if absent, update sets
    unconditionally, delete removes if present. Header names compare
    case-insensitively."""
    result = {k.lower(): v for k, v in headers.items()}
    for mutation in mutations:
        name = mutation.name.lower()
        if mutation.action == "add":
            result.setdefault(name, mutation.value)
        elif mutation.action == "update":
            result[name] = mutation.value
        else:
            result.pop(name, None)
    return result
