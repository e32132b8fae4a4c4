"""Recursive Boolean rule trees over signal references.

A rule node is either a leaf referencing a (signal_type, rule_name) pair or
an AND/OR/NOT composite. NOT is strictly unary. Trees are immutable value
objects with structural equality and a dict form used by the config loader
and emitters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import ConfigParseError

RuleNode = Union["Leaf", "And", "Or", "Not"]


@dataclass(frozen=True)
class Leaf:
    signal_type: str
    rule_name: str
    # Precomputed lookup key; evaluation is on the per-request hot path.
    key: tuple[str, str] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", (self.signal_type, self.rule_name))


@dataclass(frozen=True)
class And:
    children: tuple[RuleNode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.children) < 1:
            raise ConfigParseError("AND node requires at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple[RuleNode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.children) < 1:
            raise ConfigParseError("OR node requires at least one child")


@dataclass(frozen=True)
class Not:
    child: RuleNode


def leaves(node: RuleNode) -> Iterator[Leaf]:
    """Yield every leaf in the tree, left to right (duplicates included)."""
    if isinstance(node, Leaf):
        yield node
    elif isinstance(node, Not):
        yield from leaves(node.child)
    else:
        for child in node.children:
            yield from leaves(child)


def rule_from_dict(data: dict) -> RuleNode:
    """Parse the dict form: {signal: {type, name}} | {and|or: [...]} | {not: ...}."""
    if not isinstance(data, dict) or len(data) != 1:
        raise ConfigParseError(f"rule node must be a single-key mapping, got {data!r}")
    key, value = next(iter(data.items()))
    if key == "signal":
        if not isinstance(value, dict) or set(value) != {"type", "name"}:
            raise ConfigParseError(f"signal leaf must have exactly type and name, got {value!r}")
        return Leaf(signal_type=str(value["type"]), rule_name=str(value["name"]))
    if key in ("and", "or"):
        if not isinstance(value, list) or not value:
            raise ConfigParseError(f"{key!r} node requires a non-empty list of children")
        children = tuple(rule_from_dict(c) for c in value)
        return And(children) if key == "and" else Or(children)
    if key == "not":
        return Not(rule_from_dict(value))
    raise ConfigParseError(f"unknown rule node kind {key!r}")


def rule_to_dict(node: RuleNode) -> dict:
    if isinstance(node, Leaf):
        return {"signal": {"type": node.signal_type, "name": node.rule_name}}
    if isinstance(node, And):
        return {"and": [rule_to_dict(c) for c in node.children]}
    if isinstance(node, Or):
        return {"or": [rule_to_dict(c) for c in node.children]}
    return {"not": rule_to_dict(node.child)}
