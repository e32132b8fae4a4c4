"""Deployment configuration: domain types, loader, and serializer.

The flat document format (YAML) is the same schema the DSL compiler emits,
so the loader and the toolchain share one source of truth. Unknown keys are
rejected everywhere (strict mode). The loaded ``RouterConfig`` is immutable
by convention: handlers share it read-only and hot reload swaps the whole
object.
"""

from __future__ import annotations

import math
import os
import re
from enum import Enum
from functools import cached_property
from typing import Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigConstraintError, ConfigParseError, ConfigReferenceError
from .rules import Leaf, RuleNode, leaves, rule_from_dict, rule_to_dict

WEIGHT_SUM_TOLERANCE = 1e-9

# Authoritative algorithm id set; the selection registry implements these and
# may register additional ids at runtime.
ALGORITHM_IDS = frozenset(
    {
        "static",
        "elo",
        "routerdc",
        "hybrid",
        "automix",
        "confidence",
        "knn",
        "kmeans",
        "mlp",
        "thompson",
        "latency_aware",
        "remom",
    }
)


class SignalType(str, Enum):
    KEYWORD = "keyword"
    CONTEXT = "context"
    LANGUAGE = "language"
    AUTHZ = "authz"
    EMBEDDING = "embedding"
    DOMAIN = "domain"
    FACT_CHECK = "fact_check"
    FEEDBACK = "feedback"
    MODALITY = "modality"
    COMPLEXITY = "complexity"
    JAILBREAK = "jailbreak"
    PII = "pii"
    PREFERENCE = "preference"


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Per-type signal rule parameters
# ---------------------------------------------------------------------------

_OPERATOR_ALIASES = {"any": "or", "all": "and", "none": "nor"}


class KeywordParams(_StrictModel):
    keywords: list[str] = Field(min_length=1)
    operator: str = "or"
    method: Literal["regex", "bm25", "ngram"] = "regex"
    case_sensitive: bool = False
    # Default depends on method: 0.1 for bm25, 0.4 for ngram.
    threshold: Optional[float] = Field(default=None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _normalize(self):
        op = _OPERATOR_ALIASES.get(self.operator, self.operator)
        if op not in ("and", "or", "nor"):
            raise ValueError(f"unknown keyword operator {self.operator!r}")
        object.__setattr__(self, "operator", op)
        if self.threshold is None:
            object.__setattr__(
                self, "threshold", {"regex": 1.0, "bm25": 0.1, "ngram": 0.4}[self.method]
            )
        if self.method == "regex":
            for pattern in self.keywords:
                try:
                    re.compile(pattern)
                except re.error as exc:
                    raise ValueError(f"invalid regex pattern {pattern!r}: {exc}") from exc
        return self


class ContextParams(_StrictModel):
    min_tokens: int = Field(default=0, ge=0)
    max_tokens: Optional[int] = Field(default=None, ge=0)  # None = unbounded

    @model_validator(mode="after")
    def _check_bounds(self):
        if self.max_tokens is not None and self.min_tokens > self.max_tokens:
            raise ValueError(
                f"context bounds require min <= max, got [{self.min_tokens}, {self.max_tokens}]"
            )
        return self


class LanguageParams(_StrictModel):
    languages: list[str] = Field(min_length=1)


class AuthzParams(_StrictModel):
    roles: list[str] = Field(min_length=1)
    header: str = "x-user-roles"


class EmbeddingParams(_StrictModel):
    candidates: list[str] = Field(min_length=1)
    threshold: float = Field(ge=0.0, le=1.0)


class ComplexityParams(_StrictModel):
    hard: list[str] = Field(min_length=1)
    easy: list[str] = Field(min_length=1)
    threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    level: Literal["hard", "easy", "medium"] = "hard"


class JailbreakParams(_StrictModel):
    method: Literal["classifier", "contrastive"] = "classifier"
    threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    include_history: bool = False
    jailbreak_patterns: list[str] = Field(default_factory=list)
    benign_patterns: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_exemplars(self):
        if self.method == "contrastive" and not (self.jailbreak_patterns and self.benign_patterns):
            raise ValueError("contrastive jailbreak rules require both exemplar sets")
        return self


class PiiParams(_StrictModel):
    threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    pii_types_allowed: list[str] = Field(default_factory=list)


class StubClassifierParams(_StrictModel):
    """Params for the table-driven stub types (domain, fact_check, feedback,
    modality, preference). ``labels`` filters which classifier output fires the
    rule; ``phrases`` extends the built-in phrase table for that label set."""

    labels: list[str] = Field(default_factory=list)
    mmlu_categories: list[str] = Field(default_factory=list)
    phrases: list[str] = Field(default_factory=list)

    @property
    def effective_labels(self) -> list[str]:
        return self.labels or self.mmlu_categories


_PARAMS_BY_TYPE = {
    SignalType.KEYWORD: KeywordParams,
    SignalType.CONTEXT: ContextParams,
    SignalType.LANGUAGE: LanguageParams,
    SignalType.AUTHZ: AuthzParams,
    SignalType.EMBEDDING: EmbeddingParams,
    SignalType.COMPLEXITY: ComplexityParams,
    SignalType.JAILBREAK: JailbreakParams,
    SignalType.PII: PiiParams,
    SignalType.DOMAIN: StubClassifierParams,
    SignalType.FACT_CHECK: StubClassifierParams,
    SignalType.FEEDBACK: StubClassifierParams,
    SignalType.MODALITY: StubClassifierParams,
    SignalType.PREFERENCE: StubClassifierParams,
}

SignalParams = Union[
    KeywordParams,
    ContextParams,
    LanguageParams,
    AuthzParams,
    EmbeddingParams,
    ComplexityParams,
    JailbreakParams,
    PiiParams,
    StubClassifierParams,
]


class SignalRuleDef(_StrictModel):
    type: SignalType
    name: str = Field(min_length=1)
    params: SignalParams

    @model_validator(mode="before")
    @classmethod
    def _dispatch_params(cls, data):
        if isinstance(data, dict) and "type" in data and isinstance(data.get("params"), dict):
            try:
                sig_type = SignalType(data["type"])
            except ValueError:
                raise ValueError(f"unknown signal type {data['type']!r}")
            data = dict(data)
            data["params"] = _PARAMS_BY_TYPE[sig_type].model_validate(data["params"])
        return data

    @property
    def key(self) -> tuple[str, str]:
        return (self.type.value, self.name)


# ---------------------------------------------------------------------------
# Decisions and plugin chains
# ---------------------------------------------------------------------------


class ModelRef(_StrictModel):
    model: str = Field(min_length=1)
    reasoning: Optional[bool] = None
    effort: Optional[str] = None
    weight: Optional[float] = Field(default=None, gt=0.0)


class FastResponseConfig(_StrictModel):
    message: str
    enabled: bool = True


class CacheConfig(_StrictModel):
    threshold: float = Field(default=0.92, ge=0.0, le=1.0)
    enabled: bool = True


class SystemPromptConfig(_StrictModel):
    text: str
    mode: Literal["replace", "insert"] = "insert"


class HeaderMutation(_StrictModel):
    action: Literal["add", "update", "delete"]
    name: str = Field(min_length=1)
    value: Optional[str] = None

    @model_validator(mode="after")
    def _check_value(self):
        if self.action in ("add", "update") and self.value is None:
            raise ValueError(f"header {self.action} requires a value")
        return self


class HalugateConfig(_StrictModel):
    action: Literal["block", "header", "body", "none"] = "none"
    enabled: bool = True


class RagConfig(_StrictModel):
    store: str = "default"
    top_k: int = Field(default=5, ge=1)
    fusion: Literal["weighted", "rrf", "vector"] = "weighted"
    enabled: bool = True


class MemoryConfig(_StrictModel):
    top_k: int = Field(default=5, ge=1)
    user_header: str = "x-user-id"
    enabled: bool = True


class ModalityOverride(_StrictModel):
    rule: str
    models: list[str] = Field(min_length=1)


class ModalityConfig(_StrictModel):
    overrides: list[ModalityOverride] = Field(min_length=1)
    enabled: bool = True


class PluginChainConfig(_StrictModel):
    """Per-decision plugin configuration. Plugin *order* is fixed by the
    engine; this record only selects and parameterizes the stages.

    ``extras`` carries plugin entries with no runtime stage in this engine
    (e.g. pii/jailbreak blocks, which are signals here) so that configs using
    them survive round trips losslessly.
    """

    fast_response: Optional[FastResponseConfig] = None
    cache: Optional[CacheConfig] = None
    rag: Optional[RagConfig] = None
    modality: Optional[ModalityConfig] = None
    memory: Optional[MemoryConfig] = None
    system_prompt: Optional[SystemPromptConfig] = None
    header_mutation: Optional[list[HeaderMutation]] = None
    halugate: Optional[HalugateConfig] = None
    extras: dict[str, dict] = Field(default_factory=dict)


class AlgorithmConfig(_StrictModel):
    type: str = "static"
    params: dict = Field(default_factory=dict)

    @model_validator(mode="after")
    def _known_id(self):
        if self.type not in ALGORITHM_IDS and not _runtime_algorithm_registered(self.type):
            raise ValueError(f"unknown selection algorithm {self.type!r}")
        return self


def _runtime_algorithm_registered(algorithm_id: str) -> bool:
    # Late import: the selection package imports config for its types.
    try:
        from .selection import registry
    except ImportError:
        return False
    return registry.is_registered(algorithm_id)


class Decision(_StrictModel):
    name: str = Field(min_length=1)
    rule: dict
    models: list[ModelRef] = Field(min_length=1)
    priority: int = 0
    description: Optional[str] = None
    algorithm: AlgorithmConfig = Field(default_factory=AlgorithmConfig)
    plugins: PluginChainConfig = Field(default_factory=PluginChainConfig)
    pin_model: bool = False
    insertion_index: int = -1  # assigned in document order at load

    @model_validator(mode="before")
    @classmethod
    def _coerce_models(cls, data):
        if isinstance(data, dict) and isinstance(data.get("models"), list):
            data = dict(data)
            data["models"] = [
                {"model": m} if isinstance(m, str) else m for m in data["models"]
            ]
        return data

    @cached_property
    def rule_node(self) -> RuleNode:
        return rule_from_dict(self.rule)

    @cached_property
    def leaf_keys(self) -> tuple[tuple[str, str], ...]:
        """Unique (signal_type, rule_name) pairs referenced by this rule."""
        seen: dict[tuple[str, str], None] = {}
        for leaf in leaves(self.rule_node):
            seen.setdefault(leaf.key, None)
        return tuple(seen)

    @property
    def candidate_names(self) -> list[str]:
        return [ref.model for ref in self.models]


# ---------------------------------------------------------------------------
# Endpoint topology
# ---------------------------------------------------------------------------


class AuthProfile(_StrictModel):
    kind: Literal["api_key", "passthrough"] = "passthrough"
    header: str = "Authorization"
    secret_ref: str = ""


class EndpointEntry(_StrictModel):
    id: str = Field(min_length=1)
    address: str = Field(min_length=1)  # host:port
    provider: Literal["openai_compatible", "passthrough"] = "openai_compatible"
    weight: float = Field(default=1.0, gt=0.0)
    auth: AuthProfile = Field(default_factory=AuthProfile)
    models: list[str] = Field(default_factory=list)  # empty = serves all models


class EndpointTopology(_StrictModel):
    entries: list[EndpointEntry] = Field(default_factory=list)

    def serves(self, entry: EndpointEntry, model: str) -> bool:
        return not entry.models or model in entry.models

    def weights_for(self, model: str) -> list[tuple[EndpointEntry, float]]:
        """Endpoints serving `model` with weights normalized to sum 1."""
        group = [e for e in self.entries if self.serves(e, model)]
        total = sum(e.weight for e in group)
        return [(e, e.weight / total) for e in group]

    def entry_by_id(self, endpoint_id: str) -> Optional[EndpointEntry]:
        for entry in self.entries:
            if entry.id == endpoint_id:
                return entry
        return None


class GlobalsConfig(_StrictModel):
    default_model: Optional[str] = None
    strategy: Literal["priority", "confidence"] = "priority"
    fuzzy_mode: bool = False
    fuzzy_match_threshold: float = Field(default=0.5, ge=0.0, le=1.0)


class RouterConfig(_StrictModel):
    signals: list[SignalRuleDef] = Field(default_factory=list)
    decisions: list[Decision] = Field(default_factory=list)
    endpoints: EndpointTopology = Field(default_factory=EndpointTopology)
    globals: GlobalsConfig = Field(default_factory=GlobalsConfig)

    @model_validator(mode="before")
    @classmethod
    def _lift_endpoint_list(cls, data):
        # The flat document writes endpoints as a plain list of entries.
        if isinstance(data, dict) and isinstance(data.get("endpoints"), list):
            data = dict(data)
            data["endpoints"] = {"entries": data["endpoints"]}
        return data

    def signal_rule(self, signal_type: str, name: str) -> Optional[SignalRuleDef]:
        for rule in self.signals:
            if rule.type.value == signal_type and rule.name == name:
                return rule
        return None

    def referenced_models(self) -> list[str]:
        seen: dict[str, None] = {}
        for decision in self.decisions:
            for ref in decision.models:
                seen.setdefault(ref.model, None)
        if self.globals.default_model:
            seen.setdefault(self.globals.default_model, None)
        return list(seen)


def used_signal_types(config: RouterConfig) -> set[tuple[str, str]]:
    """Exactly the (signal_type, rule_name) leaves reachable from any decision.

    The signal engine evaluates only these (demand-driven evaluation).
    """
    used: set[tuple[str, str]] = set()
    for decision in config.decisions:
        for leaf in leaves(decision.rule_node):
            used.add((leaf.signal_type, leaf.rule_name))
    return used


# ---------------------------------------------------------------------------
# Loading and serialization
# ---------------------------------------------------------------------------

_ENV_REF = re.compile(r"^\$\{([A-Za-z_][A-Za-z0-9_]*)\}$")


def resolve_secret(secret_ref: str) -> str:
    """Resolve ``${VAR}`` references against the environment; literals pass
    through. Unresolvable references raise at load time, never per request."""
    match = _ENV_REF.match(secret_ref)
    if not match:
        return secret_ref
    var = match.group(1)
    value = os.environ.get(var)
    if value is None:
        raise ConfigConstraintError(f"auth secret_ref references unset variable ${{{var}}}")
    return value


def _check_references(config: RouterConfig) -> None:
    declared = {rule.key for rule in config.signals}
    for decision in config.decisions:
        for leaf in leaves(decision.rule_node):
            if (leaf.signal_type, leaf.rule_name) not in declared:
                raise ConfigReferenceError(
                    f"decision {decision.name!r} references undefined signal "
                    f"{leaf.signal_type}({leaf.rule_name!r})"
                )
    topology = config.endpoints
    for model in config.referenced_models():
        if not any(topology.serves(entry, model) for entry in topology.entries):
            raise ConfigReferenceError(f"model {model!r} is not served by any endpoint")


def _check_uniqueness(config: RouterConfig) -> None:
    seen_rules: set[tuple[str, str]] = set()
    for rule in config.signals:
        if rule.key in seen_rules:
            raise ConfigConstraintError(
                f"duplicate signal rule {rule.type.value}({rule.name!r})"
            )
        seen_rules.add(rule.key)
    seen_names: set[str] = set()
    for decision in config.decisions:
        if decision.name in seen_names:
            raise ConfigConstraintError(f"duplicate decision name {decision.name!r}")
        seen_names.add(decision.name)
    seen_ids: set[str] = set()
    for entry in config.endpoints.entries:
        if entry.id in seen_ids:
            raise ConfigConstraintError(f"duplicate endpoint id {entry.id!r}")
        seen_ids.add(entry.id)


def _check_rules_parse(config: RouterConfig) -> None:
    for decision in config.decisions:
        decision.rule_node  # raises ConfigParseError on malformed trees


def _resolve_auth_secrets(config: RouterConfig) -> None:
    for entry in config.endpoints.entries:
        if entry.auth.kind == "api_key":
            if not entry.auth.secret_ref:
                raise ConfigConstraintError(
                    f"endpoint {entry.id!r}: api_key auth requires secret_ref"
                )
            resolve_secret(entry.auth.secret_ref)


def validate_config(config: RouterConfig) -> RouterConfig:
    """Enforce cross-object invariants and assign insertion indices."""
    for index, decision in enumerate(config.decisions):
        object.__setattr__(decision, "insertion_index", index)
    _check_uniqueness(config)
    _check_rules_parse(config)
    _check_references(config)
    _resolve_auth_secrets(config)
    # Per-model normalization is recomputed on demand; verify it is sound here.
    for model in config.referenced_models():
        weights = config.endpoints.weights_for(model)
        if weights:
            total = sum(w for _, w in weights)
            assert math.isclose(total, 1.0, abs_tol=WEIGHT_SUM_TOLERANCE)
    return config


def config_from_dict(data: dict) -> RouterConfig:
    if not isinstance(data, dict):
        raise ConfigParseError("config document must be a mapping")
    try:
        config = RouterConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigConstraintError(str(exc)) from exc
    return validate_config(config)


def load_config(text: str) -> RouterConfig:
    """Parse and validate a flat YAML config document."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"malformed config document: {exc}") from exc
    if data is None:
        raise ConfigParseError("empty config document")
    return config_from_dict(data)


def load_config_file(path: str) -> RouterConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return load_config(handle.read())


def _prune_none(value):
    if isinstance(value, dict):
        return {k: _prune_none(v) for k, v in value.items() if v is not None}
    if isinstance(value, list):
        return [_prune_none(v) for v in value]
    return value


def config_to_dict(config: RouterConfig) -> dict:
    """Flat-schema dict form; ``load_config`` of its YAML dump reparses to a
    structurally equal config."""
    data = config.model_dump(mode="json", exclude_none=True)
    data["endpoints"] = data["endpoints"]["entries"]
    for decision in data.get("decisions", []):
        decision.pop("insertion_index", None)
        if not decision.get("plugins", {}).get("extras"):
            decision.get("plugins", {}).pop("extras", None)
        if decision.get("plugins") == {}:
            decision.pop("plugins")
    return _prune_none(data)


def serialize_config(config: RouterConfig) -> str:
    """Deterministic YAML: sorted keys within maps, declaration order in lists."""
    return yaml.safe_dump(config_to_dict(config), sort_keys=True, allow_unicode=True)
