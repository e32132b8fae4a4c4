"""sigroute: signal-driven LLM routing gateway and library."""

from .config import (
    Decision,
    EndpointTopology,
    PluginChainConfig,
    RouterConfig,
    SignalRuleDef,
    load_config,
    load_config_file,
    serialize_config,
    used_signal_types,
)
from .decisions import MatchResult, eval_crisp, eval_fuzzy, select_decision
from .rules import And, Leaf, Not, Or
from .signals import RequestView, SignalEngine, SignalOutcome, SignalVector

__version__ = "0.1.0"

__all__ = [
    "And",
    "Decision",
    "EndpointTopology",
    "Leaf",
    "MatchResult",
    "Not",
    "Or",
    "PluginChainConfig",
    "RequestView",
    "RouterConfig",
    "SignalEngine",
    "SignalOutcome",
    "SignalRuleDef",
    "SignalVector",
    "eval_crisp",
    "eval_fuzzy",
    "load_config",
    "load_config_file",
    "select_decision",
    "serialize_config",
    "used_signal_types",
]
