"""Decision engine: crisp and fuzzy rule evaluation, decision selection, truth
table synthesis, and static policy analysis (coverage, conflict, subsumption).

All functions are pure over immutable inputs and safe for unrestricted
concurrent use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import Decision, RouterConfig, used_signal_types
from .errors import AnalysisError
from .rules import And, Leaf, Not, Or, RuleNode
from .signals.base import SignalKey, SignalOutcome, SignalVector

SYNTHESIS_MAX_LEAVES = 16
ANALYSIS_MAX_LEAVES = 20


# ---------------------------------------------------------------------------
# Rule evaluation
# ---------------------------------------------------------------------------


def eval_crisp(node: RuleNode, sv: SignalVector) -> bool:
    """Structural-recursion Boolean evaluation. Leaves absent from the signal
    vector evaluate to False (fail-closed)."""
    return _crisp(node, sv.entries)


def _crisp(node, entries) -> bool:
    kind = type(node)
    if kind is Leaf:
        outcome = entries.get(node.key)
        return outcome.matched if outcome is not None else False
    if kind is And:
        for child in node.children:
            if not _crisp(child, entries):
                return False
        return True
    if kind is Or:
        for child in node.children:
            if _crisp(child, entries):
                return True
        return False
    return not _crisp(node.child, entries)


def eval_fuzzy(node: RuleNode, sv: SignalVector) -> float:
    """Min/max/complement evaluation over continuous confidences.

    Leaf score is the signal confidence when matched, else 0. On binary
    scores this coincides exactly with ``eval_crisp``.
    """
    return _fuzzy(node, sv.entries)


def _fuzzy(node, entries) -> float:
    kind = type(node)
    if kind is Leaf:
        outcome = entries.get(node.key)
        return outcome.confidence if outcome is not None and outcome.matched else 0.0
    if kind is And:
        return min(_fuzzy(child, entries) for child in node.children)
    if kind is Or:
        return max(_fuzzy(child, entries) for child in node.children)
    return 1.0 - _fuzzy(node.child, entries)


def satisfied_leaves(
    leaf_keys: Iterable[SignalKey], sv: SignalVector
) -> list[tuple[str, str, float]]:
    """Leaves of the decision whose referenced signal matched, with their
    confidences. Negation context is ignored: the satisfied set is defined
    over the flat condition set."""
    entries = sv.entries
    result = []
    for key in leaf_keys:
        outcome = entries.get(key)
        if outcome is not None and outcome.matched:
            result.append((key[0], key[1], outcome.confidence))
    return result


def decision_confidence(decision: Decision, sv: SignalVector) -> float:
    """Mean confidence over satisfied conditions; 0 when none are satisfied
    (e.g. a decision matched purely by negations)."""
    sat = satisfied_leaves(decision.leaf_keys, sv)
    if not sat:
        return 0.0
    return sum(conf for _, _, conf in sat) / len(sat)


# ---------------------------------------------------------------------------
# Decision selection
# ---------------------------------------------------------------------------


@dataclass
class DecisionOutcome:
    name: str
    matched: bool
    confidence: float
    satisfied_leaves: list[tuple[str, str, float]] = field(default_factory=list)


@dataclass
class MatchResult:
    selected: Optional[tuple[str, float]]  # (decision name, confidence)
    all_matched: list[DecisionOutcome]
    strategy: str
    fallback_applied: bool
    selected_decision: Optional[Decision] = None


def select_decision(
    decisions: Sequence[Decision],
    sv: SignalVector,
    strategy: str = "priority",
    fuzzy_mode: bool = False,
    fuzzy_match_threshold: float = 0.5,
    default_model: Optional[str] = None,
) -> MatchResult:
    """Evaluate all decisions and select the winner.

    Priority strategy: argmax priority, ties broken by insertion order.
    Confidence strategy: argmax confidence, then priority, then insertion
    order. With no matches the result carries ``fallback_applied`` when a
    default model exists.
    """
    if strategy not in ("priority", "confidence"):
        raise ValueError(f"unknown selection strategy {strategy!r}")

    matched: list[tuple[Decision, DecisionOutcome]] = []
    for decision in decisions:
        node = decision.rule_node
        if fuzzy_mode:
            value = _fuzzy(node, sv.entries)
            if value < fuzzy_match_threshold:
                continue
            outcome = DecisionOutcome(
                name=decision.name,
                matched=True,
                confidence=value,
                satisfied_leaves=satisfied_leaves(decision.leaf_keys, sv),
            )
        else:
            if not _crisp(node, sv.entries):
                continue
            sat = satisfied_leaves(decision.leaf_keys, sv)
            conf = sum(c for _, _, c in sat) / len(sat) if sat else 0.0
            outcome = DecisionOutcome(
                name=decision.name, matched=True, confidence=conf, satisfied_leaves=sat
            )
        matched.append((decision, outcome))

    if not matched:
        return MatchResult(
            selected=None,
            all_matched=[],
            strategy=strategy,
            fallback_applied=default_model is not None,
        )

    if strategy == "priority":
        best = max(matched, key=lambda m: (m[0].priority, -m[0].insertion_index))
    else:
        best = max(
            matched,
            key=lambda m: (m[1].confidence, m[0].priority, -m[0].insertion_index),
        )
    decision, outcome = best
    return MatchResult(
        selected=(decision.name, outcome.confidence),
        all_matched=[o for _, o in matched],
        strategy=strategy,
        fallback_applied=False,
        selected_decision=decision,
    )


# ---------------------------------------------------------------------------
# Truth table synthesis (functional completeness, constructive)
# ---------------------------------------------------------------------------


def synthesize_from_truth_table(
    leaf_keys: Sequence[SignalKey], minterms: Iterable[tuple[int, ...]]
) -> RuleNode:
    """Build an OR-of-ANDs rule tree reproducing the given truth table.

    ``minterms`` lists the assignments (bit per leaf, in ``leaf_keys`` order)
    where the function is 1. An empty minterm set yields the canonical
    always-false node And(L, Not(L)) over the lexicographically first leaf.
    """
    if not leaf_keys:
        raise ValueError("synthesis requires at least one leaf")
    if len(leaf_keys) > SYNTHESIS_MAX_LEAVES:
        raise ValueError(f"synthesis bounded to {SYNTHESIS_MAX_LEAVES} leaves")

    minterm_list = sorted(set(tuple(m) for m in minterms))
    for minterm in minterm_list:
        if len(minterm) != len(leaf_keys) or any(b not in (0, 1) for b in minterm):
            raise ValueError(f"malformed minterm {minterm!r}")

    if not minterm_list:
        first = Leaf(*min(leaf_keys))
        return And((first, Not(first)))

    terms: list[RuleNode] = []
    for minterm in minterm_list:
        literals: list[RuleNode] = []
        for key, bit in zip(leaf_keys, minterm):
            leaf = Leaf(*key)
            literals.append(leaf if bit else Not(leaf))
        terms.append(literals[0] if len(literals) == 1 else And(tuple(literals)))
    return terms[0] if len(terms) == 1 else Or(tuple(terms))


def truth_table(node: RuleNode, leaf_keys: Sequence[SignalKey]) -> set[tuple[int, ...]]:
    """Exhaustively evaluate `node` over all assignments of ``leaf_keys``."""
    result = set()
    for bits in itertools.product((0, 1), repeat=len(leaf_keys)):
        sv = SignalVector(
            {
                key: SignalOutcome(matched=bool(bit), confidence=float(bit))
                for key, bit in zip(leaf_keys, bits)
            }
        )
        if eval_crisp(node, sv):
            result.add(bits)
    return result


# ---------------------------------------------------------------------------
# Policy analysis
# ---------------------------------------------------------------------------


@dataclass
class PolicyReport:
    leaf_order: list[SignalKey]
    uncovered_count: int
    uncovered_samples: list[dict]
    conflict_count: int
    conflict_samples: list[dict]
    subsumed: list[str]
    note: str = (
        "leaves are treated as independent booleans; semantic coupling between "
        "rules is ignored, so uncovered/conflict sets are over-approximations"
    )

    def to_dict(self) -> dict:
        return {
            "leaf_order": [f"{t}:{n}" for t, n in self.leaf_order],
            "uncovered_count": self.uncovered_count,
            "uncovered_samples": self.uncovered_samples,
            "conflict_count": self.conflict_count,
            "conflict_samples": self.conflict_samples,
            "subsumed": self.subsumed,
            "note": self.note,
        }


def _eval_mask(node: RuleNode, leaf_cols: dict[SignalKey, np.ndarray]) -> np.ndarray:
    if isinstance(node, Leaf):
        return leaf_cols[node.key]
    if isinstance(node, And):
        result = _eval_mask(node.children[0], leaf_cols)
        for child in node.children[1:]:
            result = result & _eval_mask(child, leaf_cols)
        return result
    if isinstance(node, Or):
        result = _eval_mask(node.children[0], leaf_cols)
        for child in node.children[1:]:
            result = result | _eval_mask(child, leaf_cols)
        return result
    return ~_eval_mask(node.child, leaf_cols)


def _assignment_dict(leaf_order: Sequence[SignalKey], index: int) -> dict:
    return {
        f"{t}:{n}": bool((index >> i) & 1) for i, (t, n) in enumerate(leaf_order)
    }


def analyze_policy(config: RouterConfig, sample_limit: int = 16) -> PolicyReport:
    """Exhaustive coverage/conflict/subsumption analysis over all leaf
    assignments. Refuses configs whose used-leaf count exceeds the
    enumeration bound."""
    leaf_order = sorted(used_signal_types(config))
    n = len(leaf_order)
    if n > ANALYSIS_MAX_LEAVES:
        raise AnalysisError(
            f"policy analysis bounded to {ANALYSIS_MAX_LEAVES} leaves, config uses {n}"
        )

    total = 1 << n
    indices = np.arange(total, dtype=np.uint32)
    leaf_cols = {
        key: ((indices >> i) & 1).astype(bool) for i, key in enumerate(leaf_order)
    }

    decisions = config.decisions
    match_masks = [
        _eval_mask(d.rule_node, leaf_cols)
        if n
        else np.array([eval_crisp(d.rule_node, SignalVector())])
        for d in decisions
    ]

    if decisions:
        covered = np.zeros(total, dtype=bool)
        for mask in match_masks:
            covered |= mask
    else:
        covered = np.zeros(total, dtype=bool)
    uncovered = np.nonzero(~covered)[0]

    conflict_mask = np.zeros(total, dtype=bool)
    conflict_pairs: list[tuple[int, int]] = []
    for i, j in itertools.combinations(range(len(decisions)), 2):
        if decisions[i].priority != decisions[j].priority:
            continue
        if set(decisions[i].candidate_names) & set(decisions[j].candidate_names):
            continue
        both = match_masks[i] & match_masks[j]
        if both.any():
            conflict_mask |= both
            conflict_pairs.append((i, j))
    conflicts = np.nonzero(conflict_mask)[0]

    subsumed = []
    for j, decision in enumerate(decisions):
        higher = np.zeros(total, dtype=bool)
        for i, other in enumerate(decisions):
            if other.priority > decision.priority:
                higher |= match_masks[i]
        if bool(np.all(~match_masks[j] | higher)):
            subsumed.append(decision.name)

    conflict_samples = []
    for index in conflicts[:sample_limit]:
        involved = {
            decisions[k].name
            for i, j in conflict_pairs
            for k in (i, j)
            if match_masks[k][index]
        }
        conflict_samples.append(
            {"assignment": _assignment_dict(leaf_order, int(index)),
             "decisions": sorted(involved)}
        )

    return PolicyReport(
        leaf_order=list(leaf_order),
        uncovered_count=int(uncovered.size),
        uncovered_samples=[
            _assignment_dict(leaf_order, int(i)) for i in uncovered[:sample_limit]
        ],
        conflict_count=int(conflicts.size),
        conflict_samples=conflict_samples,
        subsumed=subsumed,
    )
