"""The selection algorithms behind the unified Select interface.

Every algorithm is deterministic given (context, state, seed); stochastic
ones take explicit seeds. Confidences are probabilities, similarities, or
normalized scores, always in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..config import ModelRef
from ..errors import SelectionError
from . import model_files
from .state import BetaState, EloState, LatencyStore, elo_win_probability


@dataclass
class SelectionContext:
    candidates: list[ModelRef]
    query_embedding: Optional[np.ndarray] = None
    domain: Optional[str] = None
    costs: dict[str, float] = field(default_factory=dict)
    elo: Optional[EloState] = None
    beta: Optional[BetaState] = None
    latency: Optional[LatencyStore] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.candidates:
            raise SelectionError("selection requires a non-empty candidate set")
        for model, cost in self.costs.items():
            if cost < 0:
                raise SelectionError(f"negative cost for model {model!r}")

    @property
    def names(self) -> list[str]:
        return [ref.model for ref in self.candidates]


@dataclass
class SelectionResult:
    model: str
    confidence: float
    # Escalation plan for cascading algorithms: [(model, stage threshold)].
    cascade: Optional[list[tuple[str, float]]] = None
    meta: dict = field(default_factory=dict)


def _clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


def _minmax(values: dict[str, float]) -> dict[str, float]:
    if not values:
        return {}
    low, high = min(values.values()), max(values.values())
    if high == low:
        return {k: 0.5 for k in values}
    return {k: (v - low) / (high - low) for k, v in values.items()}


def _require_embedding(ctx: SelectionContext) -> np.ndarray:
    if ctx.query_embedding is None:
        raise SelectionError("algorithm requires a query embedding")
    return ctx.query_embedding


# ---------------------------------------------------------------------------


def select_static(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Argmax over pre-configured quality scores; the deterministic baseline.

    Scores come from params["scores"] or per-model ``weight``; with neither,
    the first candidate wins with confidence 1.0.
    """
    scores = params.get("scores") or {}
    best_name, best_score = None, None
    for ref in ctx.candidates:
        score = scores.get(ref.model, ref.weight)
        if score is None:
            continue
        if best_score is None or score > best_score:
            best_name, best_score = ref.model, score
    if best_name is None:
        return SelectionResult(ctx.names[0], 1.0)
    return SelectionResult(best_name, _clamp01(float(best_score)))


def select_elo(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Sample proportional to expected win rate against the candidate pool
    (mode="argmax" for the deterministic variant); confidence is the selected
    model's pool win rate."""
    state = ctx.elo or EloState()
    names = ctx.names
    win_rates = np.array([state.pool_win_rate(m, names) for m in names])
    if params.get("mode", "sample") == "argmax":
        index = int(np.argmax(win_rates))
    else:
        rng = np.random.default_rng(params.get("seed", ctx.seed))
        probabilities = win_rates / win_rates.sum()
        index = int(rng.choice(len(names), p=probabilities))
    return SelectionResult(names[index], _clamp01(float(win_rates[index])))


def select_routerdc(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Argmax cosine similarity between the query embedding and per-model
    embeddings; ties break by candidate order."""
    vec = _require_embedding(ctx)
    embeddings = model_files.routerdc_embeddings(params, ctx.names)
    best_name, best_sim = ctx.names[0], -2.0
    for name in ctx.names:
        sim = float(np.dot(vec, embeddings[name]))
        if sim > best_sim:
            best_name, best_sim = name, sim
    return SelectionResult(best_name, _clamp01(best_sim))


def select_hybrid(ctx: SelectionContext, params: dict) -> SelectionResult:
    """alpha * normalized rating + beta * cos(e_q, e_m) + gamma * (1 - normalized
    cost); weights must sum to 1."""
    alpha = float(params.get("alpha", 1 / 3))
    beta = float(params.get("beta", 1 / 3))
    gamma = float(params.get("gamma", 1 / 3))
    if min(alpha, beta, gamma) < 0 or abs(alpha + beta + gamma - 1.0) > 1e-9:
        raise SelectionError("hybrid weights must be non-negative and sum to 1")
    names = ctx.names
    state = ctx.elo or EloState()
    ratings = _minmax(state.ratings(names))
    costs = _minmax({m: ctx.costs.get(m, 0.0) for m in names})
    if beta > 0:
        vec = _require_embedding(ctx)
        embeddings = model_files.routerdc_embeddings(params, names)
        cosines = {m: _clamp01(float(np.dot(vec, embeddings[m]))) for m in names}
    else:
        cosines = {m: 0.0 for m in names}
    best_name, best_score = names[0], -1.0
    for name in names:
        score = alpha * ratings[name] + beta * cosines[name] + gamma * (1.0 - costs[name])
        if score > best_score:
            best_name, best_score = name, score
    return SelectionResult(best_name, _clamp01(best_score))


# -- AutoMix cascade ---------------------------------------------------------

# verifier hook: (model, response_text, stage_threshold) -> passed
Verifier = Callable[[str, str, float], bool]


def mock_verifier(model: str, response_text: str, threshold: float) -> bool:
    """Desk-scale stand-in for LLM self-verification: the response passes when
    its character length reaches the stage threshold (fractional thresholds
    effectively require a non-empty response)."""
    return len(response_text) >= threshold


def automix_stage_thresholds(ctx: SelectionContext, params: dict) -> list[float]:
    thresholds = params.get("thresholds")
    if thresholds is None:
        thresholds = [float(params.get("threshold", 1.0))] * len(ctx.candidates)
    if len(thresholds) != len(ctx.candidates):
        raise SelectionError("automix needs one threshold per cascade stage")
    return [float(t) for t in thresholds]


def select_automix(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Start the cascade at the cheapest model; the result carries the full
    escalation plan which the execution layer drives through the verifier
    (the final stage always accepts)."""
    thresholds = automix_stage_thresholds(ctx, params)
    plan = list(zip(ctx.names, thresholds))
    return SelectionResult(ctx.names[0], 1.0, cascade=plan)


def automix_expected_cost(pass_probs: list[float], costs: list[float]) -> float:
    """E[C] = sum_k C_k * prod_{j<k} (1 - P_j): closed-form expected cascade
    cost given per-stage self-verification pass probabilities."""
    if len(pass_probs) != len(costs) or not costs:
        raise ValueError("pass_probs and costs must be equal-length and non-empty")
    expected = 0.0
    reach = 1.0
    for p, cost in zip(pass_probs, costs):
        if not 0.0 <= p <= 1.0 or cost < 0:
            raise ValueError("probabilities must be in [0,1] and costs non-negative")
        expected += cost * reach
        reach *= 1.0 - p
    return expected


def run_cascade(
    plan: list[tuple[str, float]],
    invoke: Callable[[str], str],
    verifier: Verifier = mock_verifier,
) -> tuple[str, str, list[str]]:
    """Drive the cascade: invoke each stage, verify, escalate on failure.
    Returns (model, response, attempted models)."""
    if not plan:
        raise SelectionError("empty cascade")
    attempted = []
    for index, (model, threshold) in enumerate(plan):
        response = invoke(model)
        attempted.append(model)
        if index == len(plan) - 1 or verifier(model, response, threshold):
            return model, response, attempted
    raise AssertionError("unreachable: final stage always accepts")


# -- classical ML ------------------------------------------------------------


def select_knn(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Quality-weighted majority vote over the k nearest records (Euclidean
    distance over [e_q; onehot(domain)]); k clamps to the store size."""
    features, record_models, qualities, categories = model_files.knn_records(params)
    vec = model_files.feature_vector(_require_embedding(ctx), ctx.domain, categories)
    if vec.shape[0] != features.shape[1]:
        raise SelectionError(
            f"knn feature dim {features.shape[1]} does not match query dim {vec.shape[0]}"
        )
    k = min(int(params.get("k", 5)), features.shape[0])
    if k < 1:
        raise SelectionError("knn requires k >= 1")
    distances = np.linalg.norm(features - vec, axis=1)
    neighbor_idx = np.argsort(distances, kind="stable")[:k]
    votes: dict[str, float] = {name: 0.0 for name in ctx.names}
    for i in neighbor_idx:
        model = record_models[i]
        if model in votes:
            votes[model] += float(qualities[i])
    total = sum(votes.values())
    best_name = max(ctx.names, key=lambda name: votes[name])  # ties: candidate order
    confidence = votes[best_name] / total if total > 0 else 1.0 / len(ctx.names)
    return SelectionResult(best_name, _clamp01(confidence))


def select_kmeans(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Assign the query to its nearest centroid, then argmax
    alpha * quality - (1 - alpha) * normalized latency within that cluster."""
    centroids, stats, categories = model_files.kmeans_model(params)
    vec = model_files.feature_vector(_require_embedding(ctx), ctx.domain, categories)
    if vec.shape[0] != centroids.shape[1]:
        raise SelectionError("kmeans centroid dim does not match query dim")
    alpha = float(params.get("alpha", 0.5))
    cluster = int(np.argmin(np.linalg.norm(centroids - vec, axis=1)))
    cluster_stats = stats[cluster]
    available = [name for name in ctx.names if name in cluster_stats]
    if not available:
        raise SelectionError(f"no candidate has stats in cluster {cluster}")
    latency_norm = _minmax({name: float(cluster_stats[name]["latency"]) for name in available})
    scores = {
        name: alpha * float(cluster_stats[name]["quality"]) - (1 - alpha) * latency_norm[name]
        for name in available
    }
    best_name = max(available, key=lambda name: scores[name])
    confidence = _minmax(scores)[best_name] if len(available) > 1 else 1.0
    return SelectionResult(best_name, _clamp01(confidence), meta={"cluster": cluster})


def select_mlp(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Feed-forward ReLU network ending in a softmax over the model classes;
    confidence is the winning softmax mass."""
    layers, classes, categories = model_files.mlp_model(params)
    vec = model_files.feature_vector(_require_embedding(ctx), ctx.domain, categories)
    activation = vec
    for index, (w, b) in enumerate(layers):
        if w.shape[1] != activation.shape[0]:
            raise SelectionError(f"mlp layer {index} dimension mismatch")
        activation = w @ activation + b
        if index < len(layers) - 1:
            activation = np.maximum(activation, 0.0)
    logits = activation - activation.max()
    probs = np.exp(logits)
    probs /= probs.sum()
    best_name, best_prob = None, -1.0
    for name in ctx.names:  # first candidate wins ties
        if name not in classes:
            continue
        p = float(probs[classes.index(name)])
        if p > best_prob:
            best_name, best_prob = name, p
    if best_name is None:
        raise SelectionError("no candidate appears in the mlp class list")
    return SelectionResult(best_name, _clamp01(best_prob))


# -- reinforcement learning --------------------------------------------------


def select_thompson(ctx: SelectionContext, params: dict) -> SelectionResult:
    """Draw from each candidate's Beta posterior and take the argmax."""
    state = ctx.beta or BetaState()
    rng = np.random.default_rng(params.get("seed", ctx.seed))
    best_name, best_draw = None, -1.0
    for name in ctx.names:
        alpha, beta = state.get(name)
        draw = float(rng.beta(alpha, beta))
        if draw > best_draw:
            best_name, best_draw = name, draw
    return SelectionResult(best_name, _clamp01(best_draw))


def select_latency_aware(ctx: SelectionContext, params: dict) -> SelectionResult:
    """argmin of s_k = mean over metrics of perc_p(m_k) / min_j perc_p(m_j);
    the best model has s = 1 by construction. Candidates lacking observations
    for a configured metric are excluded."""
    store = ctx.latency
    if store is None:
        raise SelectionError("latency_aware requires a latency store")
    metrics = [m.lower() for m in params.get("metrics", ["tpot"])]
    if not metrics or any(m not in ("tpot", "ttft") for m in metrics):
        raise SelectionError("metrics must be a non-empty subset of {tpot, ttft}")
    p = float(params.get("percentile", 50))
    included = [
        name for name in ctx.names
        if all(store.count(name, metric) > 0 for metric in metrics)
    ]
    if not included:
        raise SelectionError("no candidate has latency observations for all metrics")
    percentiles = {
        name: {metric: store.percentile(name, metric, p) for metric in metrics}
        for name in included
    }
    best_per_metric = {
        metric: min(percentiles[name][metric] for name in included) for metric in metrics
    }
    scores = {
        name: sum(
            percentiles[name][metric] / best_per_metric[metric]
            if best_per_metric[metric] > 0 else 1.0
            for metric in metrics
        ) / len(metrics)
        for name in included
    }
    best_name = min(included, key=lambda name: scores[name])
    return SelectionResult(best_name, _clamp01(1.0 / scores[best_name]), meta={"scores": scores})
