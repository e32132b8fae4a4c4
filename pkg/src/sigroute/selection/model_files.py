"""Loading of serialized model files for KNN / KMeans / MLP / RouterDC.

We consume the serialized JSON form only (training is out of scope). Schemas:

routerdc:  {"model_embeddings": {"<model>": [float, ...]}}
knn:       {"records": [{"features": [...], "model": str, "quality": float}],
            "categories": ["<domain>", ...]}            # categories optional
kmeans:    {"centroids": [[...], ...],
            "stats": [{"<model>": {"quality": q, "latency": l}}, ...],
            "categories": [...]}                        # stats[i] = cluster i
mlp:       {"layers": [{"w": [[...], ...], "b": [...]}, ...],
            "classes": ["<model>", ...], "categories": [...]}

Inline data in algorithm params takes precedence over a ``model_file`` path.
"""

from __future__ import annotations

import json
import threading

import numpy as np

from ..errors import SelectionError

_cache_lock = threading.Lock()
_file_cache: dict[str, dict] = {}


def _load_file(path: str) -> dict:
    with _cache_lock:
        if path not in _file_cache:
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    _file_cache[path] = json.load(handle)
            except (OSError, json.JSONDecodeError) as exc:
                raise SelectionError(f"cannot load model file {path!r}: {exc}") from exc
        return _file_cache[path]


def resolve_data(params: dict, inline_keys: tuple[str, ...]) -> dict:
    """Return the data dict holding the given keys: params themselves when the
    data is inline, otherwise the loaded ``model_file``."""
    if any(key in params for key in inline_keys):
        return params
    path = params.get("model_file")
    if not path:
        raise SelectionError(
            f"algorithm requires inline data ({'/'.join(inline_keys)}) or model_file"
        )
    return _load_file(path)


def routerdc_embeddings(params: dict, candidates: list[str]) -> dict[str, np.ndarray]:
    data = resolve_data(params, ("model_embeddings",))
    table = data.get("model_embeddings") or {}
    result = {}
    for model in candidates:
        if model not in table:
            raise SelectionError(f"no model embedding for candidate {model!r}")
        vec = np.asarray(table[model], dtype=np.float64)
        norm = np.linalg.norm(vec)
        result[model] = vec / norm if norm else vec
    return result


def knn_records(params: dict) -> tuple[np.ndarray, list[str], np.ndarray, list[str]]:
    data = resolve_data(params, ("records",))
    records = data.get("records") or []
    if not records:
        raise SelectionError("knn record store is empty")
    features = np.asarray([r["features"] for r in records], dtype=np.float64)
    models = [r["model"] for r in records]
    qualities = np.asarray([r.get("quality", 1.0) for r in records], dtype=np.float64)
    return features, models, qualities, list(data.get("categories") or [])


def kmeans_model(params: dict) -> tuple[np.ndarray, list[dict], list[str]]:
    data = resolve_data(params, ("centroids",))
    centroids = np.asarray(data.get("centroids") or [], dtype=np.float64)
    stats = data.get("stats") or []
    if centroids.size == 0:
        raise SelectionError("kmeans model has no centroids")
    if len(stats) != centroids.shape[0]:
        raise SelectionError("kmeans stats must have one entry per centroid")
    return centroids, stats, list(data.get("categories") or [])


def mlp_model(params: dict) -> tuple[list[tuple[np.ndarray, np.ndarray]], list[str], list[str]]:
    data = resolve_data(params, ("layers",))
    raw_layers = data.get("layers") or []
    classes = data.get("classes") or []
    if not raw_layers or not classes:
        raise SelectionError("mlp model requires layers and classes")
    layers = []
    previous_out = None
    for index, layer in enumerate(raw_layers):
        w = np.asarray(layer["w"], dtype=np.float64)
        b = np.asarray(layer["b"], dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise SelectionError(f"mlp layer {index} has inconsistent shapes")
        if previous_out is not None and w.shape[1] != previous_out:
            raise SelectionError(
                f"mlp layer {index} expects input dim {w.shape[1]}, got {previous_out}"
            )
        previous_out = w.shape[0]
        layers.append((w, b))
    if previous_out != len(classes):
        raise SelectionError(
            f"mlp output dim {previous_out} does not match {len(classes)} classes"
        )
    return layers, classes, list(data.get("categories") or [])


def feature_vector(query_embedding: np.ndarray, domain: str | None,
                   categories: list[str]) -> np.ndarray:
    """f = [e_q ; onehot(domain)] over the model file's category vocabulary."""
    onehot = np.zeros(len(categories), dtype=np.float64)
    if domain is not None and domain in categories:
        onehot[categories.index(domain)] = 1.0
    return np.concatenate([query_embedding, onehot])
