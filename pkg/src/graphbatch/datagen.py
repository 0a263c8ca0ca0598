"""Synthetic graph datasets and the JSON-lines dataset format.

Two families are provided:

* ``gaussian``: node counts from a rounded normal, every ordered node
  pair connected (``n * (n - 1)`` directed edges). Small-molecule-like.
* ``longtail``: node counts from a rounded lognormal, each node receiving
  edges from its ``k`` cyclic successors (``min(k * n, n * (n - 1))``
  edges). Crystal-like with a heavy right tail.

Only node and edge counts matter for batching, so connectivity is any
valid pattern with the right edge count.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyDataset, GraphBatchError, InvalidParams, ParseError
from .graph import Graph

FAMILIES = ("gaussian", "longtail")
FAMILY_ALIASES = {
    "gaussian": "gaussian",
    "gaussianFullyConnected": "gaussian",
    "qm9like": "gaussian",
    "longtail": "longtail",
    "longtailKnn": "longtail",
    "aflowlike": "longtail",
}


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters for :func:`gen_dataset`.

    For ``longtail``, ``std_nodes`` is the log-space sigma and
    ``mean_nodes`` the mean of the (unrounded) lognormal.
    """

    family: str = "gaussian"
    mean_nodes: float = 17.0
    std_nodes: float = 3.0
    min_nodes: int = 3
    max_nodes: int = 29
    knn_k: int = 24
    size: int = 10_000
    seed: int = 0

    def __post_init__(self):
        family = FAMILY_ALIASES.get(self.family)
        if family is None:
            raise InvalidParams(f"unknown family {self.family!r}; choose from {sorted(FAMILY_ALIASES)}")
        object.__setattr__(self, "family", family)
        if self.min_nodes < 1:
            raise InvalidParams(f"min_nodes must be >= 1, got {self.min_nodes}")
        if self.max_nodes < self.min_nodes:
            raise InvalidParams(f"max_nodes {self.max_nodes} < min_nodes {self.min_nodes}")
        if self.size < 1:
            raise InvalidParams(f"size must be >= 1, got {self.size}")
        if self.knn_k < 1:
            raise InvalidParams(f"knn_k must be >= 1, got {self.knn_k}")
        if not self.mean_nodes > 0 or not self.std_nodes >= 0:
            raise InvalidParams("mean_nodes must be > 0 and std_nodes >= 0")


def qm9_like(size: int = 10_000, seed: int = 0, **overrides) -> GeneratorParams:
    return GeneratorParams(**{"family": "gaussian", "mean_nodes": 17.0, "std_nodes": 3.0,
                              "min_nodes": 3, "max_nodes": 29, "size": size, "seed": seed,
                              **overrides})


def aflow_like(size: int = 10_000, seed: int = 0, **overrides) -> GeneratorParams:
    return GeneratorParams(**{"family": "longtail", "mean_nodes": 12.0, "std_nodes": 0.8,
                              "min_nodes": 1, "max_nodes": 400, "knn_k": 24, "size": size,
                              "seed": seed, **overrides})


def edge_count(family: str, n: int, knn_k: int = 24) -> int:
    if FAMILY_ALIASES[family] == "gaussian":
        return n * (n - 1)
    return min(knn_k * n, n * (n - 1))


def _readonly(arr):
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def _connectivity(family: str, n: int, k: int):
    if family == "gaussian":
        src, dst = np.nonzero(~np.eye(n, dtype=bool))
        return _readonly(src.astype(np.int64)), _readonly(dst.astype(np.int64))
    k = min(k, n - 1)
    receivers = np.repeat(np.arange(n, dtype=np.int64), k)
    offsets = np.tile(np.arange(1, k + 1, dtype=np.int64), n)
    senders = (receivers + offsets) % n if n else receivers
    return _readonly(senders), _readonly(receivers)


@lru_cache(maxsize=None)
def _unit_features(n: int):
    return _readonly(np.ones((n, 1)))


def sample_node_counts(params: GeneratorParams) -> np.ndarray:
    rng = np.random.default_rng(params.seed % 2**64)
    if params.family == "gaussian":
        raw = rng.normal(params.mean_nodes, params.std_nodes, params.size)
    else:
        sigma = params.std_nodes
        mu = math.log(params.mean_nodes) - sigma * sigma / 2
        raw = rng.lognormal(mu, sigma, params.size)
    return np.clip(np.rint(raw), params.min_nodes, params.max_nodes).astype(np.int64)


def gen_dataset(params: GeneratorParams) -> list:
    """Generate ``params.size`` graphs; deterministic in ``params.seed``."""
    graphs = []
    for n in sample_node_counts(params).tolist():
        senders, receivers = _connectivity(params.family, n, params.knn_k)
        graphs.append(Graph(n, senders, receivers, _unit_features(n), validate=False))
    return graphs


def _graph_record(g: Graph) -> dict:
    rec = {"n": g.num_nodes, "s": g.senders.tolist(), "r": g.receivers.tolist()}
    if g.node_features is not None:
        rec["nf"] = g.node_features.tolist()
    if g.edge_features is not None:
        rec["ef"] = g.edge_features.tolist()
    return rec


def write_dataset(dataset: Sequence[Graph], path) -> None:
    """Write one JSON object per line: ``{"n", "s", "r"[, "nf"][, "ef"]}``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for g in dataset:
            fh.write(json.dumps(_graph_record(g), separators=(",", ":")))
            fh.write("\n")


def _parse_record(text: str) -> Graph:
    rec = json.loads(text)
    if not isinstance(rec, dict):
        raise ValueError("expected a JSON object")
    missing = {"n", "s", "r"} - rec.keys()
    if missing:
        raise ValueError(f"missing keys {sorted(missing)}")
    n = rec["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"'n' must be a non-negative integer, got {n!r}")
    for key in ("s", "r"):
        if not isinstance(rec[key], list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in rec[key]):
            raise ValueError(f"{key!r} must be a list of integers")
    return Graph(n, rec["s"], rec["r"], rec.get("nf"), rec.get("ef"))


def read_dataset(path) -> list:
    graphs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                graphs.append(_parse_record(line))
            except (ValueError, GraphBatchError) as exc:
                raise ParseError(str(exc), line=lineno) from exc
    if not graphs:
        raise EmptyDataset(f"{path} contains no graphs")
    return graphs


@dataclass(frozen=True)
class DimensionSummary:
    min: int
    max: int
    mean: float
    median: float
    std: float
    excess_kurtosis: Optional[float]  # None when std is zero
    max_mean_ratio: Optional[float]


def excess_kurtosis(values) -> Optional[float]:
    """Sample excess kurtosis ``m4 / m2**2 - 3`` (biased moments)."""
    x = np.asarray(values, dtype=np.float64)
    d = x - x.mean()
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        return None
    return float(np.mean(d ** 4)) / (m2 * m2) - 3.0


def _summarize(values: np.ndarray) -> DimensionSummary:
    mean = float(values.mean())
    return DimensionSummary(
        min=int(values.min()),
        max=int(values.max()),
        mean=mean,
        median=float(np.median(values)),
        std=float(values.std(ddof=1)) if len(values) > 1 else 0.0,
        excess_kurtosis=excess_kurtosis(values),
        max_mean_ratio=float(values.max()) / mean if mean > 0 else None,
    )


def dataset_summary(dataset: Sequence[Graph]) -> dict:
    if not dataset:
        raise EmptyDataset("cannot summarize an empty dataset")
    nodes = np.fromiter((g.num_nodes for g in dataset), np.int64, len(dataset))
    edges = np.fromiter((g.num_edges for g in dataset), np.int64, len(dataset))
    return {"count": len(dataset), "nodes": _summarize(nodes), "edges": _summarize(edges)}


def summary_to_dict(summary: dict) -> dict:
    return {k: asdict(v) if isinstance(v, DimensionSummary) else v for k, v in summary.items()}
