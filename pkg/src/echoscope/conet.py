"""Co-commenting user network: construction, neighbor leanings, assortativity.

Two users are linked if they commented on at least one common article;
the weighted variant counts the number of distinct shared articles. Pair
accumulation runs through the compiled kernel when available (see
echoscope.kernels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sstats

from echoscope.errors import EchoscopeError
from echoscope.kernels import accumulate_pair_counts

WEIGHTED = "weighted"
UNWEIGHTED = "unweighted"


@dataclass(frozen=True)
class CoCommentGraph:
    nodes: list         # ordered user ids
    edge_u: np.ndarray  # int64 node indices, edge_u < edge_v
    edge_v: np.ndarray
    weights: np.ndarray  # int64, all 1 in unweighted mode
    mode: str

    @property
    def n_edges(self):
        return len(self.weights)

    def edge_ids(self):
        """Iterate (user_a, user_b, weight) with user_a < user_b."""
        for u, v, w in zip(self.edge_u, self.edge_v, self.weights):
            yield self.nodes[u], self.nodes[v], int(w)


@dataclass(frozen=True)
class AssortativityResult:
    pearson: float
    n_nodes_used: int
    mode: str


def build_cocomment_graph(corpus, users, mode: str = WEIGHTED) -> CoCommentGraph:
    """Accumulate shared-article counts over all unordered user pairs.

    A user commenting several times on one article counts once for that
    article. Users outside the input set are ignored.
    """
    if not users:
        raise EchoscopeError("user set must be non-empty")
    if mode not in (WEIGHTED, UNWEIGHTED):
        raise EchoscopeError(f"unknown graph mode {mode!r}")
    nodes = sorted(users)
    u_index = {u: i for i, u in enumerate(nodes)}

    member_parts = []
    indptr = [0]
    for aid in sorted(corpus.comments_by_article):
        distinct = {
            u_index[corpus.comments[ci].user_id]
            for ci in corpus.comments_by_article[aid]
            if corpus.comments[ci].user_id in u_index
        }
        if len(distinct) < 2:
            continue
        member_parts.append(np.fromiter(sorted(distinct), dtype=np.int32, count=len(distinct)))
        indptr.append(indptr[-1] + len(distinct))

    if member_parts:
        members = np.concatenate(member_parts)
    else:
        members = np.empty(0, dtype=np.int32)
    eu, ev, w = accumulate_pair_counts(np.asarray(indptr, dtype=np.int64), members)
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if mode == UNWEIGHTED:
        w = np.ones_like(w)
    return CoCommentGraph(nodes=nodes, edge_u=eu, edge_v=ev, weights=w, mode=mode)


def neighbor_mean_leaning(graph: CoCommentGraph, leanings) -> dict:
    """Weighted mean neighbor leaning per node; isolated nodes are omitted."""
    missing = [graph.nodes[i] for i in set(graph.edge_u) | set(graph.edge_v)
               if graph.nodes[i] not in leanings]
    if missing:
        raise EchoscopeError(f"no leaning for {len(missing)} graph nodes (e.g. {missing[0]!r})")
    n = len(graph.nodes)
    x = np.array([leanings.get(uid, 0.0) for uid in graph.nodes])
    wsum = np.zeros(n)
    xsum = np.zeros(n)
    w = graph.weights.astype(float)
    np.add.at(wsum, graph.edge_u, w)
    np.add.at(wsum, graph.edge_v, w)
    np.add.at(xsum, graph.edge_u, w * x[graph.edge_v])
    np.add.at(xsum, graph.edge_v, w * x[graph.edge_u])
    out = {}
    for i, uid in enumerate(graph.nodes):
        if wsum[i] > 0:
            out[uid] = xsum[i] / wsum[i]
    return out


def leaning_assortativity(leanings, xnn_map, mode: str = WEIGHTED) -> AssortativityResult:
    """Pearson correlation between x and <x_nn> over users present in both."""
    shared = sorted(set(leanings) & set(xnn_map))
    if len(shared) < 3:
        raise EchoscopeError("need at least 3 users with both x and <x_nn>")
    xs = np.array([leanings[u] for u in shared])
    ys = np.array([xnn_map[u] for u in shared])
    if np.std(xs) == 0 or np.std(ys) == 0:
        raise EchoscopeError("correlation undefined for constant input")
    r = float(sstats.pearsonr(xs, ys)[0])
    return AssortativityResult(pearson=r, n_nodes_used=len(shared), mode=mode)


def joint_density(leanings, xnn_map, n_bins: int = 61):
    """Normalized 2-D histogram of (x, <x_nn>) over [-1, 1]^2.

    Returns (edges, grid) with grid mass summing to 1.
    """
    shared = sorted(set(leanings) & set(xnn_map))
    if not shared:
        raise EchoscopeError("empty input")
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    xs = np.array([leanings[u] for u in shared])
    ys = np.array([xnn_map[u] for u in shared])
    xi = np.clip(np.searchsorted(edges, xs, side="right") - 1, 0, n_bins - 1)
    yi = np.clip(np.searchsorted(edges, ys, side="right") - 1, 0, n_bins - 1)
    grid = np.zeros((n_bins, n_bins))
    np.add.at(grid, (xi, yi), 1.0)
    return edges, grid / grid.sum()


def export_top_edges(graph: CoCommentGraph, fraction: float = 0.02):
    """Heaviest ceil(fraction * |E|) edges as (user_a, user_b, weight) rows,
    sorted by weight descending then lexicographic pair."""
    if graph.mode != WEIGHTED:
        raise EchoscopeError("top-edge export requires a weighted graph")
    n_keep = math.ceil(fraction * graph.n_edges)
    rows = [(graph.nodes[u], graph.nodes[v], int(w))
            for u, v, w in zip(graph.edge_u, graph.edge_v, graph.weights)]
    rows.sort(key=lambda r: (-r[2], r[0], r[1]))
    return rows[:n_keep]
