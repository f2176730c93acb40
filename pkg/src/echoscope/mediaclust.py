"""Discovery of opposed media groups from user sympathy-ratio correlations.

Chain: user x media sympathy-ratio matrix (with explicit missingness) ->
pairwise-complete Pearson correlation between media -> average-linkage
hierarchical clustering on distance 1 - r -> extraction of the most
anticorrelated pair of dendrogram clusters as the two polar groups.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from echoscope.errors import EchoscopeError, UnpolarizedCorpusError

# Candidate pairs whose mean inter-cluster correlation is within this
# tolerance of the minimum count as tied; ties prefer larger clusters.
# Without this, sampling noise makes a sub-block of a planted group beat
# the full block by a hair, so exact recovery would be impossible.
TIE_TOLERANCE = 0.05


@dataclass(frozen=True)
class SympathyMatrix:
    users: list          # ordered user ids
    media: list          # ordered medium ids
    values: np.ndarray   # float grid, NaN where a user has no qualifying comment

    def __post_init__(self):
        if self.values.shape != (len(self.users), len(self.media)):
            raise EchoscopeError("sympathy matrix shape does not match id lists")


@dataclass(frozen=True)
class MediaCorrelation:
    media: list
    matrix: np.ndarray   # symmetric, unit diagonal, entries in [-1, 1]
    support: np.ndarray  # pairwise-overlap user counts


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge sequence over medium-id leaves.

    merges: list of (cluster_a, cluster_b, distance) with each cluster a
    sorted tuple of leaf ids and distances non-decreasing.
    """

    leaves: list
    merges: list

    def clusters(self):
        """All subtree member sets, leaves included."""
        out = [frozenset([leaf]) for leaf in self.leaves]
        out.extend(frozenset(a) | frozenset(b) for a, b, _ in self.merges)
        return out


@dataclass(frozen=True)
class MediaGrouping:
    group_a: frozenset   # leaning +1
    group_b: frozenset   # leaning -1
    unassigned: frozenset
    leaning: dict        # medium_id -> {+1, -1}


def comment_sympathy_ratio(sympathies: int, antipathies: int) -> float:
    """Fraction of a comment's affect votes that are sympathies."""
    total = sympathies + antipathies
    if total < 1:
        raise EchoscopeError("sympathy ratio undefined for zero responses")
    return sympathies / total


def build_sympathy_matrix(corpus, users, media, min_responses: int = 10) -> SympathyMatrix:
    """Mean-of-article-means sympathy ratio per (user, medium).

    Comment ratios are averaged within each article first, then article
    means are averaged within the medium. Only comments with
    sympathies + antipathies >= min_responses contribute; a cell with no
    qualifying comment is NaN.
    """
    users = sorted(users)
    media = list(media)
    u_index = {u: i for i, u in enumerate(users)}
    m_index = {m: j for j, m in enumerate(media)}

    # (user, article) -> [ratio sum, count]
    per_article = defaultdict(lambda: [0.0, 0])
    for c in corpus.comments:
        if c.sympathies + c.antipathies < min_responses:
            continue
        ui = u_index.get(c.user_id)
        if ui is None:
            continue
        mj = m_index.get(corpus.articles[c.article_id].medium_id)
        if mj is None:
            continue
        acc = per_article[(ui, mj, c.article_id)]
        acc[0] += comment_sympathy_ratio(c.sympathies, c.antipathies)
        acc[1] += 1

    sums = np.zeros((len(users), len(media)))
    counts = np.zeros((len(users), len(media)), dtype=np.int64)
    # sorted keys: cell accumulation order is independent of comment order
    for (ui, mj, _aid), (rsum, n) in sorted(per_article.items()):
        sums[ui, mj] += rsum / n
        counts[ui, mj] += 1

    with np.errstate(invalid="ignore"):
        values = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return SympathyMatrix(users=users, media=media, values=values)


def media_correlation(matrix: SympathyMatrix, min_overlap: int = 20) -> MediaCorrelation:
    """Pairwise-complete Pearson correlation between media columns.

    Entries with overlap below min_overlap, or with a constant column on
    the overlap, are zero-filled; support always records the overlap.
    """
    n = len(matrix.media)
    if n < 2:
        raise EchoscopeError("need at least two media")
    vals = matrix.values
    present = ~np.isnan(vals)
    corr = np.zeros((n, n))
    support = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        support[i, i] = int(present[:, i].sum())
        for j in range(i + 1, n):
            both = present[:, i] & present[:, j]
            overlap = int(both.sum())
            support[i, j] = support[j, i] = overlap
            if overlap < max(min_overlap, 2):
                continue
            a = vals[both, i]
            b = vals[both, j]
            sa = a.std()
            sb = b.std()
            if sa == 0.0 or sb == 0.0:
                continue
            r = float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
            corr[i, j] = corr[j, i] = max(-1.0, min(1.0, r))
    np.fill_diagonal(corr, 1.0)
    return MediaCorrelation(media=list(matrix.media), matrix=corr, support=support)


def hierarchical_cluster(corr: MediaCorrelation) -> Dendrogram:
    """Agglomerative average-linkage clustering on distance 1 - r.

    Ties on merge distance are broken by the smallest lexicographic
    (cluster_a, cluster_b) label pair, so the merge sequence is fully
    deterministic.
    """
    media = list(corr.media)
    n = len(media)
    dist = 1.0 - corr.matrix
    # Lance-Williams updates: cluster sizes plus pairwise mean distances
    sizes = {(m,): 1 for m in media}
    pair_dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            la, lb = (media[i],), (media[j],)
            pair_dist[tuple(sorted((la, lb)))] = float(dist[i, j])
    merges = []
    while len(sizes) > 1:
        (la, lb), d = min(pair_dist.items(), key=lambda kv: (kv[1], kv[0]))
        merged = tuple(sorted(la + lb))
        merges.append((la, lb, d))
        na, nb = sizes.pop(la), sizes.pop(lb)
        del pair_dist[(la, lb)]
        for lc in list(sizes):
            da = pair_dist.pop(tuple(sorted((la, lc))))
            db = pair_dist.pop(tuple(sorted((lb, lc))))
            pair_dist[tuple(sorted((merged, lc)))] = (na * da + nb * db) / (na + nb)
        sizes[merged] = na + nb
    return Dendrogram(leaves=list(media), merges=merges)


def _mean_intra(corr, idx):
    if len(idx) < 2:
        return 0.0
    sub = corr[np.ix_(idx, idx)]
    n = len(idx)
    return float((sub.sum() - np.trace(sub)) / (n * (n - 1)))


def _mean_inter(corr, idx_a, idx_b):
    return float(corr[np.ix_(idx_a, idx_b)].mean())


def extract_polar_groups(
    dendro: Dendrogram,
    corr: MediaCorrelation,
    min_size: int = 3,
    anchor_medium: str | None = None,
) -> MediaGrouping:
    """Pick the pair of disjoint dendrogram clusters with the most negative
    mean inter-cluster correlation, both clusters internally cohesive.

    Candidates within TIE_TOLERANCE of the minimum are treated as tied and
    the largest (then lexicographically smallest) pair wins. Orientation:
    +1 goes to the cluster containing anchor_medium when given, otherwise
    to the cluster holding the lexicographically smallest member id.
    """
    media = list(corr.media)
    if len(media) < 2 * min_size:
        raise EchoscopeError(f"need at least {2 * min_size} media")
    m_index = {m: i for i, m in enumerate(media)}

    subtrees = [c for c in dendro.clusters() if len(c) >= min_size]
    candidates = []
    for i in range(len(subtrees)):
        for j in range(i + 1, len(subtrees)):
            a, b = subtrees[i], subtrees[j]
            if a & b:
                continue
            ia = [m_index[m] for m in a]
            ib = [m_index[m] for m in b]
            if _mean_intra(corr.matrix, ia) <= 0 or _mean_intra(corr.matrix, ib) <= 0:
                continue
            inter = _mean_inter(corr.matrix, ia, ib)
            if inter >= 0:
                continue
            candidates.append((inter, a, b))

    if not candidates:
        raise UnpolarizedCorpusError(
            "no pair of cohesive clusters with negative inter-cluster correlation"
        )

    best_score = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] <= best_score + TIE_TOLERANCE]
    # largest pair first, then smallest score, then lexicographic labels
    tied.sort(key=lambda c: (-(len(c[1]) + len(c[2])), c[0], tuple(sorted(c[1])), tuple(sorted(c[2]))))
    _, cl_a, cl_b = tied[0]

    if anchor_medium is not None and anchor_medium in cl_b:
        cl_a, cl_b = cl_b, cl_a
    elif anchor_medium is None and min(cl_b) < min(cl_a):
        cl_a, cl_b = cl_b, cl_a

    leaning = {m: 1 for m in cl_a}
    leaning.update({m: -1 for m in cl_b})
    unassigned = frozenset(media) - cl_a - cl_b
    return MediaGrouping(
        group_a=frozenset(cl_a),
        group_b=frozenset(cl_b),
        unassigned=unassigned,
        leaning=leaning,
    )
