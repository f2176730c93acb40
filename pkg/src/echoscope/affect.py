"""Affective response patterns: per-comment reply/sympathy/antipathy levels
as functions of commenter leaning, separately per media group, and the
reply vs sympathy/antipathy relation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sstats

from echoscope.errors import EchoscopeError
from echoscope.leaning import BinnedCurve

RESPONSE_KINDS = ("replies", "sympathies", "antipathies")


@dataclass(frozen=True)
class ResponseCurve:
    group: int          # +1 or -1
    response_kind: str
    curve: BinnedCurve


@dataclass(frozen=True)
class ReplyAffectRelation:
    group: int
    reply_buckets: list       # 0, 1, ..., K-1 exact, final bucket is >= K
    mean_sympathies: np.ndarray
    mean_antipathies: np.ndarray
    counts: np.ndarray


def _group_comments(corpus, grouping, group_sign):
    group_media = grouping.group_a if group_sign > 0 else grouping.group_b
    for c in corpus.comments:
        if corpus.articles[c.article_id].medium_id in group_media:
            yield c


def response_curve(corpus, leanings, grouping, group_sign, kind, n_bins: int = 40) -> ResponseCurve:
    """Per-bin mean response count per comment on the group's articles,
    binned by the commenting user's leaning x. Comments by users without a
    leaning are skipped; empty bins are NaN."""
    if kind not in RESPONSE_KINDS:
        raise EchoscopeError(f"unknown response kind {kind!r}")
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    sums = np.zeros(n_bins)
    counts = np.zeros(n_bins, dtype=np.int64)
    seen = 0
    for c in _group_comments(corpus, grouping, group_sign):
        x = leanings.get(c.user_id)
        if x is None:
            continue
        seen += 1
        b = min(int(np.searchsorted(edges, x, side="right")) - 1, n_bins - 1)
        b = max(b, 0)
        sums[b] += getattr(c, kind)
        counts[b] += 1
    if seen == 0:
        raise EchoscopeError(f"group {group_sign:+d} has no comments from known users")
    with np.errstate(invalid="ignore"):
        values = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return ResponseCurve(
        group=group_sign,
        response_kind=kind,
        curve=BinnedCurve(bin_edges=edges, values=values, counts=counts),
    )


def reply_affect_relation(corpus, grouping, group_sign, max_bucket: int = 20) -> ReplyAffectRelation:
    """Bucket the group's comments by reply count (exact up to max_bucket,
    then one overflow bucket) and report mean sympathies/antipathies."""
    n_buckets = max_bucket + 1
    s_sum = np.zeros(n_buckets)
    a_sum = np.zeros(n_buckets)
    counts = np.zeros(n_buckets, dtype=np.int64)
    for c in _group_comments(corpus, grouping, group_sign):
        b = min(c.replies, max_bucket)
        s_sum[b] += c.sympathies
        a_sum[b] += c.antipathies
        counts[b] += 1
    if counts.sum() == 0:
        raise EchoscopeError(f"group {group_sign:+d} has no comments")
    with np.errstate(invalid="ignore"):
        mean_s = np.where(counts > 0, s_sum / np.maximum(counts, 1), np.nan)
        mean_a = np.where(counts > 0, a_sum / np.maximum(counts, 1), np.nan)
    return ReplyAffectRelation(
        group=group_sign,
        reply_buckets=list(range(n_buckets)),
        mean_sympathies=mean_s,
        mean_antipathies=mean_a,
        counts=counts,
    )


def curve_shape_stats(curve: ResponseCurve):
    """(Spearman monotonicity over occupied bins, peak bin center).

    Peak ties resolve to the leftmost bin.
    """
    bc = curve.curve
    occupied = bc.counts > 0
    if occupied.sum() < 5:
        raise EchoscopeError("need at least 5 occupied bins")
    centers = 0.5 * (bc.bin_edges[:-1] + bc.bin_edges[1:])
    vals = bc.values[occupied]
    cents = centers[occupied]
    rho = float(sstats.spearmanr(cents, vals).statistic)
    peak = float(cents[int(np.argmax(vals))])
    return rho, peak
