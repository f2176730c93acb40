"""Individual political leanings from comment placement, and population curves.

A user's leaning is the mean of the +/-1 media leanings over their comments
on group-assigned media; comments elsewhere carry no leaning signal and are
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from echoscope.errors import EchoscopeError


@dataclass(frozen=True)
class UserLeaning:
    user_id: str
    x: float   # in [-1, 1]
    n: int     # qualifying comment count


@dataclass(frozen=True)
class BinnedCurve:
    bin_edges: np.ndarray
    values: np.ndarray   # NaN marks an empty bin
    counts: np.ndarray


def individual_leaning(user_id, corpus, leaning_map) -> UserLeaning:
    """Mean media leaning over the user's comments on group media."""
    total = 0
    n = 0
    for ci in corpus.comments_by_user.get(user_id, ()):
        c = corpus.comments[ci]
        sign = leaning_map.get(corpus.articles[c.article_id].medium_id)
        if sign is None:
            continue
        total += sign
        n += 1
    if n == 0:
        raise EchoscopeError(f"user {user_id!r} has no comments on group media")
    return UserLeaning(user_id=user_id, x=total / n, n=n)


def compute_leanings(corpus, users, leaning_map):
    """individual_leaning for every user in `users` with qualifying comments,
    sorted by user_id. Users with none are silently skipped."""
    out = []
    for uid in sorted(users):
        try:
            out.append(individual_leaning(uid, corpus, leaning_map))
        except EchoscopeError:
            continue
    return out


def _bin_index(x, edges):
    """Uniform-bin index over [-1, 1]; the final bin is right-closed so
    x = 1 lands inside."""
    idx = np.searchsorted(edges, x, side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def leaning_distribution(leanings, n_bins: int = 40) -> BinnedCurve:
    """Normalized histogram of x over [-1, 1]."""
    if not leanings:
        raise EchoscopeError("empty leaning collection")
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    xs = np.array([l.x for l in leanings])
    counts = np.bincount(_bin_index(xs, edges), minlength=n_bins)
    return BinnedCurve(bin_edges=edges, values=counts / counts.sum(), counts=counts)


def activity_by_leaning(leanings, n_bins: int = 40) -> BinnedCurve:
    """Per-bin mean qualifying comment count; empty bins are NaN, not zero."""
    if not leanings:
        raise EchoscopeError("empty leaning collection")
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    xs = np.array([l.x for l in leanings])
    ns = np.array([l.n for l in leanings], dtype=float)
    idx = _bin_index(xs, edges)
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=ns, minlength=n_bins)
    with np.errstate(invalid="ignore"):
        values = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return BinnedCurve(bin_edges=edges, values=values, counts=counts)


def population_summary(leanings):
    """Shares of users by sign of x and comment totals on each side."""
    if not leanings:
        raise EchoscopeError("empty leaning collection")
    n = len(leanings)
    pos = [l for l in leanings if l.x > 0]
    neg = [l for l in leanings if l.x < 0]
    zero = [l for l in leanings if l.x == 0]
    return {
        "share_positive": len(pos) / n,
        "share_negative": len(neg) / n,
        "share_zero": len(zero) / n,
        "comments_positive": sum(l.n for l in pos),
        "comments_negative": sum(l.n for l in neg),
        "comments_zero": sum(l.n for l in zero),
    }
