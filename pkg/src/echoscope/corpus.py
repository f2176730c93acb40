"""Data model, streaming ingestion, filtering rules, and corpus statistics.

Input files are newline-delimited JSON, one record per line, so ingestion
streams: peak memory is proportional to the number of records, never to
whole-file size times file count. Unknown keys are ignored; missing
required keys are errors with the offending line number.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone

from echoscope.errors import (
    CorpusFormatError,
    DanglingReferenceError,
    DuplicateIdError,
    EchoscopeError,
)


@dataclass(frozen=True, slots=True)
class Medium:
    medium_id: str
    name: str


@dataclass(frozen=True, slots=True)
class Article:
    article_id: str
    medium_id: str
    published_at: datetime


@dataclass(frozen=True, slots=True)
class Comment:
    comment_id: str
    article_id: str
    user_id: str
    created_at: datetime
    replies: int
    sympathies: int
    antipathies: int


@dataclass(frozen=True, slots=True)
class CorpusStats:
    n_articles: int
    n_comments: int
    n_users: int
    mean_sympathies_per_comment: float
    mean_antipathies_per_comment: float
    sympathy_antipathy_ratio: float  # NaN when mean antipathies is 0


class Corpus:
    """Immutable indexed view over media, articles, and comments.

    Indices:
      comments_by_article: article_id -> list of positions into `comments`
      comments_by_user:    user_id   -> list of positions into `comments`
      articles_by_medium:  medium_id -> list of article_ids
    """

    __slots__ = (
        "media",
        "articles",
        "comments",
        "comments_by_article",
        "comments_by_user",
        "articles_by_medium",
    )

    def __init__(self, media, articles, comments):
        self.media = dict(media)
        self.articles = dict(articles)
        self.comments = list(comments)
        by_article = defaultdict(list)
        by_user = defaultdict(list)
        by_medium = defaultdict(list)
        for aid, art in self.articles.items():
            by_medium[art.medium_id].append(aid)
        for idx, c in enumerate(self.comments):
            by_article[c.article_id].append(idx)
            by_user[c.user_id].append(idx)
        self.comments_by_article = dict(by_article)
        self.comments_by_user = dict(by_user)
        self.articles_by_medium = dict(by_medium)

    @property
    def user_ids(self):
        return self.comments_by_user.keys()

    def medium_of_article(self, article_id):
        return self.articles[article_id].medium_id


_ISO_KEYS = {"published_at", "created_at"}


def _parse_timestamp(raw, path, line_no):
    try:
        ts = datetime.fromisoformat(str(raw).replace("Z", "+00:00"))
    except ValueError:
        raise CorpusFormatError(path, line_no, f"bad timestamp {raw!r}")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def _parse_count(raw, key, path, line_no):
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
        raise CorpusFormatError(path, line_no, f"{key} must be a non-negative integer, got {raw!r}")
    return raw


def _iter_records(path, required):
    """Yield (line_no, record) for each non-blank line, validating keys."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(path, line_no, f"invalid JSON: {exc.msg}")
            if not isinstance(rec, dict):
                raise CorpusFormatError(path, line_no, "record must be an object")
            for key in required:
                if key not in rec:
                    raise CorpusFormatError(path, line_no, f"missing required key {key!r}")
            yield line_no, rec


def load_corpus(article_path, comment_path, media_path) -> Corpus:
    """Stream-parse the three record files into a validated Corpus.

    Raises CorpusFormatError (with line number), DuplicateIdError, or
    DanglingReferenceError on the first violation encountered.
    """
    media = {}
    for line_no, rec in _iter_records(media_path, ("medium_id", "name")):
        mid = str(rec["medium_id"])
        if mid in media:
            raise DuplicateIdError(f"duplicate medium_id {mid!r} at {media_path}:{line_no}")
        media[mid] = Medium(medium_id=mid, name=str(rec["name"]))

    articles = {}
    for line_no, rec in _iter_records(article_path, ("article_id", "medium_id", "published_at")):
        aid = str(rec["article_id"])
        mid = str(rec["medium_id"])
        if aid in articles:
            raise DuplicateIdError(f"duplicate article_id {aid!r} at {article_path}:{line_no}")
        if mid not in media:
            raise DanglingReferenceError(
                f"article {aid!r} references unknown medium_id {mid!r} at {article_path}:{line_no}"
            )
        articles[aid] = Article(
            article_id=aid,
            medium_id=mid,
            published_at=_parse_timestamp(rec["published_at"], article_path, line_no),
        )

    required = ("comment_id", "article_id", "user_id", "created_at", "replies", "sympathies", "antipathies")
    comments = []
    seen = set()
    for line_no, rec in _iter_records(comment_path, required):
        cid = str(rec["comment_id"])
        aid = str(rec["article_id"])
        if cid in seen:
            raise DuplicateIdError(f"duplicate comment_id {cid!r} at {comment_path}:{line_no}")
        if aid not in articles:
            raise DanglingReferenceError(
                f"comment {cid!r} references unknown article_id {aid!r} at {comment_path}:{line_no}"
            )
        seen.add(cid)
        comments.append(
            Comment(
                comment_id=cid,
                article_id=aid,
                user_id=str(rec["user_id"]),
                created_at=_parse_timestamp(rec["created_at"], comment_path, line_no),
                replies=_parse_count(rec["replies"], "replies", comment_path, line_no),
                sympathies=_parse_count(rec["sympathies"], "sympathies", comment_path, line_no),
                antipathies=_parse_count(rec["antipathies"], "antipathies", comment_path, line_no),
            )
        )
    return Corpus(media, articles, comments)


def save_corpus(corpus: Corpus, article_path, comment_path, media_path):
    """Write a corpus back out in the ingestion record format."""
    with open(media_path, "w", encoding="utf-8") as fh:
        for mid in sorted(corpus.media):
            m = corpus.media[mid]
            fh.write(json.dumps({"medium_id": m.medium_id, "name": m.name}) + "\n")
    with open(article_path, "w", encoding="utf-8") as fh:
        for aid in sorted(corpus.articles):
            a = corpus.articles[aid]
            fh.write(
                json.dumps(
                    {
                        "article_id": a.article_id,
                        "medium_id": a.medium_id,
                        "published_at": a.published_at.isoformat(),
                    }
                )
                + "\n"
            )
    with open(comment_path, "w", encoding="utf-8") as fh:
        for c in corpus.comments:
            fh.write(
                json.dumps(
                    {
                        "comment_id": c.comment_id,
                        "article_id": c.article_id,
                        "user_id": c.user_id,
                        "created_at": c.created_at.isoformat(),
                        "replies": c.replies,
                        "sympathies": c.sympathies,
                        "antipathies": c.antipathies,
                    }
                )
                + "\n"
            )


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Whole-corpus counts and mean response levels per comment."""
    if not corpus.comments:
        raise EchoscopeError("corpus has no comments")
    n = len(corpus.comments)
    total_s = sum(c.sympathies for c in corpus.comments)
    total_a = sum(c.antipathies for c in corpus.comments)
    mean_s = total_s / n
    mean_a = total_a / n
    ratio = mean_s / mean_a if mean_a > 0 else math.nan
    return CorpusStats(
        n_articles=len(corpus.articles),
        n_comments=n,
        n_users=len(corpus.comments_by_user),
        mean_sympathies_per_comment=mean_s,
        mean_antipathies_per_comment=mean_a,
        sympathy_antipathy_ratio=ratio,
    )


def filter_clustering_users(corpus: Corpus, media, min_comments: int = 10, min_responses: int = 10):
    """Users with >= min_comments comments on the given media, counting only
    comments whose sympathies + antipathies >= min_responses."""
    media = set(media)
    if not media:
        raise EchoscopeError("media set must be non-empty")
    counts = defaultdict(int)
    for c in corpus.comments:
        if c.sympathies + c.antipathies < min_responses:
            continue
        if corpus.articles[c.article_id].medium_id in media:
            counts[c.user_id] += 1
    return {u for u, n in counts.items() if n >= min_comments}


def top_media(corpus: Corpus, k: int = 50):
    """The k media with most articles, ties broken by medium_id ascending."""
    if len(corpus.media) < k:
        raise EchoscopeError(f"corpus has {len(corpus.media)} media, fewer than k={k}")
    volumes = {mid: len(corpus.articles_by_medium.get(mid, [])) for mid in corpus.media}
    ranked = sorted(volumes, key=lambda mid: (-volumes[mid], mid))
    return ranked[:k]


def filter_active_users(corpus: Corpus, media, min_comments: int = 100):
    """Users with >= min_comments comments on articles of the given media.

    Comments on media outside the set do not count toward the threshold.
    """
    media = set(media)
    if not media:
        raise EchoscopeError("media set must be non-empty")
    counts = defaultdict(int)
    for c in corpus.comments:
        if corpus.articles[c.article_id].medium_id in media:
            counts[c.user_id] += 1
    return {u for u, n in counts.items() if n >= min_comments}
