import json
from datetime import datetime, timedelta, timezone

import pytest

from echoscope.corpus import Article, Comment, Corpus, Medium

T0 = datetime(2022, 1, 1, tzinfo=timezone.utc)


def make_corpus(media, articles, comments):
    """Build a Corpus from terse tuples.

    media: [(medium_id, name)]
    articles: [(article_id, medium_id)]
    comments: [(comment_id, article_id, user_id, replies, sympathies, antipathies)]
    """
    med = {m: Medium(m, name) for m, name in media}
    art = {a: Article(a, m, T0) for a, m in articles}
    com = [
        Comment(cid, aid, uid, T0 + timedelta(minutes=i), r, s, a)
        for i, (cid, aid, uid, r, s, a) in enumerate(comments)
    ]
    return Corpus(med, art, com)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def corpus_files(tmp_path, media, articles, comments):
    """Write record files in the ingestion format; returns the three paths."""
    mp = tmp_path / "media.jsonl"
    ap = tmp_path / "articles.jsonl"
    cp = tmp_path / "comments.jsonl"
    write_jsonl(mp, [{"medium_id": m, "name": n} for m, n in media])
    write_jsonl(
        ap,
        [
            {"article_id": a, "medium_id": m, "published_at": "2022-01-01T00:00:00+00:00"}
            for a, m in articles
        ],
    )
    write_jsonl(
        cp,
        [
            {
                "comment_id": c,
                "article_id": a,
                "user_id": u,
                "created_at": f"2022-01-01T00:{i % 60:02d}:00+00:00",
                "replies": r,
                "sympathies": s,
                "antipathies": an,
            }
            for i, (c, a, u, r, s, an) in enumerate(comments)
        ],
    )
    return ap, cp, mp


@pytest.fixture
def small_corpus():
    return make_corpus(
        media=[("m1", "one"), ("m2", "two")],
        articles=[("a1", "m1"), ("a2", "m1"), ("a3", "m2")],
        comments=[
            ("c1", "a1", "u1", 0, 4, 1),
            ("c2", "a2", "u1", 2, 8, 3),
            ("c3", "a3", "u2", 1, 0, 0),
        ],
    )
