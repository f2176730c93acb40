import math
import random

import pytest

from echoscope import synth
from echoscope.corpus import (
    corpus_stats,
    filter_active_users,
    filter_clustering_users,
    load_corpus,
    save_corpus,
    top_media,
)
from echoscope.errors import (
    CorpusFormatError,
    DanglingReferenceError,
    DuplicateIdError,
    EchoscopeError,
)

from conftest import corpus_files, make_corpus


class TestLoadCorpus:
    def test_well_formed_counts(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path,
            media=[("m1", "one")],
            articles=[("a1", "m1"), ("a2", "m1")],
            comments=[("c1", "a1", "u1", 0, 1, 0), ("c2", "a1", "u2", 0, 2, 0), ("c3", "a2", "u1", 1, 0, 3)],
        )
        corpus = load_corpus(ap, cp, mp)
        assert (len(corpus.media), len(corpus.articles), len(corpus.comments)) == (1, 2, 3)

    def test_dangling_article_reference(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path,
            media=[("m1", "one")],
            articles=[("a1", "m1")],
            comments=[("c1", "aX", "u1", 0, 1, 0)],
        )
        with pytest.raises(DanglingReferenceError, match="aX"):
            load_corpus(ap, cp, mp)

    def test_duplicate_comment_id(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path,
            media=[("m1", "one")],
            articles=[("a1", "m1")],
            comments=[("c1", "a1", "u1", 0, 1, 0), ("c1", "a1", "u2", 0, 1, 0)],
        )
        with pytest.raises(DuplicateIdError, match="c1"):
            load_corpus(ap, cp, mp)

    def test_malformed_record_reports_line(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path, media=[("m1", "one")], articles=[("a1", "m1")], comments=[]
        )
        cp.write_text('{"comment_id": "c1"}\n')
        with pytest.raises(CorpusFormatError, match=":1:"):
            load_corpus(ap, cp, mp)

    def test_negative_count_rejected(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path,
            media=[("m1", "one")],
            articles=[("a1", "m1")],
            comments=[("c1", "a1", "u1", 0, -1, 0)],
        )
        with pytest.raises(CorpusFormatError, match="sympathies"):
            load_corpus(ap, cp, mp)

    def test_unknown_keys_ignored(self, tmp_path):
        ap, cp, mp = corpus_files(
            tmp_path, media=[("m1", "one")], articles=[("a1", "m1")],
            comments=[("c1", "a1", "u1", 0, 1, 0)],
        )
        mp.write_text('{"medium_id": "m1", "name": "one", "extra": 7}\n')
        corpus = load_corpus(ap, cp, mp)
        assert corpus.media["m1"].name == "one"

    def test_line_order_independent(self, tmp_path):
        comments = [(f"c{i}", "a1", f"u{i % 3}", i, i, 1) for i in range(20)]
        ap, cp, mp = corpus_files(
            tmp_path, media=[("m1", "one")], articles=[("a1", "m1")], comments=comments
        )
        first = load_corpus(ap, cp, mp)
        lines = cp.read_text().splitlines()
        random.Random(7).shuffle(lines)
        cp.write_text("\n".join(lines) + "\n")
        second = load_corpus(ap, cp, mp)
        assert set(first.comments) == set(second.comments)
        assert first.media == second.media and first.articles == second.articles
        for index in ("comments_by_user", "comments_by_article"):
            a = {k: {first.comments[i] for i in v} for k, v in getattr(first, index).items()}
            b = {k: {second.comments[i] for i in v} for k, v in getattr(second, index).items()}
            assert a == b

    def test_roundtrip(self, tmp_path):
        corpus, _truth = synth.generate(synth.SynthConfig(n_users=30, comments_min=2, comments_max=10, seed=5))
        save_corpus(corpus, tmp_path / "a", tmp_path / "c", tmp_path / "m")
        again = load_corpus(tmp_path / "a", tmp_path / "c", tmp_path / "m")
        assert again.comments == corpus.comments
        assert again.articles == corpus.articles
        assert again.media == corpus.media


class TestCorpusStats:
    def test_means_and_ratio(self):
        corpus = make_corpus(
            media=[("m1", "one")],
            articles=[("a1", "m1")],
            comments=[("c1", "a1", "u1", 0, 4, 1), ("c2", "a1", "u2", 0, 8, 3)],
        )
        stats = corpus_stats(corpus)
        assert stats.mean_sympathies_per_comment == 6.0
        assert stats.mean_antipathies_per_comment == 2.0
        assert stats.sympathy_antipathy_ratio == 3.0

    def test_all_zero_counts(self):
        corpus = make_corpus(
            media=[("m1", "one")], articles=[("a1", "m1")],
            comments=[("c1", "a1", "u1", 0, 0, 0)],
        )
        stats = corpus_stats(corpus)
        assert stats.mean_sympathies_per_comment == 0.0
        assert math.isnan(stats.sympathy_antipathy_ratio)

    def test_empty_corpus_rejected(self):
        corpus = make_corpus(media=[("m1", "one")], articles=[], comments=[])
        with pytest.raises(EchoscopeError):
            corpus_stats(corpus)

    def test_matches_single_pass_oracle(self):
        corpus, _ = synth.generate(synth.SynthConfig(n_users=120, comments_min=3, comments_max=40, seed=2))
        stats = corpus_stats(corpus)
        # independent single pass over the raw comment records
        total_s = total_a = n = 0
        users = set()
        for c in corpus.comments:
            total_s += c.sympathies
            total_a += c.antipathies
            n += 1
            users.add(c.user_id)
        assert stats.n_comments == n
        assert stats.n_users == len(users)
        assert stats.mean_sympathies_per_comment == pytest.approx(total_s / n)
        assert stats.mean_antipathies_per_comment == pytest.approx(total_a / n)


class TestClusteringFilter:
    def test_boundary_included(self):
        comments = [(f"c{i}", "a1", "u1", 0, 5, 5) for i in range(10)]
        corpus = make_corpus([("m1", "one")], [("a1", "m1")], comments)
        assert filter_clustering_users(corpus, {"m1"}) == {"u1"}

    def test_nonqualifying_comments_ignored(self):
        comments = [(f"q{i}", "a1", "u1", 0, 5, 5) for i in range(9)]
        comments += [(f"n{i}", "a1", "u1", 0, 4, 5) for i in range(50)]
        corpus = make_corpus([("m1", "one")], [("a1", "m1")], comments)
        assert filter_clustering_users(corpus, {"m1"}) == set()

    def test_matches_exhaustive_scan(self):
        corpus, _ = synth.generate(synth.SynthConfig(n_users=200, seed=9))
        media = {m for m in corpus.media if m < "m025"}
        got = filter_clustering_users(corpus, media, min_comments=3, min_responses=8)
        expected = set()
        for uid, idxs in corpus.comments_by_user.items():
            n = 0
            for ci in idxs:
                c = corpus.comments[ci]
                if c.sympathies + c.antipathies >= 8 and corpus.articles[c.article_id].medium_id in media:
                    n += 1
            if n >= 3:
                expected.add(uid)
        assert got == expected

    def test_monotone_in_thresholds(self):
        corpus, _ = synth.generate(synth.SynthConfig(n_users=150, seed=4))
        media = set(corpus.media)
        strict = filter_clustering_users(corpus, media, min_comments=5, min_responses=12)
        loose = filter_clustering_users(corpus, media, min_comments=4, min_responses=10)
        assert strict <= loose


class TestTopMedia:
    def _corpus(self):
        return make_corpus(
            media=[("m1", "x"), ("m2", "y"), ("m3", "z")],
            articles=[(f"p{i}", "m1") for i in range(5)]
            + [(f"q{i}", "m2") for i in range(2)]
            + [(f"r{i}", "m3") for i in range(9)],
            comments=[],
        )

    def test_ordering(self):
        assert top_media(self._corpus(), 2) == ["m3", "m1"]

    def test_tie_rule(self):
        corpus = make_corpus(
            media=[("m2", "y"), ("m1", "x")],
            articles=[("a1", "m1"), ("a2", "m2")],
            comments=[],
        )
        assert top_media(corpus, 2) == ["m1", "m2"]

    def test_k_equals_media_count(self):
        assert top_media(self._corpus(), 3) == ["m3", "m1", "m2"]

    def test_too_few_media(self):
        with pytest.raises(EchoscopeError):
            top_media(self._corpus(), 4)


class TestActiveFilter:
    def test_boundary(self):
        comments = [(f"c{i}", "a1", "u1", 0, 0, 0) for i in range(100)]
        corpus = make_corpus([("m1", "one")], [("a1", "m1")], comments)
        assert filter_active_users(corpus, {"m1"}) == {"u1"}

    def test_out_of_group_comments_do_not_count(self):
        comments = [(f"c{i}", "a1", "u1", 0, 0, 0) for i in range(99)]
        comments += [(f"d{i}", "a2", "u1", 0, 0, 0) for i in range(51)]
        corpus = make_corpus([("m1", "one"), ("m2", "two")], [("a1", "m1"), ("a2", "m2")], comments)
        assert filter_active_users(corpus, {"m1"}) == set()

    def test_matches_exhaustive_scan(self):
        corpus, _ = synth.generate(synth.SynthConfig(n_users=150, seed=11))
        media = {m for m in corpus.media if m >= "m010"}
        got = filter_active_users(corpus, media, min_comments=5)
        expected = set()
        for uid, idxs in corpus.comments_by_user.items():
            n = sum(1 for ci in idxs if corpus.articles[corpus.comments[ci].article_id].medium_id in media)
            if n >= 5:
                expected.add(uid)
        assert got == expected

    def test_monotone(self):
        corpus, _ = synth.generate(synth.SynthConfig(n_users=150, seed=12))
        media = set(corpus.media)
        assert filter_active_users(corpus, media, 30) <= filter_active_users(corpus, media, 20)
