"""Seeded synthetic-corpus generator with planted ground truth.

Planted structure: two polar media groups (+1 / -1) plus neutral media,
bimodal user leanings, homophilous medium choice proportional to
exp(kappa * x_user * c_medium), and group-specific response-strategy
profiles driving Poisson reply/sympathy/antipathy counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone

import numpy as np
from scipy import stats as sstats

from echoscope.corpus import Article, Comment, Corpus, Medium
from echoscope.errors import ConfigError, EchoscopeError

_EPOCH = datetime(2022, 1, 1, tzinfo=timezone.utc)

LINEAR = "LINEAR"
INVERTED_U = "INVERTED_U"


@dataclass(frozen=True)
class StrategyProfile:
    """Response shapes as piecewise-linear breakpoints over t = g * x.

    t is the commenter leaning projected onto the medium group's side, so a
    single breakpoint table serves both group signs. All outputs lie in
    [0, 1]; they scale the Poisson rates lambda_r / lambda_s / lambda_a.
    """

    name: str
    reply_t: tuple
    reply_y: tuple
    sympathy_t: tuple
    sympathy_y: tuple
    antipathy_t: tuple
    antipathy_y: tuple

    def shape(self, kind, x, group_sign):
        t = np.asarray(x, dtype=float) * group_sign
        ts, ys = {
            "replies": (self.reply_t, self.reply_y),
            "sympathies": (self.sympathy_t, self.sympathy_y),
            "antipathies": (self.antipathy_t, self.antipathy_y),
        }[kind]
        return np.interp(t, ts, ys)


def _bump(t, center, width):
    return np.exp(-0.5 * ((t - center) / width) ** 2)


def linear_profile() -> StrategyProfile:
    """In-group sympathy rises with g*x; replies/antipathies fall."""
    t = (-1.0, 1.0)
    return StrategyProfile(
        name=LINEAR,
        reply_t=t, reply_y=(1.0, 0.0),
        sympathy_t=t, sympathy_y=(0.0, 1.0),
        antipathy_t=t, antipathy_y=(1.0, 0.0),
    )


def inverted_u_profile() -> StrategyProfile:
    """Replies/antipathies peak at intermediate own-side leaning (t = 0.3);
    sympathy rises with t but dips mildly near t = 0.5."""
    grid = np.linspace(-1.0, 1.0, 41)
    hump = _bump(grid, 0.3, 0.35)
    symp = np.clip((1.0 + grid) / 2.0 - 0.15 * _bump(grid, 0.5, 0.2), 0.0, 1.0)
    return StrategyProfile(
        name=INVERTED_U,
        reply_t=tuple(grid), reply_y=tuple(hump),
        sympathy_t=tuple(grid), sympathy_y=tuple(symp),
        antipathy_t=tuple(grid), antipathy_y=tuple(hump),
    )


_PROFILES = {LINEAR: linear_profile, INVERTED_U: inverted_u_profile}


def profile_by_name(name: str) -> StrategyProfile:
    try:
        return _PROFILES[name]()
    except KeyError:
        raise ConfigError(f"unknown strategy profile {name!r}")


@dataclass(frozen=True)
class SynthConfig:
    n_media_group_a: int = 6
    n_media_group_b: int = 9
    n_media_neutral: int = 35
    n_users: int = 5000
    # two-component leaning mixture over [-1, 1]
    mixture_centers: tuple = (0.85, -0.85)
    mixture_widths: tuple = (0.12, 0.12)
    mixture_weight: float = 0.65  # share of users in the first component
    articles_per_medium: int = 40
    # heavy-tailed comments-per-user distribution (discrete power law)
    comments_exponent: float = 2.0
    comments_min: int = 5
    comments_max: int = 300
    kappa: float = 1.5
    lambda_r: float = 4.0
    lambda_s: float = 12.0
    lambda_a: float = 12.0
    # symmetric default keeps neutral media affect-neutral (the two-profile
    # average is constant); asymmetric runs set profile_b explicitly
    profile_a: str = LINEAR
    profile_b: str = LINEAR
    seed: int = 0

    def validate(self):
        counts = (
            self.n_media_group_a, self.n_media_group_b, self.n_users,
            self.articles_per_medium, self.comments_min, self.comments_max,
        )
        if any(c <= 0 for c in counts) or self.n_media_neutral < 0:
            raise ConfigError("counts must be positive (neutral media may be zero)")
        if self.comments_max < self.comments_min:
            raise ConfigError("comments_max < comments_min")
        if self.kappa < 0:
            raise ConfigError("kappa must be >= 0")
        if not 0.0 <= self.mixture_weight <= 1.0:
            raise ConfigError("mixture_weight must lie in [0, 1]")
        if min(self.lambda_r, self.lambda_s, self.lambda_a) < 0:
            raise ConfigError("response rates must be non-negative")
        for c in self.mixture_centers:
            if not -1.0 <= c <= 1.0:
                raise ConfigError("mixture centers must lie in [-1, 1]")


@dataclass(frozen=True)
class GroundTruth:
    media_group: dict   # medium_id -> {+1, -1, 0}
    user_latent_leaning: dict  # user_id -> real in [-1, 1]


@dataclass(frozen=True)
class RecoveryReport:
    group_exact_match: bool
    group_ari: float
    leaning_sign_accuracy: float
    leaning_pearson: float


def load_config(path) -> SynthConfig:
    """Read a SynthConfig from a flat key-value JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    cfg = SynthConfig()
    known = set(cfg.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("mixture_centers", "mixture_widths"):
        if key in raw:
            raw[key] = tuple(raw[key])
    cfg = replace(cfg, **raw)
    cfg.validate()
    return cfg


def _powerlaw_counts(rng, n, exponent, lo, hi):
    """Discrete power-law draws via inverse CDF on a fixed support."""
    support = np.arange(lo, hi + 1, dtype=float)
    pmf = support ** (-exponent)
    pmf /= pmf.sum()
    cdf = np.cumsum(pmf)
    u = rng.random(n)
    return lo + np.searchsorted(cdf, u, side="right").astype(np.int64)


def generate(config: SynthConfig):
    """Generate (Corpus, GroundTruth), deterministic for a fixed seed.

    Draw order is fixed (leanings, comment counts, then per-user medium
    choices in user order, then response counts in comment order) so output
    is independent of any internal batching.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)

    n_a, n_b, n_0 = config.n_media_group_a, config.n_media_group_b, config.n_media_neutral
    n_media = n_a + n_b + n_0
    media_ids = [f"m{idx:03d}" for idx in range(n_media)]
    group_signs = np.array([1] * n_a + [-1] * n_b + [0] * n_0, dtype=np.int64)

    user_ids = [f"u{idx:05d}" for idx in range(config.n_users)]

    # (1) latent leanings from the two-component mixture, clipped to [-1, 1]
    comp = rng.random(config.n_users) < config.mixture_weight
    centers = np.where(comp, config.mixture_centers[0], config.mixture_centers[1])
    widths = np.where(comp, config.mixture_widths[0], config.mixture_widths[1])
    x_user = np.clip(rng.normal(centers, np.maximum(widths, 1e-12)), -1.0, 1.0)

    # (2) heavy-tailed comment counts
    n_comments = _powerlaw_counts(
        rng, config.n_users, config.comments_exponent, config.comments_min, config.comments_max
    )

    # (3) homophilous medium choice, then uniform article within the medium
    log_w = config.kappa * np.outer(x_user, group_signs)
    log_w -= log_w.max(axis=1, keepdims=True)
    weights = np.exp(log_w)
    weights /= weights.sum(axis=1, keepdims=True)
    cdfs = np.cumsum(weights, axis=1)

    medium_idx_parts = []
    article_idx_parts = []
    for ui in range(config.n_users):
        k = n_comments[ui]
        m = np.searchsorted(cdfs[ui], rng.random(k), side="right")
        medium_idx_parts.append(np.minimum(m, n_media - 1))
        article_idx_parts.append(rng.integers(0, config.articles_per_medium, size=k))
    medium_idx = np.concatenate(medium_idx_parts)
    article_off = np.concatenate(article_idx_parts)
    user_idx = np.repeat(np.arange(config.n_users), n_comments)

    # (4) Poisson response counts from the medium group's strategy profile
    prof_a = profile_by_name(config.profile_a)
    prof_b = profile_by_name(config.profile_b)
    xs = x_user[user_idx]
    g = group_signs[medium_idx]
    counts = {}
    for kind, lam in (
        ("replies", config.lambda_r),
        ("sympathies", config.lambda_s),
        ("antipathies", config.lambda_a),
    ):
        shape = np.where(
            g > 0,
            prof_a.shape(kind, xs, 1),
            np.where(
                g < 0,
                prof_b.shape(kind, xs, -1),
                0.5 * (prof_a.shape(kind, xs, 1) + prof_b.shape(kind, xs, -1)),
            ),
        )
        counts[kind] = rng.poisson(lam * shape)

    media = {mid: Medium(mid, f"medium {mid}") for mid in media_ids}
    articles = {}
    for mi, mid in enumerate(media_ids):
        for aj in range(config.articles_per_medium):
            aid = f"a{mi:03d}_{aj:05d}"
            articles[aid] = Article(aid, mid, _EPOCH + timedelta(hours=aj))

    total = int(n_comments.sum())
    comments = []
    for ci in range(total):
        mi = medium_idx[ci]
        comments.append(
            Comment(
                comment_id=f"c{ci:08d}",
                article_id=f"a{mi:03d}_{article_off[ci]:05d}",
                user_id=user_ids[user_idx[ci]],
                created_at=_EPOCH + timedelta(minutes=ci),
                replies=int(counts["replies"][ci]),
                sympathies=int(counts["sympathies"][ci]),
                antipathies=int(counts["antipathies"][ci]),
            )
        )

    truth = GroundTruth(
        media_group={mid: int(group_signs[mi]) for mi, mid in enumerate(media_ids)},
        user_latent_leaning={uid: float(x_user[ui]) for ui, uid in enumerate(user_ids)},
    )
    return Corpus(media, articles, comments), truth


def save_ground_truth(truth: GroundTruth, path):
    """Emit ground truth in the same newline-delimited record format."""
    with open(path, "w", encoding="utf-8") as fh:
        for mid in sorted(truth.media_group):
            fh.write(json.dumps({"kind": "medium", "id": mid, "group": truth.media_group[mid]}) + "\n")
        for uid in sorted(truth.user_latent_leaning):
            fh.write(
                json.dumps({"kind": "user", "id": uid, "leaning": truth.user_latent_leaning[uid]}) + "\n"
            )


def load_ground_truth(path) -> GroundTruth:
    media_group = {}
    user_leaning = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec["kind"] == "medium":
                media_group[str(rec["id"])] = int(rec["group"])
            else:
                user_leaning[str(rec["id"])] = float(rec["leaning"])
    return GroundTruth(media_group, user_leaning)


def _ari(labels_a, labels_b):
    """Adjusted Rand index from the contingency table."""
    from sklearn.metrics import adjusted_rand_score

    return float(adjusted_rand_score(labels_a, labels_b))


def evaluate_recovery(truth: GroundTruth, grouping, leanings) -> RecoveryReport:
    """Score a recovered grouping and leaning map against planted truth.

    Orientation-invariant: a grouping/leaning solution with globally flipped
    signs scores identically.
    """
    assigned = grouping.group_a | grouping.group_b
    shared_media = [m for m in sorted(truth.media_group) if truth.media_group[m] != 0 and m in assigned]
    shared_users = [u for u in sorted(truth.user_latent_leaning) if u in leanings]
    if not shared_media or not shared_users:
        raise EchoscopeError("truth and recovered results share no media or no users")

    truth_polar = {m for m, gsign in truth.media_group.items() if gsign != 0}
    exact = truth_polar == assigned and (
        all(truth.media_group[m] == grouping.leaning[m] for m in assigned)
        or all(truth.media_group[m] == -grouping.leaning[m] for m in assigned)
    )

    true_labels = [truth.media_group[m] for m in shared_media]
    pred_labels = [grouping.leaning[m] for m in shared_media]
    ari = 1.0 if exact else _ari(true_labels, pred_labels)

    true_x = np.array([truth.user_latent_leaning[u] for u in shared_users])
    pred_x = np.array([leanings[u] for u in shared_users])
    sign_acc = float(np.mean(np.sign(true_x) == np.sign(pred_x)))
    sign_acc = max(sign_acc, float(np.mean(np.sign(true_x) == -np.sign(pred_x))))
    if np.std(true_x) > 0 and np.std(pred_x) > 0:
        pearson = abs(float(sstats.pearsonr(true_x, pred_x)[0]))
    else:
        pearson = 0.0
    return RecoveryReport(
        group_exact_match=bool(exact),
        group_ari=float(ari),
        leaning_sign_accuracy=sign_acc,
        leaning_pearson=pearson,
    )
