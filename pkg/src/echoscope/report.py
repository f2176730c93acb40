"""Pipeline orchestration, artifact tables, manifest, and summary figures.

Every stage writes comma-separated tables (header row + sidecar schema
file) into the output directory; the manifest records a content hash per
artifact plus per-stage timings. Figures are rendered from the emitted
tables only, so re-rendering from a table directory reproduces them.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from echoscope import affect, classify, conet, corpus as corpus_mod, leaning as leaning_mod
from echoscope import mediaclust, synth
from echoscope.errors import ConfigError, StageError, UnpolarizedCorpusError

STAGES = ("ingest", "cluster-media", "leanings", "conet", "affect", "classify", "render")


@dataclass
class PipelineConfig:
    # exactly one of (input paths, synth) must be set
    article_path: str | None = None
    comment_path: str | None = None
    media_path: str | None = None
    synth: synth.SynthConfig | None = None
    output_dir: str = "out"
    seed: int = 0
    workers: int = 1
    top_k_media: int = 50
    clustering_min_comments: int = 10
    clustering_min_responses: int = 10
    correlation_min_overlap: int = 20
    polar_min_size: int = 3
    anchor_medium: str | None = None
    active_min_comments: int = 100
    n_bins: int = 40
    joint_bins: int = 61
    edge_fraction: float = 0.02
    reply_max_bucket: int = 20
    classify_min_comments: int = 200
    export_features: bool = True
    hyper: classify.Hyper = field(default_factory=classify.Hyper)

    def validate(self):
        have_paths = any(p is not None for p in (self.article_path, self.comment_path, self.media_path))
        if have_paths and self.synth is not None:
            raise ConfigError("config must set either input paths or a synth block, not both")
        if not have_paths and self.synth is None:
            raise ConfigError("config must set input paths or a synth block")
        if have_paths and None in (self.article_path, self.comment_path, self.media_path):
            raise ConfigError("all three input paths are required together")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_dict(self):
        d = dataclasses.asdict(self)
        return d

    @classmethod
    def from_dict(cls, raw):
        raw = dict(raw)
        if raw.get("synth") is not None:
            sy = dict(raw["synth"])
            for key in ("mixture_centers", "mixture_widths"):
                if key in sy:
                    sy[key] = tuple(sy[key])
            raw["synth"] = synth.SynthConfig(**sy)
        if raw.get("hyper") is not None:
            raw["hyper"] = classify.Hyper(**raw["hyper"])
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def write_table(path, columns, rows, types=None):
    """CSV with header plus a sidecar .schema.json describing the columns."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)
    schema = {
        "columns": [
            {"name": c, "type": (types or {}).get(c, "string")} for c in columns
        ]
    }
    with open(path.with_suffix(path.suffix + ".schema.json"), "w", encoding="utf-8") as fh:
        json.dump(schema, fh, indent=2)
        fh.write("\n")


def read_table(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        return columns, list(reader)


def _fmt(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return x


def _curve_rows(curve: leaning_mod.BinnedCurve):
    rows = []
    for i in range(len(curve.values)):
        rows.append(
            (
                _fmt(float(curve.bin_edges[i])),
                _fmt(float(curve.bin_edges[i + 1])),
                _fmt(float(curve.values[i])),
                int(curve.counts[i]),
            )
        )
    return rows


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class ReportBundle:
    output_dir: Path
    manifest: dict

    def artifact_hashes(self):
        return dict(self.manifest["artifacts"])


class PipelineRun:
    """Mutable state threaded through the stages of one pipeline run."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.outdir = Path(config.output_dir)
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.artifacts = []
        self.timings = {}
        self.halted_at = None
        self.corpus = None
        self.truth = None
        self.grouping = None
        self.leanings = None   # list of UserLeaning
        self.leaning_map = None
        self.graphs = {}
        self.xnn = {}

    def track(self, *names):
        self.artifacts.extend(str(n) for n in names)

    # ---------------- stages ----------------

    def stage_ingest(self):
        cfg = self.config
        if cfg.synth is not None:
            self.corpus, self.truth = synth.generate(cfg.synth)
            corpus_mod.save_corpus(
                self.corpus,
                self.outdir / "articles.jsonl",
                self.outdir / "comments.jsonl",
                self.outdir / "media.jsonl",
            )
            synth.save_ground_truth(self.truth, self.outdir / "ground_truth.jsonl")
            self.track("articles.jsonl", "comments.jsonl", "media.jsonl", "ground_truth.jsonl")
        else:
            self.corpus = corpus_mod.load_corpus(cfg.article_path, cfg.comment_path, cfg.media_path)
        stats = corpus_mod.corpus_stats(self.corpus)
        write_table(
            self.outdir / "corpus_stats.csv",
            ["n_articles", "n_comments", "n_users", "mean_sympathies", "mean_antipathies", "ratio"],
            [
                (
                    stats.n_articles,
                    stats.n_comments,
                    stats.n_users,
                    _fmt(stats.mean_sympathies_per_comment),
                    _fmt(stats.mean_antipathies_per_comment),
                    _fmt(stats.sympathy_antipathy_ratio),
                )
            ],
            types={"n_articles": "int", "n_comments": "int", "n_users": "int"},
        )
        self.track("corpus_stats.csv")

    def stage_cluster_media(self):
        cfg = self.config
        k = min(cfg.top_k_media, len(self.corpus.media))
        media = corpus_mod.top_media(self.corpus, k)
        users = corpus_mod.filter_clustering_users(
            self.corpus, media, cfg.clustering_min_comments, cfg.clustering_min_responses
        )
        matrix = mediaclust.build_sympathy_matrix(
            self.corpus, users, media, cfg.clustering_min_responses
        )
        corr = mediaclust.media_correlation(matrix, cfg.correlation_min_overlap)
        dendro = mediaclust.hierarchical_cluster(corr)

        rows = []
        for i, ma in enumerate(corr.media):
            for j, mb in enumerate(corr.media):
                if i < j:
                    rows.append((ma, mb, _fmt(float(corr.matrix[i, j])), int(corr.support[i, j])))
        write_table(
            self.outdir / "media_correlation.csv",
            ["medium_a", "medium_b", "r", "support"],
            rows,
            types={"r": "float", "support": "int"},
        )
        write_table(
            self.outdir / "dendrogram.csv",
            ["cluster_a", "cluster_b", "distance"],
            [("|".join(a), "|".join(b), _fmt(d)) for a, b, d in dendro.merges],
            types={"distance": "float"},
        )
        self.track("media_correlation.csv", "dendrogram.csv")

        self.grouping = mediaclust.extract_polar_groups(
            dendro, corr, cfg.polar_min_size, cfg.anchor_medium
        )
        rows = []
        for m in sorted(self.corpus.media):
            if m in self.grouping.group_a:
                rows.append((m, "A", 1))
            elif m in self.grouping.group_b:
                rows.append((m, "B", -1))
            elif m in self.grouping.unassigned:
                rows.append((m, "unassigned", 0))
        write_table(
            self.outdir / "media_grouping.csv",
            ["medium_id", "group", "leaning"],
            rows,
            types={"leaning": "int"},
        )
        self.track("media_grouping.csv")

    def stage_leanings(self):
        cfg = self.config
        group_media = self.grouping.group_a | self.grouping.group_b
        active = corpus_mod.filter_active_users(self.corpus, group_media, cfg.active_min_comments)
        self.leanings = leaning_mod.compute_leanings(self.corpus, active, self.grouping.leaning)
        self.leaning_map = {l.user_id: l.x for l in self.leanings}
        write_table(
            self.outdir / "leanings.csv",
            ["user_id", "x", "n"],
            [(l.user_id, _fmt(l.x), l.n) for l in self.leanings],
            types={"x": "float", "n": "int"},
        )
        dist = leaning_mod.leaning_distribution(self.leanings, cfg.n_bins)
        act = leaning_mod.activity_by_leaning(self.leanings, cfg.n_bins)
        write_table(
            self.outdir / "leaning_distribution.csv",
            ["bin_low", "bin_high", "value", "count"],
            _curve_rows(dist),
        )
        write_table(
            self.outdir / "activity_by_leaning.csv",
            ["bin_low", "bin_high", "value", "count"],
            _curve_rows(act),
        )
        summary = leaning_mod.population_summary(self.leanings)
        write_table(
            self.outdir / "population_summary.csv",
            list(summary),
            [tuple(_fmt(v) for v in summary.values())],
        )
        self.track(
            "leanings.csv", "leaning_distribution.csv", "activity_by_leaning.csv",
            "population_summary.csv",
        )
        if self.truth is not None:
            rep = synth.evaluate_recovery(self.truth, self.grouping, self.leaning_map)
            write_table(
                self.outdir / "recovery_report.csv",
                ["group_exact_match", "group_ari", "leaning_sign_accuracy", "leaning_pearson"],
                [(int(rep.group_exact_match), _fmt(rep.group_ari),
                  _fmt(rep.leaning_sign_accuracy), _fmt(rep.leaning_pearson))],
            )
            self.track("recovery_report.csv")

    def stage_conet(self):
        cfg = self.config
        users = set(self.leaning_map)
        graph_w = conet.build_cocomment_graph(self.corpus, users, conet.WEIGHTED)
        graph_u = conet.CoCommentGraph(
            nodes=graph_w.nodes, edge_u=graph_w.edge_u, edge_v=graph_w.edge_v,
            weights=np.ones_like(graph_w.weights), mode=conet.UNWEIGHTED,
        )
        self.graphs = {conet.WEIGHTED: graph_w, conet.UNWEIGHTED: graph_u}
        rows = []
        for mode, graph in self.graphs.items():
            xnn = conet.neighbor_mean_leaning(graph, self.leaning_map)
            self.xnn[mode] = xnn
            res = conet.leaning_assortativity(self.leaning_map, xnn, mode)
            rows.append((mode, _fmt(res.pearson), res.n_nodes_used))
            edges, grid = conet.joint_density(self.leaning_map, xnn, cfg.joint_bins)
            jrows = []
            for i in range(cfg.joint_bins):
                for j in range(cfg.joint_bins):
                    if grid[i, j] > 0:
                        jrows.append((i, j, _fmt(float(grid[i, j]))))
            write_table(
                self.outdir / f"joint_density_{mode}.csv",
                ["x_bin", "xnn_bin", "mass"],
                jrows,
                types={"x_bin": "int", "xnn_bin": "int", "mass": "float"},
            )
            self.track(f"joint_density_{mode}.csv")

        write_table(
            self.outdir / "assortativity.csv",
            ["mode", "pearson", "n_nodes"],
            rows,
            types={"pearson": "float", "n_nodes": "int"},
        )
        top = conet.export_top_edges(graph_w, cfg.edge_fraction)
        write_table(
            self.outdir / "top_edges.csv",
            ["user_a", "user_b", "weight"],
            top,
            types={"weight": "int"},
        )
        degree = np.zeros(len(graph_w.nodes), dtype=np.int64)
        strength = np.zeros(len(graph_w.nodes), dtype=np.int64)
        np.add.at(degree, graph_w.edge_u, 1)
        np.add.at(degree, graph_w.edge_v, 1)
        np.add.at(strength, graph_w.edge_u, graph_w.weights)
        np.add.at(strength, graph_w.edge_v, graph_w.weights)
        xnn_w = self.xnn[conet.WEIGHTED]
        node_rows = [
            (
                uid,
                _fmt(self.leaning_map[uid]),
                _fmt(xnn_w[uid]) if uid in xnn_w else "nan",
                int(degree[i]),
                int(strength[i]),
            )
            for i, uid in enumerate(graph_w.nodes)
        ]
        write_table(
            self.outdir / "conet_nodes.csv",
            ["user_id", "x", "xnn", "degree", "strength"],
            node_rows,
        )
        self.track("assortativity.csv", "top_edges.csv", "conet_nodes.csv")

    def stage_affect(self):
        cfg = self.config
        rows = []
        for sign in (1, -1):
            for kind in affect.RESPONSE_KINDS:
                rc = affect.response_curve(
                    self.corpus, self.leaning_map, self.grouping, sign, kind, cfg.n_bins
                )
                for low, high, val, cnt in _curve_rows(rc.curve):
                    rows.append((sign, kind, low, high, val, cnt))
        write_table(
            self.outdir / "response_curves.csv",
            ["group", "kind", "bin_low", "bin_high", "value", "count"],
            rows,
        )
        rel_rows = []
        for sign in (1, -1):
            rel = affect.reply_affect_relation(self.corpus, self.grouping, sign, cfg.reply_max_bucket)
            for b in rel.reply_buckets:
                rel_rows.append(
                    (sign, b, _fmt(float(rel.mean_sympathies[b])),
                     _fmt(float(rel.mean_antipathies[b])), int(rel.counts[b]))
                )
        write_table(
            self.outdir / "reply_affect.csv",
            ["group", "reply_bucket", "mean_sympathies", "mean_antipathies", "count"],
            rel_rows,
        )
        self.track("response_curves.csv", "reply_affect.csv")

    def stage_classify(self):
        cfg = self.config
        hyper = cfg.hyper
        articles = classify.select_articles(self.corpus, self.grouping, cfg.classify_min_comments)
        if len(articles) < 10:
            write_table(
                self.outdir / "classifier_comparison.csv",
                ["model", "mean_accuracy"],
                [],
            )
            self.track("classifier_comparison.csv")
            return
        per_fold, means, plan = classify.run_classification(
            self.corpus, self.grouping, cfg.seed, cfg.classify_min_comments, hyper
        )
        fold_rows = []
        for fi, fold in enumerate(plan.folds):
            for part in ("train", "validation", "test"):
                for aid in fold[part]:
                    fold_rows.append((fi, part, aid))
        write_table(self.outdir / "fold_plan.csv", ["fold", "part", "article_id"], fold_rows)

        rows = []
        for name in ("mlp", "logistic", "knn", "majority"):
            accs = [f[name]["accuracy"] for f in per_fold]
            rows.append((name, *[_fmt(a) for a in accs], _fmt(means[name])))
        write_table(
            self.outdir / "classifier_comparison.csv",
            ["model", "fold0", "fold1", "fold2", "fold3", "fold4", "mean_accuracy"],
            rows,
        )
        conf_rows = []
        for f in per_fold:
            for name in ("mlp", "logistic", "knn", "majority"):
                r = f[name]
                conf_rows.append(
                    (f["fold"], name, _fmt(r["accuracy"]), r["tp"], r["tn"], r["fp"], r["fn"])
                )
        write_table(
            self.outdir / "classifier_folds.csv",
            ["fold", "model", "accuracy", "tp", "tn", "fp", "fn"],
            conf_rows,
        )
        self.track("fold_plan.csv", "classifier_comparison.csv", "classifier_folds.csv")
        if cfg.export_features:
            X, y = classify.build_dataset(self.corpus, self.grouping, articles)
            feat_rows = [
                (aid, int(y[i]), *[_fmt(float(v)) for v in X[i]])
                for i, aid in enumerate(articles)
            ]
            write_table(
                self.outdir / "features.csv",
                ["article_id", "label", *[f"v{j:03d}" for j in range(X.shape[1])]],
                feat_rows,
            )
            self.track("features.csv")

    def stage_render(self):
        figures = render_figures(self.outdir)
        self.track(*[f.name for f in figures])

    # ---------------- driver ----------------

    def run(self) -> ReportBundle:
        stage_fns = [
            ("ingest", self.stage_ingest),
            ("cluster-media", self.stage_cluster_media),
            ("leanings", self.stage_leanings),
            ("conet", self.stage_conet),
            ("affect", self.stage_affect),
            ("classify", self.stage_classify),
            ("render", self.stage_render),
        ]
        for name, fn in stage_fns:
            start = time.perf_counter()
            try:
                fn()
            except UnpolarizedCorpusError as exc:
                # downstream stages need the grouping; stop here, keep artifacts
                self.halted_at = name
                self.timings[name] = time.perf_counter() - start
                self.halt_reason = str(exc)
                break
            except Exception as exc:
                raise StageError(name, exc) from exc
            self.timings[name] = time.perf_counter() - start
        return self.finish()

    # ---------------- state restoration for standalone stage commands ----------------

    def restore_corpus(self):
        if self.corpus is not None:
            return
        cfg = self.config
        if cfg.synth is not None:
            self.corpus = corpus_mod.load_corpus(
                self.outdir / "articles.jsonl",
                self.outdir / "comments.jsonl",
                self.outdir / "media.jsonl",
            )
            gt = self.outdir / "ground_truth.jsonl"
            if gt.exists():
                self.truth = synth.load_ground_truth(gt)
        else:
            self.corpus = corpus_mod.load_corpus(cfg.article_path, cfg.comment_path, cfg.media_path)

    def restore_grouping(self):
        if self.grouping is not None:
            return
        _cols, rows = read_table(self.outdir / "media_grouping.csv")
        group_a = frozenset(r[0] for r in rows if r[1] == "A")
        group_b = frozenset(r[0] for r in rows if r[1] == "B")
        unassigned = frozenset(r[0] for r in rows if r[1] == "unassigned")
        leaning = {m: 1 for m in group_a}
        leaning.update({m: -1 for m in group_b})
        self.grouping = mediaclust.MediaGrouping(group_a, group_b, unassigned, leaning)

    def restore_leanings(self):
        if self.leaning_map is not None:
            return
        _cols, rows = read_table(self.outdir / "leanings.csv")
        self.leanings = [
            leaning_mod.UserLeaning(user_id=r[0], x=float(r[1]), n=int(r[2])) for r in rows
        ]
        self.leaning_map = {l.user_id: l.x for l in self.leanings}

    def finish(self) -> ReportBundle:
        artifacts = {}
        prior = self.outdir / "manifest.json"
        if prior.exists():
            with open(prior, "r", encoding="utf-8") as fh:
                old = json.load(fh)
            artifacts.update(old.get("artifacts", {}))
            self.timings = {**old.get("timings", {}), **self.timings}
        artifacts.update(
            {name: sha256_file(self.outdir / name) for name in sorted(set(self.artifacts))}
        )
        manifest = {
            "config": self.config.to_dict(),
            "halted_at": self.halted_at,
            "halt_reason": getattr(self, "halt_reason", None),
            "artifacts": artifacts,
            "timings": self.timings,
        }
        with open(self.outdir / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, default=str)
            fh.write("\n")
        return ReportBundle(output_dir=self.outdir, manifest=manifest)


def run_pipeline(config: PipelineConfig) -> ReportBundle:
    """Execute every stage in order; stage failures abort with a stage tag
    while artifacts from completed stages are preserved on disk."""
    return PipelineRun(config).run()


# ---------------- figures ----------------


def _setup_matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "echoscope"
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)


def render_figures(outdir):
    """Render deterministic SVG figures from the emitted tables.

    Missing optional tables skip their figure. Returns the figure paths.
    """
    outdir = Path(outdir)
    plt = _setup_matplotlib()
    produced = []

    def have(name):
        return (outdir / name).exists()

    if have("media_correlation.csv") and have("media_grouping.csv"):
        cols, rows = read_table(outdir / "media_correlation.csv")
        media = sorted({r[0] for r in rows} | {r[1] for r in rows})
        if have("dendrogram.csv"):
            _c, drows = read_table(outdir / "dendrogram.csv")
            if drows:
                order = drows[-1][0].split("|") + drows[-1][1].split("|")
                media = [m for m in order if m in set(media)]
        idx = {m: i for i, m in enumerate(media)}
        n = len(media)
        mat = np.eye(n)
        for ma, mb, r, _s in rows:
            mat[idx[ma], idx[mb]] = mat[idx[mb], idx[ma]] = float(r)
        fig, ax = plt.subplots(figsize=(7, 6))
        im = ax.imshow(mat, cmap="RdBu_r", vmin=-1, vmax=1)
        ax.set_xticks(range(n), media, rotation=90, fontsize=5)
        ax.set_yticks(range(n), media, fontsize=5)
        ax.set_title("media correlation (dendrogram order)")
        fig.colorbar(im, ax=ax)
        path = outdir / "fig_correlation.svg"
        _save(fig, path)
        produced.append(path)

    for table, name, title, ylab in (
        ("leaning_distribution.csv", "fig_leaning_distribution.svg", "distribution of user leaning", "P(x)"),
        ("activity_by_leaning.csv", "fig_activity.svg", "mean comment activity by leaning", "<a(x)>"),
    ):
        if have(table):
            _c, rows = read_table(outdir / table)
            lows = np.array([float(r[0]) for r in rows])
            highs = np.array([float(r[1]) for r in rows])
            vals = np.array([float(r[2]) for r in rows])
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.bar((lows + highs) / 2, np.nan_to_num(vals), width=highs - lows, edgecolor="none")
            ax.set_xlabel("x")
            ax.set_ylabel(ylab)
            ax.set_title(title)
            path = outdir / name
            _save(fig, path)
            produced.append(path)

    for mode in ("weighted", "unweighted"):
        table = f"joint_density_{mode}.csv"
        if have(table):
            _c, rows = read_table(outdir / table)
            if not rows:
                continue
            nb = max(max(int(r[0]), int(r[1])) for r in rows) + 1
            grid = np.zeros((nb, nb))
            for xb, yb, mass in rows:
                grid[int(xb), int(yb)] = float(mass)
            fig, ax = plt.subplots(figsize=(5, 5))
            ax.imshow(grid.T, origin="lower", extent=(-1, 1, -1, 1), cmap="viridis")
            ax.set_xlabel("x")
            ax.set_ylabel("<x_nn>")
            ax.set_title(f"joint density ({mode})")
            path = outdir / f"fig_joint_{mode}.svg"
            _save(fig, path)
            produced.append(path)

    if have("response_curves.csv"):
        _c, rows = read_table(outdir / "response_curves.csv")
        fig, axes = plt.subplots(2, 3, figsize=(12, 6), sharex=True)
        kinds = ("replies", "antipathies", "sympathies")
        for gi, sign in enumerate(("1", "-1")):
            for ki, kind in enumerate(kinds):
                ax = axes[gi][ki]
                pts = [
                    ((float(r[2]) + float(r[3])) / 2, float(r[4]))
                    for r in rows
                    if r[0] == sign and r[1] == kind and int(r[5]) > 0
                ]
                if pts:
                    xs, ys = zip(*pts)
                    ax.plot(xs, ys, "o-", markersize=3)
                ax.set_title(f"group {sign}: {kind}", fontsize=9)
        fig.supxlabel("commenter leaning x")
        fig.supylabel("mean per comment")
        path = outdir / "fig_response_curves.svg"
        _save(fig, path)
        produced.append(path)

    if have("reply_affect.csv"):
        _c, rows = read_table(outdir / "reply_affect.csv")
        fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
        for ax, col, title in ((axes[0], 3, "antipathies"), (axes[1], 2, "sympathies")):
            for sign, label in (("1", "group +1"), ("-1", "group -1")):
                pts = [(int(r[1]), float(r[col])) for r in rows if r[0] == sign and int(r[4]) > 0]
                if pts:
                    xs, ys = zip(*pts)
                    ax.plot(xs, ys, "o-", markersize=3, label=label)
            ax.set_xlabel("replies per comment")
            ax.set_ylabel(f"mean {title}")
            ax.legend(fontsize=8)
        path = outdir / "fig_reply_affect.svg"
        _save(fig, path)
        produced.append(path)

    if have("classifier_comparison.csv"):
        _c, rows = read_table(outdir / "classifier_comparison.csv")
        if rows:
            fig, ax = plt.subplots(figsize=(5, 4))
            names = [r[0] for r in rows]
            means = [float(r[-1]) for r in rows]
            ax.bar(names, means)
            ax.set_ylim(0, 1)
            ax.set_ylabel("mean test accuracy")
            ax.set_title("classifier comparison (5-fold mean)")
            path = outdir / "fig_classifier.svg"
            _save(fig, path)
            produced.append(path)

    return produced
