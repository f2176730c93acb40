import dataclasses
import json

import pytest
from click.testing import CliRunner

from echoscope import synth
from echoscope.cli import main as cli_main
from echoscope.errors import ConfigError
from echoscope.report import (
    PipelineConfig,
    read_table,
    run_pipeline,
    sha256_file,
    write_table,
)

SMALL_SYNTH = synth.SynthConfig(
    n_users=1200,
    n_media_group_a=4,
    n_media_group_b=4,
    n_media_neutral=4,
    articles_per_medium=12,
    comments_min=4,
    comments_max=60,
    seed=5,
)

SMALL = dict(
    top_k_media=12,
    clustering_min_comments=3,
    clustering_min_responses=8,
    correlation_min_overlap=10,
    active_min_comments=10,
    classify_min_comments=40,
)


def _config(outdir, **kw):
    merged = {"synth": SMALL_SYNTH, "output_dir": str(outdir), **SMALL, **kw}
    return PipelineConfig(**merged)


@pytest.fixture(scope="module")
def pipeline_out(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("pipeline")
    bundle = run_pipeline(_config(outdir))
    return outdir, bundle


class TestConfig:
    def test_both_inputs_rejected(self):
        cfg = PipelineConfig(
            article_path="a", comment_path="c", media_path="m", synth=SMALL_SYNTH
        )
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_neither_input_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig().validate()

    def test_partial_paths_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig(article_path="a").validate()

    def test_dict_roundtrip(self):
        cfg = PipelineConfig(synth=SMALL_SYNTH, seed=9, top_k_media=7)
        again = PipelineConfig.from_dict(cfg.to_dict())
        assert again == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"synth": dataclasses.asdict(SMALL_SYNTH), "bogus": 1})

    def test_from_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        cfg = PipelineConfig(synth=SMALL_SYNTH, output_dir="x")
        path.write_text(json.dumps(cfg.to_dict()))
        assert PipelineConfig.from_file(path) == cfg


class TestTables:
    def test_roundtrip_with_schema(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table(path, ["a", "b"], [(1, "x"), (2, "y")], types={"a": "int"})
        cols, rows = read_table(path)
        assert cols == ["a", "b"]
        assert rows == [["1", "x"], ["2", "y"]]
        schema = json.loads((tmp_path / "t.csv.schema.json").read_text())
        assert schema["columns"][0] == {"name": "a", "type": "int"}
        assert schema["columns"][1] == {"name": "b", "type": "string"}


class TestPipeline:
    def test_all_stages_complete(self, pipeline_out):
        _outdir, bundle = pipeline_out
        assert bundle.manifest["halted_at"] is None
        assert set(bundle.manifest["timings"]) == {
            "ingest", "cluster-media", "leanings", "conet", "affect", "classify", "render",
        }

    def test_expected_artifacts_present(self, pipeline_out):
        outdir, bundle = pipeline_out
        hashes = bundle.artifact_hashes()
        for name in (
            "corpus_stats.csv", "media_correlation.csv", "dendrogram.csv",
            "media_grouping.csv", "leanings.csv", "leaning_distribution.csv",
            "activity_by_leaning.csv", "population_summary.csv", "recovery_report.csv",
            "assortativity.csv", "joint_density_weighted.csv", "joint_density_unweighted.csv",
            "top_edges.csv", "conet_nodes.csv", "response_curves.csv", "reply_affect.csv",
            "fig_correlation.svg", "fig_leaning_distribution.svg",
        ):
            assert name in hashes, name
            assert (outdir / name).exists()
            assert hashes[name] == sha256_file(outdir / name)

    def test_rerun_reproduces_artifact_hashes(self, pipeline_out, tmp_path):
        _outdir, bundle = pipeline_out
        again = run_pipeline(_config(tmp_path / "again"))
        assert again.artifact_hashes() == bundle.artifact_hashes()

    def test_figures_byte_identical_across_renders(self, pipeline_out, tmp_path):
        outdir, bundle = pipeline_out
        again = run_pipeline(_config(tmp_path / "fig"))
        for name, digest in bundle.artifact_hashes().items():
            if name.endswith(".svg"):
                assert again.artifact_hashes()[name] == digest

    def test_unpolarized_corpus_halts_gracefully(self, tmp_path):
        # a tiny corpus cannot clear the correlation overlap threshold
        tiny = dataclasses.replace(SMALL_SYNTH, n_users=60, articles_per_medium=4)
        cfg = _config(tmp_path / "tiny", synth=tiny, correlation_min_overlap=50)
        bundle = run_pipeline(cfg)
        assert bundle.manifest["halted_at"] == "cluster-media"
        assert bundle.manifest["halt_reason"]
        assert "corpus_stats.csv" in bundle.artifact_hashes()
        assert "leanings.csv" not in bundle.artifact_hashes()

    def test_recovery_report_exact_on_synthetic(self, pipeline_out):
        outdir, _bundle = pipeline_out
        cols, rows = read_table(outdir / "recovery_report.csv")
        rec = dict(zip(cols, rows[0]))
        assert rec["group_exact_match"] == "1"
        assert float(rec["group_ari"]) == 1.0

    def test_joint_density_mass_sums_to_one(self, pipeline_out):
        outdir, _bundle = pipeline_out
        for mode in ("weighted", "unweighted"):
            _c, rows = read_table(outdir / f"joint_density_{mode}.csv")
            assert abs(sum(float(r[2]) for r in rows) - 1.0) < 1e-9


class TestCli:
    def _invoke(self, *args):
        return CliRunner().invoke(cli_main, list(args))

    def test_run_subcommand(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(_config(tmp_path / "out").to_dict()))
        result = self._invoke("run", "--config", str(cfg_path))
        assert result.exit_code == 0, result.output
        assert (tmp_path / "out" / "manifest.json").exists()

    def test_staged_commands_share_state_via_outdir(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(_config(tmp_path / "out").to_dict()))
        for cmd in ("generate", "cluster-media", "leanings", "affect", "report"):
            result = self._invoke(cmd, "--config", str(cfg_path))
            assert result.exit_code == 0, (cmd, result.output)
        assert (tmp_path / "out" / "response_curves.csv").exists()
        assert (tmp_path / "out" / "fig_response_curves.svg").exists()

    def test_config_error_exit_code(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"output_dir": str(tmp_path / "o")}))
        result = self._invoke("run", "--config", str(cfg_path))
        assert result.exit_code == 2

    def test_format_error_exit_code(self, tmp_path):
        for name in ("a.jsonl", "c.jsonl", "m.jsonl"):
            (tmp_path / name).write_text("not json\n")
        result = self._invoke(
            "ingest",
            "--outdir", str(tmp_path / "o"),
            "--articles", str(tmp_path / "a.jsonl"),
            "--comments", str(tmp_path / "c.jsonl"),
            "--media", str(tmp_path / "m.jsonl"),
        )
        assert result.exit_code == 3

    def test_unpolarized_exit_code(self, tmp_path):
        out = tmp_path / "out"
        cfg = _config(out, synth=dataclasses.replace(SMALL_SYNTH, n_users=60),
                      correlation_min_overlap=50)
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg.to_dict()))
        assert self._invoke("generate", "--config", str(cfg_path)).exit_code == 0
        result = self._invoke("cluster-media", "--config", str(cfg_path))
        assert result.exit_code == 4

    def test_flag_overrides_config(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(_config(tmp_path / "a").to_dict()))
        result = self._invoke("generate", "--config", str(cfg_path),
                              "--outdir", str(tmp_path / "b"))
        assert result.exit_code == 0, result.output
        assert (tmp_path / "b" / "comments.jsonl").exists()
        assert not (tmp_path / "a").exists()
