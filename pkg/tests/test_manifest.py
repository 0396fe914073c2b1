from configs.run_models import PartitionConfig, RunManifest
from utils.create_config import parse_size
from utils.manifest import format_manifest, parse_manifest, read_manifest, write_manifest


def _manifest() -> RunManifest:
    manifest = RunManifest.from_config(PartitionConfig(k=5, p=3, t=4))
    manifest.total_kmers = 8
    manifest.partition_kmers = [6, 0, 2, 0]
    manifest.partition_distinct = [3, 0, 1, 0]
    manifest.distinct_kmers = 4
    manifest.replaced_kmers = 4
    manifest.phase_seconds = {"partition": 0.5, "map": 0.25}
    manifest.last_completed_phase = "map"
    return manifest


def test_format_manifest_lines():
    text = format_manifest(_manifest())
    assert "k=5\n" in text
    assert "rc_mode=true\n" in text
    assert "partition_kmers=6,0,2,0\n" in text
    assert "phase_seconds.map=0.25\n" in text
    assert "baseline_mode=\n" in text


def test_manifest_survives_a_file(tmp_path):
    manifest = _manifest()
    path = tmp_path / "manifest.txt"
    write_manifest(path, manifest)
    assert read_manifest(path) == manifest
    assert not path.with_suffix(".tmp").exists()


def test_parse_ignores_comments_and_blank_lines():
    text = "# run\n\nk=21\np=8\nt=16\nrc_mode=false\nwrap=hash\nscanner=queue\nseed=3\npartition_records=\n"
    manifest = parse_manifest(text)
    assert manifest.k == 21
    assert manifest.rc_mode is False
    assert manifest.partition_records == []
    assert manifest.last_completed_phase is None


def test_consistency_errors():
    manifest = _manifest()
    assert manifest.consistency_errors() == []
    manifest.replaced_kmers = 3
    assert any("V + replaced" in problem for problem in manifest.consistency_errors())
    manifest.partition_kmers = [1, 1]
    assert any("partition k-mers" in problem for problem in manifest.consistency_errors())


def test_phase_done():
    manifest = _manifest()
    assert manifest.phase_done("partition")
    assert manifest.phase_done("map")
    assert not manifest.phase_done("merge")


def test_parse_size():
    assert parse_size("2G") == 2 * 1024**3
    assert parse_size("512m") == 512 * 1024**2
    assert parse_size("1.5KB") == 1536
    assert parse_size("4096") == 4096
