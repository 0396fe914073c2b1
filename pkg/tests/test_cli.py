import argparse

import numpy as np
import pytest

from app import main
from configs.config import DEFAULT_K, DEFAULT_P, DEFAULT_T, DEFAULT_THREADS
from tests.conftest import GTAATGAC
from utils.create_config import create_partition_config
from utils.workdir_utils import id_stream_path


@pytest.fixture
def fasta(tmp_path):
    path = tmp_path / "reads.fa"
    path.write_text(f">r1\n{GTAATGAC}\n>r2\n{GTAATGAC}\n")
    return path


def _run_args(work_dir):
    return ["-k", "5", "-p", "3", "-t", "16", "--no-rc", "--workdir", str(work_dir)]


def test_build_then_verify(fasta, tmp_path, capsys):
    work_dir = tmp_path / "work"
    assert main(["build", str(fasta), *_run_args(work_dir)]) == 0
    out = capsys.readouterr().out
    assert "vertices=4" in out
    assert "edges=3" in out

    assert main(["baseline", "h", str(fasta), *_run_args(work_dir)]) == 0
    assert "baseline_mode=h" in capsys.readouterr().out

    assert main(["verify", str(fasta), *_run_args(work_dir)]) == 0
    assert "verify=ok" in capsys.readouterr().out


def test_verify_detects_wrong_ids(fasta, tmp_path, capsys):
    work_dir = tmp_path / "work"
    main(["build", str(fasta), *_run_args(work_dir)])
    np.save(id_stream_path(work_dir), np.arange(1, 9, dtype=np.uint64))
    capsys.readouterr()
    assert main(["verify", str(fasta), *_run_args(work_dir)]) == 1
    assert "verify=failed" in capsys.readouterr().out


def test_phase_commands(fasta, tmp_path, capsys):
    work_dir = tmp_path / "work"
    for command in (["partition", str(fasta)], ["map"], ["merge"], ["edges", "--densify"]):
        assert main([*command, *_run_args(work_dir)]) == 0
    assert "last_completed_phase=edges" in capsys.readouterr().out


def test_invalid_parameters_exit_with_error(fasta, tmp_path):
    assert main(["build", str(fasta), "-k", "5", "-p", "9", "--workdir", str(tmp_path)]) == 1


def test_phase_out_of_order_exits_with_error(tmp_path):
    assert main(["merge", *_run_args(tmp_path / "fresh")]) == 1


def test_analyze_alpha_csv(capsys):
    assert main(["analyze", "alpha", "-k", "50-52", "-p", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,p,alpha,lower,upper,within"
    assert len(lines) == 4


def test_analyze_minstb_to_file(tmp_path):
    out = tmp_path / "tables" / "minstb.csv"
    assert main(["analyze", "minstb", "--word", "AA", "-n", "2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "i,Q0,Q1"
    assert lines[-1].startswith("2,0.9375")


def test_analyze_breaks_and_size(capsys):
    assert main(["analyze", "breaks", "-m", "40", "-k", "21", "-p", "5", "--trials", "200"]) == 0
    assert capsys.readouterr().out.startswith("m,k,p,mean_breaks")
    assert main(["analyze", "size", "--n-bases", "1000", "-m", "40", "-k", "21", "-p", "5", "--trials", "200"]) == 0
    assert "ratio" in capsys.readouterr().out


def test_analyze_rejects_bad_distribution():
    with pytest.raises(SystemExit):
        main(["analyze", "capacity", "-k", "10", "-p", "2", "--dist", "0.5,0.5,0.5,0.5"])


@pytest.mark.parametrize("flag", ["-k", "-p", "-t", "--threads"])
def test_explicit_zero_is_rejected(fasta, tmp_path, flag):
    args = ["build", str(fasta), "-k", "5", "-p", "3", "--workdir", str(tmp_path / "work"), flag, "0"]
    assert main(args) == 1


def test_unset_flags_fall_back_to_defaults():
    config = create_partition_config(argparse.Namespace(k=None, p=None, t=None, rc=False, threads=None))
    assert (config.k, config.p, config.t) == (DEFAULT_K, DEFAULT_P, DEFAULT_T)
    assert config.threads == DEFAULT_THREADS
    assert config.rc_mode is False
