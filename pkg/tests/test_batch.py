import csv
import io

import pytest

from necklace.batch import BatchRunner
from necklace.errors import BatchError
from necklace.formula import SystemId
from necklace.search import SearchConfig


@pytest.fixture
def runner(tmp_path):
    return BatchRunner(SystemId.LNECK, csv_file=tmp_path / "results.csv", summary_file=tmp_path / "summary.txt")


def test_verdicts(runner, data_dir):
    entries = runner.run(data_dir / "sequents.txt")
    assert [e.verdict for e in entries] == ["yes", "no", "no", "yes"]
    assert "NeckRot" in entries[0].rules
    assert entries[1].rules == ()


def test_csv_report(runner, data_dir, capsys):
    runner.run(data_dir / "sequents.txt")
    assert runner.save()
    written = runner.csv_file.read_text(encoding="utf-8")
    assert capsys.readouterr().out == written
    rows = list(csv.reader(io.StringIO(written)))
    assert rows[0] == ["Sequent", "System", "Derivable", "Rules"]
    assert rows[3][:3] == ["r, q, p -> ((p^c * q^c) * r^c)^c", "Lneck", "no"]
    assert rows[4][3] == "Ax UnderL"


def test_summary(runner, data_dir):
    runner.run(data_dir / "sequents.txt")
    assert runner.summary() == "Summary (derivable / total):\nLneck: 2 / 4\n"
    assert runner.save_summary()
    assert runner.summary_file.read_text(encoding="utf-8") == runner.summary()


def test_search_limit_reported(tmp_path):
    source = tmp_path / "hard.txt"
    source.write_text("r, q, p -> ((p^c * q^c) * r^c)^c\n", encoding="utf-8")
    runner = BatchRunner(SystemId.LNECK, SearchConfig(SystemId.LNECK, memo_limit=3))
    assert [e.verdict for e in runner.run(source)] == ["limit"]
    assert runner.summary().endswith("search limit hit: 1\n")


def test_bad_line_located(tmp_path, runner):
    source = tmp_path / "bad.txt"
    source.write_text("p -> p\np ->\n", encoding="utf-8")
    with pytest.raises(BatchError, match="bad.txt:2:"):
        runner.run(source)


def test_missing_file(tmp_path, runner):
    with pytest.raises(BatchError):
        runner.run(tmp_path / "absent.txt")


def test_write_failure(tmp_path):
    runner = BatchRunner(SystemId.L, csv_file=tmp_path)
    assert not runner.save()


def test_outside_fragment_reported(tmp_path):
    source = tmp_path / "mixed.txt"
    source.write_text("p^c -> p^c\np -> p\n", encoding="utf-8")
    runner = BatchRunner(SystemId.L, csv_file=tmp_path / "results.csv", summary_file=tmp_path / "summary.txt")
    assert [e.verdict for e in runner.run(source)] == ["fragment", "yes"]
    assert runner.summary() == "Summary (derivable / total):\nL: 1 / 2\noutside the fragment: 1\n"
