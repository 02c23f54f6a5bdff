import pytest

from utopk import AuditError, TopKIndex
from utopk.cli import main
from utopk.data import write_csv
from utopk.script import ScriptError, parse_script, run_script


@pytest.fixture
def traffic_csv(tmp_path, traffic):
    path = tmp_path / "traffic.csv"
    write_csv(traffic, path)
    return path


def test_script_topk(traffic):
    out = run_script(traffic, 0.9, parse_script(["TOPK 2"]))
    assert out[0] == "rank,id,score,upsilon"
    assert [line.split(",")[1] for line in out[1:]] == ["4", "2"]


def test_script_delete_then_top1(traffic):
    out = run_script(traffic, 0.9, parse_script(["DELETE t4", "TOPK 1"]))
    rel = traffic.copy()
    rel.remove(4)
    assert out[1].split(",")[1] == str(TopKIndex.build(rel, 0.9).top_k(1).ids[0])


def test_script_all_commands(traffic):
    script = parse_script("""
        # comments and blank lines are skipped
        AUDIT
        INSERT 7 x5 115 0.25
        UPDATE t2 120 0.45
        DELETE 1
        AUDIT
        TOPK 10
    """.splitlines())
    out = run_script(traffic, 0.9, script)
    assert out[0] == "AUDIT ok" and out[1] == "AUDIT ok"
    assert len(out) == 3 + 6


@pytest.mark.parametrize("line", ["FROB 1", "TOPK", "TOPK x", "INSERT 1 a b 0.5"])
def test_script_parse_errors(line):
    with pytest.raises(ScriptError):
        parse_script([line])


def test_script_reports_command_index(traffic):
    with pytest.raises(ScriptError, match="command 2"):
        run_script(traffic, 0.9, parse_script(["TOPK 1", "DELETE 42"]))


def test_cli_gen_topk(tmp_path, capsys):
    out = tmp_path / "g.csv"
    assert main(["gen", "--n", "50", "--seed", "2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 51
    assert main(["topk", "--input", str(out), "-k", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "rank,id,score,upsilon" and len(lines) == 4


def test_cli_run(traffic_csv, tmp_path, capsys):
    script = tmp_path / "ops.txt"
    script.write_text("TOPK 2\nAUDIT\n")
    assert main(["run", "--input", str(traffic_csv), "--alpha", "0.9", "--script", str(script)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [l.split(",")[1] for l in lines[1:3]] == ["4", "2"]
    assert lines[3] == "AUDIT ok"


def test_cli_exit_codes(traffic_csv, tmp_path, monkeypatch):
    bad = tmp_path / "bad.csv"
    bad.write_text("tuple_id,xtuple_id,score,probability\n1,a,1,2.0\n")
    assert main(["topk", "--input", str(bad), "-k", "1"]) == 1
    assert main(["topk", "--input", str(traffic_csv), "--alpha", "1.5", "-k", "1"]) == 1
    assert main(["bench", "--workload", "nope", "--out", str(tmp_path / "b.csv")]) == 1

    def broken(self):
        raise AuditError("node corrupt")

    monkeypatch.setattr(TopKIndex, "audit", broken)
    script = tmp_path / "ops.txt"
    script.write_text("AUDIT\n")
    assert main(["run", "--input", str(traffic_csv), "--script", str(script)]) == 2


def test_cli_bench(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--workload", "ops-vs-n", "--n", "500", "--reps", "20",
                 "--warmup", "2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "workload,n,k,op,mean_ns,p99_ns"
    assert [l.split(",")[3] for l in lines[1:]] == ["insert", "delete", "topk"]
