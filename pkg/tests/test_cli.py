import json
import subprocess
import sys

import pytest

from wphyper.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from wphyper.geometry import ClassificationReport, Hypersurface, classify_hypersurface


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_json_round_trips(capsys):
    code, out, _ = run(capsys, "--json", "analyze", "--weights", "33,22,6,5", "--degree", "66")
    assert code == EXIT_OK
    rep = ClassificationReport.from_dict(json.loads(out))
    assert rep == classify_hypersurface(Hypersurface.of(66, (33, 22, 6, 5)))
    assert rep.to_dict() == json.loads(out)
    assert json.loads(out)["volume"] == {"num": "1", "den": "330"}
    assert json.loads(out)["class"] == "CalabiYau"


def test_analyze_table_shows_exact_and_approximate_volume(capsys):
    code, out, _ = run(capsys, "analyze", "--weights", "33,22,6,5", "--degree", "66", "--table")
    assert code == EXIT_OK
    assert "1/330" in out and "approx" in out and "canonical" in out


def test_flags_after_subcommand(capsys):
    a = run(capsys, "analyze", "--weights", "14,5,4,3,1", "--degree", "28", "--json")
    b = run(capsys, "--json", "analyze", "--weights", "14,5,4,3,1", "--degree", "28")
    assert a == b and a[0] == EXIT_OK


def test_analyze_not_well_formed_exits_2(capsys):
    code, out, _ = run(capsys, "--json", "analyze", "--weights", "2,2,1", "--degree", "5")
    assert code == EXIT_FAIL
    assert json.loads(out)["well_formed"] is False


def test_analyze_verify_flag(capsys):
    code, _, _ = run(capsys, "analyze", "--weights", "33,22,6,5,1", "--degree", "66", "--verify")
    assert code == EXIT_OK


def test_family(capsys):
    code, out, _ = run(capsys, "--json", "family", "--problem", "3a", "--dim", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["weights"] == [3, 3, 2, 2, 1]
    assert data["report"]["degree"] == 12
    assert data["report"]["volume"] == {"num": "1", "den": "3"}
    assert data["check"]["ok"] is True


def test_family_beyond_materialization(capsys):
    code, out, _ = run(capsys, "family", "--problem", "1b", "--dim", "24")
    assert code == EXIT_OK
    assert "d - sum(weights) = 0 (expected 0)  PASS" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["family", "--problem", "4b", "--dim", "6"],
        ["analyze", "--weights", "a,b", "--degree", "3"],
        ["analyze", "--weights", "3,2"],
        ["search", "--record", "minvol", "--max-weight", "500"],
        ["--budget", "-1", "analyze", "--weights", "3,2,1", "--degree", "6"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_search_json(capsys):
    code, out, _ = run(capsys, "--json", "--jobs", "2", "search", "--record", "minvol", "--max-weight", "12")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["config"] == {"dimension": 2, "max_weight": 12, "record": "minvol"}


def test_verify_paper_deterministic_across_jobs(capsys):
    outs = []
    for jobs in ("1", "4"):
        code, out, _ = run(capsys, "--json", "--jobs", jobs, "verify-paper", "--max-dim", "4")
        outs.append((code, out))
    assert outs[0] == outs[1]
    rows = {r["id"]: r["status"] for r in json.loads(outs[0][1])}
    # the smallest odd 2b member misses its stated bound (M = 1)
    assert rows["bound:2b-n3"] == "FAIL"
    assert outs[0][0] == EXIT_FAIL
    assert rows["search-maxbottom-40"] == "PASS"
    assert all(s == "PASS" for r, s in rows.items() if "2b-n3" not in r)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wphyper", "analyze", "--weights", "3,2,1", "--degree", "6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_OK, proc.stderr
