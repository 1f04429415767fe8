import csv
import io
import json
import subprocess
import sys

import pytest

from borromean.cli import (
    BOUND_FIELDS,
    PAIR_FIELDS,
    TRIPLE_FIELDS,
    main,
    parse_grid,
)
from borromean.errors import InvalidArgumentError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_of(err):
    line = [ln for ln in err.splitlines() if ln.startswith("{")][-1]
    return json.loads(line)


# --- symbol / solve ---


def test_symbol_prints_value_and_solution(capsys):
    code, out, _ = run(capsys, "symbol", "5", "29", "109")
    assert code == 0
    first = out.splitlines()[0]
    assert first in ("[5,29,109] = +1", "[5,29,109] = -1")
    assert "solution x=7 y=2 z=1" in out


def test_symbol_not_linked(capsys):
    code, _, err = run(capsys, "symbol", "5", "13", "17")
    assert code == 3
    e = error_of(err)
    assert e["code"] == 3 and "legendre(13,5) = -1" in e["message"]


def test_symbol_not_distinct(capsys):
    code, _, err = run(capsys, "symbol", "5", "5", "13")
    assert code == 3
    assert "primes not distinct" in error_of(err)["message"]


def test_symbol_third_prime_rejected(capsys):
    code, _, err = run(capsys, "symbol", "5", "29", "13")
    assert code == 3
    assert error_of(err)["error"] == "inadmissible-third-prime"


def test_symbol_reports_alternate_solution(capsys):
    code, out, _ = run(capsys, "symbol", "29", "241", "5")
    assert code == 0
    assert "z=5" not in out


def test_non_prime_argument(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["symbol", "4", "5", "13"])
    assert exc.value.code == 2
    assert error_of(capsys.readouterr().err)["code"] == 2


@pytest.mark.parametrize("p1, p2, expected", [("5", "29", "x=7 y=2 z=1"), ("13", "17", "x=-15 y=4 z=1")])
def test_solve(capsys, p1, p2, expected):
    code, out, _ = run(capsys, "solve", p1, p2)
    assert code == 0 and out.strip() == expected


def test_solve_inadmissible(capsys):
    code, _, err = run(capsys, "solve", "5", "7")
    assert code == 3
    assert "7 is not 1 mod 4" in error_of(err)["message"]


# --- tables ---


def test_pairs_fifty(capsys):
    code, out, _ = run(capsys, "pairs", "--max-x", "50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(PAIR_FIELDS)
    row = dict(zip(PAIR_FIELDS, lines[1].split(",")))
    assert row["ordered_linked"] == "10"
    assert float(row["ratio"]) == pytest.approx(10 / 225, rel=1e-9)
    assert row["ratio"] == format(10 / 225, ".10g")


def test_triples_grid_to_csv(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, _, _ = run(capsys, "triples", "--max-x", "1500", "--grid", "500", "--csv", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0].keys()) == TRIPLE_FIELDS
    assert [int(r["x"]) for r in rows] == [500, 1000, 1500]


def test_csv_and_json_agree(tmp_path, capsys):
    c, j = tmp_path / "a.csv", tmp_path / "a.json"
    code, _, _ = run(capsys, "triples", "--grid", "300,700", "--csv", str(c), "--json", str(j))
    assert code == 0
    csv_rows = list(csv.DictReader(c.open()))
    json_rows = json.loads(j.read_text())
    assert len(csv_rows) == len(json_rows) == 2
    for cr, jr in zip(csv_rows, json_rows):
        assert list(jr) == TRIPLE_FIELDS
        for key in TRIPLE_FIELDS:
            assert float(cr[key]) == jr[key]


def test_bound_table(capsys):
    code, out, _ = run(capsys, "bound", "5", "29", "--grid", "1000,10000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == BOUND_FIELDS
    assert len(rows) == 4
    assert {r["label"] for r in rows} == {"k1k2(sqrt-1)", "k(sqrt-1)"}
    assert all(r["within_bound"] == "true" for r in rows)


def test_bound_json_booleans(capsys):
    code, out, _ = run(capsys, "bound", "5", "29", "--max-x", "1000", "--json", "-")
    assert code == 0
    assert all(r["within_bound"] is True for r in json.loads(out))


def test_rho_table(capsys):
    code, out, _ = run(capsys, "rho", "5", "29", "--max-x", "2000", "--grid", "1000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["x"] for r in rows] == ["1000", "2000"]
    assert rows[-1]["rho"] == "15"


def test_esum(capsys):
    code, out, _ = run(capsys, "esum", "--max-x", "50")
    assert code == 0
    assert out.splitlines()[1].split(",")[3] == "-10"


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--max", "150")
    assert code == 0
    assert "disagreements=0" in out


def test_oracle_disagreement_exit_code(capsys, monkeypatch):
    from borromean import cli
    from borromean.redei import OracleCheck

    monkeypatch.setattr(cli, "oracle_check", lambda limit: OracleCheck(5, 0, [(5, 29, 109)]))
    code, out, err = run(capsys, "oracle-check", "--max", "150")
    assert code == 6
    assert error_of(err)["code"] == 6
    assert "disagree 5 29 109" in out


# --- determinism, checkpoints, errors ---


def test_threads_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "triples", "--max-x", "1200", "--grid", "400", "--csv", str(a), "--threads", "1")
    run(capsys, "triples", "--max-x", "1200", "--grid", "400", "--csv", str(b), "--threads", "3")
    assert a.read_bytes() == b.read_bytes()


def test_sweep_command_with_checkpoint(tmp_path, capsys):
    cp, a, b = tmp_path / "cp.json", tmp_path / "a.csv", tmp_path / "b.csv"
    code, _, _ = run(capsys, "sweep", "--mode", "pairs", "--grid", "100,1000",
                     "--checkpoint", str(cp), "--csv", str(a))
    assert code == 0 and cp.exists()
    code, _, _ = run(capsys, "pairs", "--grid", "100,1000", "--checkpoint", str(cp), "--csv", str(b))
    assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_checkpoint_mismatch_exit_code(tmp_path, capsys):
    cp = tmp_path / "cp.json"
    run(capsys, "pairs", "--max-x", "100", "--checkpoint", str(cp))
    code, _, err = run(capsys, "triples", "--max-x", "100", "--checkpoint", str(cp))
    assert code == 5
    assert error_of(err)["error"] == "checkpoint-invalid"


def test_io_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "pairs", "--max-x", "100", "--csv", str(tmp_path / "no" / "such" / "x.csv"))
    assert code == 4
    assert error_of(err)["code"] == 4


@pytest.mark.parametrize("argv", [
    ["pairs", "--grid", "500,300"],
    ["pairs", "--grid", "abc", "--max-x", "100"],
    ["pairs"],
    ["triples", "--max-x", "1"],
])
def test_invalid_grid_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert error_of(err)["code"] == 2


def test_bad_threads(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pairs", "--max-x", "100", "--threads", "0"])
    assert exc.value.code == 2


def test_parse_grid():
    assert parse_grid(3000, "500") == [500, 1000, 1500, 2000, 2500, 3000]
    assert parse_grid(1100, "500") == [500, 1000, 1100]
    assert parse_grid(None, "1000,10000,100000") == [1000, 10000, 100000]
    assert parse_grid(50, None) == [50]
    with pytest.raises(InvalidArgumentError):
        parse_grid(None, "500")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "borromean", "solve", "5", "29"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "x=7 y=2 z=1"
