import json
import subprocess
import sys
from pathlib import Path

import pytest

from normcat.cli import main
from normcat.errors import UnknownSuite
from normcat.suites import SUITES, SuiteConfig

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_compute_normalizer_of_transposition(capsys):
    rc, out, _ = run(["compute", "normalizer", "--input", str(GOLDEN / "s3.json"),
                      "--aux", str(GOLDEN / "transposition.json")], capsys)
    assert rc == 0
    assert out == '{"kind":"normalizer","result":{"N":[0,2],"N_order":2,"R_v_normal_subgroup":[0,1],"U_in_N":[0,1]}}\n'


def test_compute_centralizer_of_trivial(tmp_path, capsys):
    aux = tmp_path / "trivial.json"
    aux.write_text('{"elements": [0]}')
    rc, out, _ = run(["compute", "centralizer", "--input", str(GOLDEN / "s3.json"), "--aux", str(aux)], capsys)
    assert rc == 0 and json.loads(out)["result"]["Z"] == list(range(6))


def test_compute_top_normalizer(capsys):
    rc, out, _ = run(["compute", "top-normalizer", "--input", str(GOLDEN / "s3_coset.json"),
                      "--aux", str(GOLDEN / "a3_discrete.json")], capsys)
    assert rc == 0
    assert json.loads(out)["result"] == {"N": list(range(6)), "opens": [[], [0, 3, 4], [1, 2, 5], list(range(6))]}


def test_compute_point_kinds(tmp_path, capsys):
    from normcat.catalog import cyclic
    from normcat.centrality import product_point
    from normcat.cli import _point_json
    p = tmp_path / "p.json"
    p.write_text(json.dumps(_point_json(product_point(cyclic(2), cyclic(3)))))
    rc, out, _ = run(["compute", "distinctive", "--input", str(p)], capsys)
    assert rc == 0 and json.loads(out)["result"]["D_Y"] == [0, 1]
    rc, out, _ = run(["compute", "faithful-cover", "--input", str(p)], capsys)
    cover = json.loads(out)["result"]["cover"]
    assert rc == 0 and (cover["X"]["order"], cover["Y"]["order"]) == (3, 1)


def test_compute_smith_and_mset(tmp_path, capsys):
    from normcat.mset import internal_group_to_json, trivial_action, monoid_catalog
    from normcat.catalog import symmetric
    a3 = tmp_path / "a3.json"
    a3.write_text('{"elements": [0, 3, 4]}')
    rc, out, _ = run(["compute", "smith", "--input", str(GOLDEN / "s3.json"), "--aux", str(a3)], capsys)
    assert rc == 0 and json.loads(out)["result"]["Z_normal_subgroup"] == [0, 3, 4]
    g = tmp_path / "g.json"
    g.write_text(json.dumps(internal_group_to_json(trivial_action(symmetric(3), monoid_catalog()[1]))))
    rc, out, _ = run(["compute", "mset-normalizer", "--input", str(g), "--aux", str(GOLDEN / "transposition.json")], capsys)
    assert rc == 0 and json.loads(out)["result"]["X"] == [0, 2]


@pytest.mark.parametrize("content", ['{"table": [[0, 1], [1, 1]]}', '{"table": [[0, 1]', '{"order": 2}', '[1]'])
def test_malformed_input_exits_2(tmp_path, capsys, content):
    bad = tmp_path / "bad.json"
    bad.write_text(content)
    rc, _, err = run(["compute", "normalizer", "--input", str(bad), "--aux", str(GOLDEN / "transposition.json")], capsys)
    assert rc == 2 and "error:" in err


def test_identity_not_first_is_parse_error(tmp_path, capsys):
    bad = tmp_path / "swap.json"
    bad.write_text('{"table": [[1, 0], [0, 1]]}')
    rc, _, err = run(["compute", "centralizer", "--input", str(bad), "--aux", str(GOLDEN / "transposition.json")], capsys)
    assert rc == 2 and "ParseError" in err


def test_missing_file_and_usage_errors(capsys):
    assert run(["compute", "normalizer", "--input", "/nonexistent.json", "--aux", "x"], capsys)[0] == 2
    assert run(["compute", "normalizer", "--input", str(GOLDEN / "s3.json")], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_empty_suite_list(capsys):
    rc, out, _ = run(["suite", "--suites", ""], capsys)
    assert rc == 0 and json.loads(out)["suites"] == {}


def test_unknown_suite_exits_2(capsys):
    rc, _, err = run(["suite", "--suites", "fibrancy,nope"], capsys)
    assert rc == 2 and "UnknownSuite" in err
    with pytest.raises(UnknownSuite):
        SuiteConfig(suites=("nope",))


def test_every_suite_is_listed(capsys):
    rc, out, _ = run(["suite", "--list"], capsys)
    assert rc == 0 and out.split() == list(SUITES)


def test_fibrancy_suite_all_pass(capsys):
    rc, out, _ = run(["suite", "--suites", "fibrancy", "--max-order", "12"], capsys)
    counts = json.loads(out)["suites"]["fibrancy"]["counts"]
    assert rc == 0 and counts["fail"] == 0 and counts["total"] == 144


def test_suite_matches_golden_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["suite", "--suites", "topological,indis,stucb", "--max-order", "4", "--seed", "3", "--out", str(out)])
    assert rc == 0
    assert out.read_bytes() == (GOLDEN / "suite_small.json").read_bytes()


def test_text_format_and_timings_flag(capsys):
    rc, out, _ = run(["suite", "--suites", "indis", "--max-order", "3", "--format", "text", "--timings"], capsys)
    assert rc == 0 and out.startswith("[indis] total=9 pass=9 fail=0") and "time indis" in out


def test_reports_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "normcat", "suite", "--suites", "stucb,mset,faithful-cover", "--max-order", "6", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a) > 1000


def test_seed_changes_sampled_suites():
    from normcat.suites import run_suite
    a = [c["case_id"] for c in run_suite("stucb", 6, seed=1)]
    b = [c["case_id"] for c in run_suite("stucb", 6, seed=2)]
    assert a != b
