"""Command-line interface: golden outputs, exit codes, JSON schema."""

import contextlib
import io
import json
import subprocess
import sys

from conftest import FIXTURES
from ordspace import __version__
from ordspace.cli import main

HEADER = f"# ordspace {__version__} seed=0"


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([str(a) for a in args])
    return code, out.getvalue(), err.getvalue()


def fx(name):
    return FIXTURES / name


def test_balls_golden():
    code, out, err = run("balls", fx("min3.ord"))
    assert code == 0 and err == ""
    assert out.splitlines() == [
        HEADER,
        "6",
        "{x1}",
        "{x2}",
        "{x3}",
        "{x1,x2}",
        "{x2,x3}",
        "{x1,x2,x3}",
    ]


def test_ordtype_recovers_line_ranks():
    code, out, _ = run("ordtype", fx("seven_line.csv"))
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "7 21"
    # the plain line: no rank swap, r(x1,x4) = 13 sits below r(x4,x7) = 14
    assert lines[2].split() == "0 3 5 13 16 18 21".split()


def test_iso_positive_and_negative():
    code, out, _ = run("iso", fx("min3.ord"), fx("min3.ord"))
    assert code == 0
    assert "isomorphic; witness: x1->x1 x2->x2 x3->x3" in out
    code, out, _ = run("iso", fx("tree5_a.ord"), fx("tree5_b.ord"))
    assert code == 1
    assert "not isomorphic; Hasse diagrams isomorphic: yes" in out


def test_dord_with_oracle():
    code, out, _ = run("dord", fx("tree5_a.ord"), fx("tree5_b.ord"), "--oracle")
    assert code == 0
    assert "d_ord = 2" in out
    assert "oracle value: 2 (agrees: yes)" in out
    assert "(x1,x2) vs (x3,x4)" in out


def test_embed1d_witness_golden():
    code, out, _ = run("embed1d", fx("min3.ord"))
    assert code == 0
    assert out.splitlines() == [
        HEADER,
        "embeddable in the line",
        "ordering: x1 x2 x3",
        "gaps: 1/3 (0.333333), 2/3 (0.666667)",
        "margin: 1/3",
    ]


def test_embed1d_profile_obstruction():
    code, out, _ = run("embed1d", fx("twomax3.ord"))
    assert code == 1
    assert "not embeddable in the line" in out
    assert "obstruction: top class has 2 pairs" in out


def test_embed1d_lp_obstruction(tmp_path):
    # passes every profile condition yet admits no consistent placement
    f = tmp_path / "s.ord"
    f.write_text("4 3\n0 3 2 1\n3 0 2 1\n2 2 0 1\n1 1 1 0\n")
    code, out, _ = run("embed1d", f)
    assert code == 1
    assert "obstruction: no point ordering admits a consistent placement" in out


def test_t10_classification():
    code, out, _ = run("t10", fx("case_d8.ord"))
    assert code == 0 and "case d8" in out
    # 3-point input is a usage error, not a negative result
    code, _, err = run("t10", fx("twomax3.ord"))
    assert code == 2 and "input error" in err


def test_t10_not_embeddable(tmp_path):
    f = tmp_path / "ae4.ord"
    f.write_text("4 1\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n")
    code, out, _ = run("t10", f)
    assert code == 1
    assert "NOT_EMBEDDABLE" in out


def test_hasse_dot_golden():
    code, out, _ = run("hasse", fx("min3.ord"), "--dot")
    assert code == 0
    assert out.splitlines()[0] == f"// ordspace {__version__} seed=0"
    assert 'v3 [label="{x1,x2}"];' in out
    assert "v3 -> v5;" in out


def test_hasse_text_round_trips(tmp_path):
    code, out, _ = run("hasse", fx("min4.ord"))
    assert code == 0
    body = "\n".join(out.splitlines()[1:]) + "\n"
    from ordspace.formats import parse_hasse

    h = parse_hasse(body)
    assert len(h.vertices) == 10


def test_validate_positive():
    code, out, _ = run("validate", fx("chain3.cmp"))
    assert code == 0
    assert "valid ordinal space" in out
    assert out.splitlines()[2:] == ["3 3", "0 1 3", "1 0 2", "3 2 0"]


def test_validate_cycle(tmp_path):
    f = tmp_path / "bad.cmp"
    f.write_text("3\n1 2 1 3 LT\n1 3 1 2 LT\n")
    code, out, _ = run("validate", f)
    assert code == 1
    assert "invalid: axiom (iii) violated" in out
    assert "  d(x1,x2) < d(x1,x3)" in out
    assert "  d(x1,x3) < d(x1,x2)" in out


def test_validate_underdetermined(tmp_path):
    f = tmp_path / "partial.cmp"
    f.write_text("3\n1 2 1 3 LT\n")
    code, out, _ = run("validate", f)
    assert code == 1
    assert "invalid: comparisons leave two pair classes unordered" in out
    assert "classes: (x1,x2) vs (x2,x3)" in out


def test_embednd_certificate_route():
    code, out, _ = run("embednd", fx("allequal5.ord"), "--dim", "4")
    assert code == 0
    assert "verified embedding into R^4" in out
    assert "squared-distance factorization" in out


def test_embednd_inconclusive():
    code, out, _ = run("embednd", fx("allequal5.ord"), "--dim", "2", "--restarts", "2")
    assert code == 1
    assert "inconclusive" in out


def test_check_r2_golden():
    code, out, _ = run("check-r2", fx("allequal5.ord"))
    assert code == 1
    assert out.splitlines()[1:] == [
        "not embeddable in the plane",
        "violated: diametrical_pairs (size 10, bound 5)",
        "violated: top_class (size 10, bound 5)",
        "violated: nearest_class (size 10, bound 7)",
    ]
    code, out, _ = run("check-r2", fx("table6.ord"))
    assert code == 0
    assert "all plane necessary conditions hold" in out


def test_menger_probe_golden():
    code, out, _ = run(
        "menger-probe", fx("allequal5.ord"), "--dim", "2", "--restarts", "4"
    )
    assert code == 1
    assert "size 4: 0 embeddable, 5 refuted, 0 inconclusive" in out
    assert "whole space: NOT_EMBEDDABLE" in out
    assert "subset criterion consistent: yes" in out


def test_census_text_and_json_out(tmp_path):
    code, out, _ = run("census", "--n", "3")
    assert code == 0
    assert out.splitlines() == [
        HEADER,
        "n = 3, filter = ALL",
        "isomorphism classes: 4 (orbit count 4)",
        "max balls: 6 [MATCH]",
        "min balls (injective ranks): 6 [MATCH]",
        "line-embeddable classes: 2",
    ]
    dest = tmp_path / "report.json"
    code, out, _ = run("census", "--n", "4", "--filter", "injective", "--out", dest)
    assert code == 0
    data = json.loads(dest.read_text())
    assert data["version"] == __version__
    assert data["classes"] == 30 and data["orbit_count"] == 30
    assert data["min_balls_distinct"] == 9
    assert data["min_balls_verdict"] == "MISMATCH"
    assert data["r1_embeddable"] is None
    # witnesses ship as parseable rank-matrix blocks
    from ordspace.formats import parse_rank_matrix
    from ordspace.balls import ball_set

    witness = parse_rank_matrix(data["min_witness"])
    assert len(ball_set(witness)) == 9


def test_census_guard_exit():
    code, _, err = run("census", "--n", "5")
    assert code == 3
    assert "guard exceeded" in err


def test_missing_and_malformed_files(tmp_path):
    code, _, err = run("balls", tmp_path / "nope.ord")
    assert code == 2 and "input error" in err
    f = tmp_path / "mangled.ord"
    f.write_text("3 3\n0 1\n")
    code, _, err = run("balls", f)
    assert code == 2 and "input error" in err


def test_json_reports_carry_version_and_seed():
    code, out, _ = run(
        "dord", fx("min3.ord"), fx("twomax3.ord"), "--format", "json", "--seed", "5"
    )
    assert code == 0
    data = json.loads(out)
    assert data["version"] == __version__
    assert data["seed"] == 5
    assert data["command"] == "dord"
    assert data["value"] == 1
    assert data["witness"] == [0, 1, 2]


def test_embed1d_json_negative():
    code, out, _ = run("embed1d", fx("twomax3.ord"), "--format", "json")
    assert code == 1
    data = json.loads(out)
    assert data["embeddable"] is False
    assert data["obstruction"] == "top class has 2 pairs"


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ordspace.cli", "balls", str(fx("min3.ord"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "6"


def test_help_lists_subcommands():
    code, out, _ = run("--help")
    assert code == 0
    for name in ("ordtype", "validate", "iso", "dord", "balls", "hasse",
                 "embed1d", "t10", "embednd", "check-r2", "census", "menger-probe"):
        assert name in out
