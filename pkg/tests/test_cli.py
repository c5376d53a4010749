import json
import subprocess
import sys

import pytest

from macposet.cli import run_command


def run(argv):
    return run_command(argv)


class TestExitCodes:
    def test_check_ok_exits_zero(self):
        assert run(["check", "box(3,4)", "--order", "lex(x,y)"]) == 0

    def test_check_violation_exits_one(self):
        assert run(["check", "poset(ideal(x^4, y^3, x^3*y))",
                    "--order", "lex(y,x)"]) == 1

    def test_search_none_exits_one(self):
        assert run(["search-order", "poset(ideal(x^4, y^3, x^3*y))"]) == 1

    def test_search_found_exits_zero(self):
        assert run(["search-order", "wedge(box(2,2), box(2,2))"]) == 0

    def test_usage_error_exits_two(self):
        assert run(["check", "diamond(path(3), box(2,3)", "--order", "lex(x,y)"]) == 2
        assert run(["search-order", "pyramid(3)"]) == 2
        assert run(["reproduce", "not-a-target"]) == 2

    def test_budget_exceeded_exits_three(self):
        assert run(["search-order", "diamond(box(2,3), box(3,2))",
                    "--budget", "3"]) == 3

    def test_additive_on_non_macaulay_is_input_error(self):
        assert run(["additive", "poset(ideal(x^4, y^3, x^3*y))",
                    "--order", "lex(y,x)"]) == 2

    def test_additive_violation_exits_one(self, tmp_path):
        # spider(1,2) is Macaulay but not additive; ids: glue 0, leg-1 top
        # 1, leg-2 elements 2 < 3
        from macposet.serialize import order_lists_to_text
        f = tmp_path / "o.txt"
        f.write_text(order_lists_to_text([[0], [1, 2], [3]]))
        assert run(["additive", "wedge(path(1), path(2))",
                    "--order", f'lists("{f}")']) == 1

    def test_bad_order_file_is_input_error(self):
        assert run(["additive", "wedge(path(1), path(2))",
                    "--order", 'lists("/dev/null")']) == 2

    def test_verify_family_ok(self):
        assert run(["verify-family", "cartesian-counterexamples"]) == 0


class TestReports:
    def test_report_written(self, tmp_path):
        out = tmp_path / "r.json"
        code = run(["reproduce", "heart-example", "--report", str(out)])
        assert code == 1
        doc = json.loads(out.read_text())
        assert doc["command"] == "reproduce"
        assert doc["verdict"] == "violation"
        assert doc["grid"]["search"] == "none"
        assert doc["grid"]["intersection_generators"] == ["x^4, x^3*y, y^3"]

    def test_build_and_reload(self, tmp_path):
        out = tmp_path / "p.poset"
        assert run(["build", "wedge(box(2,2), box(2,3))", "--out", str(out)]) == 0
        from macposet.serialize import poset_from_text
        p, res = poset_from_text(out.read_text())
        assert res is not None and res.operation == "wedge"

    def test_order_lists_file(self, tmp_path):
        from macposet.serialize import order_lists_to_text
        f = tmp_path / "o.txt"
        f.write_text(order_lists_to_text([[0], [1, 2], [3]]))
        code = run(["check", "box(2,2)", "--order", f'lists("{f}")'])
        assert code == 0

    def test_fiber_map_file(self, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("macposet-fibermap 1\n1\n0 0 0\n")
        assert run(["search-order", f'fiber(path(2), path(2), "{f}")']) == 0


class TestDeterminism:
    FAST_TARGETS = ["heart-example", "twist-figure", "prop61-product",
                    "prop61-ring-product", "conj66-counterexample",
                    "diamond-not-wedge", "spider-union-fails"]

    @pytest.mark.parametrize("name", FAST_TARGETS)
    def test_reports_identical_across_threads(self, name, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run(["reproduce", name, "--report", str(a), "--threads", "1"])
        run(["reproduce", name, "--report", str(b), "--threads", "4"])
        assert a.read_bytes() == b.read_bytes()


class TestSubprocess:
    def test_module_entrypoint(self):
        proc = subprocess.run(
            [sys.executable, "-m", "macposet", "check", "box(2,3)",
             "--order", "lex(x,y)"],
            capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0
        assert "ok" in proc.stdout

    def test_version_flag(self):
        proc = subprocess.run([sys.executable, "-m", "macposet", "--version"],
                              capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "1.0.0"
