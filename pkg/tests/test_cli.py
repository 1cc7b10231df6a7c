import json

import pytest
from click.testing import CliRunner

from orbcat.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


class TestBredonCohomology:
    def test_c2_trivial_family(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "C2",
                  "--family", "triv", "--ring", "Z", "--degrees", "0..4")
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert data["cohomology"] == ["Z", "0", "Z/2", "0", "Z/2"]

    def test_c3_trivial_family(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "C3",
                  "--family", "triv", "--ring", "Z", "--degrees", "0..4")
        data = json.loads(res.output)
        assert data["cohomology"] == ["Z", "0", "Z/3", "0", "Z/3"]

    def test_family_all_degree_zero(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "S3",
                  "--family", "all", "--degrees", "0..3")
        data = json.loads(res.output)
        assert data["cohomology"] == ["Z", "0", "0", "0"]

    def test_rational_coefficients(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "C2",
                  "--family", "triv", "--ring", "Q", "--degrees", "0..2")
        data = json.loads(res.output)
        assert data["cohomology"] == ["Q", "0", "0"]

    def test_table_format(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "C2",
                  "--family", "triv", "--format", "table")
        assert res.exit_code == 0
        assert "cohomology" in res.output


class TestDeterminism:
    def test_byte_identical_runs(self, runner):
        args = ("hecke", "homs", "--group", "S3", "--source", "(01)",
                "--target", "(01)")
        out1 = run(runner, *args).output
        out2 = run(runner, *args).output
        assert out1 == out2

    def test_byte_identical_group_info(self, runner):
        out1 = run(runner, "group", "info", "--group", "D4").output
        out2 = run(runner, "group", "info", "--group", "D4").output
        assert out1 == out2


class TestHomTables:
    def test_hecke_s3_transposition_pair(self, runner):
        res = run(runner, "hecke", "homs", "--group", "S3", "--source",
                  "(01)", "--target", "(01)", "--debug-oracle")
        data = json.loads(res.output)
        assert len(data["basis"]) == 2
        assert len(data["composition"]) == 4

    def test_orbit_homs(self, runner):
        res = run(runner, "orbit", "homs", "--group", "C2", "--source",
                  "triv", "--target", "all")
        data = json.loads(res.output)
        assert len(data["basis"]) == 1

    def test_mackey_homs(self, runner):
        res = run(runner, "mackey", "homs", "--group", "C2", "--source",
                  "all", "--target", "all")
        data = json.loads(res.output)
        assert len(data["basis"]) == 2
        assert sorted(b["tube_order"] for b in data["basis"]) == [1, 2]

    def test_group_info(self, runner):
        res = run(runner, "group", "info", "--group", "S3")
        data = json.loads(res.output)
        assert data["order"] == 6
        assert len(data["subgroup_classes"]) == 4


class TestInduceAndDual:
    def test_induce_mackey(self, runner):
        res = run(runner, "induce", "--group", "C2", "--target", "mackey")
        data = json.loads(res.output)
        assert data["values"] == ["Z^2", "Z"]

    def test_induce_hecke(self, runner):
        res = run(runner, "induce", "--group", "S3", "--target", "hecke")
        data = json.loads(res.output)
        assert data["values"] == ["Z", "Z", "Z", "Z"]

    def test_dual(self, runner):
        res = run(runner, "dual", "--group", "S3", "--object", "(01)")
        data = json.loads(res.output)
        assert data["dual_values"] == data["corepresentable_values"]

    def test_ext(self, runner):
        res = run(runner, "ext", "--group", "C2", "--family", "triv",
                  "--degrees", "0..2")
        data = json.loads(res.output)
        assert data["ext"] == ["Z", "0", "Z/2"]


class TestHoughtonCommands:
    def write(self, tmp_path, name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    def test_centraliser_of_element(self, runner, tmp_path):
        p = self.write(tmp_path, "q.json",
                       {"n": 3, "m": [1, -1, 0],
                        "prefix": [[[0, 2], [0, 1]]]})
        res = run(runner, "houghton", "centraliser", "--element", p)
        data = json.loads(res.output)
        assert data["description"] == "H_1 x Z^1"
        assert data["free_abelian_rank"] == 1

    def test_centraliser_of_subgroup(self, runner, tmp_path):
        p1 = self.write(tmp_path, "a.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 1], [1, 1]], [[1, 1], [0, 1]]]})
        p2 = self.write(tmp_path, "b.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 2], [1, 2]], [[1, 2], [0, 2]]]})
        res = run(runner, "houghton", "centraliser", "--element", p1,
                  "--element", p2)
        data = json.loads(res.output)
        assert data["houghton_rays"] == 2
        assert data["finite_factors"] == [[2, 1], [2, 1]]

    def test_centraliser_vcyc(self, runner, tmp_path):
        w = self.write(tmp_path, "w.json",
                       {"n": 3, "m": [1, -1, 0],
                        "prefix": [[[0, 2], [0, 1]]]})
        f = self.write(tmp_path, "f.json",
                       {"n": 3, "m": [0, 0, 0],
                        "prefix": [[[0, 3], [1, 3]], [[1, 3], [0, 3]]]})
        res = run(runner, "houghton", "centraliser", "--element", f,
                  "--infinite", w)
        data = json.loads(res.output)
        assert data["finite_factors"] == [[2, 1]]

    def test_conjugate_false(self, runner, tmp_path):
        q1 = self.write(tmp_path, "q1.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 1], [1, 1]], [[1, 1], [0, 1]]]})
        q2 = self.write(tmp_path, "q2.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 1], [1, 1]], [[1, 1], [0, 1]],
                                    [[2, 1], [3, 1]], [[3, 1], [2, 1]]]})
        res = run(runner, "houghton", "conjugate", q1, q2)
        data = json.loads(res.output)
        assert data["conjugate"] is False

    def test_conjugate_true(self, runner, tmp_path):
        q1 = self.write(tmp_path, "q1.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 1], [1, 1]], [[1, 1], [0, 1]]]})
        q2 = self.write(tmp_path, "q2.json",
                        {"n": 2, "m": [0, 0],
                         "prefix": [[[0, 2], [1, 2]], [[1, 2], [0, 2]]]})
        res = run(runner, "houghton", "conjugate", q1, q2)
        assert json.loads(res.output)["conjugate"] is True

    def test_gamma(self, runner, tmp_path):
        p = self.write(tmp_path, "q.json",
                       {"n": 3, "m": [1, -1, 0],
                        "prefix": [[[0, 2], [0, 1]]]})
        res = run(runner, "houghton", "gamma", "--element", p)
        data = json.loads(res.output)
        assert data["component_count"] == 1
        assert data["eventually_fixed_rays"] == [3]


class TestErrorPaths:
    def test_domain_error_exit_one(self, runner, tmp_path):
        # conjugacy of an infinite-order element is a domain error
        p1 = tmp_path / "q1.json"
        p1.write_text(json.dumps({"n": 2, "m": [1, -1],
                                  "prefix": [[[0, 2], [0, 1]]]}))
        p2 = tmp_path / "q2.json"
        p2.write_text(json.dumps({"n": 2, "m": [0, 0], "prefix": []}))
        res = run(runner, "houghton", "conjugate", str(p1), str(p2))
        assert res.exit_code == 1
        data = json.loads(res.output)
        assert data["error"]["type"] == "InfiniteOrder"

    def test_invalid_element_exit_one(self, runner, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"n": 2, "m": [1, 0], "prefix": []}))
        res = run(runner, "houghton", "gamma", "--element", str(p))
        assert res.exit_code == 1
        assert json.loads(res.output)["error"]["type"] == "NotBijective"

    def test_malformed_input_exit_two(self, runner):
        res = run(runner, "bredon", "cohomology", "--group",
                  "NOTAGROUP!!")
        assert res.exit_code == 2
        assert json.loads(res.output)["error"]["type"] == "BadInput"

    def test_bad_ring_exit_two(self, runner):
        res = run(runner, "bredon", "cohomology", "--group", "C2",
                  "--ring", "R")
        assert res.exit_code == 2

    def test_bad_json_file_exit_two(self, runner, tmp_path):
        p = tmp_path / "garbage.json"
        p.write_text("{not json")
        res = run(runner, "houghton", "gamma", "--element", str(p))
        assert res.exit_code == 2
