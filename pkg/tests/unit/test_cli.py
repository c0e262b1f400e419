"""Unit tests for the command-line front end."""

import io

import pytest
import yaml

from fatdual.cli import run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def _doc(*argv):
    code, out, err = _run(*argv, "--format", "doc")
    assert code == 0, err
    return yaml.safe_load(out)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("FATDUAL_SEED", raising=False)
    monkeypatch.delenv("FATDUAL_LOG_LEVEL", raising=False)


def _element_file(tmp_path, name, rows):
    path = tmp_path / name
    path.write_text(
        yaml.safe_dump({"schemaVersion": "1.0", "algebra": {"alias": "t2"}, "p1": 1, "p2": [1], "data": rows})
    )
    return str(path)


class TestStructuralCommands:
    """Tests for classify, euler-form, delta and roots."""

    def test_classify(self):
        document = _doc("classify", "--algebra", "kronecker")
        assert document["schemaVersion"] == "1.0"
        assert document["command"] == "classify"
        assert document["seed"] == 20080101
        assert document["payload"]["components"][0]["tag"] == "A~1"

    def test_classify_quiver_file(self, tmp_path):
        path = tmp_path / "quiver.yaml"
        path.write_text("schemaVersion: '1.0'\nvertices: 4\narrows: [[0, 1], [2, 3]]\n")
        document = _doc("classify", "--quiver", str(path))
        assert [c["tag"] for c in document["payload"]["components"]] == ["A2", "A2"]

    def test_euler_form(self):
        payload = _doc("euler-form", "--algebra", "kronecker", "--p", "1,1")["payload"]
        assert payload["entries"] == [[1, -2], [0, 1]]
        assert payload["quadratic"] == 0
        assert payload["defect"] == 0

    def test_delta(self):
        payload = _doc("delta", "--algebra", "d4tilde")["payload"]
        assert payload["delta"] == [1, 1, 2, 1, 1]

    def test_delta_of_dynkin_is_a_domain_abort(self):
        code, _, err = _run("delta", "--algebra", "a3")
        assert code == 2
        assert "FormError" in err

    def test_roots(self):
        payload = _doc("roots", "--algebra", "a3", "--bound", "6")["payload"]
        assert len(payload["roots"]) == 6
        assert all(r["region"] is None for r in payload["roots"])

    def test_roots_regions_on_euclidean(self):
        payload = _doc("roots", "--algebra", "kronecker", "--bound", "2")["payload"]
        regions = {tuple(r["d"]): r["region"] for r in payload["roots"]}
        assert regions[(1, 1)] == "regular"
        assert regions[(0, 1)] == "preprojective"

    def test_table_output(self):
        code, out, _ = _run("delta", "--algebra", "kronecker")
        assert code == 0
        assert "fatdual" in out
        assert "delta" in out


class TestSeededCommands:
    """Tests for decompose, census, degen-check and fat-subset."""

    def test_fat_subset(self):
        payload = _doc("fat-subset", "--algebra", "t2", "--p", "4,6")["payload"]
        assert payload["gl_degrees"] == [2]
        assert payload["torus_rank"] == 0
        assert payload["trace"] == []

    def test_fat_subset_trace(self):
        code, out, _ = _run("fat-subset", "--algebra", "kronecker", "--p", "2,2", "--trace")
        assert code == 0
        assert "step 0" in out

    def test_fat_subset_is_deterministic(self):
        first = _run("fat-subset", "--algebra", "kronecker", "--p", "2,2", "--seed", "5", "--format", "doc")
        second = _run("fat-subset", "--algebra", "kronecker", "--p", "2,2", "--seed", "5", "--format", "doc")
        assert first == second

    def test_decompose(self):
        payload = _doc("decompose", "--algebra", "kronecker", "--p", "1,1")["payload"]
        assert payload["delta_brick_count"] == 1
        assert payload["tube_parameters"]["supported"]

    def test_decompose_element(self, tmp_path):
        path = _element_file(tmp_path, "w.yaml", [[1]])
        payload = _doc("decompose", "--element", path)["payload"]
        assert payload["delta_brick_count"] == 0
        assert payload["rigid_summands"][0]["dim_vector"] == [1, 1]

    def test_decompose_element_over_gf2(self, tmp_path):
        """Two regular points of the Kronecker pencil in characteristic 2."""
        path = tmp_path / "w.yaml"
        path.write_text(
            yaml.safe_dump(
                {
                    "schemaVersion": "1.0",
                    "algebra": {"alias": "kronecker", "characteristic": 2},
                    "p1": 2,
                    "p2": [2],
                    "data": [[1, 0, 0, 0], [0, 1, 0, 1]],
                }
            )
        )
        payload = _doc("decompose", "--element", str(path))["payload"]
        assert payload["delta_brick_count"] == 2
        points = payload["tube_parameters"]["points"]
        assert sorted(p["value"] for p in points) == ["0", "1"]

    def test_census(self):
        payload = _doc("census", "--algebra", "t2", "--p", "2,2", "--q", "2")["payload"]
        assert [o["size"] for o in payload["orbits"]] == [1, 9, 6]
        assert payload["group_order"] == 36

    def test_census_refuses_prime_powers(self):
        code, _, err = _run("census", "--algebra", "t2", "--p", "1,1", "--q", "4")
        assert code == 2
        assert "census needs a prime field" in err

    def test_census_help_names_prime_fields(self, capsys):
        with pytest.raises(SystemExit):
            run(["census", "--help"])
        text = " ".join(capsys.readouterr().out.split())
        assert "prime powers such as 4 are not supported" in text

    def test_degen_check_certifies(self, tmp_path):
        w = _element_file(tmp_path, "w.yaml", [[1]])
        w2 = _element_file(tmp_path, "w2.yaml", [[0]])
        payload = _doc("degen-check", "--element", w, "--target", w2)["payload"]
        assert payload["hom_order_consistent"]
        assert payload["verdict"] == "degeneration certified"

    def test_degen_check_refutes(self, tmp_path):
        w = _element_file(tmp_path, "w.yaml", [[0]])
        w2 = _element_file(tmp_path, "w2.yaml", [[1]])
        payload = _doc("degen-check", "--element", w, "--target", w2)["payload"]
        assert not payload["hom_order_consistent"]
        assert payload["verdict"] == "refuted by the Hom order"


class TestErrors:
    """Tests for exit codes and messages."""

    def test_no_command(self):
        code, _, err = _run()
        assert code == 1
        assert "usage error" in err

    def test_unknown_algebra(self):
        code, _, err = _run("classify", "--algebra", "banana")
        assert code == 2
        assert "CatalogError" in err

    def test_missing_source(self):
        code, _, err = _run("classify")
        assert code == 1
        assert "--algebra or --quiver" in err

    def test_wrong_multiplicity_count(self):
        code, _, err = _run("fat-subset", "--algebra", "t2", "--p", "1,2,3")
        assert code == 1
        assert "needs 2 multiplicities" in err

    def test_bad_multiplicities(self):
        code, _, _ = _run("fat-subset", "--algebra", "t2", "--p", "1,x")
        assert code == 1

    def test_census_field_too_small(self):
        code, _, err = _run("census", "--algebra", "t2", "--p", "1,1", "--q", "1")
        assert code == 1
        assert "--q must be at least 2" in err

    def test_missing_file(self, tmp_path):
        code, _, err = _run("classify", "--quiver", str(tmp_path / "missing.yaml"))
        assert code == 2
        assert "DocumentParserError" in err

    def test_bad_seed_in_environment(self, monkeypatch):
        monkeypatch.setenv("FATDUAL_SEED", "abc")
        code, _, err = _run("classify", "--algebra", "t2")
        assert code == 1
        assert "FATDUAL_SEED" in err

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("FATDUAL_SEED", "99")
        assert _doc("classify", "--algebra", "t2")["seed"] == 99
