import json
from pathlib import Path

import pytest

from icckit.cli import main
from icckit.dsl import Diagnostic, parse_extension, pretty_print

ROOT = Path(__file__).resolve().parent.parent
EXTENSIONS = ROOT / "extensions"
SCHEMA_PATH = ROOT / "src" / "icckit" / "report.schema.json"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_sol_round_trip(self):
        text = (EXTENSIONS / "sol.ext").read_text()
        spec = parse_extension(text)
        assert parse_extension(pretty_print(spec)) == spec

    def test_swap_round_trip(self):
        text = (EXTENSIONS / "swap.ext").read_text()
        spec = parse_extension(text)
        assert parse_extension(pretty_print(spec)) == spec

    def test_bad_file_diagnostic(self):
        text = (EXTENSIONS / "bad.ext").read_text()
        with pytest.raises(Diagnostic) as exc:
            parse_extension(text)
        assert exc.value.code == "validation"
        assert "non-unimodular" in exc.value.message
        assert exc.value.line == 3

    def test_syntax_diagnostic_has_location(self):
        with pytest.raises(Diagnostic) as exc:
            parse_extension("kernel: Z^2\nquotient: Z\naction t -> [[2,1],[1,1\n")
        assert exc.value.code == "syntax"
        assert exc.value.line == 3

    def test_z_means_rank_one(self):
        spec = parse_extension("kernel: Z\nquotient: Z\naction t -> [[-1]]\n")
        assert spec.kernel.rank == 1

    def test_torsion_chain_parse(self):
        spec = parse_extension("kernel: Z^2 + Z/2 + Z/4\nquotient: Z\naction t -> [[2,1],[1,1]]\n")
        assert spec.kernel.divisors == (2, 4)

    def test_bad_divisor_chain(self):
        with pytest.raises(Diagnostic) as exc:
            parse_extension("kernel: Z^1 + Z/4 + Z/2\nquotient: Z\n")
        assert "divide" in exc.value.message

    def test_product_quotient_parse(self):
        text = (
            "kernel: Z^2\n"
            "quotient: product(Z, Z)\n"
            "action u -> [[2,1],[1,1]]\n"
            "action v -> [[1,1],[1,2]]\n"
        )
        with pytest.raises(Diagnostic):
            # non-commuting actions for an abelian product quotient
            parse_extension(text)

    def test_autmap_word_forms(self):
        text = (
            "kernel: free(a, b)\n"
            "quotient: Z\n"
            "action t -> (a -> b a b^-1, b -> b)\n"
        )
        spec = parse_extension(text)
        assert spec.actions[0].images[0] == (2, 1, -2)

    def test_missing_autmap_image(self):
        with pytest.raises(Diagnostic) as exc:
            parse_extension("kernel: free(a, b)\nquotient: Z\naction t -> (a -> b)\n")
        assert "missing image" in exc.value.message

    def test_non_automorphism_map(self):
        with pytest.raises(Diagnostic) as exc:
            parse_extension("kernel: free(a, b)\nquotient: Z\naction t -> (a -> a a, b -> b)\n")
        assert "non-automorphism" in exc.value.message

    def test_action_count_mismatch(self):
        with pytest.raises(Diagnostic):
            parse_extension("kernel: Z^2\nquotient: Z^2\naction t -> [[2,1],[1,1]]\n")

    def test_free_quotient_name_mismatch(self):
        with pytest.raises(Diagnostic):
            parse_extension(
                "kernel: Z^2\nquotient: free(u, v)\n"
                "action x -> [[2,1],[1,1]]\naction v -> [[1,1],[1,2]]\n"
            )

    def test_finite_quotient_relabel(self):
        spec = parse_extension(
            "kernel: free(a, b)\nquotient: finite perm((1 2))\naction s -> (a -> b, b -> a)\n"
        )
        assert spec.quotient.labels == ("s",)


class TestCliRuns:
    def test_klein_json(self, capsys):
        code, out, err = run(capsys, "check", str(EXTENSIONS / "klein.ext"), "--format", "json")
        assert code == 0 and not err
        data = json.loads(out)
        assert data["verdict"] == "not_icc"
        assert data["witness"]["type"] == "kernel_vector"
        assert sorted(map(tuple, data["witness"]["orbit"])) == [(-1,), (1,)]

    def test_sol_text(self, capsys):
        code, out, err = run(capsys, "check", str(EXTENSIONS / "sol.ext"))
        assert code == 0
        assert "verdict: icc" in out
        assert "theorem-1" in out

    def test_bad_exits_2(self, capsys):
        code, out, err = run(capsys, "check", str(EXTENSIONS / "bad.ext"))
        assert code == 2
        assert "non-unimodular" in err
        assert not out

    def test_missing_file_exits_2(self, capsys):
        code, _, err = run(capsys, "check", str(EXTENSIONS / "nope.ext"))
        assert code == 2 and err

    def test_unsupported_exits_3(self, tmp_path, capsys):
        f = tmp_path / "finite_action.ext"
        f.write_text(
            "kernel: finite perm((1 2))\nquotient: Z\naction t -> [[1]]\n"
        )
        code, _, err = run(capsys, "check", str(f))
        assert code == 3
        assert "unsupported" in err

    def test_assert_flag(self, capsys):
        code, *_ = run(capsys, "check", str(EXTENSIONS / "sol.ext"), "--assert", "icc")
        assert code == 0
        code, *_ = run(capsys, "check", str(EXTENSIONS / "sol.ext"), "--assert", "not_icc")
        assert code == 1

    def test_json_deterministic(self, capsys):
        args = ("check", str(EXTENSIONS / "sol.ext"), "--format", "json", "--oracle-radius", "4")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1.encode() == out2.encode()

    def test_emit_growth(self, tmp_path, capsys):
        target = tmp_path / "growth.csv"
        code, *_ = run(
            capsys, "check", str(EXTENSIONS / "klein.ext"),
            "--oracle-radius", "4", "--emit-growth", str(target),
        )
        assert code == 0
        lines = target.read_text().strip().splitlines()
        assert lines[0] == "radius,size,status"
        assert lines[1] == "0,1,growing"
        assert lines[-1].endswith("closed")

    def test_emit_growth_needs_oracle(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "check", str(EXTENSIONS / "klein.ext"),
            "--emit-growth", str(tmp_path / "x.csv"),
        )
        assert code == 2 and "--oracle-radius" in err

    def test_unknown_verdict_run(self, tmp_path, capsys):
        f = tmp_path / "unknown.ext"
        f.write_text(
            "kernel: Z^4\n"
            "quotient: Z^2\n"
            "action u -> [[2,1,0,0],[1,1,0,0],[0,0,1,0],[0,0,0,1]]\n"
            "action v -> [[1,0,0,0],[0,1,0,0],[0,0,2,1],[0,0,1,1]]\n"
        )
        code, out, _ = run(capsys, "check", str(f), "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["verdict"] == "unknown"
        assert data["obstruction"] == "abelian-relation-bound"


class TestSchema:
    @pytest.fixture()
    def validator(self):
        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(SCHEMA_PATH.read_text())
        return lambda doc: jsonschema.validate(doc, schema)

    @pytest.mark.parametrize(
        "name,flags",
        [
            ("klein.ext", ()),
            ("sol.ext", ()),
            ("swap.ext", ()),
            ("f2xz.ext", ()),
            ("klein.ext", ("--oracle-radius", "4")),
            ("sol.ext", ("--oracle-radius", "4")),
            ("f2xz.ext", ("--oracle-radius", "4")),
        ],
    )
    def test_reports_validate(self, capsys, validator, name, flags):
        code, out, _ = run(
            capsys, "check", str(EXTENSIONS / name), "--format", "json", *flags
        )
        assert code == 0
        validator(json.loads(out))
