import pathlib

import pytest

import zoo
from gogroups.cli import main
from gogroups.errors import GogParseError
from gogroups.gog import classify, pi1_presentation, presentation_to_text
from gogroups.gogfile import parse_gog, parse_gog_text, serialize_gog

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
GOLDEN = pathlib.Path(__file__).parent / "golden"


def fixture(name):
    return str(FIXTURES / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsing:
    def test_fixtures_match_programmatic_constructions(self):
        pairs = [
            ("torus.gog", zoo.torus),
            ("klein.gog", zoo.klein),
            ("bs12.gog", zoo.bs12),
            ("two-loop-trivial.gog", zoo.two_loop_trivial),
            ("amalgam-2-3.gog", zoo.amalgam23),
            ("trefoil.gog", zoo.trefoil),
            ("star3.gog", zoo.star3),
            ("pushout46.gog", zoo.pushout46),
            ("z3f2-diagram.gog", zoo.z3f2),
            ("finite-star.gog", zoo.finite_star),
        ]
        for name, build in pairs:
            parsed = parse_gog(fixture(name))
            built = build()
            assert presentation_to_text(pi1_presentation(parsed)) == presentation_to_text(
                pi1_presentation(built)
            ), name
            assert classify(parsed) == classify(built)

    def test_dyadic_fixtures(self):
        for k in range(2, 6):
            parsed = parse_gog(fixture(f"dyadic-{k}.gog"))
            built = zoo.dyadic(k)
            assert presentation_to_text(pi1_presentation(parsed)) == presentation_to_text(
                pi1_presentation(built)
            )

    def test_roundtrip_canonical(self):
        for name in (
            "torus.gog",
            "klein.gog",
            "pushout46.gog",
            "z3f2-diagram.gog",
            "finite-star.gog",
        ):
            g = parse_gog(fixture(name))
            text = serialize_gog(g)
            again = parse_gog_text(text)
            assert serialize_gog(again) == text, name

    def test_missing_back_map_names_the_edge(self):
        bad = """
vertices:
  v: {free_abelian: [a]}
edges:
  t:
    origin: v
    terminus: v
    group: {free_abelian: [c]}
    fwd: {matrix: [[1]]}
"""
        with pytest.raises(GogParseError) as err:
            parse_gog_text(bad)
        assert "edges.t" in str(err.value) and "back" in str(err.value)

    def test_unknown_vertex_reference(self):
        bad = """
vertices:
  v: {free_abelian: [a]}
edges:
  t:
    origin: v
    terminus: w
    group: {free_abelian: [c]}
    fwd: {matrix: [[1]]}
    back: {matrix: [[1]]}
"""
        with pytest.raises(GogParseError) as err:
            parse_gog_text(bad)
        assert "edges.t.terminus" in str(err.value)

    def test_yaml_syntax_error_carries_line(self):
        with pytest.raises(GogParseError) as err:
            parse_gog_text("vertices:\n  v: {free_abelian: [a]\n")
        assert err.value.line is not None

    def test_bad_matrix_shape(self):
        bad = """
vertices:
  v: {free_abelian: [a]}
edges:
  t:
    origin: v
    terminus: v
    group: {free_abelian: [c]}
    fwd: {matrix: [[1, 2]]}
    back: {matrix: [[1]]}
"""
        with pytest.raises(GogParseError) as err:
            parse_gog_text(bad)
        assert "edges.t.fwd" in str(err.value)

    def test_non_homomorphism_map_rejected(self):
        bad = """
vertices:
  u: {cyclic: 4, letter: a}
  v: {cyclic: 6, letter: b}
edges:
  e:
    origin: u
    terminus: v
    group: {cyclic: 4, letter: c}
    fwd: {map: [0, 1, 2, 3]}
    back: {map: [0, 1, 0, 1]}
"""
        with pytest.raises(GogParseError) as err:
            parse_gog_text(bad)
        assert "edges.e.back" in str(err.value)


class TestCommands:
    def test_validate(self, capsys):
        code, out, _ = run(capsys, "validate", fixture("torus.gog"))
        assert code == 0 and out == "valid\n"

    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", fixture("pushout46.gog"))
        assert code == 0 and out == "diagram\n"
        code, out, _ = run(capsys, "classify", fixture("dyadic-4.gog"))
        assert code == 0 and out == "graph-of-groups\n"

    def test_trivial_true_false(self, capsys):
        code, out, _ = run(capsys, "trivial", "--word", "a t a^-1 t^-1", fixture("torus.gog"))
        assert code == 0 and out == "true\n"
        code, out, _ = run(capsys, "trivial", "--word", "a t a^-1 t^-1", fixture("bs12.gog"))
        assert code == 0 and out == "false\n"

    def test_reduce_reports_bare_element(self, capsys):
        code, out, _ = run(capsys, "reduce", "--word", "a t a^-1 t^-1", fixture("klein.gog"))
        assert code == 0
        assert out.splitlines()[0] == "reduced: v:[2]"

    def test_abelianize(self, capsys):
        code, out, _ = run(capsys, "abelianize", fixture("torus.gog"))
        assert code == 0 and out == "free rank: 2\ntorsion: -\n"
        code, out, _ = run(capsys, "abelianize", fixture("finite-star.gog"))
        assert code == 0 and out == "free rank: 0\ntorsion: 6\n"

    def test_rank_bound(self, capsys):
        code, out, _ = run(capsys, "rank-bound", fixture("finite-star.gog"))
        assert code == 0 and out == "1\n"
        code, out, _ = run(capsys, "rank-bound", fixture("z3f2-diagram.gog"))
        assert code == 0 and out == "2\n"

    def test_contract_and_collapse(self, capsys):
        code, out, _ = run(capsys, "collapse", fixture("dyadic-5.gog"))
        assert code == 0
        assert "v5" in out and "edges: {}" in out
        code, out, _ = run(capsys, "contract", "--edge", "e1", fixture("dyadic-2.gog"))
        assert code == 0 and "v2" in out

    def test_convert_exit_codes(self, capsys):
        code, out, _ = run(capsys, "convert", "--oracle", "enum:5000", fixture("pushout46.gog"))
        assert code == 0 and "pi1 order 6 (exact)" in out
        code, _, err = run(capsys, "convert", "--oracle", "enum:2", fixture("pushout46.gog"))
        assert code == 3 and "inconclusive" in err

    def test_precondition_violations_exit_one(self, capsys):
        code, _, err = run(capsys, "contract", "--edge", "t", fixture("torus.gog"))
        assert code == 1 and "loop" in err
        code, _, err = run(capsys, "contract", "--edge", "e", fixture("amalgam-2-3.gog"))
        assert code == 1 and "isomorphism" in err
        code, _, err = run(capsys, "recognize-abelian", fixture("trefoil.gog"))
        assert code == 1

    def test_parse_errors_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "broken.gog"
        bad.write_text("vertices: [not, a, mapping]\n")
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 2 and "parse error" in err
        code, _, err = run(capsys, "validate", str(tmp_path / "missing.gog"))
        assert code == 2

    def test_enumerate_cap_exit_three(self, capsys):
        code, _, err = run(capsys, "enumerate", "--cap", "50", fixture("torus.gog"))
        assert code == 3

    def test_byte_identical_reports(self, capsys):
        for argv in (
            ["pi1", fixture("z3f2-diagram.gog")],
            ["convert", "--oracle", "enum:5000", fixture("pushout46.gog")],
            ["recognize-abelian", fixture("bs12.gog")],
            ["decompose", "--edge", "s1", fixture("finite-star.gog")],
        ):
            _, first, _ = run(capsys, *argv)
            _, second, _ = run(capsys, *argv)
            assert first == second

    def test_golden_outputs(self, capsys):
        cases = [
            (["pi1", fixture("torus.gog")], "torus-pi1.txt"),
            (["recognize-abelian", fixture("klein.gog")], "klein-recognize.txt"),
            (["convert", "--oracle", "enum:5000", fixture("pushout46.gog")], "pushout46-convert.txt"),
            (["decompose", "--edge", "e", fixture("trefoil.gog")], "trefoil-decompose.txt"),
            (["enumerate", "--cap", "100", fixture("finite-star.gog")], "finite-star-enumerate.txt"),
        ]
        for argv, golden in cases:
            code, out, _ = run(capsys, *argv)
            assert code == 0
            assert out == (GOLDEN / golden).read_text(), golden


class TestConvertedRoundtrip:
    def test_converted_output_reparses(self):
        from gogroups.moves import QuotientOracle, convert_diagram
        from gogroups.quotients import coset_enumeration

        converted = convert_diagram(
            parse_gog(fixture("pushout46.gog")), QuotientOracle.finite_enumeration(5000)
        )
        text = serialize_gog(converted)
        again = parse_gog_text(text)
        assert serialize_gog(again) == text
        assert classify(again).value == "graph-of-groups"
        p = pi1_presentation(again)
        assert coset_enumeration(p, 5000).order == 6
