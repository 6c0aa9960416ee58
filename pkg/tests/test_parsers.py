import json
from fractions import Fraction

import pytest

from almost_reps.algebra.carrier import FreeAlgebra, FreeGroupAlgebra, LatticeGroupAlgebra, TranslationAlgebra
from almost_reps.graphs.graphlab import gen_graph
from almost_reps.linalg.field import PrimeField, RationalField
from almost_reps.parsers.algebra_spec import AlgebraSpecParser
from almost_reps.parsers.graph_parser import GraphFileParser
from almost_reps.parsers.literal_parser import ElementParser
from almost_reps.utils.errors import SpecError


class TestElementParser:
    def test_lattice_sum(self, kz):
        x = ElementParser(kz).parse("1 + 2*t - t^-1")
        assert dict(x.terms) == {(0,): 1, (1,): 2, (-1,): kz.field.element(-1)}

    def test_fraction_coefficient(self, qq):
        kq = LatticeGroupAlgebra(1, qq)
        x = ElementParser(kq).parse("3/2*t")
        assert x.coefficient((1,)) == Fraction(3, 2)

    def test_leading_sign_and_repeat(self, kz):
        assert ElementParser(kz).parse("-t + t") == kz.zero()

    def test_number_alone(self, kz):
        assert ElementParser(kz).parse("5") == kz.one().scale(5)
        assert ElementParser(kz).parse(5) == kz.one().scale(5)

    def test_list_is_sum(self, kz):
        parser = ElementParser(kz)
        assert parser.parse(["t", "t^-1"]) == parser.parse("t + t^-1")

    def test_free_algebra_words(self, free2):
        x = ElementParser(free2).parse("x*y - y*x + x^2")
        assert set(x.terms) == {(0, 1), (1, 0), (0, 0)}

    def test_free_group_cancellation(self, f2):
        assert ElementParser(f2).parse("a*b*b^-1*a^-1") == f2.one()

    def test_multivariate(self, kz2):
        assert ElementParser(kz2).parse("x*y^-1") == kz2.basis_element((1, -1))

    def test_matrix_units(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 6}), PrimeField(7))
        x = ElementParser(tr).parse("E[0,1]*E[1,2] + 3*E[2,2]")
        assert dict(x.terms) == {(0, 2): 1, (2, 2): 3}

    def test_matrix(self, kz):
        M = ElementParser(kz).parse_matrix([["1", "t"], ["0", "t^-1"]])
        assert M[1][0].is_zero() and M[0][1] == kz.basis_element((1,))

    @pytest.mark.parametrize("text", ["", "t t", "t *", "t^", "q", "2 + * t", "E[0,1]"])
    def test_malformed(self, kz, text):
        with pytest.raises(SpecError):
            ElementParser(kz).parse(text)

    def test_negative_power_in_free_algebra(self, free2):
        with pytest.raises(SpecError):
            ElementParser(free2).parse("x^-1")

    def test_bad_matrix(self, kz):
        with pytest.raises(SpecError):
            ElementParser(kz).parse_matrix([])


class TestAlgebraSpecParser:
    def test_lattice(self):
        carrier = AlgebraSpecParser({"carrier": "group", "group": "Z^d", "d": 2}).parse()
        assert isinstance(carrier, LatticeGroupAlgebra) and carrier.d == 2

    def test_free_group(self):
        assert isinstance(AlgebraSpecParser({"carrier": "group", "group": "free", "rank": 2}).parse(),
                          FreeGroupAlgebra)

    def test_free_algebra_with_field(self):
        carrier = AlgebraSpecParser({"carrier": "free", "rank": 3, "field": "rational"}).parse()
        assert isinstance(carrier, FreeAlgebra) and carrier.field == RationalField()

    def test_field_override(self):
        carrier = AlgebraSpecParser({"carrier": "free", "rank": 2, "field": "rational"}, field="gfp:7").parse()
        assert carrier.field == PrimeField(7)

    def test_translation(self):
        spec = {"carrier": "translation", "graph": {"type": "tree", "degree": 3, "radius": 2}, "propagation": 1}
        carrier = AlgebraSpecParser(spec).parse()
        assert isinstance(carrier, TranslationAlgebra)
        assert carrier.propagation_bound == 1 and carrier.graph.n == 10

    def test_file(self, tmp_path):
        path = tmp_path / "algebra.json"
        path.write_text(json.dumps({"carrier": "group", "group": "Z^d", "d": 1}))
        assert isinstance(AlgebraSpecParser(str(path)).parse(), LatticeGroupAlgebra)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            AlgebraSpecParser(str(tmp_path / "missing.json")).parse()

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "algebra.json"
        path.write_text("{carrier")
        with pytest.raises(SpecError):
            AlgebraSpecParser(str(path)).parse()

    @pytest.mark.parametrize("spec", [
        {"carrier": "lie"},
        {"carrier": "group", "group": "heisenberg"},
        {"carrier": "translation"},
        {"carrier": "group", "group": "Z^d", "d": "two"},
    ])
    def test_invalid(self, spec):
        with pytest.raises(SpecError):
            AlgebraSpecParser(spec).parse()


class TestGraphFileParser:
    def test_path(self, tmp_path):
        path = tmp_path / "path.graph"
        path.write_text("4 3\n0 1\n1 2\n# comment\n2 3\n")
        n, edges = GraphFileParser(path).parse()
        assert n == 4 and edges == [(0, 1), (1, 2), (2, 3)]

    def test_through_generator(self, tmp_path):
        path = tmp_path / "triangle.graph"
        path.write_text("3 3\n0 1\n1 2\n2 0\n")
        g = gen_graph(str(path))
        assert g.n == 3 and g.max_degree == 2

    def test_single_vertex(self, tmp_path):
        path = tmp_path / "dot.graph"
        path.write_text("1 0\n")
        assert GraphFileParser(path).parse() == (1, [])

    def test_count_mismatch(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("3 3\n0 1\n1 2\n")
        with pytest.raises(SpecError):
            GraphFileParser(path).parse()

    def test_vertex_out_of_range(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("2 1\n0 5\n")
        with pytest.raises(SpecError):
            GraphFileParser(path).parse()

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("three edges\n")
        with pytest.raises(SpecError):
            GraphFileParser(path).parse()

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            GraphFileParser(tmp_path / "none.graph").parse()
