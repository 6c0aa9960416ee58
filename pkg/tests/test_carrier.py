import pytest
from hypothesis import given, strategies as st

from almost_reps.algebra.carrier import (
    FreeAlgebra, FreeGroupAlgebra, LatticeGroupAlgebra, TranslationAlgebra, free_reduce, reduced_words,
)
from almost_reps.graphs.graphlab import WindowGraph, gen_graph
from almost_reps.linalg.field import PrimeField
from almost_reps.utils.errors import CarrierMismatchError, SpecError, UnsupportedExhaustionError

GF = PrimeField(32003)

coeffs = st.integers(min_value=-3, max_value=3)


def z_elements(d):
    word = st.tuples(*[st.integers(-3, 3)] * d)
    return st.dictionaries(word, coeffs, max_size=4)


def free_group_words(rank=2):
    letters = st.sampled_from([s * (i + 1) for i in range(rank) for s in (1, -1)])
    return st.lists(letters, max_size=5).map(free_reduce)


def free_words(rank=2):
    return st.lists(st.integers(0, rank - 1), max_size=4).map(tuple)


class TestMulBasis:
    def test_exponents_add(self, kz):
        assert kz.mul_basis((2,), (-3,)) == kz.basis_element((-1,))

    def test_free_reduction(self, f2):
        ab = (1, 2)
        binv_a = (-2, 1)
        assert f2.mul_basis(ab, binv_a) == f2.basis_element((1, 1))

    def test_matrix_units(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 5}), GF)
        assert tr.mul_basis((1, 2), (2, 3)) == tr.basis_element((1, 3))
        assert tr.mul_basis((1, 2), (3, 3)).is_zero()

    def test_invalid_word(self, kz, f2):
        with pytest.raises(SpecError):
            kz.mul_basis((1, 2), (0,))
        with pytest.raises(SpecError):
            f2.mul_basis((3,), ())


class TestMul:
    def test_difference_of_squares(self, kz, parse):
        assert kz.mul(parse(kz, "1 + t"), parse(kz, "1 - t")) == parse(kz, "1 - t^2")

    def test_zero(self, kz, parse):
        assert kz.mul(parse(kz, "t + 3"), kz.zero()).is_zero()

    def test_frobenius_mod_two(self, parse):
        kz2 = LatticeGroupAlgebra(1, PrimeField(2))
        x = parse(kz2, "1 + t")
        assert kz2.mul(x, x) == parse(kz2, "1 + t^2")

    def test_mixed_carriers(self, kz, free2):
        with pytest.raises(CarrierMismatchError):
            kz.one() + free2.one()
        with pytest.raises(CarrierMismatchError):
            kz.mul(kz.one(), free2.one())

    def test_no_zero_coefficients_stored(self, kz, parse):
        x = parse(kz, "t - t")
        assert x.is_zero() and not x.terms


class TestOne:
    def test_group_unit(self, kz):
        assert kz.one() == kz.basis_element((0,))
        assert str(kz.one()) == "1"

    def test_translation_unit(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 3}), GF)
        assert dict(tr.one().terms) == {(0, 0): 1, (1, 1): 1, (2, 2): 1}

    @given(z_elements(2))
    def test_unit_laws(self, terms):
        c = LatticeGroupAlgebra(2, GF)
        a = c.element(terms)
        assert c.mul(c.one(), a) == a == c.mul(a, c.one())


class TestAssociativity:
    @given(z_elements(1), z_elements(1), z_elements(1))
    def test_lattice(self, a, b, c):
        kz = LatticeGroupAlgebra(1, GF)
        a, b, c = kz.element(a), kz.element(b), kz.element(c)
        assert kz.mul(kz.mul(a, b), c) == kz.mul(a, kz.mul(b, c))

    @given(free_group_words(), free_group_words(), free_group_words())
    def test_free_group(self, u, v, w):
        f2 = FreeGroupAlgebra(2, GF)
        a, b, c = f2.basis_element(u), f2.basis_element(v), f2.basis_element(w)
        assert f2.mul(f2.mul(a, b), c) == f2.mul(a, f2.mul(b, c))

    @given(free_words(), free_words(), free_words())
    def test_free_algebra(self, u, v, w):
        fa = FreeAlgebra(2, GF)
        a, b, c = fa.basis_element(u) + fa.one(), fa.basis_element(v), fa.basis_element(w)
        assert fa.mul(fa.mul(a, b), c) == fa.mul(a, fa.mul(b, c))

    @given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=4),
           st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=4),
           st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=4))
    def test_translation(self, u, v, w):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 8}), GF)
        a, b, c = (tr.element({x: 1 for x in words}) for words in (u, v, w))
        assert tr.mul(tr.mul(a, b), c) == tr.mul(a, tr.mul(b, c))


class TestNormalForms:
    @given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12))
    def test_no_adjacent_inverses(self, letters):
        w = free_reduce(letters)
        assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))
        assert len(w) <= len(letters)

    def test_reduced_word_counts(self):
        assert [len(reduced_words(2, n)) for n in range(4)] == [1, 4, 12, 36]

    def test_shortlex_order(self, kz):
        words = sorted([(2,), (-1,), (0,), (1,)], key=kz.word_key)
        assert words == [(0,), (1,), (-1,), (2,)]


class TestPropagation:
    def test_product_propagation_adds(self):
        g = gen_graph({"type": "grid", "d": 6})
        tr = TranslationAlgebra(g, GF)
        a = tr.basis_element((0, 1)) + tr.basis_element((7, 8))
        b = tr.basis_element((1, 3)) + tr.basis_element((8, 14))
        product = tr.mul(a, b)
        assert tr.propagation(product) <= tr.propagation(a) + tr.propagation(b)
        assert not product.is_zero()

    def test_declared_bound_rejects_far_words(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 10}), GF, propagation=1)
        with pytest.raises(SpecError):
            tr.basis_element((0, 5))
        assert tr.propagation(tr.basis_element((0, 1))) == 1


class TestCarrierEquality:
    def test_edge_windows_with_same_size_differ(self):
        path = TranslationAlgebra(WindowGraph(4, [(0, 1), (1, 2), (2, 3)]), GF)
        star = TranslationAlgebra(WindowGraph(4, [(0, 1), (0, 2), (0, 3)]), GF)
        assert path.graph.spec == star.graph.spec
        assert path != star
        with pytest.raises(CarrierMismatchError):
            path.basis_element((0, 1)) + star.basis_element((0, 1))

    def test_edge_windows_with_same_edges_agree(self):
        a = TranslationAlgebra(WindowGraph(4, [(0, 1), (1, 2), (2, 3)]), GF)
        b = TranslationAlgebra(WindowGraph(4, [(3, 2), (1, 0), (2, 1)]), GF)
        assert a == b and hash(a) == hash(b)
        assert a.basis_element((0, 1)) + b.basis_element((1, 2)) == a.element({(0, 1): 1, (1, 2): 1})

    def test_field_and_bound_still_count(self):
        g = gen_graph({"type": "cycle", "n": 6})
        assert TranslationAlgebra(g, GF) != TranslationAlgebra(g, PrimeField(7))
        assert TranslationAlgebra(g, GF) != TranslationAlgebra(g, GF, propagation=1)

    def test_window_edges(self):
        g = WindowGraph(4, [(2, 3), (0, 2), (1, 0)])
        assert g.edges() == ((0, 1), (0, 2), (2, 3))


class TestFormatting:
    def test_lattice_literal(self, kz, parse):
        assert str(parse(kz, "1 + 2*t - t^-1")) == "1 + 2*t - t^-1"

    def test_free_group_literal(self, f2, parse):
        assert str(parse(f2, "a*b^-1*a")) == "a*b^-1*a"

    def test_translation_literal(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 9}), GF)
        assert str(tr.basis_element((3, 7))) == "E[3,7]"


class TestExhaustions:
    def test_lattice_ball(self, kz):
        assert len(kz.exhaustion_words("ball", 5)) == 11

    def test_lattice_box(self, kz2):
        assert len(kz2.exhaustion_words("box", 5)) == 25

    def test_free_group_ball(self, f2):
        assert len(f2.exhaustion_words("ball", 2)) == 17

    def test_free_algebra_length(self, free2):
        assert len(free2.exhaustion_words("length", 2)) == 7

    def test_unsupported(self, free2, f2):
        with pytest.raises(UnsupportedExhaustionError):
            free2.exhaustion_words("ball", 2)
        with pytest.raises(UnsupportedExhaustionError):
            f2.exhaustion_words("box", 2)

    def test_translation_box_needs_grid(self):
        tr = TranslationAlgebra(gen_graph({"type": "cycle", "n": 9}), GF)
        with pytest.raises(UnsupportedExhaustionError):
            tr.exhaustion_words("box", 2)
