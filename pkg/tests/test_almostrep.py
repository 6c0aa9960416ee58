from fractions import Fraction

import pytest

from almost_reps.algebra.carrier import TranslationAlgebra
from almost_reps.algebra.folner import ExhaustionSpec, exhaustion_subspace, span
from almost_reps.analysis.almostrep import (
    AlmostRep, amplify, apply_matrix, build_from_folner, folner_defect_bound, mult_table, tensor, trivial_rep,
    verify,
)
from almost_reps.graphs.graphlab import gen_graph
from almost_reps.linalg.exactlin import Mat, intersect, rank, span_equal
from almost_reps.linalg.field import PrimeField, RationalField
from almost_reps.utils.errors import AlmostRepError, CarrierMismatchError, NotInSubspaceError


def coordinate_span(field, dim, indices):
    return Mat.from_columns(field, [[1 if i == j else 0 for i in range(dim)] for j in indices], dim)


class TestMultTable:
    def test_lattice_generators(self, kz, kz_L):
        table = mult_table(kz_L)
        assert len(table) == 7
        labels = kz_L.labels()
        pairs = {(labels[e.left], labels[e.right]) for e in table}
        assert ("t", "t") not in pairs and ("t^-1", "t^-1") not in pairs
        assert ("t", "t^-1") in pairs and ("t^-1", "t") in pairs

    def test_unit_only(self, kz):
        assert len(mult_table(span(kz, [kz.one()]))) == 1

    def test_free_algebra(self, free2, parse):
        table = mult_table(span(free2, [free2.one(), parse(free2, "x")]))
        assert len(table) == 3

    def test_every_product_lies_in_l(self, kz2):
        L = span(kz2, kz2.generator_ball())
        for e in mult_table(L):
            product = kz2.mul(L.basis[e.left], L.basis[e.right])
            assert L.element_of(e.coeffs) == product

    def test_translation_tree(self, gf):
        tr = TranslationAlgebra(gen_graph({"type": "tree", "degree": 3, "radius": 3}), gf)
        L = span(tr, tr.generator_ball())
        assert L.dim == 22 + 2 * 21
        table = mult_table(L)
        # E[a,b] E[c,d] vanishes unless b == c, and E[a,d] lies in L iff d(a, d) <= 1
        expected = sum(1 for a, b in L.leads for c, d in L.leads if b != c or tr.graph.distance(a, d) <= 1)
        assert len(table) == expected
        for e in table:
            assert L.element_of(e.coeffs) == tr.mul(L.basis[e.left], L.basis[e.right])


class TestBuildFromFolner:
    def test_lattice_ball_radius_five(self, kz_rep):
        assert (kz_rep.v_dim, kz_rep.core_dim, kz_rep.defect) == (11, 9, Fraction(2, 11))

    def test_core_matches_coordinate_oracle(self, kz, kz_rep):
        Q = kz_rep.build.Q
        index = {w: i for i, w in enumerate(Q.leads)}
        keep_up = [index[(e,)] for e in range(-5, 5)]
        keep_down = [index[(e,)] for e in range(-4, 6)]
        oracle = intersect([coordinate_span(kz.field, 11, keep_up), coordinate_span(kz.field, 11, keep_down)])
        assert oracle.cols == 9
        assert rank(kz_rep.core) == 9
        assert span_equal(oracle, kz_rep.core)

    def test_truncated_shift(self, kz, kz_rep, parse):
        psi_t = kz_rep.image_of(parse(kz, "t"))
        assert rank(psi_t) == 10
        assert kz_rep.image_of(kz.one()).is_identity()

    def test_unit_only_is_exact(self, kz):
        rep = build_from_folner(span(kz, [kz.one()]), exhaustion_subspace(kz, ExhaustionSpec("ball"), 3))
        assert rep.defect == 0 and rep.core_dim == rep.v_dim == 7

    def test_lattice_square_box(self, kz2):
        L = span(kz2, kz2.generator_ball())
        rep = build_from_folner(L, exhaustion_subspace(kz2, ExhaustionSpec("box"), 5))
        assert rep.v_dim == 25
        # interior 3x3 box survives every shift
        assert rep.core_dim == 9
        assert rep.defect <= folner_defect_bound(rep.build)
        assert verify(rep).passed

    def test_defect_bound(self, kz_rep, kz_L):
        bound = folner_defect_bound(kz_rep.build)
        assert kz_rep.defect <= bound
        assert bound == Fraction(2, 11)

    def test_lattice_scan_defect_closed_form(self, kz, kz_L):
        for n in range(1, 8):
            rep = build_from_folner(kz_L, exhaustion_subspace(kz, ExhaustionSpec("ball"), n))
            assert rep.defect == Fraction(2, 2 * n + 1)

    def test_projection_is_identity_on_q(self, kz_rep):
        b = kz_rep.build
        assert (b.projection @ b.inclusion).is_identity()

    def test_empty_q(self, kz, kz_L):
        with pytest.raises(AlmostRepError):
            build_from_folner(kz_L, span(kz, []))

    def test_mixed_carriers(self, kz_L, free2):
        with pytest.raises(CarrierMismatchError):
            build_from_folner(kz_L, span(free2, [free2.one()]))

    def test_rationals_agree(self, kz_L):
        from almost_reps.algebra.carrier import LatticeGroupAlgebra
        kq = LatticeGroupAlgebra(1, RationalField())
        L = span(kq, kq.generator_ball())
        rep = build_from_folner(L, exhaustion_subspace(kq, ExhaustionSpec("ball"), 5))
        assert rep.defect == Fraction(2, 11)


class TestVerify:
    def test_folner_rep(self, kz_rep):
        report = verify(kz_rep)
        assert report.unit_ok and report.core_multiplicative and report.core_contained
        assert report.maximal_dim == 9
        assert report.injective
        assert report.passed

    def test_exact_rep(self, gf):
        report = verify(trivial_rep(gf, v_dim=4))
        assert report.maximal_dim == 4 and report.maximal_defect == 0 and report.passed

    def test_corrupted_image_detected(self, kz_rep):
        images = list(kz_rep.images)
        data = images[0].data.copy()
        data[5, 5] = (data[5, 5] + 1) % 32003
        images[0] = Mat(data, kz_rep.field)
        broken = AlmostRep(kz_rep.field, kz_rep.labels, kz_rep.unit, images, kz_rep.core, kz_rep.table)
        report = verify(broken)
        assert not report.passed
        assert not (report.unit_ok and report.core_multiplicative)

    def test_serialization(self, kz_rep):
        again = AlmostRep.from_dict(kz_rep.to_dict())
        assert again.defect == kz_rep.defect
        assert all(a == b for a, b in zip(again.images, kz_rep.images))
        assert verify(again).passed
        assert kz_rep.to_dict()["defect"] == "2/11"


class TestAmplify:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dimensions(self, kz_rep, n):
        amp = amplify(kz_rep, n)
        assert amp.v_dim == n * kz_rep.v_dim
        assert amp.core_dim >= n * kz_rep.core_dim
        assert amp.defect <= kz_rep.defect
        assert verify(amp).passed

    def test_two_by_two(self, kz_rep):
        amp = amplify(kz_rep, 2)
        assert (amp.v_dim, amp.core_dim) == (22, 18)
        assert amp.defect == Fraction(2, 11)

    def test_exact_stays_exact(self, gf):
        assert amplify(trivial_rep(gf, 3), 4).defect == 0

    def test_size_zero(self, kz_rep):
        with pytest.raises(AlmostRepError):
            amplify(kz_rep, 0)


class TestTensor:
    def test_with_trivial(self, kz_rep, gf):
        t = tensor(kz_rep, trivial_rep(gf))
        assert t.defect == kz_rep.defect
        assert verify(t).passed

    def test_lattice_squared(self, kz_rep):
        t = tensor(kz_rep, kz_rep)
        assert t.v_dim == 121
        assert t.core_dim >= 81
        assert 1 - t.defect >= Fraction(81, 121)
        report = verify(t)
        assert report.passed and report.maximal_dim >= 81

    def test_exact_times_exact(self, gf):
        assert tensor(trivial_rep(gf, 2), trivial_rep(gf, 3)).defect == 0

    def test_field_mismatch(self, kz_rep):
        with pytest.raises(CarrierMismatchError):
            tensor(kz_rep, trivial_rep(PrimeField(7)))


class TestApplyMatrix:
    def test_identity(self, kz, kz_rep):
        M = [[kz.one(), kz.zero()], [kz.zero(), kz.one()]]
        assert apply_matrix(kz_rep, M).is_identity()

    def test_single_entry(self, kz, kz_rep, parse):
        t = parse(kz, "t")
        assert apply_matrix(kz_rep, [[t]]) == kz_rep.image_of(t)

    def test_composition_on_core(self, kz, kz_rep, parse):
        t, tinv = parse(kz, "t"), parse(kz, "t^-1")
        column = apply_matrix(kz_rep, [[t], [kz.one()]])
        row = apply_matrix(kz_rep, [[tinv, kz.one()]])
        product = apply_matrix(kz_rep, [[kz.mul(tinv, t) + kz.one()]])
        assert ((row @ column - product) @ kz_rep.core).is_zero()

    def test_entry_outside_l(self, kz, kz_rep, parse):
        with pytest.raises(NotInSubspaceError):
            apply_matrix(kz_rep, [[parse(kz, "t^2")]])
