"""Spectral triples, morphisms, commutator seminorms and gradings."""

import numpy as np
import pytest

from spectral_limits import (
    AfChain,
    DiagonalRepresentation,
    FiniteCStarAlgebra,
    FiniteSpectralTriple,
    StarHomomorphism,
    State,
    ValidationError,
    cantor_system,
    check_even,
    ci_system,
    commutator_norm,
    compose_morphisms,
    embed,
    identity_morphism,
    middle_thirds,
    operator_norm,
    random_commutative_system,
    theta,
    validate_morphism,
    validate_triple,
)

SEQ = middle_thirds(6)
CANTOR = cantor_system(SEQ, 4)


class TestValidateTriple:
    def test_cantor_level0_passes(self):
        report = validate_triple(CANTOR.triples[0])
        assert report.passed
        assert report.worst <= 1e-14
        assert any("ST1" in note or "compact" in note for note in report.notes)

    def test_trivial_triple(self):
        t = FiniteSpectralTriple(
            FiniteCStarAlgebra((1,)),
            DiagonalRepresentation(np.array([0]), 1),
            np.zeros((1, 1)),
        )
        assert validate_triple(t).passed

    def test_non_hermitian_dirac_fails_named(self):
        t = FiniteSpectralTriple(
            FiniteCStarAlgebra((1, 1)),
            DiagonalRepresentation(np.array([0, 1]), 2),
            np.array([[0.0, 1.0], [0.0, 0.0]]),
        )
        report = validate_triple(t)
        assert not report.passed
        assert "dirac_hermiticity" in report.failures

    def test_unfaithful_diagonal_rep_fails(self):
        t = FiniteSpectralTriple(
            FiniteCStarAlgebra((1, 1)),
            DiagonalRepresentation(np.array([0, 0]), 2),
            np.zeros((2, 2)),
        )
        report = validate_triple(t)
        assert not report.passed
        assert "faithfulness_defect" in report.failures

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValidationError):
            FiniteSpectralTriple(
                FiniteCStarAlgebra((1,)),
                DiagonalRepresentation(np.array([0, 0]), 1),
                np.zeros((3, 3)),
            )


class TestValidateMorphism:
    def test_identity_residuals_zero(self):
        report = validate_morphism(identity_morphism(CANTOR.triples[2]))
        assert report.passed
        assert report.worst == 0.0

    def test_cantor_links(self):
        for link in CANTOR.links:
            report = validate_morphism(link)
            assert report.passed
            assert report.worst <= 1e-12

    def test_ci_links(self):
        chain = AfChain(
            (FiniteCStarAlgebra((1,)), FiniteCStarAlgebra((2,))),
            (
                StarHomomorphism(
                    FiniteCStarAlgebra((1,)),
                    FiniteCStarAlgebra((2,)),
                    matrix=np.array([[1], [0], [0], [1]], dtype=complex),
                ),
            ),
            State(FiniteCStarAlgebra((2,)), (np.eye(2, dtype=complex) / 2,)),
            (5.0,),
        )
        system = ci_system(chain, 1)
        report = validate_morphism(system.links[0])
        assert report.passed
        assert report.worst <= 1e-12

    def test_corrupted_isometry_fails(self):
        link = CANTOR.links[1]
        bad_iso = link.iso.copy()
        bad_iso[0, 0] = 0.5
        from spectral_limits import TripleMorphism

        bad = TripleMorphism(link.source, link.target, link.phi, bad_iso)
        report = validate_morphism(bad)
        assert not report.passed
        assert "isometry" in report.failures


class TestComposeMorphisms:
    def test_identity_neutral(self):
        m = CANTOR.links[0]
        left = compose_morphisms(identity_morphism(m.source), m)
        right = compose_morphisms(m, identity_morphism(m.target))
        for other in (left, right):
            assert np.allclose(other.iso, m.iso)
            assert np.array_equal(other.phi.spectrum_map, m.phi.spectrum_map)

    def test_chain_matches_direct(self):
        # Composing levels 0 -> 1 -> 2 must equal the direct composition
        # computed independently from the theta maps.
        composed = compose_morphisms(CANTOR.links[0], CANTOR.links[1])
        direct_map = np.array(
            [
                SEQ.plus_points(0).index(theta(SEQ, 0, x))
                for x in SEQ.plus_points(2)
            ]
        )
        assert np.array_equal(composed.phi.spectrum_map, direct_map)
        oracle_iso = np.zeros((6, 2))
        oracle_iso[:2, :] = np.eye(2)
        assert np.allclose(composed.iso, oracle_iso, atol=1e-14)
        assert validate_morphism(composed).passed

    def test_endpoint_mismatch(self):
        with pytest.raises(ValidationError):
            compose_morphisms(CANTOR.links[0], CANTOR.links[2])

    def test_composition_of_valid_morphisms_validates(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            system = random_commutative_system(rng, max_dim=32)
            if system.top_level < 2:
                continue
            composed = compose_morphisms(system.links[0], system.links[1])
            report = validate_morphism(composed)
            assert report.passed, report.summary()


class TestCommutatorNorm:
    def test_unit_commutes(self):
        t = CANTOR.triples[3]
        assert commutator_norm(t, t.algebra.unit()) == pytest.approx(0.0, abs=1e-14)

    def test_cantor_indicator_closed_form(self):
        # Closed form: max_n |f(theta_j(x_{n,+})) - f(theta_j(x_{n,-}))| / l_n.
        t = CANTOR.triples[1]
        f = t.algebra.from_point_values([1.0, 0.0])  # indicator of the left piece
        lengths = SEQ.lengths
        oracle = 0.0
        for n in range(2):
            fp = f.point_values[SEQ.plus_points(1).index(theta(SEQ, 1, SEQ.plus_point(n)))].real
            fm = f.point_values[SEQ.plus_points(1).index(theta(SEQ, 1, SEQ.minus_point(n)))].real
            oracle = max(oracle, abs(fp - fm) / lengths[n])
        assert oracle == pytest.approx(3.0)
        assert commutator_norm(t, f) == pytest.approx(oracle, abs=1e-12)

    def test_ci_commutator_stable_across_levels(self):
        from spectral_limits import binary_branching, commutative_af_chain

        chain = commutative_af_chain(binary_branching(4), np.full(16, 1 / 16), [1.0, 2.0, 3.0, 4.0])
        system = ci_system(chain, 4)
        a = system.triples[2].algebra.basis_element(1)
        base = commutator_norm(system.triples[2], a)
        img = a
        for k in range(2, 4):
            img = system.links[k].phi.apply(img)
            assert commutator_norm(system.triples[k + 1], img) == pytest.approx(base, abs=1e-10)

    def test_pullback_contracts(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            system = random_commutative_system(rng, max_dim=32)
            j = 0
            m = embed(system, j, system.top_level)
            for i in range(system.triples[j].algebra.element_dim):
                a = system.triples[j].algebra.basis_element(i)
                low = commutator_norm(system.triples[j], a)
                high = commutator_norm(system.triples[system.top_level], m.phi.apply(a))
                assert low <= high + 1e-9


class TestCheckEven:
    def test_identity_grading_zero_dirac(self):
        t = FiniteSpectralTriple(
            FiniteCStarAlgebra((1,)),
            DiagonalRepresentation(np.array([0]), 1),
            np.zeros((1, 1)),
            grading=np.eye(1),
        )
        report = check_even(t)
        assert report.passed
        assert all(v == 0 for v in report.entries.values())

    def test_cantor_swap_grading_level1(self):
        # The printed swap grading commutes with the printed Dirac operator
        # and anticommutes up to 2 ||D||.
        t = cantor_system(SEQ, 1).triples[1]
        report = check_even(t)
        assert report.entries["grading_involution"] <= 1e-14
        assert report.entries["grading_selfadjoint"] <= 1e-14
        assert report.entries["grading_dirac_commutator"] <= 1e-14
        assert report.entries["grading_dirac_anticommutator"] == pytest.approx(6.0, abs=1e-12)
        assert operator_norm(t.dirac) == pytest.approx(3.0, abs=1e-12)

    def test_sign_grading_anticommutes(self):
        t = FiniteSpectralTriple(
            FiniteCStarAlgebra((1,)),
            DiagonalRepresentation(np.array([0, 0]), 1),
            np.array([[0.0, 3.0], [3.0, 0.0]]),
            grading=np.diag([1.0, -1.0]),
        )
        report = check_even(t)
        assert report.entries["grading_dirac_anticommutator"] <= 1e-14
        assert report.entries["grading_dirac_commutator"] == pytest.approx(6.0, abs=1e-12)

    def test_missing_grading(self):
        t = cantor_system(SEQ, 1, with_grading=False).triples[1]
        with pytest.raises(ValidationError):
            check_even(t)
