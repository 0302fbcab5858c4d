"""
Unit tests for the qubit model and the branch-wise Hadamard machine.
"""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from constants import NORM_TOLERANCE
from numericcore import NumericError, StateVector
from qubitmodel import (
    BasisLabel,
    Branch,
    BranchLabel,
    EnsembleParam,
    FormalState,
    FormalStateError,
    InvalidQubitError,
    QubitSpec,
    UnlabeledSubsystemError,
    apply_machine,
    bloch_coordinates,
    bloch_vectors,
    concretize,
    concretize_many,
    desired_action,
    ensemble_deviation,
    ensemble_deviations,
    ensemble_state,
    hadamard_matrix,
    in_ensemble,
    orthogonal_complement,
    ray_defect,
    universality_defect,
)

SQRT_HALF = math.sqrt(0.5)
INV_SQRT3 = 1 / math.sqrt(3)

angles = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)


@st.composite
def qubits(draw):
    theta = draw(st.floats(min_value=0.0, max_value=math.pi))
    phi, chi = draw(angles), draw(angles)
    return QubitSpec(math.cos(theta / 2) * cmath.exp(1j * chi),
                     math.sin(theta / 2) * cmath.exp(1j * (chi + phi)))


def assert_vector(actual, expected):
    np.testing.assert_allclose(actual, expected, atol=1e-12)


def random_columns(count, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(2, count)) + 1j * rng.normal(size=(2, count))
    norms = np.hypot(np.abs(a), np.abs(b))
    return a / norms, b / norms


def resource_template(psi):
    bob = [BranchLabel(Branch.ZERO), BranchLabel(Branch.PSI, psi),
           BranchLabel(Branch.ONE), BranchLabel(Branch.PSI_BAR, psi)]
    return FormalState.of(*((0.5, [BasisLabel(k, 4), label]) for k, label in enumerate(bob)))


class TestQubitSpec:
    """Test cases for QubitSpec."""

    def test_components(self):
        """Test the real and imaginary parts of a and b."""
        psi = QubitSpec(0.6 + 0.0j, 0.0 + 0.8j)
        assert (psi.alpha_a, psi.beta_a, psi.alpha_b, psi.beta_b) == (0.6, 0.0, 0.0, 0.8)

    def test_rejects_unnormalized(self):
        """Test that |a|^2 + |b|^2 must be one."""
        with pytest.raises(InvalidQubitError, match="expected 1"):
            QubitSpec(1.0, 1.0)

    def test_rejects_nan(self):
        """Test that NaN amplitudes are refused."""
        with pytest.raises(ValueError):
            QubitSpec(float("nan"), 0.0)

    def test_normalized(self):
        """Test that normalized rescales its input."""
        psi = QubitSpec.normalized(3.0, 4.0j)
        assert psi.a == pytest.approx(0.6)
        assert psi.b == pytest.approx(0.8j)

    def test_boundary_states_are_flagged(self):
        """Test that basis states are not generic."""
        assert not QubitSpec(1.0, 0.0).is_generic
        assert not QubitSpec(0.0, 1j).is_generic
        assert QubitSpec(0.6, 0.8).is_generic


class TestOrthogonalComplement:
    """Test cases for orthogonal_complement."""

    @pytest.mark.parametrize(
        "psi, expected",
        [
            ((1.0, 0.0), (0.0, -1.0)),
            ((0.6, 0.8), (0.8, -0.6)),
            (((1 + 1j) * INV_SQRT3, INV_SQRT3), (INV_SQRT3, -(1 - 1j) * INV_SQRT3)),
        ],
    )
    def test_examples(self, psi, expected):
        """Test (a, b) -> (b*, -a*) on known qubits."""
        complement = orthogonal_complement(QubitSpec(*psi))
        assert_vector(complement.vector, expected)

    @given(qubits())
    def test_is_orthogonal(self, psi):
        """Test that the complement is orthogonal to psi."""
        assert abs(np.vdot(orthogonal_complement(psi).vector, psi.vector)) <= NORM_TOLERANCE

    @given(qubits())
    def test_twice_gives_minus_psi(self, psi):
        """Test that applying the complement twice gives -psi."""
        twice = orthogonal_complement(orthogonal_complement(psi))
        assert abs(abs(np.vdot(psi.vector, twice.vector)) - 1.0) <= NORM_TOLERANCE
        assert_vector(twice.vector, -psi.vector)


class TestHadamardMatrix:
    """Test cases for the linear Hadamard gate."""

    def test_action_on_basis(self):
        """Test H|0> and H|1>."""
        h = hadamard_matrix()
        assert_vector(h @ [1, 0], [SQRT_HALF, SQRT_HALF])
        assert_vector(h @ [0, 1], [SQRT_HALF, -SQRT_HALF])

    def test_involutory_and_unitary(self):
        """Test H^2 = I and H^dagger H = I."""
        h = hadamard_matrix()
        assert_vector(h @ h, np.eye(2))
        assert_vector(h.conj().T @ h, np.eye(2))


class TestDesiredAction:
    """Test cases for the machine's branch map."""

    def test_basis_branches(self):
        """Test that basis branches follow the linear gate."""
        assert_vector(desired_action(BranchLabel(Branch.ZERO)).amplitudes, [SQRT_HALF, SQRT_HALF])
        assert_vector(desired_action(BranchLabel(Branch.ONE)).amplitudes, [SQRT_HALF, -SQRT_HALF])

    def test_psi_collapses_to_zero(self):
        """Test that |+> goes to |0>."""
        psi = QubitSpec(SQRT_HALF, SQRT_HALF)
        assert_vector(desired_action(BranchLabel(Branch.PSI, psi)).amplitudes, [1, 0])

    def test_psi_with_imaginary_b(self):
        """Test the branch output for b = i/sqrt(2)."""
        psi = QubitSpec(SQRT_HALF, 1j * SQRT_HALF)
        output = desired_action(BranchLabel(Branch.PSI, psi))
        assert_vector(output.amplitudes, [(1 - 1j) / 2, (1j - 1) / 2])
        assert not output.renormalized

    def test_psi_bar_of_zero(self):
        """Test the complement branch of |0>."""
        psi = QubitSpec(1.0, 0.0)
        assert_vector(desired_action(BranchLabel(Branch.PSI_BAR, psi)).amplitudes, [SQRT_HALF, SQRT_HALF])

    def test_psi_label_needs_qubit(self):
        """Test that a PSI label without its qubit is refused."""
        with pytest.raises(FormalStateError):
            BranchLabel(Branch.PSI)

    @given(qubits())
    def test_outputs_are_normalized_and_orthogonal(self, psi):
        """Test that the PSI and PSI_BAR outputs form an orthonormal pair."""
        plus = desired_action(BranchLabel(Branch.PSI, psi))
        minus = desired_action(BranchLabel(Branch.PSI_BAR, psi))
        assert not plus.renormalized and not minus.renormalized
        assert abs(plus.inner(minus)) <= NORM_TOLERANCE


class TestUniversalityDefect:
    """Test cases for universality_defect and in_ensemble."""

    def test_ensemble_state_has_no_defect(self):
        """Test that an ensemble state has no defect."""
        assert universality_defect(ensemble_state(EnsembleParam(0.5))) <= NORM_TOLERANCE

    def test_plus_state_has_no_defect(self):
        """Test that |+> has no defect."""
        assert universality_defect(QubitSpec(SQRT_HALF, SQRT_HALF)) <= NORM_TOLERANCE

    def test_imaginary_b(self):
        """Test the defect at b = i/sqrt(2)."""
        psi = QubitSpec(SQRT_HALF, 1j * SQRT_HALF)
        assert universality_defect(psi) == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_global_phase_leaves_the_ensemble(self):
        """Test that a global phase of i moves a state off the ensemble."""
        psi = ensemble_state(EnsembleParam(0.3))
        rotated = QubitSpec(1j * psi.a, 1j * psi.b)
        assert not in_ensemble(rotated)
        assert universality_defect(rotated) > 0.1

    def test_ray_defect_imaginary_b(self):
        """Test the phase-minimized defect at b = i/sqrt(2)."""
        psi = QubitSpec(SQRT_HALF, 1j * SQRT_HALF)
        assert ray_defect(psi) == pytest.approx(math.sqrt(2 - math.sqrt(2)), abs=1e-12)

    @given(qubits())
    def test_ray_defect_never_exceeds_raw_defect(self, psi):
        """Test that minimizing over a phase never increases the defect."""
        assert ray_defect(psi) <= universality_defect(psi) + 1e-12

    @pytest.mark.parametrize(
        "psi, expected",
        [
            (((1 + 1j) * INV_SQRT3, INV_SQRT3), True),
            ((SQRT_HALF, 1j * SQRT_HALF), False),
            ((0.6, 0.8), False),
        ],
    )
    def test_in_ensemble_examples(self, psi, expected):
        """Test ensemble membership of known qubits."""
        assert in_ensemble(QubitSpec(*psi), 1e-12) is expected

    @given(qubits())
    @settings(max_examples=300)
    def test_zero_defect_iff_in_ensemble(self, psi):
        """Test that the defect vanishes exactly on the ensemble."""
        defect = universality_defect(psi)
        if in_ensemble(psi, NORM_TOLERANCE / 10):
            assert defect <= NORM_TOLERANCE
        if not in_ensemble(psi, NORM_TOLERANCE):
            assert defect > NORM_TOLERANCE

    def test_zero_defect_iff_in_ensemble_on_grid(self):
        """Test the same equivalence on a Bloch sphere grid."""
        for theta in np.linspace(0, math.pi, 25):
            for phi in np.linspace(0, 2 * math.pi, 24, endpoint=False):
                psi = QubitSpec(math.cos(theta / 2), math.sin(theta / 2) * cmath.exp(1j * phi))
                zero_defect = universality_defect(psi) <= 1e-9
                assert zero_defect == in_ensemble(psi, 1e-9)

    @pytest.mark.parametrize("delta", [1e-3, 1e-6, 1e-9])
    def test_ensemble_deviation_is_linear_in_the_offset(self, delta):
        """Test that moving b off the real axis by delta gives deviation delta."""
        psi = ensemble_state(EnsembleParam(0.3))
        assert ensemble_deviation(psi) == 0.0
        moved = QubitSpec.normalized(psi.a, psi.b + 1j * delta)
        assert ensemble_deviation(moved) == pytest.approx(delta, rel=1e-6)

    def test_ensemble_deviations_by_row(self):
        """Test that ensemble_deviations takes the larger of the two indicators."""
        a = np.array([0.5 + 0.5j, 0.8, 0.6])
        b = np.array([0.5, 0.2j, 0.5 - 0.1j])
        np.testing.assert_allclose(ensemble_deviations(a, b), [0.0, 0.8, 0.1])


class TestEnsemble:
    """Test cases for the consistent ensemble."""

    def test_beta_one_is_zero_up_to_phase(self):
        """Test that beta = 1 gives i|0>."""
        assert_vector(ensemble_state(EnsembleParam(1.0)).vector, [1j, 0])

    def test_beta_zero_is_plus(self):
        """Test that beta = 0 gives |+>."""
        assert_vector(ensemble_state(EnsembleParam(0.0)).vector, [SQRT_HALF, SQRT_HALF])

    def test_beta_inverse_sqrt3(self):
        """Test beta = 1/sqrt(3)."""
        psi = ensemble_state(EnsembleParam(INV_SQRT3))
        assert_vector(psi.vector, [(1 + 1j) * INV_SQRT3, INV_SQRT3])

    def test_negative_sign(self):
        """Test the negative branch of alpha."""
        psi = ensemble_state(EnsembleParam(0.0, -1))
        assert_vector(psi.vector, [-SQRT_HALF, -SQRT_HALF])

    @pytest.mark.parametrize("beta", [1.0001, -2.0, float("nan")])
    def test_rejects_beta_out_of_range(self, beta):
        """Test that beta must lie in [-1, 1]."""
        with pytest.raises(InvalidQubitError):
            EnsembleParam(beta)

    def test_rejects_bad_sign(self):
        """Test that the sign must be +1 or -1."""
        with pytest.raises(InvalidQubitError):
            EnsembleParam(0.5, 0)

    @given(st.floats(min_value=-1.0, max_value=1.0), st.sampled_from([1, -1]))
    def test_normalization_and_membership(self, beta, sign):
        """Test that every chart point is normalized and in the ensemble."""
        param = EnsembleParam(beta, sign)
        assert 2 * param.alpha ** 2 + beta ** 2 == pytest.approx(1.0, abs=1e-15)
        psi = ensemble_state(param)
        assert in_ensemble(psi)
        assert universality_defect(psi) <= NORM_TOLERANCE


class TestBlochCoordinates:
    """Test cases for bloch_coordinates."""

    @pytest.mark.parametrize(
        "psi, expected",
        [
            ((1.0, 0.0), (0, 0, 1)),
            ((SQRT_HALF, SQRT_HALF), (1, 0, 0)),
            (((1 + 1j) * INV_SQRT3, INV_SQRT3), (2 / 3, -2 / 3, 1 / 3)),
        ],
    )
    def test_examples(self, psi, expected):
        """Test the Bloch vectors of known qubits."""
        assert bloch_coordinates(QubitSpec(*psi)) == pytest.approx(expected, abs=1e-12)

    @given(qubits())
    def test_on_unit_sphere(self, psi):
        """Test that pure states sit on the unit sphere."""
        x, y, z = bloch_coordinates(psi)
        assert x * x + y * y + z * z == pytest.approx(1.0, abs=1e-12)

    def test_ensemble_and_complement_planes(self):
        """Test that the ensemble lies on x + z = 1 and its complements on x + z = -1."""
        for beta in np.round(np.arange(-1.0, 1.0001, 0.1), 10):
            for sign in (1, -1):
                psi = ensemble_state(EnsembleParam(float(beta), sign))
                x, _, z = bloch_coordinates(psi)
                assert x + z == pytest.approx(1.0, abs=1e-12)
                x, _, z = bloch_coordinates(orthogonal_complement(psi))
                assert x + z == pytest.approx(-1.0, abs=1e-12)

    def test_rows_match_single_qubits(self):
        """Test that bloch_vectors agrees with bloch_coordinates row by row."""
        a, b = random_columns(40, seed=4)
        for row, (ai, bi) in zip(bloch_vectors(a, b), zip(a, b)):
            assert tuple(row) == pytest.approx(bloch_coordinates(QubitSpec(ai, bi)), abs=1e-15)


class TestFormalStates:
    """Test cases for FormalState, concretize and apply_machine."""

    def test_single_branch(self):
        """Test a one-term formal state."""
        state = concretize(FormalState.of((1.0, [BranchLabel(Branch.ZERO)])))
        assert_vector(state.amplitudes, [1, 0])

    def test_four_dimensional_resource(self):
        """Test a four-branch resource with a 4-dimensional register."""
        state = concretize(resource_template(QubitSpec(0.6, 0.8)))
        assert state.dims == (4, 2)
        assert state.amplitudes.size == 8
        assert not state.renormalized

    def test_renormalization_is_recorded(self):
        """Test that the formal norm survives renormalization."""
        formal = FormalState.of((1.0, [BranchLabel(Branch.ZERO)]), (1.0, [BranchLabel(Branch.ONE)]))
        state = concretize(formal)
        assert state.renormalized
        assert state.formal_norm == pytest.approx(math.sqrt(2))

    def test_empty_formal_state(self):
        """Test that an empty sum cannot be evaluated."""
        with pytest.raises(FormalStateError):
            concretize(FormalState(()))

    def test_mixed_qubits_are_rejected(self):
        """Test that all labels must carry the same qubit."""
        with pytest.raises(FormalStateError, match="different qubits"):
            FormalState.of(
                (SQRT_HALF, [BranchLabel(Branch.PSI, QubitSpec(1.0, 0.0))]),
                (SQRT_HALF, [BranchLabel(Branch.PSI, QubitSpec(0.0, 1.0))]),
            )

    def test_mismatched_dimensions_are_rejected(self):
        """Test that every term must have the same subsystem dimensions."""
        with pytest.raises(FormalStateError, match="dimensions"):
            FormalState.of((1.0, [BasisLabel(0, 4)]), (1.0, [BasisLabel(0, 2)]))

    def test_machine_on_basis_subsystem_is_refused(self):
        """Test that the machine only acts on qubit-labelled subsystems."""
        formal = FormalState.of((1.0, [BasisLabel(0, 4), BranchLabel(Branch.ZERO)]))
        with pytest.raises(UnlabeledSubsystemError):
            apply_machine(formal, 0)
        with pytest.raises(UnlabeledSubsystemError):
            apply_machine(formal, 5)

    def test_machine_expands_each_branch(self):
        """Test that each branch is replaced by its expansion."""
        formal = FormalState.of((1.0, [BasisLabel(0, 4), BranchLabel(Branch.ZERO)]))
        applied = apply_machine(formal, 1)
        assert len(applied.terms) == 2
        assert [t.coefficient for t in applied.terms] == pytest.approx([SQRT_HALF, SQRT_HALF])
        assert_vector(concretize(applied).amplitudes, [SQRT_HALF, SQRT_HALF, 0, 0, 0, 0, 0, 0])

    def test_machine_matches_linear_gate_on_basis_states(self):
        """Test that the machine agrees with H on |0> and |1>."""
        for branch, vector in ((Branch.ZERO, [1, 0]), (Branch.ONE, [0, 1])):
            machine = desired_action(BranchLabel(branch)).amplitudes
            assert_vector(machine, hadamard_matrix() @ vector)

    def test_scaled(self):
        """Test that scaled multiplies every coefficient."""
        formal = FormalState.of((1.0, [BranchLabel(Branch.ZERO)])).scaled(2.0)
        assert formal.terms[0].coefficient == 2.0

    def test_basis_label_ket(self):
        """Test that BasisLabel produces the computational basis ket."""
        np.testing.assert_array_equal(BasisLabel(2, 4).ket().amplitudes, StateVector.basis(2, 4).amplitudes)


class TestConcretizeMany:
    """Test cases for concretize_many."""

    def test_rows_match_concretize(self):
        """Test that each row equals the state built for its own qubit."""
        a, b = random_columns(30, seed=9)
        template = apply_machine(resource_template(QubitSpec(1.0, 0.0)), 1)
        block = concretize_many(template, a, b)
        assert block.shape == (30, 8)
        for row, (ai, bi) in zip(block, zip(a, b)):
            expected = concretize(apply_machine(resource_template(QubitSpec(ai, bi)), 1))
            assert_vector(row, expected.amplitudes)

    def test_rows_are_normalized(self):
        """Test that every row has unit norm."""
        a, b = random_columns(10, seed=10)
        block = concretize_many(resource_template(QubitSpec(1.0, 0.0)), a, b)
        np.testing.assert_allclose(np.linalg.norm(block, axis=1), 1.0, atol=1e-14)

    def test_basis_only_template_ignores_the_qubit(self):
        """Test that templates without qubit labels repeat one state."""
        formal = FormalState.of((1.0, [BasisLabel(1, 2)]))
        block = concretize_many(formal, np.array([1.0, 0.6]), np.array([0.0, 0.8]))
        assert_vector(block, [[0, 1], [0, 1]])

    def test_zero_row_is_refused(self):
        """Test that a row summing to zero cannot be normalized."""
        formal = FormalState.of(
            (1.0, [BranchLabel(Branch.PSI, QubitSpec(1.0, 0.0))]),
            (-1.0, [BranchLabel(Branch.ZERO)]),
        )
        with pytest.raises(NumericError, match="zero vector"):
            concretize_many(formal, np.array([1.0]), np.array([0.0]))

    def test_columns_must_have_equal_length(self):
        """Test that a and b must have the same number of entries."""
        with pytest.raises(FormalStateError, match="differ in length"):
            concretize_many(resource_template(QubitSpec(1.0, 0.0)), np.ones(3), np.ones(2))

    def test_empty_template_is_refused(self):
        """Test that an empty formal state cannot be evaluated."""
        with pytest.raises(FormalStateError):
            concretize_many(FormalState(()), np.ones(1), np.zeros(1))
