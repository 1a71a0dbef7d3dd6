import numpy as np
import pytest

from qcb.capacities import (
    CLOSED_FORM,
    CONCAVE_CERTIFIED,
    coherent_info,
    ea_capacity,
    erasure_capacities,
    holevo_cap_heuristic,
    mutual_info_of_channel,
    private_oneshot_objective,
    purify,
)
from qcb.channels import (
    apply_on,
    completely_depolarizing,
    erasure_channel,
    identity_channel,
    random_channel,
    unitary_channel,
)
from qcb.ensembles import ensemble, uniform_ensemble
from qcb.entropic import (
    DensityMatrix,
    cmi,
    entropy,
    maximally_mixed,
    mutual_information,
    pure_density,
    random_density,
)
from qcb.linalg import Rng, SubsystemShape, hermitian_eig, random_isometry

A2 = SubsystemShape.of(A=2)
A3 = SubsystemShape.of(A=3)


def full_rank_purification(rho: DensityMatrix, rng: Rng) -> DensityMatrix:
    """Second purification route: full-dimension reference with a random
    rotation on the reference side."""
    w, u = hermitian_eig(rho.mat)
    d = rho.dim
    vec = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if w[i] > 0:
            vec += np.sqrt(w[i]) * np.kron(u[:, i], np.eye(d)[:, i])
    ur = random_isometry(d, d, rng)
    vec = np.kron(np.eye(d), ur) @ vec
    vec /= np.linalg.norm(vec)
    return DensityMatrix(np.outer(vec, vec.conj()), SubsystemShape(("A", "R"), (d, d)))


class TestChannelMutualInformation:
    def test_constant_channel(self):
        rho = random_density(A2, Rng(1))
        assert abs(mutual_info_of_channel(completely_depolarizing(2), rho)) < 1e-9

    def test_identity_on_maximally_mixed(self):
        assert abs(
            mutual_info_of_channel(identity_channel(2), maximally_mixed(A2)) - 2.0
        ) < 1e-9

    def test_matches_conditional_form_with_empty_conditioner(self):
        rng = Rng(3)
        ch = random_channel(2, 3, 2, rng)
        rho = random_density(A2, rng)
        pure = purify(rho)
        omega = apply_on(ch, pure, "A")
        via_cmi = cmi(omega, ("A",), ("R",))
        assert abs(mutual_info_of_channel(ch, rho) - via_cmi) < 1e-10

    def test_purification_independence(self):
        rng = Rng(5)
        for t in range(10):
            sub = rng.child(t)
            ch = random_channel(2, 2, 2, sub)
            rho = random_density(A2, sub)
            v1 = mutual_info_of_channel(ch, rho)
            pure2 = full_rank_purification(rho, sub)
            omega = apply_on(ch, pure2, "A")
            v2 = mutual_information(omega, ("A",), ("R",))
            assert abs(v1 - v2) < 1e-9

    def test_data_processing_cap(self):
        rng = Rng(7)
        for t in range(10):
            sub = rng.child(t)
            ch = random_channel(2, 3, 2, sub)
            rho = random_density(A2, sub)
            assert mutual_info_of_channel(ch, rho) <= 2.0 * entropy(rho) + 1e-9


class TestCoherentInformation:
    def test_isometric_channel_gives_input_entropy(self):
        u = random_isometry(2, 2, Rng(9))
        rho = random_density(A2, Rng(11))
        assert abs(coherent_info(unitary_channel(u), rho) - entropy(rho)) < 1e-9

    def test_constant_channel_gives_negative_input_entropy(self):
        rho = random_density(A2, Rng(13))
        ch = completely_depolarizing(2)
        got = coherent_info(ch, rho)
        dual = mutual_info_of_channel(ch, rho) - entropy(rho)
        assert abs(got - dual) < 1e-9
        assert abs(got + entropy(rho)) < 1e-9

    def test_erasure_half_on_maximally_mixed(self):
        assert abs(coherent_info(erasure_channel(2, 0.5), maximally_mixed(A2))) < 1e-9

    def test_dual_formula_agreement(self):
        rng = Rng(17)
        for t in range(15):
            sub = rng.child(t)
            ch = random_channel(2, 3, 2, sub)
            rho = random_density(A2, sub)
            direct = coherent_info(ch, rho)
            dual = mutual_info_of_channel(ch, rho) - entropy(rho)
            assert abs(direct - dual) < 1e-9


class TestEaCapacity:
    def test_identity_qubit(self):
        cv = ea_capacity(identity_channel(2), tol=1e-7)
        assert cv.exactness == CONCAVE_CERTIFIED
        assert abs(cv.value - 2.0) < 1e-6

    def test_constant_channel(self):
        cv = ea_capacity(completely_depolarizing(2), tol=1e-7)
        assert abs(cv.value) < 1e-6

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
    def test_erasure_matches_maximally_mixed_value(self, d, p):
        ch = erasure_channel(d, p)
        shape = SubsystemShape(("A",), (d,))
        cv = ea_capacity(ch, tol=1e-7)
        direct = mutual_info_of_channel(ch, maximally_mixed(shape))
        assert abs(cv.value - direct) < 1e-6
        assert abs(direct - 2.0 * (1.0 - p) * np.log2(d)) < 1e-9

    def test_random_channel_certified(self):
        cv = ea_capacity(random_channel(2, 2, 2, Rng(19)), tol=1e-5)
        assert cv.exactness == CONCAVE_CERTIFIED
        assert cv.value >= -1e-9

    def test_tol_validation(self):
        with pytest.raises(ValueError):
            ea_capacity(identity_channel(2), tol=0.0)

    def test_iteration_cap_falls_back_to_heuristic_tag(self):
        from qcb.capacities import HEURISTIC

        ch = random_channel(2, 2, 2, Rng(20))
        cv = ea_capacity(ch, tol=1e-12, max_iters=0)
        assert cv.exactness == HEURISTIC
        certified = ea_capacity(ch, tol=1e-6)
        assert cv.value <= certified.value + 1e-6


class TestHolevoHeuristic:
    def test_identity_reaches_log_dim(self):
        cv = holevo_cap_heuristic(identity_channel(3), restarts=4, seed=2)
        assert abs(cv.value - np.log2(3)) < 1e-6
        assert cv.value <= np.log2(3) + 1e-9

    def test_constant_channel_zero(self):
        cv = holevo_cap_heuristic(completely_depolarizing(2), restarts=2, seed=3)
        assert abs(cv.value) < 1e-9

    @pytest.mark.parametrize("d,p", [(2, 0.25), (3, 0.5), (4, 0.25)])
    def test_erasure_window(self, d, p):
        cv = holevo_cap_heuristic(erasure_channel(d, p), restarts=32, seed=1)
        want = (1.0 - p) * np.log2(d)
        assert want - 0.02 <= cv.value <= want + 1e-9

    def test_value_capped_by_input_dimension(self):
        cv = holevo_cap_heuristic(random_channel(2, 3, 2, Rng(23)), restarts=4, seed=4)
        assert cv.value <= 1.0 + 1e-9

    def test_m_max_validation(self):
        with pytest.raises(ValueError):
            holevo_cap_heuristic(identity_channel(3), m_max=8)


class TestPrivateOneShot:
    def test_isometric_channel_orthogonal_ensemble(self):
        u = random_isometry(3, 3, Rng(29))
        e = uniform_ensemble(
            [pure_density(np.eye(3)[:, i], A3) for i in range(3)]
        )
        got = private_oneshot_objective(unitary_channel(u), e)
        assert abs(got - np.log2(3)) < 1e-9

    def test_identical_states_give_zero(self):
        rho = random_density(A2, Rng(31))
        e = ensemble([(0.4, rho), (0.6, rho)])
        ch = random_channel(2, 2, 2, Rng(37))
        assert abs(private_oneshot_objective(ch, e)) < 1e-9

    @pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.75])
    def test_erasure_orthogonal_ensemble(self, p):
        d = 2
        e = uniform_ensemble([pure_density(np.eye(d)[:, i], A2) for i in range(d)])
        got = private_oneshot_objective(erasure_channel(d, p), e)
        assert abs(got - (1.0 - 2.0 * p) * np.log2(d)) < 1e-9


class TestErasureCapacities:
    def test_p_zero(self):
        table = erasure_capacities(3, 0.0)
        assert abs(table["classical"].value - np.log2(3)) < 1e-15
        assert abs(table["quantum"].value - np.log2(3)) < 1e-15

    def test_p_one(self):
        table = erasure_capacities(3, 1.0)
        assert all(abs(v.value) < 1e-15 for v in table.values())

    def test_reference_point(self):
        table = erasure_capacities(4, 0.25)
        assert abs(table["classical"].value - 1.5) < 1e-12
        assert abs(table["holevo-cap"].value - 1.5) < 1e-12
        assert abs(table["quantum"].value - 1.0) < 1e-12
        assert abs(table["private"].value - 1.0) < 1e-12
        assert all(v.exactness == CLOSED_FORM for v in table.values())

    def test_quantum_zero_branch(self):
        assert erasure_capacities(2, 0.6)["quantum"].value == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            erasure_capacities(1, 0.5)
        with pytest.raises(ValueError):
            erasure_capacities(2, -0.1)
