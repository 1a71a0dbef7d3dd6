import math

import numpy as np
import pytest

from qcb.bounds import (
    EPS_ANALYTIC,
    EPS_INTERVAL,
    check_almost_convexity,
    check_auxiliary,
    check_ensemble_continuity,
    check_prop1,
    check_prop2,
    check_prop3,
    check_prop4,
    check_prop5_erasure,
    fuzz_prop1,
    is_qc_state,
    qc_block_deviation,
    rhs_ea_capacity,
    rhs_prop1,
    rhs_prop2,
    rhs_prop3,
    rhs_prop4,
    rhs_prop5,
    rhs_prop5_log,
    tightness_ratio,
    tightness_rows,
    _qc_extension,
)
from qcb.channels import erasure_channel, random_channel, unitary_channel
from qcb.ensembles import ensemble, random_ensemble, uniform_ensemble
from qcb.entropic import g, pure_density, random_density
from qcb.linalg import ContractError, Rng, SubsystemShape, random_isometry

ABCE = SubsystemShape.of(A=2, B=2, C=2, E=2)
PARTS1 = (("A",), ("B",), ("C",), ("E",))


class TestRhsFormulas:
    def test_prop1_reference_value(self):
        # 2*1*log2(2) + 2*g(1) = 2 + 4 = 6 bits
        assert abs(rhs_prop1(2, 1.0) - 6.0) < 1e-12

    def test_prop1_zero_distance(self):
        assert rhs_prop1(5, 0.0) == 0.0

    def test_prop1_qc_halves_log_term(self):
        # 0.5*log2(4) + 2*g(0.5)
        want = 1.0 + 2.0 * g(0.5)
        assert abs(rhs_prop1(4, 0.5, qc=True) - want) < 1e-12

    def test_prop1_concave_halves_g_term(self):
        want = 2.0 * 0.5 * 2.0 + g(0.5)
        assert abs(rhs_prop1(4, 0.5, concave=True) - want) < 1e-12

    def test_prop2_flags(self):
        eps = 0.3
        base = rhs_prop2(4, eps)
        assert abs(base - (eps * 2.0 + eps + 2.0 * g(eps))) < 1e-12
        assert abs(rhs_prop2(4, eps, same_channel=True) - (eps * 2.0 + 2.0 * g(eps))) < 1e-12
        assert abs(rhs_prop2(4, eps, same_outputs=True) - (eps * 2.0 + eps + g(eps))) < 1e-12

    def test_prop3_flags(self):
        eps = 0.2
        assert abs(rhs_prop3(2, eps) - (2 * eps + 2 * eps + 2 * g(eps))) < 1e-12
        assert abs(rhs_prop3(2, eps, same_channel=True) - (2 * eps + 2 * g(eps))) < 1e-12

    def test_prop4_formula(self):
        eps = 0.1
        want = 2 * 2 * (eps * math.log2(4.0) + g(eps))
        assert abs(rhs_prop4(2, 2.0, eps) - want) < 1e-12

    def test_prop5_kinds(self):
        eps = 0.1
        assert abs(rhs_prop5("quantum", 2, eps) - (2 * eps + 2 * eps + 2 * g(eps))) < 1e-12
        assert abs(rhs_prop5("holevo-cap", 2, eps) - (eps + eps + 2 * g(eps))) < 1e-12
        # the private kind is exactly twice the quantum kind
        assert abs(rhs_prop5("private", 2, eps) - 2.0 * rhs_prop5("quantum", 2, eps)) < 1e-12
        assert rhs_prop5("classical", 2, eps) == rhs_prop5("quantum", 2, eps)

    def test_prop5_zero_distance_all_kinds(self):
        for kind in ("holevo-cap", "classical", "quantum", "private-oneshot", "private"):
            assert rhs_prop5(kind, 7, 0.0) == 0.0

    def test_prop5_log_domain_matches(self):
        assert abs(rhs_prop5("quantum", 8, 0.2) - rhs_prop5_log("quantum", 3.0, 0.2)) < 1e-12

    def test_prop5_unknown_kind(self):
        with pytest.raises(ValueError):
            rhs_prop5("bogus", 2, 0.1)

    def test_ea_rhs(self):
        eps = 0.25
        assert abs(rhs_ea_capacity(4, eps) - (2 * eps * 2 + 2 * g(eps))) < 1e-12

    def test_all_rhs_monotone_in_distance(self):
        grid = np.linspace(0.0, 1.5, 40)
        families = [
            lambda e: rhs_prop1(3, e),
            lambda e: rhs_prop1(3, e, qc=True),
            lambda e: rhs_prop2(3, e),
            lambda e: rhs_prop2(3, e, same_channel=True, same_outputs=True),
            lambda e: rhs_prop3(3, e),
            lambda e: rhs_prop4(2, 3.0, e),
            lambda e: rhs_prop5("quantum", 3, e),
            lambda e: rhs_prop5("private", 3, e),
            lambda e: rhs_ea_capacity(3, e),
        ]
        for f in families:
            vals = [f(e) for e in grid]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            rhs_prop1(0, 0.1)
        with pytest.raises(ValueError):
            rhs_prop1(2, -0.1)
        with pytest.raises(ValueError):
            rhs_prop4(0, 2.0, 0.1)


class TestProp1Checker:
    def test_zero_distance_collapse(self):
        rho = random_density(ABCE, Rng(1))
        rep = check_prop1(rho, rho, PARTS1)
        assert rep.lhs == 0.0
        assert rep.eps == 0.0
        assert rep.rhs == 0.0
        assert not rep.violated
        assert abs(rep.margin - rep.rhs) < 1e-15

    def test_random_pair_holds(self):
        rng = Rng(2)
        rho = random_density(ABCE, rng)
        sigma = random_density(ABCE, rng)
        rep = check_prop1(rho, sigma, PARTS1)
        assert not rep.violated
        assert rep.d == 4  # generic AE marginals have full joint support
        assert rep.eps_provenance == "exact"

    def test_qc_flag_requires_block_structure(self):
        rng = Rng(3)
        rho = random_density(ABCE, rng)
        sigma = random_density(ABCE, rng)
        with pytest.raises(ContractError):
            check_prop1(rho, sigma, PARTS1, qc=True)

    def test_qc_instances_pass_halved_bound(self):
        rng = Rng(4)
        for t in range(10):
            sub = rng.child(t)
            rho = _qc_extension(ABCE, ("A", "E"), ("B", "C"), sub)
            sigma = _qc_extension(ABCE, ("A", "E"), ("B", "C"), sub)
            rep = check_prop1(rho, sigma, PARTS1, qc=True, trial=t)
            assert not rep.violated
            assert rep.bound == "prop1qc"

    def test_qc_detection_helpers(self):
        rng = Rng(5)
        qc = _qc_extension(ABCE, ("A", "E"), ("B", "C"), rng)
        assert is_qc_state(qc, ("A", "E"), ("B", "C"))
        generic = random_density(ABCE, rng)
        assert qc_block_deviation(generic, ("A", "E"), ("B", "C")) > 1e-3


class TestProp2Checker:
    def test_zero_distance_collapse(self):
        ch = random_channel(2, 2, 2, Rng(6))
        e = random_ensemble(SubsystemShape.of(A=2), 3, Rng(7))
        rep = check_prop2(ch, ch, e, e, same_channel=True)
        assert rep.lhs < 1e-12
        assert rep.eps == 0.0
        assert not rep.violated

    def test_same_outputs_structure_enforced(self):
        rng = Rng(8)
        shape = SubsystemShape.of(A=2)
        phi = random_channel(2, 2, 2, rng)
        psi = random_channel(2, 2, 2, rng)
        e = random_ensemble(shape, 2, rng)
        f = random_ensemble(shape, 2, rng)
        with pytest.raises(ContractError):
            check_prop2(phi, psi, e, f, same_outputs=True)

    def test_same_outputs_through_rotated_ensembles(self):
        rng = Rng(9)
        shape = SubsystemShape.of(A=2)
        phi = random_channel(2, 3, 2, rng)
        u = random_isometry(2, 2, rng)
        rot = unitary_channel(u)
        # psi = phi after undoing the rotation applied to the states
        psi_kraus = [k @ u.conj().T for k in phi.kraus]
        from qcb.channels import from_kraus
        from qcb.entropic import DensityMatrix

        psi = from_kraus(psi_kraus)
        e = random_ensemble(shape, 3, rng)
        f = ensemble(
            (p, DensityMatrix(u @ s.mat @ u.conj().T, shape)) for p, s in e.items
        )
        rep = check_prop2(phi, psi, e, f, same_outputs=True, seed=5)
        assert not rep.violated

    def test_erasure_reference_lhs(self):
        # closed-form capacities force chi = (1-p) log2(d) on the basis
        # ensemble, so the left side at (1/2 - x, 1/2) is exactly x*log2(d)
        x = 0.125
        d = 4
        shape = SubsystemShape(("A",), (d,))
        basis = uniform_ensemble(
            [pure_density(np.eye(d)[:, i], shape) for i in range(d)]
        )
        rep = check_prop2(
            erasure_channel(d, 0.5 - x), erasure_channel(d, 0.5), basis, basis, seed=2
        )
        assert abs(rep.lhs - x * math.log2(d)) < 1e-9
        assert rep.d_a == d
        assert not rep.violated
        assert rep.eps_provenance == EPS_INTERVAL


class TestProp3Checker:
    def test_zero_distance_collapse(self):
        shape = SubsystemShape.of(A=2, C=2, D=2)
        rho = random_density(shape, Rng(10))
        ch = random_channel(2, 2, 2, Rng(11))
        rep = check_prop3(ch, ch, rho, rho, (("A",), ("C",), ("D",)), same_channel=True)
        assert rep.lhs < 1e-12
        assert rep.rhs == 0.0
        assert not rep.violated

    def test_trivial_conditioner(self):
        shape = SubsystemShape.of(A=2, D=2)
        rng = Rng(12)
        rho = random_density(shape, rng)
        sigma = random_density(shape, rng)
        phi = random_channel(2, 2, 2, rng)
        psi = random_channel(2, 2, 2, rng)
        rep = check_prop3(phi, psi, rho, sigma, (("A",), (), ("D",)), seed=3)
        assert not rep.violated
        assert rep.eps > 0


class TestProp4Checker:
    def test_same_channel_zero(self):
        shape = SubsystemShape.of(A1=2, A2=2, C=2, D=2)
        rho = random_density(shape, Rng(13))
        ch = random_channel(2, 2, 2, Rng(14))
        rep = check_prop4(ch, ch, rho, 2, (("A1", "A2"), ("C",), ("D",)), seed=4)
        assert rep.lhs < 1e-9
        assert not rep.violated

    def test_n1_matches_prop3_same_state(self):
        shape = SubsystemShape.of(A1=2, C=2, D=2)
        rng = Rng(15)
        rho = random_density(shape, rng)
        phi = random_channel(2, 2, 2, rng)
        psi = random_channel(2, 2, 2, rng)
        rep4 = check_prop4(phi, psi, rho, 1, (("A1",), ("C",), ("D",)), seed=6)
        rep3 = check_prop3(phi, psi, rho, rho, (("A1",), ("C",), ("D",)), seed=6)
        assert abs(rep4.lhs - rep3.lhs) < 1e-12
        assert abs(rep4.rhs - rep3.rhs) < 1e-12

    def test_label_count_validated(self):
        shape = SubsystemShape.of(A1=2, C=2, D=2)
        rho = random_density(shape, Rng(16))
        ch = random_channel(2, 2, 2, Rng(17))
        with pytest.raises(ValueError):
            check_prop4(ch, ch, rho, 2, (("A1",), ("C",), ("D",)))

    def test_output_dimension_guard(self):
        from qcb.linalg import SizeError

        shape = SubsystemShape.of(A1=2, A2=2, C=2, D=2)
        rho = random_density(shape, Rng(18))
        wide = random_channel(2, 46, 1, Rng(19))
        with pytest.raises(SizeError):
            check_prop4(wide, wide, rho, 2, (("A1", "A2"), ("C",), ("D",)))


class TestProp5Erasure:
    def test_equal_probabilities(self):
        reports = check_prop5_erasure(3, 0.3, 0.3)
        for rep in reports:
            assert rep.lhs == 0.0
            assert abs(rep.margin - rep.rhs) < 1e-15
            assert not rep.violated

    def test_reference_holevo_value(self):
        reports = check_prop5_erasure(2, 0.25, 0.5)
        by_kind = {r.bound: r for r in reports}
        assert abs(by_kind["prop5-holevo-cap"].lhs - 0.25) < 1e-12
        assert abs(by_kind["prop5-quantum"].lhs - 0.5) < 1e-12

    @pytest.mark.parametrize("d", [2, 4, 8])
    @pytest.mark.parametrize("x", [0.01, 0.05, 0.1])
    def test_quantum_jump_closed_form(self, d, x):
        reports = check_prop5_erasure(d, 0.5 - x, 0.5)
        by_kind = {r.bound: r for r in reports}
        assert abs(by_kind["prop5-quantum"].lhs - 2.0 * x * math.log2(d)) < 1e-12
        assert by_kind["prop5-quantum"].eps_provenance == EPS_ANALYTIC
        assert not any(r.violated for r in reports)

    def test_interval_source(self):
        reports = check_prop5_erasure(2, 0.4, 0.5, eps_source=EPS_INTERVAL, seed=3)
        assert all(r.eps_provenance == EPS_INTERVAL for r in reports)
        assert not any(r.violated for r in reports)

    def test_generic_pair_uses_interval(self):
        reports = check_prop5_erasure(2, 0.2, 0.45, seed=4)
        assert all(r.eps_provenance == EPS_INTERVAL for r in reports)
        assert not any(r.violated for r in reports)


class TestAuxiliaryCheckers:
    def test_pure_bipartite_saturates_mi_cap(self):
        # maximally entangled: I = 2 H(A), the cap is met with margin 0
        shape = SubsystemShape.of(A=2, B=2)
        bell = pure_density(np.array([1, 0, 0, 1]) / np.sqrt(2), shape)
        reports = check_auxiliary(bell, ("A",), ("B",))
        mi_ub = [r for r in reports if r.bound == "mi-ub"][0]
        assert abs(mi_ub.margin) < 1e-9
        assert not mi_ub.violated

    def test_qc_state_gets_tightened_cap(self):
        rng = Rng(18)
        qc = _qc_extension(SubsystemShape.of(A=2, B=3), ("A",), ("B",), rng)
        reports = check_auxiliary(qc, ("A",), ("B",))
        names = {r.bound for r in reports}
        assert "mi-ub-qc" in names
        assert not any(r.violated for r in reports)

    def test_tripartite_cmi_cap(self):
        omega = random_density(SubsystemShape.of(A=2, B=2, C=2), Rng(19))
        reports = check_auxiliary(omega, ("A",), ("B",), ("C",))
        assert "cmi-ub" in {r.bound for r in reports}
        assert not any(r.violated for r in reports)

    def test_almost_convexity_domain(self):
        rho = random_density(SubsystemShape.of(A=2, B=2, C=2), Rng(20))
        with pytest.raises(ValueError):
            check_almost_convexity(rho, rho, 1.5, (("A",), ("B",), ("C",)))

    def test_ensemble_continuity_zero_case(self):
        e = random_ensemble(SubsystemShape.of(A=2), 3, Rng(21))
        rep = check_ensemble_continuity(e, e)
        assert rep.lhs < 1e-12
        assert rep.eps < 1e-12
        assert not rep.violated


class TestTightness:
    def test_reference_ratio(self):
        assert tightness_ratio(1e-3, 1000.0) >= 0.9
        assert abs(tightness_ratio(1e-3, 1000.0) - 0.9877422840090639) < 1e-12

    def test_nondecreasing_in_dimension(self):
        vals = [tightness_ratio(1e-3, l) for l in (10.0, 100.0, 1000.0)]
        assert vals[0] <= vals[1] <= vals[2]

    def test_limit_with_fixed_product(self):
        # x -> 0 at fixed x*log2(d): ratio climbs to 1
        c = 1.0
        ratios = [tightness_ratio(x, c / x) for x in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert all(b >= a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] > 0.999

    def test_zero_offset_convention(self):
        assert tightness_ratio(0.0, 100.0) == 1.0

    def test_rows_schema(self):
        rows = tightness_rows([0.0, 1e-3], [10.0])
        assert rows[0]["ratio"] == 1.0
        assert rows[0]["lhs_Q"] == 0.0
        assert set(rows[0]) == {"x", "log2_d", "beta_upper", "lhs_Q", "rhs_QC", "ratio"}

    def test_domain(self):
        with pytest.raises(ValueError):
            tightness_ratio(0.7, 10.0)


class TestReportPlumbing:
    def test_violated_flag_threshold(self):
        reports = fuzz_prop1(3, seed=22)
        for rep in reports:
            assert rep.violated == (rep.margin < -rep.slack)
            assert rep.slack == 1e-7
