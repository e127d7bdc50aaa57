import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from orthosup import machines, qcore
from orthosup.errors import DegenerateOverlap, NotNormalized, NotOrthogonal
from orthosup.machines import GeneralMachineSpec, MachineCoeffs, MachineKind
from orthosup.qcore import BlochVector, QubitState

from conftest import assert_close, machine_coeffs, qubit_states, same_ray

R2 = 2**-0.5
BAL = MachineCoeffs.balanced()


def moduli(out_vec, psi, perp):
    return abs(np.vdot(psi.vec, out_vec)), abs(np.vdot(perp.vec, out_vec))


class TestCoeffs:
    def test_from_polar(self):
        c = MachineCoeffs.from_polar(0.6, 0.3, -1.0)
        assert abs(abs(c.beta) - 0.8) < 1e-15
        assert abs(np.angle(c.alpha) - 0.3) < 1e-15

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            MachineCoeffs(1.0, 0.1)
        with pytest.raises(NotNormalized):
            MachineCoeffs.from_polar(1.2)


class TestBuild:
    def test_k1_alpha_one(self):
        m = machines.build_pure_machine("k1", MachineCoeffs(1, 0))
        assert m.c_norm == 1.0
        assert_close(m.kraus, [[1, 0, 0, 0], [0, 0, 1, 0]], 0)

    @pytest.mark.parametrize("kind", ["k1", "k2"])
    def test_balanced_norm_from_independent_eigensolver(self, kind):
        # largest singular value of the unscaled layout, via LAPACK svd
        s_max = scipy.linalg.svdvals(machines.kraus_layout(kind, BAL))[0]
        assert abs(s_max**2 - 1.5) < 1e-14
        m = machines.build_pure_machine(kind, BAL)
        assert abs(m.c_norm - np.sqrt(2 / 3)) < 1e-15
        assert abs(m.c_norm - 1 / s_max) < 1e-14

    @given(machine_coeffs(), st.sampled_from(["k1", "k2"]))
    def test_trace_non_increasing_and_saturated(self, coeffs, kind):
        m = machines.build_pure_machine(kind, coeffs)
        ev = np.linalg.eigvalsh(m.kraus.conj().T @ m.kraus)
        assert ev[-1] <= 1 + 1e-10
        assert abs(ev[-1] - 1) <= 1e-10

    def test_kraus_is_read_only(self):
        m = machines.build_pure_machine("k1", BAL)
        with pytest.raises(ValueError):
            m.kraus[0, 0] = 5


class TestSuperposePure:
    def test_plus_minus(self):
        m = machines.build_pure_machine("k1", BAL)
        out = machines.superpose_pure(m, qcore.PLUS, qcore.MINUS)
        expected = m.c_norm * R2 * (BAL.alpha * qcore.PLUS.vec + BAL.beta * qcore.MINUS.vec)
        assert_close(out.raw, expected, 1e-15)
        assert abs(out.success_prob - 1 / 3) < 1e-15
        assert abs(out.eta) < 1e-15

    def test_k1_full_success_on_one_zero(self):
        c = MachineCoeffs.from_polar(0.3, 1.0, 2.0)
        m = machines.build_pure_machine("k1", c)
        out = machines.superpose_pure(m, qcore.KET1, qcore.KET0)
        assert abs(out.success_prob - m.c_norm**2) < 1e-15

    def test_k1_zero_on_zero_one(self):
        m = machines.build_pure_machine("k1", BAL)
        out = machines.superpose_pure(m, qcore.KET0, qcore.KET1)
        assert out.success_prob == 0.0
        assert out.state is None and out.eta is None

    def test_worked_expansion(self, rng):
        # K1 (psi ⊗ psi_perp) = C (alpha conj(y) psi + beta y psi_perp)
        c = MachineCoeffs.random(rng)
        m = machines.build_pure_machine("k1", c)
        for _ in range(50):
            psi = qcore.random_state(rng)
            perp = qcore.orthogonal_complement(psi)
            y = psi.a1
            out = machines.superpose_pure(m, psi, perp)
            expected = m.c_norm * (c.alpha * np.conj(y) * psi.vec + c.beta * y * perp.vec)
            assert_close(out.raw, expected, 1e-15)

    def test_compact_forms(self, rng):
        c = MachineCoeffs.random(rng)
        k1 = machines.build_pure_machine("k1", c)
        k2 = machines.build_pure_machine("k2", c)
        for _ in range(50):
            psi = qcore.random_state(rng)
            perp = qcore.orthogonal_complement(psi)
            f1 = psi.a1 / perp.a0
            exp1 = k1.c_norm * perp.a0 * (c.alpha * psi.vec + c.beta * f1 * perp.vec)
            f2 = psi.a0 / perp.a1
            exp2 = k2.c_norm * perp.a1 * (c.alpha * psi.vec - c.beta * f2 * perp.vec)
            assert_close(machines.superpose_pure(k1, psi, perp).raw, exp1, 1e-14)
            assert_close(machines.superpose_pure(k2, psi, perp).raw, exp2, 1e-14)
            assert abs(abs(f1) - 1) < 1e-12 and abs(abs(f2) - 1) < 1e-12

    def test_requires_orthogonal(self):
        m = machines.build_pure_machine("k1", BAL)
        with pytest.raises(NotOrthogonal):
            machines.superpose_pure(m, qcore.KET0, qcore.PLUS)

    def test_eta_relation(self, rng):
        c = MachineCoeffs.random(rng)
        for kind in ("k1", "k2"):
            m = machines.build_pure_machine(kind, c)
            for _ in range(100):
                psi = qcore.random_state(rng)
                perp = qcore.orthogonal_complement(psi)
                out = machines.superpose_pure(m, psi, perp)
                target = c.alpha * psi.vec + c.beta * np.exp(1j * out.eta) * perp.vec
                assert same_ray(out.state.vec, target, 1e-12)

    def test_eta_absent_for_basis_coeffs(self):
        m = machines.build_pure_machine("k1", MachineCoeffs(1, 0))
        out = machines.superpose_pure(m, qcore.KET1, qcore.KET0)
        assert out.state is not None and out.eta is None

    def test_moduli_contract_random(self, rng):
        worst = 0.0
        for _ in range(2000):
            c = MachineCoeffs.random(rng)
            psi = qcore.random_state(rng)
            perp = qcore.orthogonal_complement(psi)
            for kind in ("k1", "k2"):
                out = machines.superpose_pure(machines.build_pure_machine(kind, c), psi, perp)
                if out.success_prob > 1e-6:
                    ma, mb = moduli(out.state.vec, psi, perp)
                    worst = max(worst, abs(ma - abs(c.alpha)), abs(mb - abs(c.beta)))
        assert worst <= 1e-10

    @settings(max_examples=200)
    @given(machine_coeffs(), qubit_states(), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi),
           st.sampled_from(["k1", "k2"]))
    def test_phase_covariance(self, c, psi, xi1, xi2, kind):
        m = machines.build_pure_machine(kind, c)
        perp = qcore.orthogonal_complement(psi)
        base = machines.superpose_pure(m, psi, perp)
        psi2 = QubitState.from_vector(np.exp(1j * xi1) * psi.vec)
        perp2 = QubitState.from_vector(np.exp(1j * xi2) * perp.vec)
        moved = machines.superpose_pure(m, psi2, perp2)
        assert abs(base.success_prob - moved.success_prob) <= 1e-12
        if base.success_prob > 1e-6:
            assert_close(moduli(base.state.vec, psi, perp), moduli(moved.state.vec, psi, perp), 1e-12)

    def test_basis_covariance(self, rng):
        for _ in range(200):
            c = MachineCoeffs.random(rng)
            v = qcore.random_unitary(rng)
            k = machines.build_pure_machine("k1", c).kraus
            k_rot = v.conj().T @ k @ np.kron(v, v)
            psi = qcore.random_state(rng)
            perp = qcore.orthogonal_complement(psi)
            raw = k_rot @ np.kron(psi.vec, perp.vec)
            if np.vdot(raw, raw).real < 1e-6:
                continue
            st_ = raw / np.linalg.norm(raw)
            ma, mb = moduli(st_, psi, perp)
            assert abs(ma - abs(c.alpha)) <= 1e-10 and abs(mb - abs(c.beta)) <= 1e-10


class TestProbabilities:
    @pytest.mark.parametrize("kind, perp, factor", [
        ("k1", qcore.KET0, 1.0), ("k2", qcore.KET0, 0.0), ("k1", qcore.MINUS, 0.5),
    ])
    def test_examples(self, kind, perp, factor):
        m = machines.build_pure_machine(kind, BAL)
        assert abs(machines.pure_success_probability(m, perp) - factor * m.c_norm**2) < 1e-15

    def test_matches_simulated_norm(self, rng):
        c = MachineCoeffs.random(rng)
        for kind in ("k1", "k2"):
            m = machines.build_pure_machine(kind, c)
            for _ in range(200):
                psi = qcore.random_state(rng)
                perp = qcore.orthogonal_complement(psi)
                out = machines.superpose_pure(m, psi, perp)
                assert abs(out.success_prob - machines.pure_success_probability(m, perp)) < 1e-14

    def test_complementary_sum_on_grid(self, rng):
        for _ in range(20):
            c = MachineCoeffs.random(rng)
            k1 = machines.build_pure_machine("k1", c)
            k2 = machines.build_pure_machine("k2", c)
            for t in np.linspace(0, np.pi, 17):
                for p in np.linspace(0, 2 * np.pi, 9, endpoint=False):
                    _, perp = qcore.bloch_pair(t, p)
                    s = (machines.pure_success_probability(k1, perp)
                         + machines.pure_success_probability(k2, perp))
                    assert abs(s - 1 / (1 + abs(c.alpha * c.beta))) <= 1e-12

    def test_half_angle_under_main_parameterization(self):
        # with x = cos θ/2 the K1 probability is C^2 sin^2 θ/2
        m = machines.build_pure_machine("k1", BAL)
        for t in np.linspace(0, np.pi, 9):
            _, perp = qcore.bloch_pair(t, 0.3)
            p = machines.pure_success_probability(m, perp)
            assert abs(p - m.c_norm**2 * np.sin(t / 2) ** 2) < 1e-15

    def test_batch_matches_scalar(self, rng):
        m = machines.build_pure_machine("k2", MachineCoeffs.random(rng))
        perps = [qcore.random_state(rng) for _ in range(20)]
        batch = machines.pure_success_probability_batch(m, np.array([p.vec for p in perps]))
        assert_close(batch, [machines.pure_success_probability(m, p) for p in perps], 1e-15)


class TestDuality:
    @pytest.mark.parametrize("c, expected", [((1, 0), (0, -1)), ((R2, R2), (R2, -R2))])
    def test_examples(self, c, expected):
        d = machines.duality_map(MachineCoeffs(*c))
        assert_close([d.alpha, d.beta], expected, 0)

    def test_identity_on_random_inputs(self, rng):
        for _ in range(1000):
            c = MachineCoeffs.random(rng)
            psi = qcore.random_state(rng)
            perp = qcore.orthogonal_complement(psi)
            lhs = machines.build_pure_machine("k1", c).kraus @ np.kron(psi.vec, perp.vec)
            k2 = machines.build_pure_machine("k2", machines.duality_map(c)).kraus
            assert_close(lhs, k2 @ np.kron(perp.vec, psi.vec), 1e-12)


class TestGeneralMachine:
    def test_output_examples(self):
        c = MachineCoeffs.from_polar(0.6, 0.4, 1.0)
        out = machines.general_output_state(GeneralMachineSpec(qcore.KET0, c), qcore.KET0, qcore.KET0)
        assert_close(out, [c.alpha + c.beta, 0], 1e-15)
        out = machines.general_output_state(GeneralMachineSpec(qcore.PLUS, c), qcore.KET0, qcore.KET1)
        assert_close(out, [c.alpha, c.beta], 1e-15)
        with pytest.raises(DegenerateOverlap):
            machines.general_output_state(GeneralMachineSpec(qcore.KET0, c), qcore.KET1, qcore.PLUS)

    def test_norm_formula_matches_output_vector(self, rng):
        for _ in range(500):
            spec = GeneralMachineSpec(qcore.random_state(rng), MachineCoeffs.random(rng))
            psi, phi = qcore.random_state(rng), qcore.random_state(rng)
            out = machines.general_output_state(spec, psi, phi)
            c1 = abs(np.vdot(spec.chi.vec, psi.vec)) ** 2
            c2 = abs(np.vdot(spec.chi.vec, phi.vec)) ** 2
            p = machines.general_success_probability(spec, psi, phi)
            assert abs(p - c1 * c2 / (c1 + c2) * np.vdot(out, out).real) < 1e-12
            assert -1e-15 <= p <= 1 + 1e-12

    def test_orthogonal_pair(self, rng):
        spec = GeneralMachineSpec(qcore.random_state(rng), MachineCoeffs.random(rng))
        psi = qcore.random_state(rng)
        phi = qcore.orthogonal_complement(psi)
        c1 = abs(np.vdot(spec.chi.vec, psi.vec)) ** 2
        c2 = abs(np.vdot(spec.chi.vec, phi.vec)) ** 2
        assert abs(machines.general_success_probability(spec, psi, phi) - c1 * c2 / (c1 + c2)) < 1e-14

    def test_all_equal_gives_one(self):
        spec = GeneralMachineSpec(qcore.PLUS, BAL)
        assert abs(machines.general_success_probability(spec, qcore.PLUS, qcore.PLUS) - 1) < 1e-14

    def test_orthogonal_supremum_half(self, rng):
        best = 0.0
        for _ in range(2000):
            spec = GeneralMachineSpec(qcore.random_state(rng), MachineCoeffs.random(rng))
            psi = qcore.random_state(rng)
            p = machines.general_success_probability(spec, psi, qcore.orthogonal_complement(psi))
            assert p <= 0.5 + 1e-12
            best = max(best, p)
        # in a qubit an orthogonal pair has c1 + c2 = 1, so the cap is 1/4
        assert best <= 0.25 + 1e-12 and best > 0.24

    def test_one_vanishing_overlap_is_zero(self):
        spec = GeneralMachineSpec(qcore.KET0, BAL)
        assert machines.general_success_probability(spec, qcore.KET1, qcore.PLUS) == 0.0

    @pytest.mark.parametrize("nvec, svec, expected", [
        ((1, 0, 0), (0, 0, 1), 0.25),
        ((0, 0, 1), (0, 0, 1), 0.0),
    ])
    def test_orthogonal_qubit_examples(self, nvec, svec, expected):
        assert machines.orthogonal_qubit_probability(BlochVector(*nvec), BlochVector(*svec)) == expected

    def test_orthogonal_qubit_one_over_root_three(self):
        n = BlochVector(0, 0, 1)
        t = np.arccos(1 / np.sqrt(3))
        s = BlochVector.from_angles(t, 0.5)
        assert abs(machines.orthogonal_qubit_probability(n, s) - 1 / 6) < 1e-15
        # same value from explicit projectors
        spec = GeneralMachineSpec(qcore.bloch_pair(t, 0.5)[0], BAL)
        p = machines.general_success_probability(spec, qcore.KET0, qcore.KET1)
        assert abs(p - 1 / 6) < 1e-12

    def test_specialization_matches_projectors(self, rng):
        for _ in range(500):
            spec = GeneralMachineSpec(qcore.random_state(rng), MachineCoeffs.random(rng))
            psi = qcore.random_state(rng)
            phi = qcore.orthogonal_complement(psi)
            lhs = machines.general_success_probability(spec, psi, phi)
            rhs = machines.orthogonal_qubit_probability(psi.bloch(), spec.chi.bloch())
            assert abs(lhs - rhs) <= 1e-12
