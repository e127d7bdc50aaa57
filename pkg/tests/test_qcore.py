import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthosup import qcore
from orthosup.errors import DimensionMismatch, NotNormalized, ZeroVector
from orthosup.qcore import BlochAngles, Convention, QubitState

from conftest import assert_close, qubit_states

R2 = 2**-0.5


class TestQubitState:
    def test_renormalizes_small_drift(self):
        s = QubitState(1 + 5e-10, 0)
        assert abs(abs(s.a0) - 1) < 1e-15

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            QubitState(2.0, 0)

    def test_rejects_nan(self):
        with pytest.raises(NotNormalized):
            QubitState(float("nan"), 0)

    def test_bloch_vector_of_main_state(self):
        s = qcore.bloch_to_state(BlochAngles(1.1, 0.4))
        n = s.bloch()
        expected = qcore.BlochVector.from_angles(1.1, 0.4)
        assert_close(n.as_array(), expected.as_array(), 1e-14)


class TestBlochToState:
    @pytest.mark.parametrize("theta, phi, conv, expected", [
        (0.0, 0.0, Convention.MAIN, (1, 0)),
        (np.pi, 0.0, Convention.APPENDIX, (1, 0)),
        (np.pi / 2, np.pi / 2, Convention.MAIN, (R2, 1j * R2)),
    ])
    def test_examples(self, theta, phi, conv, expected):
        s = qcore.bloch_to_state(BlochAngles(theta, phi), conv)
        assert_close(s.vec, expected, 1e-15)

    def test_conventions_related_by_reflection(self):
        for t in np.linspace(0, np.pi, 41):
            for p in np.linspace(0, 2 * np.pi, 13, endpoint=False):
                main = qcore.bloch_to_state(BlochAngles(t, p), "main")
                app = qcore.bloch_to_state(BlochAngles(np.pi - t, p), "appendix")
                assert_close(main.vec, app.vec, 1e-15)

    def test_angle_ranges_enforced(self):
        with pytest.raises(ValueError):
            BlochAngles(-0.1, 0.0)
        with pytest.raises(ValueError):
            BlochAngles(0.1, 2 * np.pi)

    def test_appendix_pair_is_phase_shifted_complement(self):
        t, p = 0.9, 2.2
        psi, perp = qcore.bloch_pair(t, p, Convention.APPENDIX)
        assert_close(perp.vec, np.exp(1j * p) * qcore.orthogonal_complement(psi).vec, 1e-15)
        assert_close(perp.vec, [np.cos(t / 2), -np.sin(t / 2) * np.exp(1j * p)], 1e-15)


class TestOrthogonalComplement:
    @pytest.mark.parametrize("psi, expected", [
        ((1, 0), (0, -1)),
        ((R2, R2), (R2, -R2)),
        ((0, 1j), (-1j, 0)),
    ])
    def test_examples(self, psi, expected):
        out = qcore.orthogonal_complement(QubitState(*psi))
        assert_close(out.vec, expected, 1e-15)
        assert abs(qcore.inner_product(QubitState(*psi).vec, out.vec)) <= 1e-15

    def test_orthogonal_on_random_states(self, rng):
        worst = 0.0
        for _ in range(10_000):
            psi = qcore.random_state(rng)
            worst = max(worst, abs(qcore.inner_product(psi.vec, qcore.orthogonal_complement(psi).vec)))
        assert worst <= 1e-15

    @given(qubit_states())
    def test_twice_gives_minus_psi(self, psi):
        twice = qcore.orthogonal_complement(qcore.orthogonal_complement(psi))
        assert np.array_equal(twice.vec, -psi.vec)


class TestLinearAlgebra:
    def test_tensor_examples(self):
        assert_close(qcore.tensor_product([1, 0], [0, 1]), [0, 1, 0, 0], 0)
        assert_close(qcore.tensor_product([1, 0], [R2, R2]), [R2, R2, 0, 0], 0)

    def test_tensor_index_layout(self, rng):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        out = qcore.tensor_product(a, b)
        for i in range(3):
            for j in range(2):
                assert np.isclose(out[i * 2 + j], a[i] * b[j], rtol=1e-15, atol=0)

    @given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=4),
           st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=4))
    def test_tensor_norm_multiplicative(self, a, b):
        lhs = qcore.norm(qcore.tensor_product(a, b))
        rhs = qcore.norm(a) * qcore.norm(b)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)

    def test_tensor_associative(self, rng):
        for _ in range(200):
            a, b, c = (qcore.random_state(rng).vec for _ in range(3))
            left = qcore.tensor_product(qcore.tensor_product(a, b), c)
            right = qcore.tensor_product(a, qcore.tensor_product(b, c))
            assert_close(left, right, 1e-15)

    def test_apply_operator(self, rng):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert_close(qcore.apply_operator(np.eye(4), v), v, 0)
        assert_close(qcore.apply_operator(np.zeros((2, 4)), v), np.zeros(2), 0)
        with pytest.raises(DimensionMismatch):
            qcore.apply_operator(np.eye(3), v)

    def test_inner_product_conjugate_linear(self, rng):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert qcore.inner_product([1, 0], [0, 1]) == 0
        assert abs(qcore.inner_product(2j * a, b) - (-2j) * qcore.inner_product(a, b)) < 1e-14
        assert abs(qcore.inner_product(a, a) - qcore.norm(a) ** 2) < 1e-14
        with pytest.raises(DimensionMismatch):
            qcore.inner_product([1, 0], [1, 0, 0])

    def test_normalize(self, rng):
        assert_close(qcore.normalize([2, 0]), [1, 0], 0)
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert abs(qcore.norm(qcore.normalize(v)) - 1) <= 1e-14
        with pytest.raises(ZeroVector):
            qcore.normalize([1e-15, 0])


class TestFidelity:
    def test_examples(self, rng):
        psi = qcore.random_state(rng)
        perp = qcore.orthogonal_complement(psi)
        assert abs(qcore.fidelity_pure_mixed(qcore.projector(psi.vec), psi.vec) - 1) < 1e-14
        assert abs(qcore.fidelity_pure_mixed(qcore.projector(perp.vec), psi.vec)) < 1e-14
        assert abs(qcore.fidelity_pure_mixed(np.eye(2) / 2, psi.vec) - 0.5) < 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            qcore.fidelity_pure_mixed(np.eye(4) / 4, [1, 0])

    def test_density_matrix_validation(self):
        qcore.check_density_matrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            qcore.check_density_matrix(np.array([[1, 1], [0, 0]]))
        with pytest.raises(ValueError):
            qcore.check_density_matrix(np.diag([1.5, -0.5]))
