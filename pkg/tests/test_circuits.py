import numpy as np
import pytest

from qpropsim import (
    Ansatz,
    DensityOperator,
    GateSpec,
    NoiseChannel,
    PauliString,
    derivative_decomposition,
    five_parameter_ansatz,
    gate_unitary,
    nine_parameter_ansatz,
    parse_ansatz,
    random_ansatz,
    run_circuit,
)
from qpropsim.circuits import CONTROLLED, SINGLE, ansatz_to_text
from helpers import random_density, random_pauli_mixture


def rx_gate(target=0, k=1):
    return GateSpec(SINGLE, "X", target, k)


def crx_gate(control, target, k):
    return GateSpec(CONTROLLED, "X", target, k, control=control)


class TestGateUnitary:
    def test_zero_angle_single(self):
        assert gate_unitary(rx_gate(), 0.0, 1) == pytest.approx(np.eye(2))

    def test_zero_angle_controlled(self):
        assert gate_unitary(crx_gate(0, 1, 1), 0.0, 2) == pytest.approx(np.eye(4))

    def test_pi_rotation_is_minus_i_x(self):
        expected = -1j * PauliString("X").matrix()
        assert gate_unitary(rx_gate(), np.pi, 1) == pytest.approx(expected, abs=1e-14)

    def test_unitarity(self, rng):
        for _ in range(10):
            theta = rng.uniform(-8, 8)
            u = gate_unitary(crx_gate(1, 0, 1), theta, 3)
            assert u @ u.conj().T == pytest.approx(np.eye(8), abs=1e-12)

    def test_four_pi_periodicity(self, rng):
        theta = rng.uniform(0, 2 * np.pi)
        for g in (rx_gate(), GateSpec(SINGLE, "Z", 0, 1)):
            a = gate_unitary(g, theta, 2)
            b = gate_unitary(g, theta + 4 * np.pi, 2)
            assert a == pytest.approx(b, abs=1e-12)

    def test_controlled_block_structure(self):
        theta = 1.1
        u = gate_unitary(crx_gate(0, 1, 1), theta, 2)
        r = gate_unitary(rx_gate(), theta, 1)
        expected = np.block(
            [[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), r]]
        )
        assert u == pytest.approx(expected)


class TestDerivativeDecomposition:
    def test_single_qubit_coefficients(self):
        d = derivative_decomposition(rx_gate(), 0.4, 1)
        assert len(d.terms) == 2
        assert d.terms[0][0] == pytest.approx(-0.5j)
        assert d.terms[1][0] == pytest.approx(+0.5j)

    def test_controlled_coefficients(self):
        d = derivative_decomposition(crx_gate(0, 1, 1), 0.4, 2)
        assert len(d.terms) == 2
        assert d.terms[0][0] == pytest.approx(+0.5j)
        assert d.terms[1][0] == pytest.approx(-0.5j)

    def test_r_product_signs(self):
        # Same arity: conj(r_k1) r_q1 = 1/4; mixed arity reverses the sign.
        single = derivative_decomposition(rx_gate(), 0.2, 2)
        two = derivative_decomposition(crx_gate(0, 1, 1), 0.2, 2)
        r_s = [t[0] for t in single.terms]
        r_c = [t[0] for t in two.terms]
        for r in (r_s, r_c):
            assert np.conj(r[0]) * r[0] == pytest.approx(0.25)
            assert np.conj(r[0]) * r[1] == pytest.approx(-0.25)
        assert np.conj(r_s[0]) * r_c[0] == pytest.approx(-0.25)
        assert np.conj(r_s[0]) * r_c[1] == pytest.approx(0.25)

    @pytest.mark.parametrize("gate,n", [
        (rx_gate(), 1),
        (GateSpec(SINGLE, "Y", 1, 1), 2),
        (crx_gate(0, 1, 1), 2),
        (GateSpec(CONTROLLED, "Z", 0, 1, control=2), 3),
    ])
    def test_reconstructs_finite_difference(self, gate, n, rng):
        # Central difference of the gate conjugation, step 1e-4.
        theta, h = rng.uniform(0, 2 * np.pi), 1e-4
        rho = random_density(rng, 2**n)
        up = gate_unitary(gate, theta + h, n)
        dn = gate_unitary(gate, theta - h, n)
        fd = (up @ rho @ up.conj().T - dn @ rho @ dn.conj().T) / (2 * h)
        d = derivative_decomposition(gate, theta, n)
        assert d.apply(rho) == pytest.approx(fd, abs=1e-6)


class TestAnsatzValidation:
    def test_param_indices_must_be_sequential(self):
        with pytest.raises(ValueError):
            Ansatz(1, (GateSpec(SINGLE, "X", 0, 2),))
        with pytest.raises(ValueError):
            Ansatz(2, (rx_gate(0, 1), GateSpec(SINGLE, "Y", 1, 3)))

    def test_qubit_bounds(self):
        with pytest.raises(ValueError):
            Ansatz(1, (GateSpec(SINGLE, "X", 1, 1),))
        with pytest.raises(ValueError):
            GateSpec(CONTROLLED, "X", 0, 1, control=0)

    def test_theta_length_checked(self):
        a = five_parameter_ansatz()
        with pytest.raises(ValueError):
            a.check_thetas([0.1, 0.2])

    def test_presets(self):
        assert five_parameter_ansatz().n_parameters == 5
        assert nine_parameter_ansatz().n_parameters == 9


class TestRunCircuit:
    def test_zero_angles_preserve_state(self, rng):
        a = nine_parameter_ansatz()
        rho0 = DensityOperator(random_density(rng, 4))
        out = run_circuit(a, np.zeros(9), rho0)
        assert out.matrix == pytest.approx(rho0.matrix, abs=1e-14)

    def test_full_depolarization(self, rng):
        a = five_parameter_ansatz()
        out = run_circuit(
            a,
            rng.uniform(0, 2 * np.pi, 5),
            DensityOperator.computational_basis(2),
            NoiseChannel.depolarizing(1.0),
        )
        assert out.matrix == pytest.approx(np.eye(4) / 4)

    def test_bloch_rotation_closed_form(self, rng):
        # <Z> after Rx(theta) on |0> is cos(theta).
        a = Ansatz(1, (rx_gate(),))
        z = PauliString("Z").matrix()
        for theta in rng.uniform(0, 2 * np.pi, 5):
            out = run_circuit(a, [theta], DensityOperator.computational_basis(1))
            assert out.expectation(z) == pytest.approx(np.cos(theta), abs=1e-12)

    def test_output_is_valid_state_under_noise(self, rng):
        for _ in range(5):
            a = random_ansatz(3, 6, rng)
            thetas = rng.uniform(0, 2 * np.pi, 6)
            channel = random_pauli_mixture(rng, 3, p=float(rng.uniform(0, 1)))
            out = run_circuit(a, thetas, DensityOperator.computational_basis(3), channel)
            assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-10)
            assert np.linalg.eigvalsh(out.matrix).min() >= -1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            run_circuit(five_parameter_ansatz(), np.zeros(5),
                        DensityOperator.computational_basis(1))


class TestAnsatzFiles:
    def test_round_trip(self, rng):
        a = random_ansatz(3, 7, rng)
        assert parse_ansatz(ansatz_to_text(a)) == a

    def test_parse_example(self):
        text = """
        qubits 2
        # rotation layer
        RY 0 1
        RY 1 2
        CRX 0 1 3   # control target param
        """
        a = parse_ansatz(text)
        assert a.n_qubits == 2
        assert a.gates[2].kind == CONTROLLED
        assert a.gates[2].control == 0 and a.gates[2].target == 1

    @pytest.mark.parametrize("text", [
        "RY 0 1\n",                      # missing header
        "qubits 2\nRQ 0 1\n",            # bad axis
        "qubits 2\nCRX 0 1\n",           # missing field
        "qubits 2\nRY 0 1\nRY 1 3\n",    # parameter gap
        "qubits 2\n",                    # no gates
    ])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_ansatz(text)

    def test_random_ansatz_deterministic(self):
        a = random_ansatz(2, 6, np.random.default_rng(11))
        b = random_ansatz(2, 6, np.random.default_rng(11))
        assert a == b
