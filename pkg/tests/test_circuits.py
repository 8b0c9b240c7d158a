import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infotypes import circuits as cc
from infotypes.bases import fourier_basis, random_basis, x_basis, z_basis
from infotypes.core import basis_ket, is_unitary, random_isometry, random_ket, tensor
from infotypes.errors import DimensionMismatchError, InfoTypesError
from infotypes.fixtures import bell_state, fully_entangled
from infotypes.information import (
    all_information_present,
    classify,
    is_perfectly_absent,
    is_perfectly_present,
)

from oracles import PR_G_HALF

seeds = st.integers(0, 2 ** 32 - 1)


def test_gate_identities():
    H = cc.hadamard()
    assert np.allclose(H @ H, np.eye(2))
    assert np.allclose(cc.fourier(2), H)
    assert np.allclose(cc.cx() @ tensor(basis_ket(2, 1), basis_ket(2, 0)), tensor(basis_ket(2, 1), basis_ket(2, 1)))
    w = np.exp(2j * np.pi / 3)
    # Z X = w X Z follows from X|j> = |j+1>, Z|j> = w^j |j>
    assert np.allclose(cc.clock(3) @ cc.shift(3), w * cc.shift(3) @ cc.clock(3))
    assert np.allclose(cc.shift(3) @ basis_ket(3, 2), basis_ket(3, 0))
    for d in (2, 3, 5):
        for u in (cc.shift(d), cc.clock(d), cc.fourier(d), cc.controlled(cc.shift(d), d)):
            assert is_unitary(u)


def test_empty_circuit_is_identity():
    c = cc.Circuit((2, 3))
    assert np.allclose(cc.circuit_unitary(c), np.eye(6))


def test_circuit_validation():
    with pytest.raises(DimensionMismatchError):
        cc.Circuit((2, 2), (cc.GateOp("X", (2,)),))
    with pytest.raises(DimensionMismatchError):
        cc.Circuit((2, 2), (cc.GateOp("X", (0,), (0,)),))
    with pytest.raises(InfoTypesError):
        cc.Circuit((2,), (cc.GateOp("Q", (0,)),))


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        cc.apply(cc.one_bit_teleport(2), np.ones(3))


@pytest.mark.parametrize("bits", [1, 2])
@pytest.mark.parametrize("d", [2, 3, 5])
def test_teleport_is_unitary_and_perfect(bits, d):
    c = cc.teleport_circuit(bits, d)
    U = cc.circuit_unitary(c)
    assert np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) <= 1e-10
    assert abs(cc.process_fidelity(c) - 1) < 1e-10
    rng = np.random.default_rng(d)
    for _ in range(10):
        assert cc.teleport_fidelity(c, random_ket(d, rng)) >= 1 - 1e-10


def test_qubit_circuits_use_figure_gates():
    c = cc.one_bit_teleport(2)
    assert [op.label() for op in c.ops] == ["CX[0->1]", "H[0]", "CZ[0->1]"]
    c = cc.two_bit_teleport(2)
    assert [op.label() for op in c.ops] == ["CX[0->1]", "H[0]", "CX[1->2]", "CZ[0->2]"]


def test_one_bit_output_factor_carries_input():
    c = cc.one_bit_teleport(2)
    psi = random_ket(2, np.random.default_rng(0))
    rho_b = cc.output_state(c, psi)
    assert np.allclose(rho_b, np.outer(psi, psi.conj()))


@pytest.mark.parametrize("d", [2, 3])
def test_drop_correction_split(d):
    c = cc.one_bit_teleport(d, drop_correction=True)
    psi, shape = cc.channel_ket(c), cc.channel_ket_shape(c)
    assert is_perfectly_present(psi, shape, z_basis(d), target=[2])
    assert is_perfectly_absent(psi, shape, fourier_basis(d), target=[2])


def test_two_bit_drop_tags():
    # dropping the Z correction leaves Z information intact and removes the conjugate type
    for drop, z_verdict, x_verdict in ((["z"], "present", "absent"), (["x"], "absent", "present")):
        c = cc.two_bit_teleport(2, drop)
        psi, shape = cc.channel_ket(c), cc.channel_ket_shape(c)
        assert classify(psi, shape, z_basis(2), target=[3]) == z_verdict
        assert classify(psi, shape, x_basis(), target=[3]) == x_verdict


def test_cx_fragment_carries_only_z():
    c = cc.Circuit((2, 2), (cc.GateOp("X", (1,), (0,)),), (((1,), basis_ket(2, 0)),), 0, 1)
    psi, shape = cc.channel_ket(c), cc.channel_ket_shape(c)
    assert is_perfectly_present(psi, shape, z_basis(2), target=[2])
    assert not is_perfectly_present(psi, shape, x_basis(), target=[2])


def test_channel_ket_identity_and_perfection():
    c = cc.Circuit((3,), (), (), 0, 0)
    assert np.allclose(cc.channel_ket(c), fully_entangled(3))
    # perfect channel <-> maximally entangled (aux, output) marginal, both directions
    for circuit, perfect in ((cc.one_bit_teleport(3), True), (cc.one_bit_teleport(3, True), False),
                             (cc.two_bit_teleport(2, True), False)):
        psi, shape = cc.channel_ket(circuit), cc.channel_ket_shape(circuit)
        out = circuit.output_factor + 1
        mixed_all = all_information_present(psi, shape, target=[out])
        assert mixed_all == perfect
        assert (abs(cc.process_fidelity(circuit) - 1) < 1e-10) == perfect


def test_one_bit_presence_pair_implies_all():
    c = cc.one_bit_teleport(2)
    psi, shape = cc.channel_ket(c), cc.channel_ket_shape(c)
    assert is_perfectly_present(psi, shape, z_basis(2), target=[2])
    assert is_perfectly_present(psi, shape, x_basis(), target=[2])
    assert all_information_present(psi, shape, target=[2])


def test_map_state_duality_examples():
    M = cc.ket_to_map(fully_entangled(2), [2, 2])
    assert np.allclose(M, np.eye(2) / np.sqrt(2))
    M = cc.ket_to_map(tensor(basis_ket(2, 0), basis_ket(2, 0)), [2, 2])
    assert np.linalg.matrix_rank(M) == 1


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 4), df=st.integers(1, 4), seed=seeds, custom=st.booleans())
def test_map_ket_round_trip(da, df, seed, custom):
    rng = np.random.default_rng(seed)
    psi = random_ket(da * df, rng)
    basis = random_basis(da, rng) if custom else None
    M = cc.ket_to_map(psi, [da, df], basis)
    assert np.linalg.norm(cc.map_to_ket(M, basis) - psi) < 1e-12


@settings(max_examples=20, deadline=None)
@given(d=st.integers(1, 4), seed=seeds)
def test_maximally_entangled_gives_isometry(d, seed):
    rng = np.random.default_rng(seed)
    V = random_isometry(d + 1, d, rng)
    psi = np.kron(np.eye(d), V) @ fully_entangled(d)
    M = cc.ket_to_map(psi, [d, d + 1])
    assert np.allclose(M.conj().T @ M, np.eye(d) / d)


def test_isometry_validation():
    cc.Isometry(np.eye(3)[:, :2])
    with pytest.raises(InfoTypesError):
        cc.Isometry(np.ones((3, 2)))


def test_interferometer_endpoints():
    pg, ph = cc.exit_probabilities(cc.interferometer(0.0))
    assert abs(ph - 1) < 1e-12 and abs(pg) < 1e-12
    pg, ph = cc.exit_probabilities(cc.interferometer(1.0))
    assert abs(pg - 0.5) < 1e-12 and abs(ph - 0.5) < 1e-12
    pg, _ = cc.exit_probabilities(cc.interferometer(0.5))
    assert abs(pg - PR_G_HALF) < 1e-12
    with pytest.raises(ValueError):
        cc.interferometer(1.5)


def test_environment_overlap():
    for lam in (0.0, 0.3, 1.0):
        e, f = cc.environment_states(lam)
        assert abs(np.vdot(e, f) - (1 - lam)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0, 1), b=st.floats(0, 1))
def test_interferometer_probabilities(a, b):
    lo, hi = sorted((a, b))
    g_lo, h_lo = cc.exit_probabilities(cc.interferometer(lo))
    g_hi, _ = cc.exit_probabilities(cc.interferometer(hi))
    assert abs(g_lo + h_lo - 1) < 1e-12
    assert g_hi >= g_lo - 1e-12


def test_interferometer_exclusion_verdicts():
    psi = cc.interferometer_channel_ket(1.0)
    assert is_perfectly_present(psi, (2, 2, 2), z_basis(2), target=[1])
    assert is_perfectly_absent(psi, (2, 2, 2), x_basis(), target=[2])
    psi = cc.interferometer_channel_ket(0.0)
    assert is_perfectly_present(psi, (2, 2, 2), x_basis(), target=[2])
    # projecting the auxiliary onto |+> (the state after B) recovers the gate circuit's state
    plus = x_basis().vectors[:, 0]
    for lam in (0.0, 0.4, 1.0):
        chan = cc.interferometer_channel_ket(lam).reshape(2, 2, 2)
        projected = np.sqrt(2) * np.einsum("a,aec->ce", plus.conj(), chan).reshape(-1)
        c = cc.interferometer_circuit(lam)
        before = cc.Circuit(c.shape, c.ops[:2], c.preparations, 0, 0)
        out = cc.apply(before, cc.initial_state(before, basis_ket(2, 0)))
        assert np.allclose(out, projected)


def test_circuit_document_round_trip():
    for c in (cc.one_bit_teleport(3), cc.two_bit_teleport(2, ["x"]), cc.interferometer_circuit(0.25)):
        back = cc.Circuit.from_document(c.to_document())
        assert np.allclose(cc.circuit_unitary(back), cc.circuit_unitary(c))
        assert back.to_document() == c.to_document()


def test_bell_is_teleport_resource():
    assert np.allclose(fully_entangled(2), bell_state())
