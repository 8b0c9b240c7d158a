import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infotypes.core import (
    TOL,
    as_ket,
    basis_ket,
    check_shape,
    density,
    embed,
    is_density,
    is_hermitian,
    is_isometry,
    is_projector,
    is_unitary,
    partial_trace,
    permute_factors,
    projector_onto,
    purify,
    random_density,
    random_hermitian,
    random_isometry,
    random_ket,
    random_unitary,
    reduced_density,
    schmidt_decomposition,
    schmidt_rank,
    tensor,
)
from infotypes.errors import DegenerateInputError, DimensionMismatchError, InvalidDensityError
from infotypes.fixtures import bell_state, split_information_state

from oracles import index_partial_trace

seeds = st.integers(0, 2 ** 32 - 1)
small_shapes = st.lists(st.integers(1, 3), min_size=1, max_size=3)


def test_tensor_identities_and_basis():
    assert np.allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(tensor(basis_ket(2, 0), basis_ket(2, 0)), [1, 0, 0, 0])


def test_bell_from_tensor():
    b0 = (tensor(basis_ket(2, 0), basis_ket(2, 0)) + tensor(basis_ket(2, 1), basis_ket(2, 1))) / np.sqrt(2)
    assert np.allclose(b0, bell_state())


def test_tensor_rejects_mixed_kinds():
    with pytest.raises(DimensionMismatchError):
        tensor(np.eye(2), basis_ket(2, 0))


def test_partial_trace_examples():
    rng = np.random.default_rng(0)
    ra, rb = random_density(2, rng), random_density(3, rng)
    assert np.allclose(partial_trace(np.kron(ra, rb), [2, 3], [0]), ra)
    assert np.allclose(partial_trace(density(bell_state()), [2, 2], [0]), np.eye(2) / 2)


def test_partial_trace_matches_index_oracle():
    rng = np.random.default_rng(1)
    rho = random_density(6, rng)
    for keep in ([0], [1], [0, 1], [1, 0]):
        assert np.linalg.norm(partial_trace(rho, [2, 3], keep) - index_partial_trace(rho, [2, 3], keep)) < 1e-12
    rho3 = random_density(12, rng)
    for keep in ([0, 2], [2, 0], [1]):
        assert np.linalg.norm(partial_trace(rho3, [2, 3, 2], keep) - index_partial_trace(rho3, [2, 3, 2], keep)) < 1e-12


def test_partial_trace_shape_errors():
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), [2, 2], [2])
    with pytest.raises(DimensionMismatchError):
        check_shape([0, 4], 0)


@settings(max_examples=40, deadline=None)
@given(shape=small_shapes, seed=seeds, data=st.data())
def test_partial_trace_preserves_trace(shape, seed, data):
    rng = np.random.default_rng(seed)
    d = int(np.prod(shape))
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    keep = data.draw(st.lists(st.sampled_from(range(len(shape))), unique=True))
    assert abs(np.trace(partial_trace(A, shape, keep)) - np.trace(A)) < 1e-12 * max(1.0, np.abs(A).sum())


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 3), db=st.integers(1, 3), seed=seeds)
def test_partial_trace_of_product(da, db, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
    Y = rng.normal(size=(db, db)) + 1j * rng.normal(size=(db, db))
    assert np.linalg.norm(partial_trace(np.kron(X, Y), [da, db], [0]) - np.trace(Y) * X) < 1e-12 * (1 + np.abs(X).sum() * np.abs(Y).sum())
    assert np.linalg.norm(partial_trace(np.kron(X, Y), [da, db], [1]) - np.trace(X) * Y) < 1e-12 * (1 + np.abs(X).sum() * np.abs(Y).sum())


@settings(max_examples=40, deadline=None)
@given(dims=st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)), seed=seeds, ket=st.booleans())
def test_tensor_associative(dims, seed, ket):
    rng = np.random.default_rng(seed)
    if ket:
        a, b, c = (random_ket(d, rng) for d in dims)
    else:
        a, b, c = (random_hermitian(d, rng) for d in dims)
    # products of three doubles can differ in the last ulp; index errors would be O(1)
    np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), rtol=1e-14, atol=1e-300)


def test_purify_examples():
    psi = purify(np.diag([1.0, 0.0]))
    assert psi.size == 2 and abs(abs(psi[0]) - 1) < 1e-12
    phi = purify(np.eye(2) / 2)
    assert np.allclose(partial_trace(density(phi), [2, 2], [0]), np.eye(2) / 2)
    assert np.allclose(partial_trace(density(phi), [2, 2], [1]), np.eye(2) / 2)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 5), seed=seeds, data=st.data())
def test_purify_round_trip(d, seed, data):
    rng = np.random.default_rng(seed)
    rank = data.draw(st.integers(1, d))
    rho = random_density(d, rng, rank)
    phi = purify(rho)
    aux = phi.size // d
    assert aux == rank
    assert np.linalg.norm(reduced_density(phi, [d, aux], [0]) - rho) < 1e-10


def test_purify_rejects_non_density():
    with pytest.raises(InvalidDensityError):
        purify(np.diag([1.0, 1.0]))
    with pytest.raises(InvalidDensityError):
        purify(np.diag([1.5, -0.5]))


def test_predicates():
    assert np.array_equal(projector_onto(basis_ket(2, 0)), np.diag([1, 0]))
    assert is_projector(np.diag([1, 1, 0]))
    assert not is_projector(np.diag([1, 0.5]))
    rho_ab = reduced_density(split_information_state(), [2, 2, 2], [0, 1])
    assert is_density(rho_ab)
    assert is_hermitian(rho_ab)
    assert not is_density(np.diag([1.0, 1.0]))
    with pytest.raises(DegenerateInputError):
        projector_onto(np.zeros(2))


def test_projector_onto_normalizes():
    P = projector_onto([1, 1])
    assert is_projector(P) and abs(np.trace(P) - 1) < TOL


def test_random_generators_are_valid():
    rng = np.random.default_rng(3)
    assert is_unitary(random_unitary(4, rng))
    assert is_isometry(random_isometry(5, 2, rng))
    assert abs(np.linalg.norm(random_ket(3, rng)) - 1) < 1e-12
    assert is_density(random_density(3, rng, 2))
    h = random_hermitian(3, rng)
    assert is_hermitian(h) and abs(np.linalg.norm(h) - 1) < 1e-12


def test_schmidt():
    s, u, v = schmidt_decomposition(bell_state(), [2, 2])
    assert np.allclose(s, [1 / np.sqrt(2)] * 2)
    recon = sum(s[i] * np.kron(u[:, i], v[:, i]) for i in range(2))
    assert np.allclose(recon, bell_state())
    assert schmidt_rank(tensor(basis_ket(2, 0), basis_ket(3, 2)), [2, 3]) == 1
    s, _, _ = schmidt_decomposition(split_information_state(), [2, 2, 2], split=1)
    assert np.allclose(s, [1 / np.sqrt(2)] * 2)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_permute_and_embed(seed):
    rng = np.random.default_rng(seed)
    a, b, c = random_ket(2, rng), random_ket(3, rng), random_ket(2, rng)
    assert np.allclose(permute_factors(tensor(a, b, c), [2, 3, 2], [2, 0, 1]), tensor(c, a, b))
    A, C = random_hermitian(2, rng), random_hermitian(2, rng)
    big = embed(np.kron(A, C), [2, 3, 2], [0, 2])
    assert np.allclose(big, np.kron(np.kron(A, np.eye(3)), C))
    big = embed(np.kron(C, A), [2, 3, 2], [2, 0])
    assert np.allclose(big, np.kron(np.kron(A, np.eye(3)), C))


def test_as_ket_validation():
    with pytest.raises(DimensionMismatchError):
        as_ket(np.eye(2))
