"""Dense linear algebra on finite-dimensional tensor-product Hilbert spaces.

Kets are 1-D ``complex128`` arrays and operators are square 2-D arrays.
Composite spaces are described by a *shape*, the ordered list of factor
dimensions.  Index convention: the leftmost factor is the slowest-varying
index, i.e. ``np.kron`` ordering, so a ket on shape ``(2, 3)`` reshapes to a
``(2, 3)`` array with ``psi.reshape(2, 3)[a, b]`` the amplitude of
``|a>|b>``.

Every function returns a fresh array and never mutates its arguments.
Comparisons use the Frobenius norm with an absolute tolerance, ``TOL`` by
default.
"""
from __future__ import annotations

from functools import reduce
from string import ascii_letters
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, DimensionMismatchError, InvalidDensityError

TOL = 1e-10
PURIFY_CUTOFF = 1e-12


def as_ket(x) -> np.ndarray:
    psi = np.asarray(x, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise DimensionMismatchError(f"a ket must be a non-empty vector, got shape {psi.shape}")
    return psi


def as_operator(x) -> np.ndarray:
    op = np.asarray(x, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.size == 0:
        raise DimensionMismatchError(f"an operator must be a non-empty square matrix, got shape {op.shape}")
    return op


def check_shape(shape: Sequence[int], dim: int) -> tuple[int, ...]:
    """Validate that ``shape`` factorizes ``dim`` and return it as a tuple."""
    shape = tuple(int(s) for s in shape)
    if not shape or any(s < 1 for s in shape):
        raise DimensionMismatchError(f"invalid shape {shape}")
    if int(np.prod(shape)) != dim:
        raise DimensionMismatchError(f"shape {shape} does not factorize dimension {dim}")
    return shape


def basis_ket(d: int, j: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[j] = 1.0
    return e


def dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(x)).T


def tensor(*xs) -> np.ndarray:
    """Kronecker product of kets or of operators, left factor slowest."""
    if not xs:
        raise ValueError("tensor() needs at least one argument")
    arrays = [np.asarray(x, dtype=complex) for x in xs]
    if len({a.ndim for a in arrays}) != 1:
        raise DimensionMismatchError("cannot tensor a ket with an operator")
    return reduce(np.kron, arrays)


def density(psi) -> np.ndarray:
    psi = as_ket(psi)
    return np.outer(psi, psi.conj())


def partial_trace(op, shape: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace ``op`` over every factor not listed in ``keep``.

    The factors of the result appear in the order given by ``keep``, so
    ``keep=[2, 0]`` both traces out factor 1 and swaps the survivors.
    """
    op = as_operator(op)
    shape = check_shape(shape, op.shape[0])
    keep = [int(k) for k in keep]
    n = len(shape)
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"invalid factor selection {keep} for shape {shape}")
    if 2 * n > len(ascii_letters):
        raise DimensionMismatchError("too many tensor factors")
    rows = list(ascii_letters[:n])
    cols = list(ascii_letters[n:2 * n])
    for f in range(n):
        if f not in keep:
            cols[f] = rows[f]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    t = op.reshape(shape + shape)
    d_keep = int(np.prod([shape[k] for k in keep])) if keep else 1
    res = np.einsum(f"{''.join(rows)}{''.join(cols)}->{out}", t)
    return np.asarray(res, dtype=complex).reshape(d_keep, d_keep)


def reduced_density(psi, shape: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """``partial_trace(|psi><psi|, shape, keep)`` without forming the full projector."""
    psi = as_ket(psi)
    shape = check_shape(shape, psi.size)
    keep = [int(k) for k in keep]
    rest = [f for f in range(len(shape)) if f not in keep]
    t = psi.reshape(shape).transpose(keep + rest)
    d_keep = int(np.prod([shape[k] for k in keep])) if keep else 1
    m = t.reshape(d_keep, -1)
    return m @ m.conj().T


def permute_factors(x, shape: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of a ket or operator.

    The ``i``-th factor of the result is factor ``order[i]`` of the input.
    """
    x = np.asarray(x, dtype=complex)
    shape = check_shape(shape, x.shape[0])
    order = [int(k) for k in order]
    if sorted(order) != list(range(len(shape))):
        raise DimensionMismatchError(f"{order} is not a permutation of the factors of {shape}")
    if x.ndim == 1:
        return x.reshape(shape).transpose(order).reshape(-1)
    n = len(shape)
    t = x.reshape(shape + shape).transpose(order + [n + k for k in order])
    return t.reshape(x.shape)


def embed(op, shape: Sequence[int], factors: Sequence[int]) -> np.ndarray:
    """Lift an operator on the listed factors to the whole space (identity elsewhere)."""
    op = as_operator(op)
    shape = tuple(shape)
    factors = list(factors)
    rest = [f for f in range(len(shape)) if f not in factors]
    d_rest = int(np.prod([shape[f] for f in rest])) if rest else 1
    if op.shape[0] != int(np.prod([shape[f] for f in factors])):
        raise DimensionMismatchError("operator does not match the selected factors")
    full = np.kron(op, np.eye(d_rest))
    order = factors + rest
    inverse = list(np.argsort(order))
    return permute_factors(full, [shape[f] for f in order], inverse)


def projector_onto(k) -> np.ndarray:
    """Projector |k><k| / <k|k>."""
    k = as_ket(k)
    nrm2 = np.vdot(k, k).real
    if nrm2 <= 0.0:
        raise DegenerateInputError("cannot project onto the zero ket")
    return np.outer(k, k.conj()) / nrm2


def is_hermitian(op, tol: float = TOL) -> bool:
    op = as_operator(op)
    return bool(np.linalg.norm(op - op.conj().T) <= tol)


def is_projector(op, tol: float = TOL) -> bool:
    op = as_operator(op)
    return is_hermitian(op, tol) and bool(np.linalg.norm(op @ op - op) <= tol)


def is_density(op, tol: float = TOL) -> bool:
    op = as_operator(op)
    if not is_hermitian(op, tol):
        return False
    if abs(np.trace(op) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh((op + op.conj().T) / 2).min() >= -tol)


def is_unitary(op, tol: float = TOL) -> bool:
    op = as_operator(op)
    return bool(np.linalg.norm(op.conj().T @ op - np.eye(op.shape[0])) <= tol)


def is_isometry(m, tol: float = TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] < m.shape[1]:
        return False
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])) <= tol)


def is_normalized(psi, tol: float = TOL) -> bool:
    return bool(abs(np.linalg.norm(as_ket(psi)) - 1.0) <= tol)


def purify(rho, cutoff: float = PURIFY_CUTOFF, tol: float = TOL) -> np.ndarray:
    """Purify a density operator onto ``H (x) H_aux`` with ``dim H_aux = rank``.

    Returns ``sum_q sqrt(p_q) |psi_q> (x) |c_q>`` where ``p_q, psi_q`` are the
    eigenpairs of ``rho`` with ``p_q >= cutoff`` and ``|c_q>`` is the standard
    basis of the auxiliary factor.  Tracing out the last factor recovers
    ``rho`` up to the discarded eigenvalues.
    """
    rho = as_operator(rho)
    if not is_density(rho, tol):
        raise InvalidDensityError("purify() needs a positive operator with unit trace")
    p, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    keep = p >= cutoff
    p, vecs = p[keep][::-1], vecs[:, keep][:, ::-1]
    # column q of vecs is |psi_q>; the amplitude matrix is indexed [system, aux]
    return (vecs * np.sqrt(p)).reshape(-1)


def schmidt_decomposition(psi, shape: Sequence[int], split: int = 1):
    """Schmidt form of ``psi`` across the cut after the first ``split`` factors.

    Returns ``(coeffs, left, right)`` with ``psi = sum_i coeffs[i] left[:, i] (x) right[:, i]``
    and coefficients in decreasing order.
    """
    psi = as_ket(psi)
    shape = check_shape(shape, psi.size)
    if not 0 < split < len(shape):
        raise DimensionMismatchError(f"split {split} does not cut shape {shape}")
    d_left = int(np.prod(shape[:split]))
    u, s, vh = np.linalg.svd(psi.reshape(d_left, -1), full_matrices=False)
    return s, u, vh.T


def schmidt_rank(psi, shape: Sequence[int], split: int = 1, tol: float = TOL) -> int:
    s, _, _ = schmidt_decomposition(psi, shape, split)
    return int(np.sum(s > tol))


def random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian matrix with the phase fix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> np.ndarray:
    return random_unitary(d_out, rng)[:, :d_in]


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density operator (induced measure) of the given rank."""
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (g + g.conj().T) / 2
    return h / np.linalg.norm(h)
