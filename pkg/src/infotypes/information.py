"""Presence, absence and incompatibility of types of quantum information.

All state arguments accept either a density operator or a ket on a
composite space described by ``shape``.  ``source`` is the factor whose
information is being tracked (system *a*); ``target`` lists the factors
examined for that information (default: every other factor).  Factors that
are neither source nor target are traced out first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .bases import (
    Decomposition,
    DecompositionLike,
    as_basis,
    as_decomposition,
    fourier_basis,
    random_basis,
    z_basis,
)
from .core import TOL, as_ket, check_shape, density, embed, partial_trace, reduced_density
from .errors import DegenerateInputError, DimensionMismatchError, NoWitnessError

COMMUTANT_REL_TOL = 1e-9
EDGE_TOL = 1e-10


def as_state(x) -> np.ndarray:
    """Density operator for a ket or (copy of) an operator."""
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        return density(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatchError(f"expected a ket or a square operator, got shape {x.shape}")
    return x.copy()


def _resolve(shape, dim, source, target):
    shape = check_shape(shape, dim)
    if not 0 <= source < len(shape):
        raise DimensionMismatchError(f"source factor {source} not in shape {shape}")
    if target is None:
        target = [f for f in range(len(shape)) if f != source]
    elif isinstance(target, (int, np.integer)):
        target = [int(target)]
    target = [int(t) for t in target]
    if source in target or len(set(target)) != len(target) or any(not 0 <= t < len(shape) for t in target):
        raise DimensionMismatchError(f"invalid target factors {target} for source {source}")
    return shape, target


def marginal(rho, shape: Sequence[int], source: int = 0, target=None):
    """Reduce to ``source (x) target`` and return ``(rho_st, d_source, d_target)``."""
    x = np.asarray(rho, dtype=complex)
    shape, target = _resolve(shape, x.shape[0], source, target)
    keep = [source, *target]
    if x.ndim == 1:
        r = reduced_density(x, shape, keep)
    else:
        r = partial_trace(x, shape, keep)
    d_t = int(np.prod([shape[t] for t in target])) if target else 1
    return r, shape[source], d_t


def conditional_operators(rho, shape: Sequence[int], V: DecompositionLike, source: int = 0, target=None) -> list[np.ndarray]:
    """Unnormalized conditional operators ``Tr_a((V_j (x) I) rho)`` on the target factors."""
    V = as_decomposition(V)
    r, d_a, d_t = marginal(rho, shape, source, target)
    if V.dim != d_a:
        raise DimensionMismatchError(f"decomposition has dimension {V.dim}, source factor has {d_a}")
    t = r.reshape(d_a, d_t, d_a, d_t)
    # Tr_a(V rho)[m, n] = sum_{x, y} V[x, y] rho[(y, m), (x, n)]
    return [np.einsum("xy,ymxn->mn", p, t) for p in V.projectors]


def presence_residual(rho, shape, V, source: int = 0, target=None, skip_below: float = TOL) -> float:
    """Largest ``||rho_j rho_k||`` over distinct outcomes that have weight above ``skip_below``."""
    conds = conditional_operators(rho, shape, V, source, target)
    live = [c for c in conds if np.trace(c).real > skip_below]
    worst = 0.0
    for j in range(len(live)):
        for k in range(j + 1, len(live)):
            worst = max(worst, float(np.linalg.norm(live[j] @ live[k])))
    return worst


def is_perfectly_present(rho, shape, V, tol: float = TOL, source: int = 0, target=None, skip_below: float | None = None) -> bool:
    """Is the ``V`` information about the source factor perfectly present in the target?

    Zero-weight outcomes (``Tr rho_j <= skip_below``, default ``tol``) are left
    out of the pairwise orthogonality test.
    """
    skip = tol if skip_below is None else skip_below
    return presence_residual(rho, shape, V, source, target, skip) <= tol


def extract_witness_decomposition(rho, shape, V, tol: float = TOL, source: int = 0, target=None) -> Decomposition:
    """Decomposition ``{T_k}`` of the target identity correlated one-to-one with ``V``.

    ``T_j`` is the support projector of the j-th conditional operator (zero for
    impossible outcomes); a final ``rest`` projector completes the identity
    when the supports do not already exhaust the target space.
    """
    V = as_decomposition(V)
    if not is_perfectly_present(rho, shape, V, tol, source, target):
        raise NoWitnessError("the decomposition is not perfectly present in the target")
    conds = conditional_operators(rho, shape, V, source, target)
    d_t = conds[0].shape[0]
    projs = []
    for c in conds:
        if np.trace(c).real <= tol:
            projs.append(np.zeros((d_t, d_t), dtype=complex))
            continue
        w, u = np.linalg.eigh((c + c.conj().T) / 2)
        cols = u[:, w > tol]
        projs.append(cols @ cols.conj().T)
    rest = np.eye(d_t) - sum(projs)
    w, u = np.linalg.eigh((rest + rest.conj().T) / 2)
    cols = u[:, w > 0.5]
    labels = list(V.labels)
    if cols.shape[1]:
        projs.append(cols @ cols.conj().T)
        labels.append("rest")
    return Decomposition(tuple(projs), tuple(labels))


def witness_correlations(rho, shape, V, T, source: int = 0, target=None) -> np.ndarray:
    """Matrix of joint probabilities ``<V_j T_k>``; presence makes it diagonal in the shared labels."""
    conds = conditional_operators(rho, shape, V, source, target)
    T = as_decomposition(T)
    return np.array([[np.trace(c @ t).real for t in T.projectors] for c in conds])


def absence_residual(rho, shape, W, source: int = 0, target=None) -> float:
    """Largest ``||rho_k - Tr(rho_k) rho_c||`` over the outcomes of ``W``."""
    conds = conditional_operators(rho, shape, W, source, target)
    rho_c = sum(conds)
    return max(float(np.linalg.norm(c - np.trace(c) * rho_c)) for c in conds)


def is_perfectly_absent(rho, shape, W, tol: float = TOL, source: int = 0, target=None) -> bool:
    """Is the ``W`` information about the source perfectly absent from the target?"""
    return absence_residual(rho, shape, W, source, target) <= tol


def classify(rho, shape, V, tol: float = TOL, source: int = 0, target=None) -> str:
    """``'present'``, ``'absent'``, ``'neither'``, or ``'trivial'`` when both hold.

    Both hold only when at most one outcome of ``V`` has nonzero weight.
    """
    present = is_perfectly_present(rho, shape, V, tol, source, target)
    absent = is_perfectly_absent(rho, shape, V, tol, source, target)
    if present and absent:
        return "trivial"
    if present:
        return "present"
    if absent:
        return "absent"
    return "neither"


def maximal_entanglement_residual(psi, shape, source: int = 0, target=None) -> float:
    psi = as_ket(psi)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise DegenerateInputError("all_information_present() needs a normalized ket")
    r, d_a, _ = marginal(psi, shape, source, target)
    rho_a = partial_trace(r, [d_a, r.shape[0] // d_a], [0])
    return float(np.linalg.norm(rho_a - np.eye(d_a) / d_a))


def all_information_present(psi, shape, tol: float = TOL, source: int = 0, target=None) -> bool:
    """For a pure state: is every type of information about the source in the target?

    With no other factors this is maximal entanglement of the source with the
    rest, ``Tr_b |psi><psi| = I / d_a``.  If some factors are left out of
    ``target`` they are traced away and the mixed-state test is used instead.
    """
    x = as_ket(psi)
    shape, target = _resolve(shape, x.size, source, target)
    if len(target) + 1 == len(shape):
        return maximal_entanglement_residual(x, shape, source, target) <= tol
    ok, _ = all_information_present_mixed(x, shape, tol=tol, source=source, target=target)
    return ok


def all_information_present_mixed(rho, shape, trials: int = 0, rng: np.random.Generator | None = None,
                                  tol: float = TOL, source: int = 0, target=None):
    """Decide whether all information about the source is in the target for a general state.

    Returns ``(holds, worst_residual)``.  Presence of the computational and the
    Fourier basis (a mutually unbiased, hence strongly incompatible, pair)
    settles the question; ``trials`` extra Haar-random bases and the necessary
    condition ``rho_a ~ I`` are checked as well and folded into the residual.
    """
    r, d_a, d_t = marginal(rho, shape, source, target)
    rho_a = partial_trace(r, [d_a, d_t], [0])
    worst = float(np.linalg.norm(rho_a - np.eye(d_a) * np.trace(rho_a) / d_a))
    sub = [d_a, d_t]
    bases = [z_basis(d_a), fourier_basis(d_a)]
    if trials:
        rng = np.random.default_rng() if rng is None else rng
        bases += [random_basis(d_a, rng) for _ in range(trials)]
    for b in bases:
        worst = max(worst, presence_residual(r, sub, b, 0, [1], skip_below=tol))
    return worst <= tol, worst


def correlation_residual(rho, shape, source: int = 0, target=None) -> float:
    """``||rho_ac - rho_a (x) rho_c||`` after reducing to source and target."""
    r, d_a, d_t = marginal(rho, shape, source, target)
    rho_a = partial_trace(r, [d_a, d_t], [0])
    rho_c = partial_trace(r, [d_a, d_t], [1])
    return float(np.linalg.norm(r - np.kron(rho_a, rho_c)))


def no_information_present(rho, shape, tol: float = TOL, source: int = 0, target=None) -> bool:
    """Is no information about the source present in the target (a product marginal)?"""
    return correlation_residual(rho, shape, source, target) <= tol


# ---------------------------------------------------------------- incompatibility

@dataclass(frozen=True)
class IncompatibilityGraph:
    """Bipartite overlap graph of two bases.

    Nodes ``0..d-1`` are the kets of the first basis and ``d..2d-1`` those of
    the second; ``edges`` holds ``(j, k)`` pairs meaning ``<v_j|w_k> != 0``.
    """

    dim: int
    edges: tuple

    @property
    def n_nodes(self) -> int:
        return 2 * self.dim

    def components(self) -> np.ndarray:
        """Component label of every node."""
        rows = [j for j, _ in self.edges]
        cols = [self.dim + k for _, k in self.edges]
        adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        _, labels = connected_components(adj, directed=False)
        return labels

    def is_connected(self) -> bool:
        return len(set(self.components().tolist())) == 1


def build_graph(V, W, tol: float = EDGE_TOL) -> IncompatibilityGraph:
    """Edge ``(j, k)`` whenever ``|<v_j|w_k>| > tol``.

    Overlaps close to ``tol`` make the answer depend on rounding; choosing a
    threshold suited to the data is up to the caller.
    """
    V, W = as_basis(V), as_basis(W)
    if V.dim != W.dim:
        raise DimensionMismatchError("bases have different dimensions")
    overlaps = np.abs(V.vectors.conj().T @ W.vectors)
    edges = tuple((int(j), int(k)) for j, k in zip(*np.nonzero(overlaps > tol)))
    return IncompatibilityGraph(V.dim, edges)


def is_connected(graph: IncompatibilityGraph) -> bool:
    return graph.is_connected()


def commutant_dimension(decomps: Sequence[DecompositionLike], rel_tol: float = COMMUTANT_REL_TOL) -> int:
    """Dimension of ``{X : [X, P] = 0 for every projector P of every decomposition}``.

    Each commutator is written as a linear map on row-major ``vec(X)``,
    ``vec(PX - XP) = (P (x) I - I (x) P^T) vec(X)``; the commutant is the
    null space of the stacked maps.
    """
    decomps = [as_decomposition(v) for v in decomps]
    d = decomps[0].dim
    if any(v.dim != d for v in decomps):
        raise DimensionMismatchError("decompositions have different dimensions")
    eye = np.eye(d)
    blocks = [np.kron(p, eye) - np.kron(eye, p.T) for v in decomps for p in v.projectors]
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    if s[0] == 0:
        return d * d
    return d * d - int(np.sum(s > rel_tol * s[0]))


def strongly_incompatible(V, W, rel_tol: float = COMMUTANT_REL_TOL) -> bool:
    """Only 0 and I commute with every projector of both decompositions.

    The commutant is a *-algebra, and a finite-dimensional *-algebra contains a
    projector other than 0 and I exactly when it is larger than the scalars.
    """
    return commutant_dimension([V, W], rel_tol) == 1


def mutually_unbiased(V, W, tol: float = TOL) -> bool:
    V, W = as_basis(V), as_basis(W)
    if V.dim != W.dim:
        return False
    sq = np.abs(V.vectors.conj().T @ W.vectors) ** 2
    return bool(np.max(np.abs(sq - 1.0 / V.dim)) <= tol)


def truncate(A, V: DecompositionLike) -> np.ndarray:
    """Keep only the diagonal blocks of ``A``: ``sum_j V_j A V_j``."""
    V = as_decomposition(V)
    A = np.asarray(A, dtype=complex)
    if A.shape != (V.dim, V.dim):
        raise DimensionMismatchError("operator and decomposition dimensions differ")
    return sum(p @ A @ p for p in V.projectors)


def truncate_factor(op, shape: Sequence[int], V: DecompositionLike, factor: int = 0) -> np.ndarray:
    """``sum_j (V_j on factor) op (V_j on factor)`` for an operator on a composite space."""
    V = as_decomposition(V)
    op = np.asarray(op, dtype=complex)
    lifted = [embed(p, shape, [factor]) for p in V.projectors]
    return sum(p @ op @ p for p in lifted)
