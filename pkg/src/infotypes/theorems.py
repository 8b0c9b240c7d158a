"""Constructive checkers for the presence / absence / no-cloning theorems.

Each checker takes a concrete state (and decompositions), evaluates the
theorem's hypotheses, and then measures its conclusion.  Every measurement is
a nonnegative residual (a norm or an absolute difference); a clause holds
when its residual is at most ``tol``.  Reports whose hypotheses fail are
*vacuous*: their conclusion is still measured and reported, but a harness
must count them as skipped, never as passes or failures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, depth_first_order

from .bases import (
    as_basis,
    as_decomposition,
    decomposition_projectors,
    operator_basis,
    operator_space_rank,
)
from .circuits import Isometry
from .core import TOL, as_ket, check_shape, partial_trace, purify, random_hermitian
from .errors import InfoTypesError, UnsupportedHypothesisError
from .information import (
    absence_residual,
    all_information_present_mixed,
    as_state,
    commutant_dimension,
    conditional_operators,
    correlation_residual,
    marginal,
    maximal_entanglement_residual,
    presence_residual,
    truncate,
    truncate_factor,
)

DEFAULT_BASIS_TRIALS = 64


@dataclass
class Clause:
    description: str
    magnitude: float
    holds: bool

    def to_document(self) -> dict:
        return {"description": self.description, "magnitude": float(self.magnitude), "holds": bool(self.holds)}


@dataclass
class TheoremReport:
    """Outcome of one checker run.

    ``violations`` lists ``(description, magnitude)`` for every conclusion
    clause that was measured; magnitudes at or below ``tol`` mean the clause
    holds.  ``hypotheses`` records the hypothesis clauses the same way.
    """

    theorem: str
    hypotheses_hold: bool
    conclusion_holds: bool
    violations: list = field(default_factory=list)
    hypotheses: list = field(default_factory=list)
    trials: int = 0
    seed: int | None = None
    tol: float = TOL
    details: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return not self.hypotheses_hold

    @property
    def status(self) -> str:
        if self.vacuous:
            return "vacuous"
        return "pass" if self.conclusion_holds else "fail"

    @property
    def worst(self) -> float:
        return max((m for _, m in self.violations), default=0.0)

    def to_document(self) -> dict:
        return {
            "theorem": self.theorem,
            "status": self.status,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_holds": self.conclusion_holds,
            "vacuous": self.vacuous,
            "seed": self.seed,
            "trials": self.trials,
            "tol": self.tol,
            "worst": float(self.worst),
            "hypotheses": [h.to_document() for h in self.hypotheses],
            "violations": [{"description": d, "magnitude": float(m)} for d, m in self.violations],
            "details": self.details,
        }


class _Builder:
    def __init__(self, theorem, tol, trials=0, seed=None):
        self.report = TheoremReport(theorem, True, True, trials=trials, seed=seed, tol=tol)
        self.tol = tol

    def hypothesis(self, description, magnitude, holds=None):
        magnitude = float(magnitude)
        ok = magnitude <= self.tol if holds is None else bool(holds)
        self.report.hypotheses.append(Clause(description, magnitude, ok))
        self.report.hypotheses_hold &= ok
        return ok

    def conclusion(self, description, magnitude):
        magnitude = float(magnitude)
        self.report.violations.append((description, magnitude))
        self.report.conclusion_holds &= magnitude <= self.tol

    def done(self, **details):
        self.report.details.update(details)
        return self.report


def _rng(seed):
    return np.random.default_rng(seed)


def _three_factors(shape, source, witness, third):
    n = len(shape)
    roles = [source, witness, third]
    if len(set(roles)) != 3 or any(not 0 <= f < n for f in roles):
        raise InfoTypesError(f"factors {roles} are not three distinct factors of {tuple(shape)}")


# ---------------------------------------------------------------- presence

def check_presence(rho, shape, V, W, trials: int = DEFAULT_BASIS_TRIALS, tol: float = TOL,
                   seed: int | None = None, source: int = 0, target=None) -> TheoremReport:
    """Two strongly incompatible types present in ``b`` imply every type is present.

    Conclusion clauses: ``rho_a`` proportional to the identity; the
    computational, Fourier and ``trials`` Haar-random bases all present; and,
    following the purification argument, every pure component of ``rho_ab``
    maximally entangled with an auxiliary system uncorrelated with ``a``.
    """
    V, W = as_decomposition(V), as_decomposition(W)
    b = _Builder("presence", tol, trials, seed)
    dim = commutant_dimension([V, W])
    b.hypothesis("strongly incompatible (commutant dimension)", dim, dim == 1)
    b.hypothesis("V perfectly present", presence_residual(rho, shape, V, source, target, tol))
    b.hypothesis("W perfectly present", presence_residual(rho, shape, W, source, target, tol))

    r, d_a, d_t = marginal(rho, shape, source, target)
    rho_a = partial_trace(r, [d_a, d_t], [0])
    b.conclusion("rho_a proportional to I_a", np.linalg.norm(rho_a - np.eye(d_a) / d_a))
    _, worst = all_information_present_mixed(r, [d_a, d_t], trials, _rng(seed), tol)
    b.conclusion("random bases perfectly present", worst)

    phi = purify(r, tol=max(tol, 1e-8))
    rank = phi.size // (d_a * d_t)
    comps = _pure_components(phi, d_a * d_t, rank)
    worst_me = max(maximal_entanglement_residual(c / np.linalg.norm(c), [d_a, d_t]) for c in comps)
    b.conclusion("pure components maximally entangled", worst_me)
    b.conclusion("auxiliary system uncorrelated with a", correlation_residual(phi, [d_a, d_t, rank], 0, [2]))
    return b.done(components=rank)


def _pure_components(phi, d_sys, rank):
    """Unnormalized ``sqrt(p_q) |psi_q>`` columns of a purification."""
    m = phi.reshape(d_sys, rank)
    return [m[:, q] for q in range(rank)]


def check_pure_component_lemma(rho, shape, V, tol: float = TOL, source: int = 0, target=None) -> TheoremReport:
    """Presence for a mixture carries over to each pure component with ``p_q > 0``."""
    V = as_decomposition(V)
    b = _Builder("pure-component", tol)
    b.hypothesis("V perfectly present", presence_residual(rho, shape, V, source, target, tol))
    r, d_a, d_t = marginal(rho, shape, source, target)
    phi = purify(r, tol=max(tol, 1e-8))
    rank = phi.size // (d_a * d_t)
    worst = 0.0
    for c in _pure_components(phi, d_a * d_t, rank):
        psi = c / np.linalg.norm(c)
        worst = max(worst, presence_residual(psi, [d_a, d_t], V, 0, [1], tol))
    b.conclusion("V perfectly present in every pure component", worst)
    return b.done(components=rank)


# ---------------------------------------------------------------- truncation family

def check_truncation(rho, shape, V, trials: int = 16, tol: float = TOL, seed: int | None = None,
                     source: int = 0, witness: int = 1, third: int = 2) -> TheoremReport:
    """``V`` present in ``b`` forces ``rho_ac`` to be block diagonal with respect to ``V``.

    Checks ``rho_ac = sum_j V_j rho_ac V_j``; ``<A C> = <A_trunc C>`` for
    ``trials`` random Hermitian pairs; and for rank-one ``V`` the
    reconstruction ``rho_ac = sum_j |v_j><v_j| (x) Gamma_j``.
    """
    V = as_decomposition(V)
    rho = as_state(rho)
    shape = check_shape(shape, rho.shape[0])
    _three_factors(shape, source, witness, third)
    b = _Builder("truncation", tol, trials, seed)
    b.hypothesis("V perfectly present in b", presence_residual(rho, shape, V, source, [witness], tol))

    rho_ac = partial_trace(rho, shape, [source, third])
    sub = [shape[source], shape[third]]
    b.conclusion("rho_ac commutes with V (block diagonal)", np.linalg.norm(rho_ac - truncate_factor(rho_ac, sub, V, 0)))
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        A, C = random_hermitian(sub[0], rng), random_hermitian(sub[1], rng)
        lhs = np.trace(np.kron(A, C) @ rho_ac)
        rhs = np.trace(np.kron(truncate(A, V), C) @ rho_ac)
        worst = max(worst, abs(lhs - rhs))
    b.conclusion("<AC> = <A_trunc C> for random A, C", worst)
    if V.is_rank_one():
        vecs = as_basis(V).vectors
        t = rho_ac.reshape(sub[0], sub[1], sub[0], sub[1])
        recon = np.zeros_like(rho_ac)
        for j in range(sub[0]):
            v = vecs[:, j]
            gamma = np.einsum("x,xmyn,y->mn", v.conj(), t, v)
            recon += np.kron(np.outer(v, v.conj()), gamma)
        b.conclusion("rho_ac = sum_j |v_j><v_j| (x) Gamma_j", np.linalg.norm(rho_ac - recon))
    return b.done()


def check_exclusion(rho, shape, V, W, tol: float = TOL, source: int = 0, witness: int = 1,
                    third: int = 2) -> TheoremReport:
    """``V`` present in ``b`` and ``W`` mutually unbiased to ``V`` imply ``W`` absent from ``c``."""
    rho = as_state(rho)
    shape = check_shape(shape, rho.shape[0])
    _three_factors(shape, source, witness, third)
    b = _Builder("exclusion", tol)
    try:
        Vb, Wb = as_basis(V), as_basis(W)
    except InfoTypesError:
        b.hypothesis("V and W are orthonormal bases", 1.0, False)
        return b.done()
    sq = np.abs(Vb.vectors.conj().T @ Wb.vectors) ** 2
    b.hypothesis("V, W mutually unbiased", np.max(np.abs(sq - 1.0 / Vb.dim)))
    b.hypothesis("V perfectly present in b", presence_residual(rho, shape, Vb, source, [witness], tol))
    b.conclusion("W perfectly absent from c", absence_residual(rho, shape, Wb, source, [third]))
    return b.done()


def check_no_splitting(rho, shape, trials: int = DEFAULT_BASIS_TRIALS, tol: float = TOL,
                       seed: int | None = None, source: int = 0, witness: int = 1, third: int = 2) -> TheoremReport:
    """All information about ``a`` in ``b`` means none of it in ``c``."""
    rho = as_state(rho)
    shape = check_shape(shape, rho.shape[0])
    _three_factors(shape, source, witness, third)
    b = _Builder("no-splitting", tol, trials, seed)
    r_ab, d_a, d_b = marginal(rho, shape, source, [witness])
    phi = purify(r_ab, tol=max(tol, 1e-8))
    rank = phi.size // (d_a * d_b)
    b.hypothesis("purified a|b marginal maximally entangled on a",
                 maximal_entanglement_residual(phi, [d_a, d_b, rank], 0))
    _, worst = all_information_present_mixed(r_ab, [d_a, d_b], trials, _rng(seed), tol)
    b.hypothesis("all information about a present in b", worst)
    b.conclusion("rho_ac = rho_a (x) rho_c", correlation_residual(rho, shape, source, [third]))
    return b.done()


def check_somewhere(psi, shape, trials: int = DEFAULT_BASIS_TRIALS, tol: float = TOL,
                    seed: int | None = None, source: int = 0, witness: int = 1, third: int = 2) -> TheoremReport:
    """Pure state: all information about ``a`` in ``bc`` and none in ``c`` puts it all in ``b``."""
    x = np.asarray(psi)
    if x.ndim != 1:
        raise UnsupportedHypothesisError("the Somewhere theorem needs a pure state (ket); density operators are not covered")
    psi = as_ket(x)
    shape = check_shape(shape, psi.size)
    _three_factors(shape, source, witness, third)
    if len(shape) != 3:
        raise UnsupportedHypothesisError("the Somewhere theorem needs a pure state on exactly three factors")
    b = _Builder("somewhere", tol, trials, seed)
    b.hypothesis("all information about a in bc", maximal_entanglement_residual(psi, shape, source, [witness, third]))
    b.hypothesis("no information about a in c", correlation_residual(psi, shape, source, [third]))
    r_ab, d_a, d_b = marginal(psi, shape, source, [witness])
    _, worst = all_information_present_mixed(r_ab, [d_a, d_b], trials, _rng(seed), tol)
    b.conclusion("all information about a in b", worst)
    return b.done()


# ---------------------------------------------------------------- absence

def check_absence_simple(psi, shape, V, tol: float = TOL) -> TheoremReport:
    """Pure state with one basis type absent from ``b`` must be a product.

    Besides the Schmidt test, follows the constructive route: the expansion
    coefficients ``|beta_j> = (<v_j| (x) I)|psi>`` are pairwise proportional and
    rebuild ``psi`` as ``|a> (x) |beta_ref>``.
    """
    psi = as_ket(psi)
    shape = check_shape(shape, psi.size)
    if len(shape) != 2:
        raise InfoTypesError("check_absence_simple expects a bipartite shape")
    Vb = as_basis(V)
    b = _Builder("absence-simple", tol)
    b.hypothesis("V perfectly absent from b", absence_residual(psi, shape, Vb))

    coeff = psi.reshape(shape)
    s = np.linalg.svd(coeff, compute_uv=False)
    b.conclusion("distance to nearest product state", np.sqrt(max(0.0, float(np.sum(s[1:] ** 2)))))
    betas = Vb.vectors.conj().T @ coeff  # row j is beta_j
    worst = 0.0
    for j in range(len(betas)):
        for k in range(j + 1, len(betas)):
            # ||x|| ||y_perp|| = sqrt(<x|x><y|y> - |<x|y>|^2) without the cancellation
            x, y = betas[j], betas[k]
            nx = np.linalg.norm(x)
            if nx > 0:
                worst = max(worst, np.linalg.norm(y - np.vdot(x, y) / nx ** 2 * x) * nx)
    b.conclusion("expansion coefficients pairwise proportional", worst)
    ref = betas[int(np.argmax(np.linalg.norm(betas, axis=1)))]
    c = betas @ ref.conj() / np.vdot(ref, ref).real
    a = Vb.vectors @ c
    b.conclusion("psi = |a> (x) |beta_ref>", np.linalg.norm(psi - np.kron(a, ref)))
    return b.done(schmidt_coefficients=[float(v) for v in s])


def check_absence_general(rho, shape, decomps: Sequence, tol: float = TOL) -> TheoremReport:
    """Absence of a spanning family of decompositions forces ``rho = rho_a (x) rho_b``.

    Also runs the operator-basis argument: with ``B_r = Tr_a(Q_r rho)``, every
    ``B_r`` must be ``Tr(B_r) rho_b`` and must agree with the value predicted
    from the absence weights through ``Q_r = sum c_rjm V_j^(m)``.
    """
    rho = as_state(rho)
    shape = check_shape(shape, rho.shape[0])
    if len(shape) != 2:
        raise InfoTypesError("check_absence_general expects a bipartite shape")
    d_a, d_b = shape
    decomps = [as_decomposition(v) for v in decomps]
    projs = decomposition_projectors(decomps)
    rank = operator_space_rank(projs)
    b = _Builder("absence-general", tol)
    b.hypothesis(f"projectors span operator space (rank {rank} of {d_a * d_a})", rank, rank == d_a * d_a)
    for m, v in enumerate(decomps):
        b.hypothesis(f"decomposition {m} perfectly absent from b", absence_residual(rho, shape, v))

    rho_a = partial_trace(rho, shape, [0])
    rho_b = partial_trace(rho, shape, [1])
    b.conclusion("rho = rho_a (x) rho_b", np.linalg.norm(rho - np.kron(rho_a, rho_b)))

    qs = operator_basis(d_a)
    t = rho.reshape(d_a, d_b, d_a, d_b)
    B = [np.einsum("xy,ymxn->mn", q, t) for q in qs]
    b.conclusion("every B_r proportional to B_0 = rho_b", max(np.linalg.norm(Br - np.trace(Br) * B[0]) for Br in B))
    if rank == d_a * d_a:
        weights = np.array([np.trace(c).real for v in decomps for c in conditional_operators(rho, shape, v)])
        mat = np.array([p.reshape(-1) for p in projs]).T
        coeffs, *_ = np.linalg.lstsq(mat, np.array([q.reshape(-1) for q in qs]).T, rcond=None)
        worst = max(np.linalg.norm(B[r] - (coeffs[:, r] @ weights) * B[0]) for r in range(len(qs)))
        b.conclusion("B_r predicted from absence weights", worst)
    return b.done(operator_space_rank=rank)


# ---------------------------------------------------------------- no cloning

@dataclass(frozen=True)
class CloningInstance:
    """Isometry ``M: H_a -> H_b (x) H_c`` and the kets ``{|alpha_j>}`` it is applied to."""

    M: Isometry
    alphas: tuple
    shape_out: tuple

    def __post_init__(self):
        M = self.M if isinstance(self.M, Isometry) else Isometry(np.asarray(self.M))
        alphas = tuple(as_ket(a) for a in self.alphas)
        shape_out = tuple(int(s) for s in self.shape_out)
        if len(shape_out) != 2 or shape_out[0] * shape_out[1] != M.out_dim:
            raise InfoTypesError("shape_out must be (d_b, d_c) with d_b * d_c = output dimension")
        if not alphas or any(a.size != M.in_dim for a in alphas):
            raise InfoTypesError("every alpha must live on the input space")
        if any(abs(np.linalg.norm(a) - 1.0) > 1e-10 for a in alphas):
            raise InfoTypesError("alphas must be normalized")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "shape_out", shape_out)


def _split_product(v, shape_out):
    """Best product approximation ``beta (x) gamma`` with unit ``gamma``; returns residual too."""
    u, s, vh = np.linalg.svd(v.reshape(shape_out), full_matrices=False)
    return s[0] * u[:, 0], vh[0], float(np.sqrt(max(0.0, np.sum(s[1:] ** 2))))


def _overlap_edges(alphas, tol):
    n = len(alphas)
    return [(j, k) for j in range(n) for k in range(j + 1, n) if abs(np.vdot(alphas[j], alphas[k])) > tol]


def _tree_order(n, edges, tree):
    rows = [j for j, _ in edges]
    cols = [k for _, k in edges]
    adj = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(n, n)).tocsr()
    walk = breadth_first_order if tree == "bfs" else depth_first_order
    order, pred = walk(adj, 0, directed=False, return_predecessors=True)
    return order, pred


def recover_cloning_unitary(inst: CloningInstance, tol: float = TOL, tree: str = "bfs") -> dict:
    """Build ``U`` on the span of the alphas with ``M|a> = (U|a>) (x) |gamma_1>``.

    The gammas are phase-aligned with ``gamma_1`` by walking a spanning tree of
    the overlap graph (``tree`` is ``"bfs"`` or ``"dfs"``) and ``U`` is fixed
    by ``U|alpha_j> = e^(i phi_j) |beta_j>``.  ``U`` is returned as a
    ``d_b x d_a`` matrix that vanishes on the complement of the span.
    """
    alphas = inst.alphas
    n = len(alphas)
    betas, gammas = [], []
    for a in alphas:
        beta, gamma, _ = _split_product(inst.M(a), inst.shape_out)
        betas.append(beta)
        gammas.append(gamma)
    edges = _overlap_edges(alphas, tol)
    order, pred = _tree_order(n, edges, tree)
    phases = np.ones(n, dtype=complex)
    for node in order[1:]:
        p = pred[node]
        ov = np.vdot(gammas[p], gammas[node])
        phases[node] = phases[p] * ov / abs(ov)
    reached = np.zeros(n, dtype=bool)
    reached[order] = True
    A = np.column_stack(alphas)
    Bp = np.column_stack([phases[j] * betas[j] for j in range(n)])
    U = Bp @ np.linalg.pinv(A, rcond=1e-10)
    ua, sa, _ = np.linalg.svd(A, full_matrices=False)
    G = ua[:, sa > 1e-10 * sa[0]]
    return {"U": U, "gamma": gammas[0], "span": G, "phases": phases, "betas": betas,
            "gammas": gammas, "edges": edges, "reached": reached}


def check_generalized_no_cloning(inst: CloningInstance, tol: float = TOL, tree: str = "bfs") -> TheoremReport:
    """Product images with preserved overlaps on a connected set force ``M = U (x) |gamma_1>`` on their span."""
    b = _Builder("no-cloning", tol)
    worst_prod = 0.0
    for a in inst.alphas:
        worst_prod = max(worst_prod, _split_product(inst.M(a), inst.shape_out)[2])
    b.hypothesis("every image M|alpha_j> is a product state", worst_prod)

    rec = recover_cloning_unitary(inst, tol, tree)
    edges, betas, gammas = rec["edges"], rec["betas"], rec["gammas"]
    worst_ov = 0.0
    for j, k in edges:
        na, nb = np.linalg.norm(betas[j]), np.linalg.norm(betas[k])
        ov_b = abs(np.vdot(betas[j], betas[k])) / (na * nb) if na * nb > 0 else 0.0
        worst_ov = max(worst_ov, abs(abs(np.vdot(inst.alphas[j], inst.alphas[k])) - ov_b))
    b.hypothesis("|<alpha_j|alpha_k>| = |<beta_j|beta_k>| on edges", worst_ov)
    connected = bool(rec["reached"].all())
    b.hypothesis("overlap graph on J connected", 0.0 if connected else 1.0, connected)

    d2 = max((1.0 - abs(np.vdot(gammas[j], gammas[k])) for j, k in edges), default=0.0)
    b.conclusion("|<gamma_j|gamma_k>| = 1 on edges", max(0.0, d2))
    U, G, gamma = rec["U"], rec["span"], rec["gamma"]
    A = np.column_stack(inst.alphas)
    Bp = np.column_stack([rec["phases"][j] * betas[j] for j in range(len(betas))])
    b.conclusion("U|alpha_j> = e^(i phi_j)|beta_j>", np.linalg.norm(U @ A - Bp))
    UG = U @ G
    b.conclusion("U unitary from G_a onto G_b", np.linalg.norm(UG.conj().T @ UG - np.eye(G.shape[1])))
    worst18 = max(np.linalg.norm(inst.M(G[:, i]) - np.kron(UG[:, i], gamma)) for i in range(G.shape[1]))
    b.conclusion("M|a> = (U|a>) (x) |gamma_1> on a basis of G_a", worst18)
    return b.done(span_dimension=int(G.shape[1]), edges=len(edges))


CHECKERS = {
    "presence": check_presence,
    "pure-component": check_pure_component_lemma,
    "truncation": check_truncation,
    "exclusion": check_exclusion,
    "no-splitting": check_no_splitting,
    "somewhere": check_somewhere,
    "absence-simple": check_absence_simple,
    "absence-general": check_absence_general,
    "no-cloning": check_generalized_no_cloning,
}
