"""Random instances that satisfy each checker's hypotheses, plus a seeded sweep runner.

Every generator takes ``(d, rng)`` and returns the keyword arguments for the
matching checker.  A sweep spawns one child seed per trial from
``np.random.SeedSequence(seed)``, so results do not depend on the number of
worker threads and are reported in trial order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bases import OrthonormalBasis, _is_prime, mub_family, random_basis, random_decomposition
from .circuits import Isometry, fourier
from .core import TOL, random_density, random_isometry, random_ket, random_unitary, tensor
from .fixtures import fully_entangled
from . import theorems as th


def _decomposition_with_parts(d, rng):
    """Random decomposition with at least two projectors."""
    while True:
        V = random_decomposition(d, rng)
        if len(V) >= 2:
            return V


def _orthogonal_blocks(d_b, sizes, rng):
    u = random_unitary(d_b, rng)
    out, start = [], 0
    for s in sizes:
        out.append(u[:, start:start + s])
        start += s
    return out


def presence_instance(d, rng):
    """Mixture of maximally entangled kets whose ``b`` supports are orthogonal."""
    K = int(rng.integers(1, 3))
    blocks = _orthogonal_blocks(d * K, [d] * K, rng)
    p = rng.dirichlet(np.ones(K))
    rho = np.zeros((d * d * K, d * d * K), dtype=complex)
    for q in range(K):
        psi = np.kron(random_unitary(d, rng), blocks[q]) @ fully_entangled(d)
        rho += p[q] * np.outer(psi, psi.conj())
    return {"rho": rho, "shape": (d, d * K), "V": _decomposition_with_parts(d, rng), "W": random_basis(d, rng)}


def pure_component_instance(d, rng):
    """Mixture in which ``V`` is present but not every type need be."""
    V = _decomposition_with_parts(d, rng)
    m = 2
    blocks = _orthogonal_blocks(len(V) * m, [m] * len(V), rng)
    K = int(rng.integers(1, 4))
    p = rng.dirichlet(np.ones(K))
    dim = d * len(V) * m
    rho = np.zeros((dim, dim), dtype=complex)
    for q in range(K):
        psi = sum(np.kron(Vj @ random_ket(d, rng), blocks[j] @ random_ket(m, rng)) for j, Vj in enumerate(V))
        psi = psi / np.linalg.norm(psi)
        rho += p[q] * np.outer(psi, psi.conj())
    return {"rho": rho, "shape": (d, len(V) * m), "V": V}


def _copy_label_state(V, d, rng, d_c=2, d_r=2):
    """``sum_j (V_j (x) |j>_b (x) I)|xi>`` on ``a b c r`` with random local rotations, ``r`` traced out."""
    n = len(V)
    xi = random_ket(d * d_c * d_r, rng)
    psi = sum(np.kron(np.kron(Vj, np.eye(n)[:, [j]]), np.eye(d_c * d_r)) @ xi for j, Vj in enumerate(V))
    psi = np.kron(np.kron(np.eye(d), random_unitary(n, rng)), random_unitary(d_c * d_r, rng)) @ psi
    rho = np.outer(psi, psi.conj()).reshape(d * n * d_c, d_r, d * n * d_c, d_r)
    return np.einsum("xryr->xy", rho), (d, n, d_c)


def truncation_instance(d, rng):
    V = _decomposition_with_parts(d, rng)
    rho, shape = _copy_label_state(V, d, rng)
    return {"rho": rho, "shape": shape, "V": V, "seed": int(rng.integers(2 ** 31))}


def mub_partner(V: OrthonormalBasis, rng=None) -> OrthonormalBasis:
    """A basis mutually unbiased to ``V`` (Fourier rotation, optionally with random phases)."""
    d = V.dim
    m = fourier(d)
    if rng is not None:
        m = np.exp(2j * np.pi * rng.random(d))[:, None] * m * np.exp(2j * np.pi * rng.random(d))[None, :]
    return OrthonormalBasis(V.vectors @ m)


def exclusion_instance(d, rng):
    V = random_basis(d, rng)
    rho, shape = _copy_label_state(V.decomposition(), d, rng)
    return {"rho": rho, "shape": shape, "V": V, "W": mub_partner(V, rng)}


def _split_ket(d, rng, d_b2=2, d_c=2, d_r=1):
    """``(U_a (x) U_b)(|Phi>_{a b1} (x) |chi>_{b2 c r})`` with ``b = b1 b2``."""
    chi = random_ket(d_b2 * d_c * d_r, rng)
    psi = np.kron(fully_entangled(d), chi)
    return np.kron(np.kron(random_unitary(d, rng), random_unitary(d * d_b2, rng)), np.eye(d_c * d_r)) @ psi


def no_splitting_instance(d, rng):
    psi = _split_ket(d, rng, d_r=2)
    rho = np.outer(psi, psi.conj()).reshape(d * 2 * d * 2, 2, d * 2 * d * 2, 2)
    return {"rho": np.einsum("xryr->xy", rho), "shape": (d, 2 * d, 2), "seed": int(rng.integers(2 ** 31))}


def somewhere_instance(d, rng):
    return {"psi": _split_ket(d, rng), "shape": (d, 2 * d, 2), "seed": int(rng.integers(2 ** 31))}


def absence_simple_instance(d, rng):
    return {"psi": tensor(random_ket(d, rng), random_ket(3, rng)), "shape": (d, 3), "V": random_basis(d, rng)}


def spanning_family(d, rng):
    """``d + 1`` bases whose projectors span operator space (MUBs for prime ``d``)."""
    if _is_prime(d):
        return mub_family(d)
    return [random_basis(d, rng) for _ in range(d + 1)]


def absence_general_instance(d, rng):
    rho = np.kron(random_density(d, rng), random_density(3, rng))
    return {"rho": rho, "shape": (d, 3), "decomps": spanning_family(d, rng)}


def no_cloning_instance(d, rng):
    """Isometry of the conclusion form on a random span ``G_a``; the complement goes elsewhere."""
    g = d if d < 3 else int(rng.integers(d - 1, d + 1))
    d_b, d_c = d + 1, 2
    Q = random_isometry(d, d, rng)
    Qg, Qp = Q[:, :g], Q[:, g:]
    cu = random_unitary(d_c, rng)
    gamma, gperp = cu[:, [0]], cu[:, [1]]
    M = np.kron(random_isometry(d_b, g, rng) @ Qg.conj().T, gamma)
    if g < d:
        M = M + np.kron(random_isometry(d_b, d - g, rng) @ Qp.conj().T, gperp)
    alphas = tuple(Qg @ random_ket(g, rng) for _ in range(g + 1))
    return {"inst": th.CloningInstance(Isometry(M), alphas, (d_b, d_c))}


def basis_pair(d, rng, structured: bool | None = None):
    """Pair of orthonormal bases; block-structured pairs share an invariant subspace split.

    Haar pairs are generically strongly incompatible.  A structured pair is
    ``(G U1, G U2)`` with ``U1, U2`` block diagonal over a random partition of
    ``d`` into at least two blocks, so it is never strongly incompatible.
    """
    if structured is None:
        structured = bool(rng.integers(2))
    if not structured or d < 2:
        return random_basis(d, rng), random_basis(d, rng)
    cuts = sorted(rng.choice(np.arange(1, d), size=int(rng.integers(1, d)), replace=False))
    edges = [0, *cuts, d]
    G = random_unitary(d, rng)
    mats = []
    for _ in range(2):
        U = np.zeros((d, d), dtype=complex)
        for a, b in zip(edges[:-1], edges[1:]):
            U[a:b, a:b] = random_unitary(b - a, rng)
        mats.append(OrthonormalBasis(G @ U))
    return tuple(mats)


GENERATORS = {
    "presence": presence_instance,
    "pure-component": pure_component_instance,
    "truncation": truncation_instance,
    "exclusion": exclusion_instance,
    "no-splitting": no_splitting_instance,
    "somewhere": somewhere_instance,
    "absence-simple": absence_simple_instance,
    "absence-general": absence_general_instance,
    "no-cloning": no_cloning_instance,
}

# checkers that take their own inner seed draw it from the instance rng
_INNER_TRIALS = {"presence": 16, "no-splitting": 16, "somewhere": 16}


@dataclass
class SweepResult:
    theorem: str
    dim: int
    seed: int
    reports: list = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.reports)

    @property
    def failures(self) -> int:
        return self.count("fail")

    @property
    def worst(self) -> float:
        return max((r.worst for r in self.reports if not r.vacuous), default=0.0)

    def summary(self) -> dict:
        return {
            "theorem": self.theorem,
            "dim": self.dim,
            "seed": self.seed,
            "trials": len(self.reports),
            "pass": self.count("pass"),
            "fail": self.count("fail"),
            "vacuous": self.count("vacuous"),
            "worst": float(self.worst),
        }


def run_trial(theorem: str, d: int, trial_seed: int, tol: float = TOL):
    rng = np.random.default_rng(trial_seed)
    kwargs = GENERATORS[theorem](d, rng)
    if theorem in _INNER_TRIALS:
        kwargs.setdefault("seed", int(rng.integers(2 ** 31)))
        kwargs["trials"] = _INNER_TRIALS[theorem]
    report = th.CHECKERS[theorem](tol=tol, **kwargs)
    report.seed = int(trial_seed)
    return report


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


def run_sweep(theorem: str, d: int, trials: int, seed: int = 0, tol: float = TOL, jobs: int = 1) -> SweepResult:
    if theorem not in GENERATORS:
        raise KeyError(f"unknown theorem {theorem!r}; choose from {sorted(GENERATORS)}")
    seeds = trial_seeds(seed, trials)
    result = SweepResult(theorem, d, seed)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            result.reports = list(pool.map(lambda s: run_trial(theorem, d, s, tol), seeds))
    else:
        result.reports = [run_trial(theorem, d, s, tol) for s in seeds]
    return result
