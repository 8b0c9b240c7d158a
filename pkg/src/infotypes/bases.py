"""Projective decompositions of the identity and orthonormal bases.

A :class:`Decomposition` is one *type* of information about a system: an
exhaustive list of mutually orthogonal projectors.  An
:class:`OrthonormalBasis` is the rank-one special case and converts to a
decomposition with :meth:`OrthonormalBasis.decomposition`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .core import as_operator, random_unitary
from .errors import DimensionMismatchError, InvalidDecompositionError, UnsupportedDimensionError

VALIDATION_TOL = 1e-8


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Decomposition:
    """Mutually orthogonal projectors summing to the identity.

    Zero projectors are allowed; they stand for outcomes that cannot occur
    (witness decompositions keep one slot per outcome of the measured type).
    """

    projectors: tuple
    labels: tuple = field(default=())
    tol: float = VALIDATION_TOL

    def __post_init__(self):
        projs = tuple(_frozen(as_operator(p)) for p in self.projectors)
        if not projs:
            raise InvalidDecompositionError("a decomposition needs at least one projector")
        d = projs[0].shape[0]
        if any(p.shape != (d, d) for p in projs):
            raise InvalidDecompositionError("projectors have different dimensions")
        labels = tuple(str(s) for s in self.labels) or tuple(str(j) for j in range(len(projs)))
        if len(labels) != len(projs):
            raise InvalidDecompositionError("one label per projector is required")
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "labels", labels)
        self._validate()

    def _validate(self):
        tol = self.tol
        for j, p in enumerate(self.projectors):
            if np.linalg.norm(p - p.conj().T) > tol or np.linalg.norm(p @ p - p) > tol:
                raise InvalidDecompositionError(f"element {j} is not a projector")
        for j in range(len(self.projectors)):
            for k in range(j + 1, len(self.projectors)):
                if np.linalg.norm(self.projectors[j] @ self.projectors[k]) > tol:
                    raise InvalidDecompositionError(f"elements {j} and {k} are not orthogonal")
        total = sum(self.projectors)
        if np.linalg.norm(total - np.eye(self.dim)) > tol:
            raise InvalidDecompositionError("projectors do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.projectors)

    def __iter__(self):
        return iter(self.projectors)

    def __getitem__(self, j):
        return self.projectors[j]

    @property
    def ranks(self) -> list[int]:
        return [int(round(np.trace(p).real)) for p in self.projectors]

    def is_rank_one(self) -> bool:
        return all(r == 1 for r in self.ranks)

    def commutes_with(self, other: "Decomposition", tol: float = VALIDATION_TOL) -> bool:
        """Compatibility: every projector of one commutes with every projector of the other."""
        return all(
            np.linalg.norm(p @ q - q @ p) <= tol for p in self.projectors for q in other.projectors
        )


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal basis stored as the columns of a unitary matrix."""

    vectors: np.ndarray
    labels: tuple = field(default=())
    tol: float = VALIDATION_TOL

    def __post_init__(self):
        v = _frozen(self.vectors)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InvalidDecompositionError("basis vectors must form a square matrix (one ket per column)")
        if np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0])) > self.tol:
            raise InvalidDecompositionError("basis vectors are not orthonormal")
        labels = tuple(str(s) for s in self.labels) or tuple(str(j) for j in range(v.shape[1]))
        if len(labels) != v.shape[1]:
            raise InvalidDecompositionError("one label per basis vector is required")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_kets(cls, kets: Iterable, labels: Sequence[str] = ()) -> "OrthonormalBasis":
        return cls(np.column_stack([np.asarray(k, dtype=complex) for k in kets]), tuple(labels))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def kets(self) -> list[np.ndarray]:
        return [self.vectors[:, j].copy() for j in range(self.dim)]

    def __len__(self):
        return self.dim

    def decomposition(self) -> Decomposition:
        projs = [np.outer(v, v.conj()) for v in self.kets]
        return Decomposition(tuple(projs), self.labels)


DecompositionLike = Union[Decomposition, OrthonormalBasis, Sequence]


def as_decomposition(x: DecompositionLike) -> Decomposition:
    if isinstance(x, Decomposition):
        return x
    if isinstance(x, OrthonormalBasis):
        return x.decomposition()
    return Decomposition(tuple(x))


def as_basis(x) -> OrthonormalBasis:
    if isinstance(x, OrthonormalBasis):
        return x
    if isinstance(x, Decomposition):
        if not x.is_rank_one():
            raise InvalidDecompositionError("decomposition is not an orthonormal basis")
        kets = []
        for p in x.projectors:
            w, v = np.linalg.eigh(p)
            kets.append(v[:, -1])
        return OrthonormalBasis.from_kets(kets, x.labels)
    return OrthonormalBasis(np.asarray(x, dtype=complex))


# ---------------------------------------------------------------- standard bases

def z_basis(d: int = 2) -> OrthonormalBasis:
    return OrthonormalBasis(np.eye(d, dtype=complex), tuple(str(j) for j in range(d)))


def fourier_basis(d: int) -> OrthonormalBasis:
    """Columns ``sum_j w^(jk) |j> / sqrt(d)`` with ``w = exp(2 pi i / d)``."""
    j = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    return OrthonormalBasis(f, tuple(f"f{k}" for k in range(d)))


def x_basis() -> OrthonormalBasis:
    s = 1 / np.sqrt(2)
    return OrthonormalBasis(np.array([[s, s], [s, -s]], dtype=complex), ("+", "-"))


def y_basis() -> OrthonormalBasis:
    s = 1 / np.sqrt(2)
    return OrthonormalBasis(np.array([[s, s], [1j * s, -1j * s]], dtype=complex), ("+i", "-i"))


def trivial_decomposition(d: int) -> Decomposition:
    return Decomposition((np.eye(d),), ("I",))


def random_basis(d: int, rng: np.random.Generator) -> OrthonormalBasis:
    """Haar-random orthonormal basis."""
    return OrthonormalBasis(random_unitary(d, rng))


def random_decomposition(d: int, rng: np.random.Generator, ranks: Sequence[int] | None = None) -> Decomposition:
    """Random decomposition with the given projector ranks (random composition of d if omitted)."""
    if ranks is None:
        cuts = sorted(rng.choice(np.arange(1, d), size=rng.integers(0, d), replace=False)) if d > 1 else []
        edges = [0, *cuts, d]
        ranks = [b - a for a, b in zip(edges[:-1], edges[1:])]
    if sum(ranks) != d or any(r < 1 for r in ranks):
        raise InvalidDecompositionError(f"ranks {list(ranks)} do not partition dimension {d}")
    u = random_unitary(d, rng)
    projs, start = [], 0
    for r in ranks:
        cols = u[:, start:start + r]
        projs.append(cols @ cols.conj().T)
        start += r
    return Decomposition(tuple(projs))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n ** 0.5) + 1))


def mub_family(d: int) -> list[OrthonormalBasis]:
    """``d + 1`` pairwise mutually unbiased bases for prime ``d``.

    ``d = 2`` gives the Z, X, Y bases.  For odd primes the bases are the
    computational basis plus the eigenbases of ``X Z^a``, written out as
    ``|v^(a)_k> = sum_j w^(a j^2 + k j) |j> / sqrt(d)`` for ``a = 0..d-1``.
    """
    if not _is_prime(d):
        raise UnsupportedDimensionError(f"mutually unbiased family only implemented for prime d, got {d}")
    if d == 2:
        return [z_basis(2), x_basis(), y_basis()]
    j = np.arange(d)
    family = [z_basis(d)]
    for a in range(d):
        phase = (a * np.outer(j * j, np.ones(d, dtype=int)) + np.outer(j, j)) % d
        family.append(
            OrthonormalBasis(np.exp(2j * np.pi * phase / d) / np.sqrt(d), tuple(f"m{a}.{k}" for k in range(d)))
        )
    return family


# ---------------------------------------------------------------- operator space

def operator_basis(d: int) -> list[np.ndarray]:
    """Hermitian operator basis ``{Q_r}`` with ``Q_0 = I`` and ``Tr(Q_r^+ Q_s) / d = delta_rs``.

    Built from generalized Gell-Mann matrices rescaled by ``sqrt(d / 2)``; for
    ``d = 2`` the result is ``[I, X, Y, Z]``.
    """
    if d < 1:
        raise UnsupportedDimensionError("dimension must be positive")
    basis = [np.eye(d, dtype=complex)]
    scale = np.sqrt(d / 2)
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((d, d), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            basis += [scale * s, scale * a]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        basis.append(scale * np.sqrt(2 / (l * (l + 1))) * np.diag(diag).astype(complex))
    return basis


def operator_space_rank(ops: Sequence, tol: float = 1e-9) -> int:
    """Dimension of the linear span of ``ops`` inside the space of operators."""
    ops = [as_operator(o) for o in ops]
    if not ops:
        return 0
    m = np.array([o.reshape(-1) for o in ops])
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def spans_operator_space(ops: Sequence, tol: float = 1e-9) -> bool:
    """True iff the operators span all ``d x d`` matrices."""
    ops = [as_operator(o) for o in ops]
    d = ops[0].shape[0]
    if any(o.shape != (d, d) for o in ops):
        raise DimensionMismatchError("operators have different dimensions")
    return operator_space_rank(ops, tol) == d * d


def decomposition_projectors(decomps: Sequence[DecompositionLike]) -> list[np.ndarray]:
    return [p for v in decomps for p in as_decomposition(v).projectors]
