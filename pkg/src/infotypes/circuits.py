"""Gate-level simulation of the teleportation and interferometer examples.

Circuits are measurement free: the classical bits of the textbook protocols
are kept as qudits that control the correction gates and are afterwards left
alone, i.e. carried off into the environment.

Qudit gates use ``w = exp(2 pi i / d)``::

    X_d |j> = |j + 1 mod d>      Z_d |j> = w^j |j>
    F_d |j> = sum_k w^(jk) |k> / sqrt(d)      (H = F_2)

A controlled gate with a control of dimension ``d_c`` applies ``U^k`` when the
control is in ``|k>``; for qubits this is the usual CX / CZ.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .core import (
    TOL,
    as_ket,
    basis_ket,
    check_shape,
    is_isometry,
    permute_factors,
    reduced_density,
    schmidt_decomposition,
)
from .errors import DimensionMismatchError, DocumentError, InfoTypesError
from .fixtures import fully_entangled


# ---------------------------------------------------------------- gate library

def shift(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def fourier(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def hadamard() -> np.ndarray:
    return fourier(2)


def pauli_x() -> np.ndarray:
    return shift(2)


def pauli_z() -> np.ndarray:
    return clock(2)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def controlled(u: np.ndarray, d_control: int = 2) -> np.ndarray:
    """``sum_k |k><k| (x) U^k`` with the control as the left factor."""
    u = np.asarray(u, dtype=complex)
    blocks = [np.linalg.matrix_power(u, k) for k in range(d_control)]
    out = np.zeros((d_control * u.shape[0],) * 2, dtype=complex)
    for k, b in enumerate(blocks):
        out[k * u.shape[0]:(k + 1) * u.shape[0], k * u.shape[0]:(k + 1) * u.shape[0]] = b
    return out


def cx() -> np.ndarray:
    return controlled(pauli_x())


def cz() -> np.ndarray:
    return controlled(pauli_z())


def _matrix_power(u: np.ndarray, power: int) -> np.ndarray:
    if power >= 0:
        return np.linalg.matrix_power(u, power)
    return np.linalg.matrix_power(u.conj().T, -power)


def base_gate(name: str, d: int, params: dict) -> np.ndarray:
    """Single-qudit gate ``name`` raised to ``params['power']`` (default 1)."""
    power = int(params.get("power", 1))
    if name == "X":
        u = shift(d)
    elif name == "Z":
        u = clock(d)
    elif name == "F":
        u = fourier(d)
    elif name == "H":
        if d != 2:
            raise DimensionMismatchError("H acts on qubits; use F for qudits")
        u = hadamard()
    elif name == "RY":
        if d != 2:
            raise DimensionMismatchError("RY acts on qubits")
        u = ry(float(params["theta"]))
    elif name == "I":
        u = np.eye(d, dtype=complex)
    else:
        raise InfoTypesError(f"unknown gate {name!r}")
    return _matrix_power(u, power)


@dataclass(frozen=True)
class GateOp:
    """One gate application.  ``controls`` is empty or holds a single factor."""

    name: str
    targets: tuple
    controls: tuple = ()
    params: dict = field(default_factory=dict)
    tag: str = ""

    def matrix(self, shape: Sequence[int]) -> np.ndarray:
        if len(self.targets) != 1 or len(self.controls) > 1:
            raise InfoTypesError("gates act on one target with at most one control")
        u = base_gate(self.name, shape[self.targets[0]], self.params)
        if self.controls:
            return controlled(u, shape[self.controls[0]])
        return u

    @property
    def factors(self) -> tuple:
        return tuple(self.controls) + tuple(self.targets)

    def label(self) -> str:
        p = self.params.get("power", 1)
        name = self.name if p == 1 else f"{self.name}^{p}"
        if "theta" in self.params:
            name += f"({self.params['theta']:.6g})"
        if self.controls:
            return f"C{name}[{self.controls[0]}->{self.targets[0]}]"
        return f"{name}[{self.targets[0]}]"


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on a fixed tensor-product shape.

    ``preparations`` fixes the initial state of the non-input factors as a
    tuple of ``(factors, ket)`` pairs; ``input_factor`` receives the data and
    ``output_factor`` is where it should come out.
    """

    shape: tuple
    ops: tuple = ()
    preparations: tuple = ()
    input_factor: int | None = None
    output_factor: int | None = None
    names: tuple = ()

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        if not shape or any(s < 1 for s in shape):
            raise DimensionMismatchError(f"invalid circuit shape {shape}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if any(not 0 <= f < len(shape) for f in op.factors) or len(set(op.factors)) != len(op.factors):
                raise DimensionMismatchError(f"gate {op.label()} references invalid factors")
            u = op.matrix(shape)
            if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) > 1e-10:
                raise InfoTypesError(f"gate {op.label()} is not unitary")

    @property
    def dim(self) -> int:
        return int(np.prod(self.shape))

    def without(self, tags: Sequence[str]) -> "Circuit":
        """Copy with every gate whose tag is listed removed."""
        return replace(self, ops=tuple(op for op in self.ops if op.tag not in set(tags)))

    def to_document(self) -> dict:
        from .documents import SCHEMA_VERSION, state_document

        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "circuit",
            "shape": list(self.shape),
            "names": list(self.names),
            "input_factor": self.input_factor,
            "output_factor": self.output_factor,
            "preparations": [
                {"factors": list(f), "state": state_document(k)} for f, k in self.preparations
            ],
            "ops": [
                {"gate": op.name, "targets": list(op.targets), "controls": list(op.controls),
                 "params": dict(op.params), "tag": op.tag}
                for op in self.ops
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Circuit":
        from .documents import parse_state_document

        if not isinstance(doc, dict) or doc.get("kind") != "circuit":
            raise DocumentError("kind must be 'circuit'", "kind")
        try:
            ops = tuple(
                GateOp(o["gate"], tuple(o["targets"]), tuple(o.get("controls", ())), dict(o.get("params", {})),
                       o.get("tag", ""))
                for o in doc["ops"]
            )
            preps = tuple(
                (tuple(p["factors"]), parse_state_document(p["state"], f"preparations[{i}].state")[0])
                for i, p in enumerate(doc.get("preparations", []))
            )
            return cls(tuple(doc["shape"]), ops, preps, doc.get("input_factor"), doc.get("output_factor"),
                       tuple(doc.get("names", ())))
        except KeyError as exc:
            raise DocumentError("missing field", str(exc.args[0])) from None


# ---------------------------------------------------------------- simulation

def _apply_local(state: np.ndarray, shape: tuple, u: np.ndarray, factors: Sequence[int]) -> np.ndarray:
    """Apply ``u`` on ``factors`` to a ``(dim, batch)`` array."""
    n = len(shape)
    factors = list(factors)
    rest = [f for f in range(n) if f not in factors]
    t = state.reshape(shape + (-1,))
    t = np.moveaxis(t, factors + rest, list(range(n)))
    front = t.shape
    t = (u @ t.reshape(u.shape[1], -1)).reshape(front)
    t = np.moveaxis(t, list(range(n)), factors + rest)
    return t.reshape(state.shape)


def _run(ops, shape: tuple, state: np.ndarray, offset: int = 0) -> np.ndarray:
    """Run ``ops`` (written for ``shape[offset:]``) on ``state`` living on ``shape``."""
    sub = shape[offset:]
    for op in ops:
        state = _apply_local(state, shape, op.matrix(sub), [f + offset for f in op.factors])
    return state


def apply(circuit: Circuit, psi) -> np.ndarray:
    psi = as_ket(psi)
    if psi.size != circuit.dim:
        raise DimensionMismatchError(f"circuit acts on dimension {circuit.dim}, ket has {psi.size}")
    return _run(circuit.ops, circuit.shape, psi.reshape(-1, 1)).reshape(-1)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    u = _run(circuit.ops, circuit.shape, np.eye(circuit.dim, dtype=complex))
    if np.linalg.norm(u.conj().T @ u - np.eye(circuit.dim)) > 1e-10:
        raise InfoTypesError("circuit unitary failed the unitarity check")
    return u


def assemble(shape: Sequence[int], parts: Sequence) -> np.ndarray:
    """Product state from ``(factors, ket)`` parts that together cover every factor once."""
    shape = tuple(shape)
    order = [f for factors, _ in parts for f in factors]
    if sorted(order) != list(range(len(shape))):
        raise DimensionMismatchError(f"parts cover factors {order}, expected each of 0..{len(shape) - 1} once")
    psi = np.ones(1, dtype=complex)
    for factors, k in parts:
        k = as_ket(k)
        if k.size != int(np.prod([shape[f] for f in factors])):
            raise DimensionMismatchError(f"ket for factors {tuple(factors)} has the wrong dimension")
        psi = np.kron(psi, k)
    return permute_factors(psi, [shape[f] for f in order], list(np.argsort(order)))


def initial_state(circuit: Circuit, psi) -> np.ndarray:
    if circuit.input_factor is None:
        raise InfoTypesError("circuit has no input factor")
    return assemble(circuit.shape, [((circuit.input_factor,), psi), *circuit.preparations])


def output_state(circuit: Circuit, psi) -> np.ndarray:
    """Reduced density operator on the output factor for input ``psi``."""
    out = apply(circuit, initial_state(circuit, psi))
    return reduced_density(out, circuit.shape, [circuit.output_factor])


def teleport_fidelity(circuit: Circuit, psi) -> float:
    psi = as_ket(psi)
    psi = psi / np.linalg.norm(psi)
    rho = output_state(circuit, psi)
    return float(np.vdot(psi, rho @ psi).real)


# ---------------------------------------------------------------- protocols

def _inverse_power(d: int) -> int:
    # qubit gates are their own inverses; keep the qubit circuit literally CX / CZ
    return 1 if d == 2 else -1


def one_bit_teleport(d: int = 2, drop_correction: bool = False) -> Circuit:
    """Quantized one-bit teleportation on factors ``(a, b)``.

    ``CX(a->b)``, ``F(a)``, then the correction ``CZ^-1(a->b)`` (tag ``"z"``).
    ``b`` starts in ``|0>``; the input enters at ``a`` and leaves at ``b``.
    """
    if d < 2:
        raise DimensionMismatchError("teleportation needs d >= 2")
    inv = _inverse_power(d)
    ops = [
        GateOp("X", (1,), (0,)),
        GateOp("H" if d == 2 else "F", (0,)),
        GateOp("Z", (1,), (0,), {"power": inv}, tag="z"),
    ]
    c = Circuit((d, d), tuple(ops), (((1,), basis_ket(d, 0)),), 0, 1, ("a", "b"))
    return c.without(["z"]) if drop_correction else c


def two_bit_teleport(d: int = 2, drop: Sequence[str] | bool = ()) -> Circuit:
    """Quantized standard teleportation on factors ``(a, c, b)``.

    ``c, b`` start in ``sum_j |jj> / sqrt(d)``.  Gates: ``CX^-1(a->c)``,
    ``F(a)``, then the corrections ``CX^-1(c->b)`` (tag ``"x"``) and
    ``CZ^-1(a->b)`` (tag ``"z"``).  ``drop`` removes corrections by tag;
    ``True`` removes both.
    """
    if d < 2:
        raise DimensionMismatchError("teleportation needs d >= 2")
    inv = _inverse_power(d)
    ops = [
        GateOp("X", (1,), (0,), {"power": inv}),
        GateOp("H" if d == 2 else "F", (0,)),
        GateOp("X", (2,), (1,), {"power": inv}, tag="x"),
        GateOp("Z", (2,), (0,), {"power": inv}, tag="z"),
    ]
    c = Circuit((d, d, d), tuple(ops), (((1, 2), fully_entangled(d)),), 0, 2, ("a", "c", "b"))
    if drop is True:
        drop = ("x", "z")
    return c.without(drop or ())


def teleport_circuit(bits: int, d: int, drop_correction: bool = False) -> Circuit:
    if bits == 1:
        return one_bit_teleport(d, drop_correction)
    if bits == 2:
        return two_bit_teleport(d, drop_correction)
    raise InfoTypesError("bits must be 1 or 2")


# ---------------------------------------------------------------- channel kets

def channel_ket(circuit: Circuit, input_factor: int | None = None) -> np.ndarray:
    """Feed half of ``sum_j |j>|j> / sqrt(d)`` through the circuit.

    An auxiliary factor of the input dimension is prepended, so the result
    lives on ``(d_in, *circuit.shape)`` with the auxiliary factor first.
    """
    inp = circuit.input_factor if input_factor is None else input_factor
    if inp is None:
        raise InfoTypesError("no input factor given")
    d_in = circuit.shape[inp]
    full = (d_in,) + circuit.shape
    parts = [((0, inp + 1), fully_entangled(d_in))]
    parts += [(tuple(f + 1 for f in factors), k) for factors, k in circuit.preparations]
    psi = assemble(full, parts)
    return _run(circuit.ops, full, psi.reshape(-1, 1), offset=1).reshape(-1)


def channel_ket_shape(circuit: Circuit, input_factor: int | None = None) -> tuple:
    inp = circuit.input_factor if input_factor is None else input_factor
    return (circuit.shape[inp],) + circuit.shape


def process_fidelity(circuit: Circuit) -> float:
    """Overlap of the (auxiliary, output) channel-ket marginal with the fully entangled state."""
    psi = channel_ket(circuit)
    shape = channel_ket_shape(circuit)
    rho = reduced_density(psi, shape, [0, circuit.output_factor + 1])
    d_in, d_out = shape[0], shape[circuit.output_factor + 1]
    if d_in != d_out:
        return 0.0
    phi = fully_entangled(d_in)
    return float(np.vdot(phi, rho @ phi).real)


# ---------------------------------------------------------------- map-state duality

@dataclass(frozen=True)
class Isometry:
    """Linear map ``M`` with ``M^+ M = I``; ``matrix`` has shape ``(out_dim, in_dim)``."""

    matrix: np.ndarray
    tol: float = TOL

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if not is_isometry(m, self.tol):
            raise InfoTypesError("matrix is not an isometry")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def in_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def out_dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, psi) -> np.ndarray:
        return self.matrix @ as_ket(psi)


def _basis_matrix(basis, d: int) -> np.ndarray:
    from .bases import as_basis

    if basis is None:
        return np.eye(d, dtype=complex)
    b = as_basis(basis).vectors
    if b.shape[0] != d:
        raise DimensionMismatchError("basis does not match the first factor")
    return b


def ket_to_map(psi, shape: Sequence[int], basis=None) -> np.ndarray:
    """Transpose ``sum_j |a_j> (x) |phi_j>`` into ``M = sum_j |phi_j><a_j|``.

    ``shape`` is ``(d_a, d_f)``; ``basis`` is an orthonormal basis of the first
    factor (computational by default).  The result has shape ``(d_f, d_a)``.
    """
    psi = as_ket(psi)
    d_a, d_f = check_shape(shape, psi.size)
    a = _basis_matrix(basis, d_a)
    coeff = psi.reshape(d_a, d_f)
    phis = a.conj().T @ coeff  # row j holds phi_j
    return phis.T @ a.conj().T


def map_to_ket(M, basis=None) -> np.ndarray:
    """Inverse of :func:`ket_to_map`: ``sum_j |a_j> (x) M|a_j>`` on ``(d_a, d_f)``."""
    M = np.asarray(M, dtype=complex)
    a = _basis_matrix(basis, M.shape[1])
    phis = M @ a  # column j holds M|a_j>
    return (a @ phis.T).reshape(-1)


# ---------------------------------------------------------------- interferometer

def _which_way_angle(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"decoherence strength must lie in [0, 1], got {lam}")
    return 2.0 * np.arccos(1.0 - lam)


def environment_states(lam: float):
    """Environment records ``(|eps_e>, |eps_f>)`` with ``<eps_e|eps_f> = 1 - lam``."""
    theta = _which_way_angle(lam)
    return basis_ket(2, 0), ry(theta) @ basis_ket(2, 0)


def interferometer_circuit(lam: float) -> Circuit:
    """Particle (factor 0: ``|e>=|0>``, ``|f>=|1>``) and environment qubit (factor 1).

    ``B = H`` sends the entry port ``|d> = |0>`` to ``(|e>+|f>)/sqrt(2)``; the
    environment is rotated when the particle takes path ``f``; ``B' = X H``
    sends ``(|e>+|f>)/sqrt(2)`` to ``h = |1>`` and ``(|e>-|f>)/sqrt(2)`` to
    ``g = |0>``.
    """
    theta = _which_way_angle(lam)
    ops = (
        GateOp("H", (0,), tag="B"),
        GateOp("RY", (1,), (0,), {"theta": theta}, tag="which-way"),
        GateOp("H", (0,), tag="B'"),
        GateOp("X", (0,), tag="B'"),
    )
    return Circuit((2, 2), ops, (((1,), basis_ket(2, 0)),), 0, 0, ("particle", "environment"))


def interferometer(lam: float) -> np.ndarray:
    """Final particle (x) environment ket for a particle entering at port ``d``."""
    c = interferometer_circuit(lam)
    return apply(c, initial_state(c, basis_ket(2, 0)))


def exit_probabilities(psi) -> tuple:
    """``(Pr[g], Pr[h])`` for a final particle (x) environment ket."""
    rho = reduced_density(psi, (2, 2), [0])
    return float(rho[0, 0].real), float(rho[1, 1].real)


def interferometer_channel_ket(lam: float) -> np.ndarray:
    """Channel ket on ``(particle after B, environment, particle before B')``.

    The particle just after ``B`` is represented by an auxiliary qubit fully
    entangled with the path qubit; the which-way coupling then acts.  Factor
    order matches the ``a, b, c`` roles of the exclusion check.
    """
    eps = environment_states(lam)
    psi = np.zeros((2, 2, 2), dtype=complex)
    for j in range(2):
        psi[j, :, j] = eps[j] / np.sqrt(2)
    return psi.reshape(-1)


def is_product(psi, shape: Sequence[int], tol: float = TOL) -> bool:
    s, _, _ = schmidt_decomposition(psi, shape)
    return bool(np.sqrt(max(0.0, float(np.sum(s[1:] ** 2)))) <= tol)
