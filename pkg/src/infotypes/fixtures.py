"""Named states used throughout the examples, tests and CLI."""
import numpy as np

from .core import basis_ket, tensor

SQRT2 = np.sqrt(2.0)


def bell_state() -> np.ndarray:
    """``(|00> + |11>) / sqrt(2)``."""
    return (tensor(basis_ket(2, 0), basis_ket(2, 0)) + tensor(basis_ket(2, 1), basis_ket(2, 1))) / SQRT2


def fully_entangled(d: int) -> np.ndarray:
    """``sum_j |j>|j> / sqrt(d)``."""
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def ghz_state(n: int = 3) -> np.ndarray:
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = psi[-1] = 1 / SQRT2
    return psi


def split_information_state() -> np.ndarray:
    """Three-qubit state ``(|000> + |011> + |100> - |111>) / 2``, qubit order ``a, b, c``.

    The X information about ``a`` is perfectly present in ``b`` and in ``c``
    separately, the Y and Z information is absent from each of them, and all
    information about ``a`` is in ``bc`` jointly.
    """
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = psi[0b011] = psi[0b100] = 0.5
    psi[0b111] = -0.5
    return psi


SHAPE_3Q = (2, 2, 2)
