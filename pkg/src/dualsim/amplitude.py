"""Dense complex amplitudes over dubit registers.

Basis indices are big-endian: dubit 0 is the most significant bit, so the
ket |b0 b1 ... b(n-1)> sits at index ``b0*2**(n-1) + ... + b(n-1)``.

Reductions (``norm_sq``, ``inner_product``) go through ``numpy.sum`` on a
contiguous 1-D array, i.e. numpy's pairwise summation over index order
0..N-1.  That order depends only on the array length, so repeated runs are
bit-identical.
"""
from __future__ import annotations

import numpy as np

from .errors import CapacityError, DimensionError, NormalizationError

NORM_TOL = 1e-9
ALGEBRA_TOL = 1e-12

_max_dubits = 26


def max_dubits() -> int:
    return _max_dubits


def set_max_dubits(n: int) -> int:
    """Change the register cap; returns the previous value."""
    global _max_dubits
    if n < 0:
        raise ValueError("dubit cap must be non-negative")
    old, _max_dubits = _max_dubits, int(n)
    return old


def check_capacity(n: int) -> None:
    if n > _max_dubits:
        raise CapacityError(
            f"{n} dubits exceeds the configured cap of {_max_dubits} "
            f"({2**n} amplitudes); raise it with set_max_dubits()"
        )


class StateVector:
    """Immutable amplitude vector of length ``2**n_dubits``.

    Sub-normalized vectors are legal (a combined duality wave usually is);
    super-normalized ones are rejected.
    """

    __slots__ = ("_amps", "_n")

    def __init__(self, amplitudes, *, check_norm: bool = True):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        size = amps.size
        if size == 0 or size & (size - 1):
            raise DimensionError(f"length {size} is not a power of two")
        n = size.bit_length() - 1
        check_capacity(n)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if check_norm:
            nsq = float(np.sum(amps.real**2 + amps.imag**2))
            if nsq > 1.0 + NORM_TOL:
                raise NormalizationError(f"squared norm {nsq!r} exceeds 1")
        amps.flags.writeable = False
        self._amps = amps
        self._n = n

    @property
    def n_dubits(self) -> int:
        return self._n

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only view of the amplitudes."""
        return self._amps

    def __len__(self):
        return self._amps.size

    def __getitem__(self, index):
        return self._amps[index]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._amps.copy()
        return self._amps.astype(dtype)

    def __repr__(self):
        return f"StateVector(n_dubits={self._n}, amplitudes={self._amps.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._amps, other._amps)

    __hash__ = None

    def allclose(self, other, atol: float = ALGEBRA_TOL) -> bool:
        other = np.asarray(other, dtype=np.complex128).reshape(-1)
        return other.shape == self._amps.shape and bool(
            np.max(np.abs(self._amps - other), initial=0.0) <= atol
        )

    def probabilities(self) -> np.ndarray:
        return self._amps.real**2 + self._amps.imag**2


def as_state(x) -> StateVector:
    return x if isinstance(x, StateVector) else StateVector(x)


def basis_state(n: int, index: int) -> StateVector:
    if n < 0:
        raise DimensionError("dubit count must be non-negative")
    check_capacity(n)
    if not 0 <= index < 2**n:
        raise DimensionError(f"basis index {index} out of range for {n} dubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def uniform_state(n: int) -> StateVector:
    check_capacity(n)
    return StateVector(np.full(2**n, 2.0 ** (-n / 2), dtype=np.complex128))


def zero_state(n: int) -> StateVector:
    """The null wave (total cancellation), not the ket |0...0>."""
    check_capacity(n)
    return StateVector(np.zeros(2**n, dtype=np.complex128))


def tensor(a, b) -> StateVector:
    a, b = as_state(a), as_state(b)
    check_capacity(a.n_dubits + b.n_dubits)
    return StateVector(np.kron(a.amplitudes, b.amplitudes), check_norm=False)


def norm_sq(s) -> float:
    amps = as_state(s).amplitudes
    return float(np.sum(amps.real**2 + amps.imag**2))


def inner_product(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    a, b = as_state(a), as_state(b)
    if a.n_dubits != b.n_dubits:
        raise DimensionError(
            f"inner product of {a.n_dubits}- and {b.n_dubits}-dubit states"
        )
    return complex(np.sum(np.conj(a.amplitudes) * b.amplitudes))
