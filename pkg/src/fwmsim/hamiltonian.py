"""Time-dependent Hamiltonian container.

Every Hamiltonian in this package is a finite sum

    H(t) = H_static + sum_k [ M_k exp(+i 2 pi nu_k t) + M_k^dag exp(-i 2 pi nu_k t) ]

with constant matrices and frequencies in GHz (time in ns). This form is
exact for all scheme frames and for the driven lab Hamiltonian, and allows
evaluation at arbitrary t without interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import require_hermitian


@dataclass(frozen=True)
class Hamiltonian:
    """Static part plus oscillating (matrix, frequency) pairs."""

    static: np.ndarray
    osc: tuple = field(default_factory=tuple)  # ((M_k, nu_k_GHz), ...)

    def __post_init__(self):
        require_hermitian(self.static, what="static Hamiltonian part")
        for m, nu in self.osc:
            if m.shape != self.static.shape:
                raise ValueError("oscillating term dimension mismatch")
            if nu == 0:
                raise ValueError("zero-frequency terms belong in the static part")

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    @property
    def is_static(self) -> bool:
        return len(self.osc) == 0

    @property
    def max_frequency(self) -> float:
        """Largest frequency scale present (for step-size control)."""
        scale = float(np.max(np.abs(self.static))) if self.static.size else 0.0
        for m, nu in self.osc:
            scale = max(scale, abs(nu), float(np.max(np.abs(m))))
        return scale

    def at(self, t: float) -> np.ndarray:
        """Evaluate H(t); always hermitian."""
        h = np.array(self.static, dtype=complex, copy=True)
        for m, nu in self.osc:
            phase = np.exp(2j * np.pi * nu * t)
            h += m * phase + m.conj().T * np.conj(phase)
        return h
