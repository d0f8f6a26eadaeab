"""Circuit parameter model: capacitance-derived couplings, analytic four-level
spectrum, transition tables, and energy sweeps.

Unit convention (package-wide): every energy and frequency is an ordinary
frequency in GHz (a quantity usually quoted as X/2*pi), time is in ns, and
dynamical phases accumulate as 2*pi*nu*t. All closed forms in this package are
homogeneous of degree one in frequency, so GHz in means GHz out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE, h as PLANCK_H

from .errors import DegeneracyError

DEGENERACY_TOL = 1e-6  # GHz; below this the mixing angles are ill-defined
LEVELS = ("a", "b", "c", "d")


def _charging_energy_ghz(capacitance_f: float) -> float:
    """e^2 / (2 C) expressed as an ordinary frequency in GHz."""
    return ELEMENTARY_CHARGE**2 / (2.0 * capacitance_f * PLANCK_H * 1e9)


@dataclass(frozen=True)
class CapacitanceSet:
    """Circuit capacitances in farads.

    ``c_j*`` are junction capacitances, ``c_g*`` qubit-resonator coupling
    capacitances, ``c_m`` the coupling-junction capacitance, ``c_r*`` the
    resonator capacitances and ``c_0*`` the output couplers.
    """

    c_j1: float
    c_j2: float
    c_g1: float
    c_g2: float
    c_m: float
    c_r1: float
    c_r2: float
    c_01: float
    c_02: float

    def __post_init__(self):
        for name in ("c_j1", "c_j2", "c_g1", "c_g2", "c_r1", "c_r2", "c_01", "c_02"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.c_m < 0:
            raise ValueError("c_m must be non-negative")

    @property
    def c_sigma1(self) -> float:
        """Total capacitance at island 1: C_J1 + C_g1 + C_m."""
        return self.c_j1 + self.c_g1 + self.c_m

    @property
    def c_sigma2(self) -> float:
        return self.c_j2 + self.c_g2 + self.c_m

    @property
    def c_sigma_r1(self) -> float:
        """Total capacitance at resonator 1: C_r1 + C_g1 + C_01."""
        return self.c_r1 + self.c_g1 + self.c_01

    @property
    def c_sigma_r2(self) -> float:
        return self.c_r2 + self.c_g2 + self.c_02

    def regime_ok(self, ratio: float = 10.0) -> bool:
        """True iff C_sigma_ri >> C_sigma_i >> C_m at the given ratio."""
        big = min(self.c_sigma_r1, self.c_sigma_r2)
        mid = max(self.c_sigma1, self.c_sigma2)
        mid_lo = min(self.c_sigma1, self.c_sigma2)
        if self.c_m == 0:
            return big >= ratio * mid
        return big >= ratio * mid and mid_lo >= ratio * self.c_m


@dataclass(frozen=True)
class DerivedCouplings:
    """Output of :func:`derive_couplings`; all values in GHz."""

    e_mx: float
    g1: float
    g2: float
    g2_1: float  # cross-talk of resonator 1 to the far qubit
    g2_2: float
    g3: float    # direct resonator-resonator cross-talk
    warnings: tuple[str, ...] = ()

    @property
    def crosstalk_ratios(self) -> dict[str, float]:
        out = {}
        if self.g1:
            out["g2_1/g1"] = self.g2_1 / self.g1
            out["g3/g1"] = self.g3 / self.g1
        if self.g2:
            out["g2_2/g2"] = self.g2_2 / self.g2
            out["g3/g2"] = self.g3 / self.g2
        return out


def derive_couplings(caps: CapacitanceSet, omega_a1: float, omega_a2: float,
                     regime_ratio: float = 10.0) -> DerivedCouplings:
    """Evaluate the capacitive coupling energy and all qubit-resonator
    couplings (direct and cross-talk) from the circuit capacitances.

    A violated hierarchy ``C_sigma_ri >> C_sigma_i >> C_m`` produces a warning
    entry in the result, not a failure; the closed forms are evaluated anyway.
    """
    if omega_a1 <= 0 or omega_a2 <= 0:
        raise ValueError("resonator frequencies must be positive")
    warnings = []
    if not caps.regime_ok(regime_ratio):
        warnings.append(
            f"capacitance hierarchy violated (need C_sig_r >= {regime_ratio} C_sig "
            f">= {regime_ratio} C_m); derived couplings are outside their validity range"
        )
    denom = caps.c_sigma1 * caps.c_sigma2 - caps.c_m**2
    e_mx = caps.c_m * ELEMENTARY_CHARGE**2 / denom / (PLANCK_H * 1e9)
    ec_r1 = _charging_energy_ghz(caps.c_sigma_r1)
    ec_r2 = _charging_energy_ghz(caps.c_sigma_r2)
    g1 = (caps.c_g1 * caps.c_sigma2 / denom) * math.sqrt(ec_r1 * omega_a1)
    g2 = (caps.c_g2 * caps.c_sigma1 / denom) * math.sqrt(ec_r2 * omega_a2)
    g2_1 = (caps.c_g1 * caps.c_m / denom) * math.sqrt(ec_r1 * omega_a1)
    g2_2 = (caps.c_g2 * caps.c_m / denom) * math.sqrt(ec_r2 * omega_a2)
    g3 = (math.sqrt(caps.c_g1 * caps.c_g2) * caps.c_m / denom) \
        * math.sqrt(caps.c_g1 * caps.c_g2 / (4.0 * caps.c_sigma_r1 * caps.c_sigma_r2)) \
        * math.sqrt(omega_a1 * omega_a2)
    return DerivedCouplings(e_mx, g1, g2, g2_1, g2_2, g3, tuple(warnings))


@dataclass(frozen=True)
class CircuitParams:
    """Energy-level description of the toolbox circuit (canonical form).

    ``e_j1``/``e_j2`` are the qubit Josephson energies, ``e_mx`` the coupling
    charging energy and ``b0`` the dimensionless Josephson/charging ratio of
    the coupling junction. ``g2_*`` and ``g3`` are the optional cross-talk
    couplings. All in GHz.
    """

    e_j1: float
    e_j2: float
    e_mx: float
    b0: float
    omega_a1: float
    omega_a2: float
    g1: float
    g2: float
    g2_1: float = 0.0
    g2_2: float = 0.0
    g3: float = 0.0

    def __post_init__(self):
        if self.e_mx < 0:
            raise ValueError("e_mx must be non-negative")
        if self.omega_a1 <= 0 or self.omega_a2 <= 0:
            raise ValueError("resonator frequencies must be positive")
        for name in ("g1", "g2", "g2_1", "g2_2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_capacitances(cls, caps: CapacitanceSet, e_j1: float, e_j2: float,
                          b0: float, omega_a1: float, omega_a2: float,
                          include_crosstalk: bool = True) -> "CircuitParams":
        d = derive_couplings(caps, omega_a1, omega_a2)
        return cls(e_j1=e_j1, e_j2=e_j2, e_mx=d.e_mx, b0=b0,
                   omega_a1=omega_a1, omega_a2=omega_a2, g1=d.g1, g2=d.g2,
                   g2_1=d.g2_1 if include_crosstalk else 0.0,
                   g2_2=d.g2_2 if include_crosstalk else 0.0,
                   g3=d.g3 if include_crosstalk else 0.0)


def qubit_hamiltonian(params: CircuitParams) -> np.ndarray:
    """4x4 coupled-qubit Hamiltonian in the product basis (|00>,|01>,|10>,|11>).

    |0_i> is the lower sigma_z eigenstate of qubit i. The matrix is real:
    the two blocks {|00>,|11>} and {|01>,|10>} couple through
    E_mx(1 - b0) and E_mx(1 + b0) respectively.
    """
    sz = np.diag([-1.0, 1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, 1.0j], [-1.0j, 0.0]])
    i2 = np.eye(2)
    h = (params.e_j1 / 2.0) * np.kron(sz, i2) + (params.e_j2 / 2.0) * np.kron(i2, sz)
    h = h + params.e_mx * (np.kron(sx, sx)
                           + params.b0 * np.kron(sy, sy)
                           + params.b0 * np.kron(sz, sz))
    return np.real_if_close(h).astype(float)


@dataclass(frozen=True)
class EigenSystem:
    """Analytic spectrum and mixing angles of the coupled-qubit Hamiltonian.

    Angles live in [0, pi]: sin(theta) comes from the principal square root
    and cos(theta) carries the sign of the block coupling E_mx(1 -/+ b0),
    which makes the closed-form eigenvectors exact in every parameter regime.
    """

    e_a: float
    e_b: float
    e_c: float
    e_d: float
    e_s_plus: float
    e_s_minus: float
    theta_plus: float
    theta_minus: float

    def energy(self, level: str) -> float:
        return {"a": self.e_a, "b": self.e_b, "c": self.e_c, "d": self.e_d}[level]

    def transition_energy(self, upper: str, lower: str) -> float:
        """E_upper - E_lower in GHz (signed)."""
        return self.energy(upper) - self.energy(lower)

    def eigenvector(self, level: str) -> np.ndarray:
        """Eigenvector in the qubit product basis (|00>,|01>,|10>,|11>)."""
        sp, cp = math.sin(self.theta_plus), math.cos(self.theta_plus)
        sm, cm = math.sin(self.theta_minus), math.cos(self.theta_minus)
        vecs = {
            "a": np.array([-sp, 0.0, 0.0, cp]),
            "b": np.array([0.0, cm, -sm, 0.0]),
            "c": np.array([0.0, sm, cm, 0.0]),
            "d": np.array([cp, 0.0, 0.0, sp]),
        }
        return vecs[level]

    def eigenvector_matrix(self) -> np.ndarray:
        """Columns are the |a>, |b>, |c>, |d> eigenvectors."""
        return np.column_stack([self.eigenvector(l) for l in LEVELS])

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e_a, self.e_b, self.e_c, self.e_d])


def eigensystem(params: CircuitParams,
                degeneracy_tol: float = DEGENERACY_TOL) -> EigenSystem:
    """Closed-form eigensystem of the coupled-qubit Hamiltonian."""
    ej_sum = params.e_j1 + params.e_j2
    ej_dif = params.e_j1 - params.e_j2
    k_plus = params.e_mx * (1.0 - params.b0)
    k_minus = params.e_mx * (1.0 + params.b0)
    e_s_plus = math.sqrt(ej_sum**2 + 4.0 * k_plus**2)
    e_s_minus = math.sqrt(ej_dif**2 + 4.0 * k_minus**2)
    if e_s_plus < degeneracy_tol:
        raise DegeneracyError(
            f"E_s+ = {e_s_plus:.3e} GHz below {degeneracy_tol:g}; "
            "the (|00>,|11>) doublet is degenerate")
    if e_s_minus < degeneracy_tol:
        raise DegeneracyError(
            f"E_s- = {e_s_minus:.3e} GHz below {degeneracy_tol:g}; "
            "the (|01>,|10>) doublet is degenerate")
    shift = params.e_mx * params.b0
    sin_p = math.sqrt((e_s_plus + ej_sum) / (2.0 * e_s_plus))
    sin_m = math.sqrt((e_s_minus - ej_dif) / (2.0 * e_s_minus))
    cos_p = math.copysign(math.sqrt(max(1.0 - sin_p**2, 0.0)), k_plus or 1.0)
    cos_m = math.copysign(math.sqrt(max(1.0 - sin_m**2, 0.0)), k_minus or 1.0)
    return EigenSystem(
        e_a=shift - e_s_plus / 2.0,
        e_b=-shift - e_s_minus / 2.0,
        e_c=-shift + e_s_minus / 2.0,
        e_d=shift + e_s_plus / 2.0,
        e_s_plus=e_s_plus,
        e_s_minus=e_s_minus,
        theta_plus=math.atan2(sin_p, cos_p),
        theta_minus=math.atan2(sin_m, cos_m),
    )


# Transition-operator pairs (i, j) label sigma_ij = |i><j|; each listed term
# appears together with its hermitian conjugate.
_X1_PAIRS = (("a", "b"), ("d", "c"), ("d", "b"), ("a", "c"))
_X2_PAIRS = (("a", "b"), ("d", "c"), ("a", "c"), ("d", "b"))


@dataclass(frozen=True)
class TransitionTable:
    """Projection of sigma_x1 / sigma_x2 onto the four-level eigenbasis.

    ``x1``/``x2`` map transition pairs (i, j) to the coefficient of
    sigma_ij = |i><j| (the hermitian conjugate is implied).
    """

    theta_plus: float
    theta_minus: float
    x1: dict = field(default_factory=dict)
    x2: dict = field(default_factory=dict)

    def coefficient(self, qubit: int, pair: tuple[str, str]) -> float:
        table = self.x1 if qubit == 1 else self.x2
        if pair in table:
            return table[pair]
        rev = (pair[1], pair[0])
        if rev in table:
            return table[rev]  # hermitian partner, same real coefficient
        raise KeyError(f"unknown transition pair {pair}")

    def sigma_x_matrix(self, qubit: int) -> np.ndarray:
        """Reconstructed 4x4 sigma_x operator in the eigenbasis (a,b,c,d)."""
        idx = {l: i for i, l in enumerate(LEVELS)}
        m = np.zeros((4, 4))
        table = self.x1 if qubit == 1 else self.x2
        for (i, j), coef in table.items():
            m[idx[i], idx[j]] += coef
            m[idx[j], idx[i]] += coef
        return m

    def effective_coupling(self, g: float, qubit: int, pair: tuple[str, str]) -> float:
        """g-tilde for one transition: bare coupling times table coefficient."""
        return g * self.coefficient(qubit, pair)


def transition_table(es: EigenSystem) -> TransitionTable:
    """Coefficients with which each sigma_x couples the four transitions."""
    dif = es.theta_plus - es.theta_minus
    tot = es.theta_plus + es.theta_minus
    x1 = {
        ("a", "b"): math.cos(dif),
        ("d", "c"): math.cos(dif),
        ("d", "b"): math.sin(dif),
        ("a", "c"): -math.sin(dif),
    }
    x2 = {
        ("a", "b"): -math.sin(tot),
        ("d", "c"): math.sin(tot),
        ("a", "c"): math.cos(tot),
        ("d", "b"): math.cos(tot),
    }
    return TransitionTable(theta_plus=es.theta_plus, theta_minus=es.theta_minus,
                           x1=x1, x2=x2)


@dataclass(frozen=True)
class EnergySweep:
    """Eigenenergies versus the coupling-junction ratio b0."""

    b0: np.ndarray           # shape (points,)
    energies: np.ndarray     # shape (points, 4), columns E_a..E_d
    crossings: tuple         # ((pair, b0_left, b0_right), ...)

    def rows(self):
        for i in range(self.b0.size):
            yield (self.b0[i], *self.energies[i])


def energy_sweep(params: CircuitParams, b0_range: tuple[float, float],
                 points: int) -> EnergySweep:
    """Sweep b0 over an interval and report level crossings.

    Crossings are sign changes of E_a - E_b and E_c - E_d between adjacent
    sweep points, reported with their bracketing b0 values.
    """
    if points < 2:
        raise ValueError("sweep needs at least 2 points")
    b0s = np.linspace(b0_range[0], b0_range[1], points)
    energies = np.empty((points, 4))
    for i, b0 in enumerate(b0s):
        energies[i] = eigensystem(replace(params, b0=float(b0))).energies
    crossings = []
    for pair, (u, v) in (("a-b", (0, 1)), ("c-d", (2, 3))):
        diff = energies[:, u] - energies[:, v]
        sign_change = np.where(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
        for k in sign_change:
            crossings.append((pair, float(b0s[k]), float(b0s[k + 1])))
    return EnergySweep(b0=b0s, energies=energies, crossings=tuple(crossings))
