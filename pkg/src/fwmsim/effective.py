"""Closed-form effective parameters of the four schemes and the ideal target
operations used as fidelity references.

The effective coupling chi and mode shifts delta_eps are the fourth-order
perturbative coefficients of the ground-manifold Hamiltonian; they are
evaluated verbatim from the scheme's detunings, effective couplings and
drive amplitudes (all in GHz, ordinary frequencies).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import SingularityError, TruncationError
from .operators import FockCutoffs, destroy
from .schemes import Detunings, Scheme, SchemeFrame

SINGULARITY_TOL = 1e-12


def _check_detunings(scheme: Scheme, det: Detunings):
    need = {"delta1": det.delta1, "delta2": det.delta2, "delta": det.delta}
    if scheme is Scheme.SINGLE_MODE_SQUEEZE:
        pass  # all three appear in its closed forms as well
    for name, value in need.items():
        if abs(value) < SINGULARITY_TOL:
            raise SingularityError(
                f"{name} = {value:g} GHz vanishes; the closed forms of scheme "
                f"{scheme.value} are singular there")


def mode_shifts(scheme: Scheme, det: Detunings, gtilde1: float, gtilde2: float,
                rabi1: float, rabi2: float) -> tuple[float, float]:
    """Drive/coupling-induced frequency shifts (delta_eps_1, delta_eps_2)."""
    _check_detunings(scheme, det)
    d1, d2, dd = det.delta1, det.delta2, det.delta
    if scheme is Scheme.BEAM_SPLITTER:
        return (rabi1**2 * gtilde1**2 / (d1**2 * dd),
                rabi2**2 * gtilde2**2 / (d2**2 * dd))
    if scheme is Scheme.CROSS_KERR:
        return gtilde1**2 / d1, gtilde2**2 / d2
    if scheme is Scheme.TWO_MODE_SQUEEZE:
        # the opposite-side drive dresses each mode's shift
        return (rabi2**2 * gtilde1**2 / (d2**2 * dd),
                rabi1**2 * gtilde2**2 / (d1**2 * dd))
    # single-mode squeeze: only mode 1 is involved
    de1 = (dd / d1 + rabi1**2 / d1**2 + rabi2**2 / d2**2) * (gtilde1**2 / dd)
    return de1, 0.0


def coupling_strength(scheme: Scheme, det: Detunings, gtilde1: float,
                      gtilde2: float, rabi1: float, rabi2: float) -> float:
    """Signed fourth-order effective coupling chi of the scheme (GHz)."""
    _check_detunings(scheme, det)
    d1, d2, dd = det.delta1, det.delta2, det.delta
    if scheme is Scheme.BEAM_SPLITTER:
        return rabi1 * rabi2 * gtilde1 * gtilde2 / (d1 * d2 * dd)
    if scheme is Scheme.CROSS_KERR:
        return (1.0 / d1 + 1.0 / d2) ** 2 * (gtilde1**2 * gtilde2**2 / dd)
    if scheme is Scheme.TWO_MODE_SQUEEZE:
        return rabi1 * rabi2 * gtilde1 * gtilde2 / (d1 * d2 * dd)
    return rabi1 * rabi2 * gtilde1**2 / (d1 * d2 * dd)


def canonical_gate_time(scheme: Scheme, chi: float) -> float:
    """Scheme-specific canonical operation time in ns.

    Beam splitter: the swap time 1/(4|chi|). Cross-Kerr: the pi conditional
    phase time 1/(2|chi|). Squeezers: time to unit squeezing parameter,
    r = 1, i.e. 1/(2 pi |chi|) for the two-mode pair rate and half that for
    the single-mode operation whose Heisenberg rate is doubled.
    """
    if chi == 0:
        return math.inf
    if scheme is Scheme.BEAM_SPLITTER:
        return 1.0 / (4.0 * abs(chi))
    if scheme is Scheme.CROSS_KERR:
        return 1.0 / (2.0 * abs(chi))
    if scheme is Scheme.TWO_MODE_SQUEEZE:
        return 1.0 / (2.0 * math.pi * abs(chi))
    return 1.0 / (4.0 * math.pi * abs(chi))


@dataclass(frozen=True)
class EffectiveParams:
    """Closed-form effective operation: coupling, mode shifts, four-photon
    detuning and the scheme's canonical gate time."""

    scheme: Scheme
    chi: float
    delta_eps1: float | None
    delta_eps2: float | None
    delta_f: float
    gate_time: float

    @property
    def chi_abs_mhz(self) -> float:
        return abs(self.chi) * 1e3


def effective_params(frame: SchemeFrame,
                     detunings: Detunings | None = None) -> EffectiveParams:
    """Evaluate the scheme's closed forms on a frame (or on explicitly
    supplied detunings, keeping the frame's couplings and drive amplitudes)."""
    det = detunings if detunings is not None else frame.detunings
    return effective_params_from_values(frame.scheme, det, frame.gtilde1,
                                        frame.gtilde2, frame.rabi1, frame.rabi2)


def effective_params_from_values(scheme: Scheme, det: Detunings, gtilde1: float,
                                 gtilde2: float, rabi1: float = 0.0,
                                 rabi2: float = 0.0) -> EffectiveParams:
    chi = coupling_strength(scheme, det, gtilde1, gtilde2, rabi1, rabi2)
    de1, de2 = mode_shifts(scheme, det, gtilde1, gtilde2, rabi1, rabi2)
    if scheme is Scheme.BEAM_SPLITTER:
        df = de2 - de1
    elif scheme is Scheme.CROSS_KERR:
        df = 0.0
    elif scheme is Scheme.TWO_MODE_SQUEEZE:
        df = -(de1 + de2)
    else:
        df = 2.0 * de1
        de2 = None
    return EffectiveParams(scheme=scheme, chi=chi, delta_eps1=de1, delta_eps2=de2,
                           delta_f=df, gate_time=canonical_gate_time(scheme, chi))


def controlled_phase_targets(ep: EffectiveParams, t: float) -> np.ndarray:
    """Phases (radians) accumulated by |00>, |01>, |10>, |11> under the
    effective cross-Kerr Hamiltonian after time t (ns).

    Returns [0, -2pi de2 t, -2pi de1 t, -2pi (de1 + de2 + chi) t]; at
    t = 1/(2|chi|) the conditional phase on |11> is -pi shy of the sum of
    the single-photon phases, i.e. a pi controlled phase.
    """
    if ep.scheme is not Scheme.CROSS_KERR:
        raise ValueError("controlled-phase targets are defined for the cross-Kerr scheme")
    de1, de2 = ep.delta_eps1, ep.delta_eps2
    two_pi_t = 2.0 * math.pi * t
    return np.array([
        0.0,
        -two_pi_t * de2,
        -two_pi_t * de1,
        -two_pi_t * (de1 + de2 + ep.chi),
    ])


# ---------------------------------------------------------------------------
# ideal photon-mode operations (fidelity references)

IDEAL_KINDS = ("beam_splitter", "two_mode_squeeze", "single_mode_squeeze",
               "phase_shifter", "cross_kerr")


@dataclass(frozen=True)
class IdealOpSpec:
    """Specification of an ideal two-mode operation.

    ``angle`` is the accumulated operation angle (rotation angle for the
    beam splitter, squeeze parameter r, phase for shifter/Kerr). ``phase``
    is the beam-splitter phase offset. ``mode`` selects the mode for
    single-mode operations.
    """

    kind: str
    angle: float
    phase: float = 0.0
    mode: int = 1

    def __post_init__(self):
        if self.kind not in IDEAL_KINDS:
            raise ValueError(f"unknown ideal operation {self.kind!r}")
        if self.mode not in (1, 2):
            raise ValueError("mode must be 1 or 2")


@dataclass(frozen=True)
class IdealOperation:
    """Fock-space unitary plus, for Bogoliubov-linear operations, the
    quadrature-space symplectic matrix. ``truncation_error`` reports the
    vacuum-column state-norm error of the truncated unitary (squeezers)."""

    spec: IdealOpSpec
    unitary: np.ndarray
    symplectic: np.ndarray | None
    truncation_error: float | None


def _two_mode_generators(cutoffs: FockCutoffs):
    d1, d2 = cutoffs.dim1, cutoffs.dim2
    a1 = np.kron(destroy(d1), np.eye(d2, dtype=complex))
    a2 = np.kron(np.eye(d1, dtype=complex), destroy(d2))
    return a1, a2


def _ideal_unitary(spec: IdealOpSpec, cutoffs: FockCutoffs) -> np.ndarray:
    a1, a2 = _two_mode_generators(cutoffs)
    phi, ph = spec.angle, spec.phase
    if spec.kind == "beam_splitter":
        gen = np.exp(1j * ph) * (a1.conj().T @ a2) - np.exp(-1j * ph) * (a2.conj().T @ a1)
        return expm(phi * gen)
    if spec.kind == "two_mode_squeeze":
        gen = a1.conj().T @ a2.conj().T - a1 @ a2
        return expm(phi * gen)
    if spec.kind == "single_mode_squeeze":
        a = a1 if spec.mode == 1 else a2
        gen = a.conj().T @ a.conj().T - a @ a
        return expm(0.5 * phi * gen)
    if spec.kind == "phase_shifter":
        a = a1 if spec.mode == 1 else a2
        return expm(-1j * phi * (a.conj().T @ a))
    a_n1 = a1.conj().T @ a1
    a_n2 = a2.conj().T @ a2
    return expm(-1j * phi * (a_n1 @ a_n2))


def _symplectic(spec: IdealOpSpec) -> np.ndarray | None:
    """Quadrature transform on (x1, p1, x2, p2) (or (x, p) for one mode)."""
    phi, ph = spec.angle, spec.phase
    c, s = math.cos(phi), math.sin(phi)
    if spec.kind == "beam_splitter":
        # a1 -> c a1 + e^{i ph} s a2 ; a2 -> c a2 - e^{-i ph} s a1
        cp, sp = math.cos(ph), math.sin(ph)
        m = np.array([
            [c, 0.0, s * cp, -s * sp],
            [0.0, c, s * sp, s * cp],
            [-s * cp, -s * sp, c, 0.0],
            [s * sp, -s * cp, 0.0, c],
        ])
        return m
    if spec.kind == "two_mode_squeeze":
        ch, sh = math.cosh(phi), math.sinh(phi)
        return np.array([
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ])
    if spec.kind == "single_mode_squeeze":
        return np.diag([math.exp(phi), math.exp(-phi)])
    if spec.kind == "phase_shifter":
        return np.array([[c, s], [-s, c]])
    return None  # cross-Kerr is not Bogoliubov-linear


def ideal_operation(spec: IdealOpSpec, cutoffs: FockCutoffs,
                    truncation_tol: float = 1e-6) -> IdealOperation:
    """Build an ideal operation on the two-mode Fock space.

    Squeezing unitaries are generated by exponentiating the truncated
    generator; their quality is certified by comparing the vacuum column
    against a padded-cutoff construction. A figure above ``truncation_tol``
    raises :class:`TruncationError`.
    """
    u = _ideal_unitary(spec, cutoffs)
    trunc = None
    if spec.kind in ("two_mode_squeeze", "single_mode_squeeze"):
        pad = FockCutoffs(cutoffs.n_max1 + 5, cutoffs.n_max2 + 5)
        u_pad = _ideal_unitary(spec, pad)
        vac_small = u[:, 0]
        vac_big = u_pad[:, 0]
        embedded = np.zeros(pad.dim1 * pad.dim2, dtype=complex)
        for n1 in range(cutoffs.dim1):
            for n2 in range(cutoffs.dim2):
                embedded[n1 * pad.dim2 + n2] = vac_small[n1 * cutoffs.dim2 + n2]
        trunc = float(np.linalg.norm(vac_big - embedded))
        if trunc > truncation_tol:
            raise TruncationError(
                f"squeeze amplitude {spec.angle:g} needs a larger Fock cutoff: "
                f"vacuum-column truncation error {trunc:.2e} > {truncation_tol:g}")
    return IdealOperation(spec=spec, unitary=u, symplectic=_symplectic(spec),
                          truncation_error=trunc)
