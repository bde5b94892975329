"""Time evolution of a single excitation on the finite lattice.

States live on the waveguide sites plus the four resonator mode slots.
Propagation uses a Chebyshev expansion of exp(-i*H*t), which is norm
preserving to the coefficient truncation level and needs only sparse
matrix-vector products.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .errors import GeometryError, ToleranceError, ValidationError
from .model import LatticeLayout

# Chebyshev coefficient cutoff used at the default accuracy target; the
# series tail decays faster than exponentially past n = theta.
_COEFF_FLOOR = 5e-16
_COEFF_DEFAULT = 1e-13


@dataclass
class LatticeState:
    """Complex amplitudes over waveguide sites plus mode slots, at one time."""

    amplitudes: np.ndarray
    layout: LatticeLayout
    time: float = 0.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def mode_occupations(self) -> np.ndarray:
        """|u|^2 for slots (a1, b1, a2, b2)."""
        n = self.layout.total_sites
        return np.abs(self.amplitudes[n:n + 4]) ** 2


@dataclass
class RecordSpec:
    """Sampling cadence for propagate: evenly spaced records plus optional
    exact snapshot times at which the full state is kept."""

    samples: int = 500
    snapshot_times: tuple = ()

    def __post_init__(self):
        if self.samples < 2:
            raise ValidationError(f"samples must be at least 2, got {self.samples}")


@dataclass
class Trajectory:
    """Time series of regional probabilities and mode occupations.

    left/between/right partition the waveguide sites, with the two coupling
    sites counted as part of the between region. mode_occ has one row per
    recorded time and columns (a1, b1, a2, b2).
    """

    times: np.ndarray
    left_prob: np.ndarray
    right_prob: np.ndarray
    between_prob: np.ndarray
    mode_occ: np.ndarray
    layout: LatticeLayout
    snapshots: list = field(default_factory=list)


def gaussian_packet(layout: LatticeLayout, sigma: float, x0: float, k0: float) -> LatticeState:
    """Normalized Gaussian wave packet on the waveguide sites.

    Raises GeometryError when the +-5 sigma support reaches either lattice
    end, since a clipped packet no longer has the requested moments.
    """
    if sigma <= 1:
        raise ValidationError(f"sigma must exceed one site, got {sigma}")
    if not 0 < x0 < layout.total_sites:
        raise ValidationError(f"x0 must lie inside (0, {layout.total_sites}), got {x0}")
    if not 0 < k0 < np.pi:
        raise ValidationError(f"k0 must lie in (0, pi), got {k0}")
    if x0 - 5 * sigma < 0 or x0 + 5 * sigma > layout.total_sites - 1:
        raise GeometryError(
            f"packet support [{x0 - 5 * sigma:.1f}, {x0 + 5 * sigma:.1f}] overlaps the "
            f"lattice ends [0, {layout.total_sites - 1}]"
        )
    x = np.arange(layout.total_sites)
    psi = np.zeros(layout.dimension, dtype=complex)
    psi[:layout.total_sites] = np.exp(-((x - x0) ** 2) / (2.0 * sigma**2)) * np.exp(1j * k0 * x)
    psi /= np.linalg.norm(psi)
    return LatticeState(amplitudes=psi, layout=layout, time=0.0)


def antisym_w1(layout: LatticeLayout) -> LatticeState:
    """Equal-weight antisymmetric superposition of the first resonator's modes."""
    psi = np.zeros(layout.dimension, dtype=complex)
    s = layout.resonator_slots
    psi[s[0]] = 1.0 / np.sqrt(2.0)
    psi[s[1]] = -1.0 / np.sqrt(2.0)
    return LatticeState(amplitudes=psi, layout=layout, time=0.0)


def antisym_w1w2(layout: LatticeLayout) -> LatticeState:
    """Antisymmetric superposition across the pair: a1 against b2."""
    psi = np.zeros(layout.dimension, dtype=complex)
    s = layout.resonator_slots
    psi[s[0]] = 1.0 / np.sqrt(2.0)
    psi[s[3]] = -1.0 / np.sqrt(2.0)
    return LatticeState(amplitudes=psi, layout=layout, time=0.0)


def _spectral_bounds(H):
    """Gershgorin bounds containing the spectrum of Hermitian H."""
    d = np.real(np.asarray(H.diagonal())).ravel()
    radius = np.asarray(np.abs(H).sum(axis=1)).ravel() - np.abs(d)
    return float(np.min(d - radius)), float(np.max(d + radius))


def _cheb_step(H, psi, tau, a, b, cutoff):
    """One Chebyshev-expanded application of exp(-i*H*tau)."""
    theta = a * tau
    if theta == 0.0:
        return psi * np.exp(-1j * b * tau)
    nmax = int(theta + 60.0 + 12.0 * theta ** (1.0 / 3.0))
    ns = np.arange(nmax + 1)
    J = jv(ns, theta)
    keep = nmax
    for n in range(int(theta) + 1, nmax + 1):
        if abs(J[n]) < cutoff:
            keep = n
            break
    coeff = np.where(ns == 0, 1.0, 2.0) * (-1j) ** ns * J
    t0 = psi
    t1 = (H @ psi - b * psi) / a
    acc = coeff[0] * t0 + coeff[1] * t1
    for n in range(2, keep + 1):
        t2 = 2.0 * (H @ t1 - b * t1) / a - t0
        acc += coeff[n] * t2
        t0, t1 = t1, t2
    return acc * np.exp(-1j * b * tau)


def propagate(state: LatticeState, H, t_final: float, record: RecordSpec = None,
              epsilon: float = 1e-9) -> Trajectory:
    """Evolve a state under Hermitian H and record regional observables.

    epsilon is the accuracy target per unit time; the Chebyshev coefficient
    cutoff is derived from it and floored near machine precision, so the
    default target is met with a wide margin. Raises ToleranceError if the
    recorded norm ever drifts more than 1e-6 from one, which signals a bad
    operator (for example a non-Hermitian H).
    """
    if t_final <= 0:
        raise ValidationError(f"t_final must be positive, got {t_final}")
    if record is None:
        record = RecordSpec()
    layout = state.layout
    cutoff = max(_COEFF_FLOOR, min(_COEFF_DEFAULT, epsilon * 1e-4))

    times = list(np.linspace(0.0, t_final, record.samples))
    snaps = [float(t) for t in record.snapshot_times]
    for t in snaps:
        if not 0.0 <= t <= t_final:
            raise ValidationError(f"snapshot time {t} outside [0, {t_final}]")
    all_times = np.unique(np.asarray(times + snaps, dtype=float))

    lmin, lmax = _spectral_bounds(H)
    a = (lmax - lmin) / 2.0
    b = (lmax + lmin) / 2.0

    n = layout.total_sites
    cut1 = layout.coupling_site_first
    cut2 = layout.coupling_site_second

    psi = state.amplitudes.astype(complex).copy()
    t_now = 0.0
    left, right, between, occ, snapshots = [], [], [], [], []
    snap_set = set(snaps)

    for t in all_times:
        tau = t - t_now
        if tau > 0.0:
            psi = _cheb_step(H, psi, tau, a, b, cutoff)
            t_now = t
        nrm = np.linalg.norm(psi)
        # written so that a NaN norm also trips the guard
        if not abs(nrm - 1.0) <= 1e-6:
            raise ToleranceError(f"norm drift {abs(nrm - 1.0):.3e} at t={t}, stepping misconfigured")
        p = np.abs(psi) ** 2
        left.append(p[:cut1].sum())
        between.append(p[cut1:cut2 + 1].sum())
        right.append(p[cut2 + 1:n].sum())
        occ.append(p[n:n + 4])
        if t in snap_set:
            snapshots.append(LatticeState(amplitudes=psi.copy(), layout=layout, time=float(t)))

    return Trajectory(
        times=all_times,
        left_prob=np.asarray(left),
        right_prob=np.asarray(right),
        between_prob=np.asarray(between),
        mode_occ=np.asarray(occ),
        layout=layout,
        snapshots=snapshots,
    )


def transfer_fidelity(traj: Trajectory, direction: str) -> float:
    """Terminal target occupation of a transfer run.

    w1_to_w2 reads the second resonator, w1_return the first, and pair the
    total occupation of both resonators, all at the final recorded time.
    """
    occ = traj.mode_occ[-1]
    if direction == "w1_to_w2":
        return float(occ[2] + occ[3])
    if direction == "w1_return":
        return float(occ[0] + occ[1])
    if direction == "pair":
        return float(occ.sum())
    raise ValidationError(f"unknown direction {direction!r}")
