"""Independent stationary solvers used to cross-check the closed forms.

Two unrelated routes to the same physics: a plane-wave matching solve with
real effective potentials at the two coupling sites, and brute-force dense
inversion of (omega + i*eta - H) on a truncated lattice.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import PoleError, SingularError, ValidationError
from .model import LatticeLayout, SystemParams, apply_symmetry_breaking, build_hamiltonian, wavevector

POLE_TOL = 1e-14
DENSE_SITE_BUDGET = 4096


@dataclass(frozen=True)
class ScatterSolution:
    """Amplitudes of the matched scattering state.

    r and t are the reflection and transmission amplitudes; A and B are the
    right- and left-moving amplitudes between the coupling sites (both zero
    when the two couplers share one site).
    """

    t: complex
    r: complex
    A: complex
    B: complex


def effective_potential(params: SystemParams, omega: float, site: int) -> float:
    """Real on-site potential produced by eliminating the resonator modes.

    Nonzero only at the coupling sites (0 and L in segment coordinates);
    when L=0 both resonators contribute at the same site.
    """
    if site < 0 or site > params.L:
        raise ValidationError(f"site must lie in [0, L={params.L}], got {site}")
    eff = apply_symmetry_breaking(params)
    modes = []
    if site == 0:
        modes.extend((eff.omega_a1, eff.omega_b1))
    if site == params.L:
        modes.extend((eff.omega_a2, eff.omega_b2))
    v = 0.0
    for m in modes:
        if abs(m - omega) < POLE_TOL:
            raise PoleError(f"omega={omega} coincides with mode frequency {m}")
        v += 1.0 / (m - omega)
    return params.xi1**2 * v


def transfer_transmission(params: SystemParams, omega: float) -> ScatterSolution:
    """Solve the plane-wave matching equations at the two coupling sites.

    The scattering ansatz is e^{ikj} + r e^{-ikj} on the left, A e^{ikj} +
    B e^{-ikj} between the couplers, t e^{ikj} on the right. Continuity and
    the lattice Schrodinger equation at sites 0 and L give a linear system
    solved directly, keeping this path independent of any closed formula.
    """
    k = wavevector(omega, params)
    L = params.L
    xi0 = params.xi0
    W = omega - params.omega_c
    ep = np.exp(1j * k)
    em = np.exp(-1j * k)

    if L == 0:
        v = effective_potential(params, omega, 0)
        # unknowns (r, t): continuity 1 + r = t, then the site-0 equation
        # -xi0*(psi_{-1} + psi_1) - (W + v)*psi_0 = 0
        M = np.array(
            [
                [1.0, -1.0],
                [-xi0 * ep, -xi0 * ep - W - v],
            ],
            dtype=complex,
        )
        rhs = np.array([-1.0, xi0 * em], dtype=complex)
        r, t = np.linalg.solve(M, rhs)
        return ScatterSolution(t=complex(t), r=complex(r), A=0j, B=0j)

    v0 = effective_potential(params, omega, 0)
    vL = effective_potential(params, omega, L)
    eL = np.exp(1j * k * L)
    # unknowns (r, A, B, t); site equations carry -(W + V_j) on the diagonal
    M = np.array(
        [
            [1.0, -1.0, -1.0, 0.0],
            [0.0, eL, 1.0 / eL, -eL],
            [-xi0 * ep - W - v0, -xi0 * ep, -xi0 * em, 0.0],
            [0.0, -xi0 * eL * em, -xi0 * ep / eL, (-W - vL) * eL - xi0 * eL * ep],
        ],
        dtype=complex,
    )
    rhs = np.array([-1.0, 0.0, xi0 * em + W + v0, 0.0], dtype=complex)
    r, A, B, t = np.linalg.solve(M, rhs)
    return ScatterSolution(t=complex(t), r=complex(r), A=complex(A), B=complex(B))


def _resonator_potential(params: SystemParams, omega: float, second: bool) -> float:
    """Potential from one resonator alone, regardless of whether L=0 merges sites."""
    eff = apply_symmetry_breaking(params)
    modes = (eff.omega_a2, eff.omega_b2) if second else (eff.omega_a1, eff.omega_b1)
    v = 0.0
    for m in modes:
        if abs(m - omega) < POLE_TOL:
            raise PoleError(f"omega={omega} coincides with mode frequency {m}")
        v += 1.0 / (m - omega)
    return params.xi1**2 * v


def closed_form_transmission(params: SystemParams, omega: float) -> complex:
    """Rational closed form for t in terms of the two per-resonator potentials."""
    k = wavevector(omega, params)
    s = 2j * params.xi0 * np.sin(k)
    v0 = _resonator_potential(params, omega, second=False)
    vL = _resonator_potential(params, omega, second=True)
    phase = np.exp(2j * k * params.L)
    return complex(s * s / ((s + v0) * (s + vL) - phase * vL * v0))


def dense_resolvent(params: SystemParams, layout: LatticeLayout, omega: float,
                    open_boundaries: bool = False, full: bool = False):
    """Brute-force resolvent of the truncated lattice.

    Returns diag[(omega + i*eta - H)^-1] by default, or the full matrix when
    full=True. With open_boundaries=True the two end waveguide sites absorb
    outgoing waves through the exact semi-infinite lead self-energy
    -xi0*e^{ik}, which removes finite-size reflections from stationary
    comparisons.
    """
    n = layout.total_sites
    if n > DENSE_SITE_BUDGET:
        raise ValidationError(f"total_sites={n} exceeds dense budget {DENSE_SITE_BUDGET}")
    H = build_hamiltonian(params, layout).toarray()
    dim = layout.dimension
    A = (omega + 1j * params.eta) * np.eye(dim, dtype=complex) - H
    if open_boundaries:
        k = wavevector(omega, params)
        sigma_lead = -params.xi0 * np.exp(1j * k)
        A[0, 0] -= sigma_lead
        A[n - 1, n - 1] -= sigma_lead
    try:
        lu = lu_factor(A)
        G = lu_solve(lu, np.eye(dim, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularError(f"resolvent inversion failed at omega={omega}") from exc
    if not np.all(np.isfinite(G)):
        raise SingularError(f"resolvent inversion produced non-finite entries at omega={omega}")
    if full:
        return G
    return np.diagonal(G).copy()


def dense_transmission(params: SystemParams, layout: LatticeLayout, omega: float) -> float:
    """|t|^2 extracted from the open-boundary resolvent between the two leads."""
    G = dense_resolvent(params, layout, omega, open_boundaries=True, full=True)
    k = wavevector(omega, params)
    n = layout.total_sites
    return float(abs(2.0 * params.xi0 * np.sin(k) * G[0, n - 1]) ** 2)
