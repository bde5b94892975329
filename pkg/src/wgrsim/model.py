"""System parameters, lattice dispersion, and Hamiltonian assembly.

The physical system is a one dimensional tight-binding waveguide with two
whispering-gallery resonators attached at two sites a distance L apart.
Each resonator carries two degenerate counter-propagating modes (a and b),
so the single-excitation Hilbert space is the waveguide sites plus four
resonator mode slots.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .errors import BandEdgeError, LayoutError, ValidationError

# Margin kept away from the band edges; the waveguide self-energy
# diverges as 1/sin(k) there.
BAND_EDGE_MARGIN = 1e-9


class Breaking(Enum):
    """Which degeneracy-breaking detuning pattern is applied to the modes."""

    NONE = "none"
    INTRA = "intra"
    INTER = "inter"


@dataclass(frozen=True)
class SystemParams:
    """All physical parameters, in units of the waveguide hopping xi0.

    omega_c: waveguide site frequency (band center)
    xi0: nearest-neighbor hopping, sets the energy unit
    xi1: waveguide to resonator coupling
    omega_a1, omega_b1: mode frequencies of the first resonator
    omega_a2, omega_b2: mode frequencies of the second resonator
    L: site separation between the two coupling sites
    delta: detuning magnitude used by the breaking pattern
    breaking: which detuning pattern is active
    eta: positive spectral regularization (retarded +i*eta)
    """

    omega_c: float = 0.0
    xi0: float = 1.0
    xi1: float = 0.0
    omega_a1: float = 0.0
    omega_b1: float = 0.0
    omega_a2: float = 0.0
    omega_b2: float = 0.0
    L: int = 0
    delta: float = 0.0
    breaking: Breaking = Breaking.NONE
    eta: float = 1e-6

    def __post_init__(self):
        if self.xi0 <= 0:
            raise ValidationError(f"xi0 must be positive, got {self.xi0}")
        if self.eta <= 0:
            raise ValidationError(f"eta must be positive, got {self.eta}")
        if int(self.L) != self.L or self.L < 0:
            raise ValidationError(f"L must be a non-negative integer, got {self.L}")
        if not isinstance(self.breaking, Breaking):
            raise ValidationError(f"breaking must be a Breaking value, got {self.breaking!r}")

    def mode_frequencies(self):
        """The four mode frequencies in slot order (a1, b1, a2, b2), before breaking."""
        return (self.omega_a1, self.omega_b1, self.omega_a2, self.omega_b2)


@dataclass(frozen=True)
class LatticeLayout:
    """Index bookkeeping for the finite lattice used in dynamics and dense checks.

    n_side waveguide sites sit on each side of the coupled region, so the
    waveguide has 2*n_side + L + 1 sites in total. The four resonator mode
    slots are appended after the waveguide sites in the order a1, b1, a2, b2.
    """

    n_side: int
    L: int

    def __post_init__(self):
        if self.n_side < 1:
            raise ValidationError(f"n_side must be a positive integer, got {self.n_side}")
        if self.L < 0:
            raise ValidationError(f"L must be non-negative, got {self.L}")

    @property
    def total_sites(self) -> int:
        return 2 * self.n_side + self.L + 1

    @property
    def coupling_site_first(self) -> int:
        return self.n_side

    @property
    def coupling_site_second(self) -> int:
        return self.n_side + self.L

    @property
    def resonator_slots(self):
        n = self.total_sites
        return (n, n + 1, n + 2, n + 3)

    @property
    def dimension(self) -> int:
        return self.total_sites + 4


def dispersion(k, params: SystemParams):
    """Waveguide dispersion omega(k) = omega_c - 2*xi0*cos(k)."""
    return params.omega_c - 2.0 * params.xi0 * np.cos(k)


def wavevector(omega: float, params: SystemParams) -> float:
    """Invert the dispersion on the k in (0, pi) branch.

    Raises BandEdgeError when omega is at or outside the band, where the
    group velocity vanishes and downstream self-energies diverge.
    """
    x = abs(omega - params.omega_c)
    if x > 2.0 * params.xi0 - BAND_EDGE_MARGIN:
        raise BandEdgeError(
            f"omega={omega} is within {BAND_EDGE_MARGIN} of the band edge "
            f"(band is |omega - {params.omega_c}| < {2.0 * params.xi0})"
        )
    return float(np.arccos((params.omega_c - omega) / (2.0 * params.xi0)))


def apply_symmetry_breaking(params: SystemParams) -> SystemParams:
    """Return params with the detuning pattern folded into the mode frequencies.

    The intra pattern detunes the two modes within each resonator in opposite
    directions; the inter pattern detunes the two resonators against each
    other. The returned params have breaking set to NONE so the operation is
    idempotent.
    """
    d = params.delta
    if params.breaking is Breaking.INTRA:
        shifts = (d, -d, d, -d)
    elif params.breaking is Breaking.INTER:
        shifts = (d, d, -d, -d)
    else:
        return params
    a1, b1, a2, b2 = params.mode_frequencies()
    return replace(
        params,
        omega_a1=a1 + shifts[0],
        omega_b1=b1 + shifts[1],
        omega_a2=a2 + shifts[2],
        omega_b2=b2 + shifts[3],
        breaking=Breaking.NONE,
    )


def build_hamiltonian(params: SystemParams, layout: LatticeLayout) -> sp.csr_matrix:
    """Assemble the full single-excitation Hamiltonian as a sparse matrix.

    Waveguide sites carry omega_c on the diagonal and -xi0 hopping between
    neighbors. The first coupling site attaches to slots a1 and b1 and the
    second to a2 and b2, each with matrix element -xi1. Mode slots carry the
    post-breaking frequencies. Entries are placed symmetrically so the matrix
    equals its conjugate transpose exactly.
    """
    if layout.L != params.L:
        raise LayoutError(f"layout has L={layout.L} but params have L={params.L}")
    n = layout.total_sites
    if params.L + 1 > n:
        raise LayoutError(f"coupled region of {params.L + 1} sites exceeds {n} waveguide sites")

    eff = apply_symmetry_breaking(params)
    freqs = eff.mode_frequencies()
    slots = layout.resonator_slots

    rows, cols, vals = [], [], []

    def put(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v)

    for i in range(n):
        if params.omega_c != 0.0:
            put(i, i, params.omega_c)
    for i in range(n - 1):
        put(i, i + 1, -params.xi0)
        put(i + 1, i, -params.xi0)
    for s, f in zip(slots, freqs):
        if f != 0.0:
            put(s, s, f)
    for s in slots[:2]:
        put(layout.coupling_site_first, s, -params.xi1)
        put(s, layout.coupling_site_first, -params.xi1)
    for s in slots[2:]:
        put(layout.coupling_site_second, s, -params.xi1)
        put(s, layout.coupling_site_second, -params.xi1)

    dim = layout.dimension
    H = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim))
    return H.tocsr()
