"""Single-photon transport through two side-coupled whispering-gallery resonators."""

__version__ = "0.1.0"

from .errors import (
    BandEdgeError,
    GeometryError,
    LayoutError,
    ParseError,
    PoleError,
    SingularError,
    ToleranceError,
    ValidationError,
    WgrsimError,
)
from .model import (
    Breaking,
    LatticeLayout,
    SystemParams,
    apply_symmetry_breaking,
    build_hamiltonian,
    dispersion,
    wavevector,
)
from .stationary import (
    ScatterEval,
    SpectrumGrid,
    between_ldos,
    eval_point,
    heatmap,
    resonator_ldos,
    spectrum,
    transmission_amplitude,
    transmission_probability,
)
from .oracle import (
    ScatterSolution,
    closed_form_transmission,
    dense_resolvent,
    dense_transmission,
    effective_potential,
    transfer_transmission,
)
from .dynamics import (
    LatticeState,
    RecordSpec,
    Trajectory,
    antisym_w1,
    antisym_w1w2,
    gaussian_packet,
    propagate,
    transfer_fidelity,
)

__all__ = [
    "Breaking", "LatticeLayout", "SystemParams", "apply_symmetry_breaking",
    "build_hamiltonian", "dispersion", "wavevector",
    "ScatterEval", "SpectrumGrid", "between_ldos", "eval_point", "heatmap",
    "resonator_ldos", "spectrum", "transmission_amplitude", "transmission_probability",
    "ScatterSolution", "closed_form_transmission", "dense_resolvent",
    "dense_transmission", "effective_potential", "transfer_transmission",
    "LatticeState", "RecordSpec", "Trajectory", "antisym_w1", "antisym_w1w2",
    "gaussian_packet", "propagate", "transfer_fidelity",
    "WgrsimError", "ValidationError", "BandEdgeError", "PoleError", "LayoutError",
    "GeometryError", "ToleranceError", "SingularError", "ParseError",
]
