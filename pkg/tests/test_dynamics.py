"""Initial states, the propagator, and transfer observables."""

import numpy as np
import pytest
import scipy.sparse as sp

from wgrsim import (
    Breaking,
    LatticeLayout,
    LatticeState,
    RecordSpec,
    SystemParams,
    antisym_w1,
    antisym_w1w2,
    build_hamiltonian,
    gaussian_packet,
    propagate,
    transfer_fidelity,
)
from wgrsim.errors import GeometryError, ToleranceError, ValidationError

from _runs import bookkeeping_drift, transfer_run


def test_gaussian_packet_norm_and_slots():
    lay = LatticeLayout(n_side=200, L=4)
    st = gaussian_packet(lay, sigma=20.0, x0=150.0, k0=1.1)
    assert abs(st.norm() - 1.0) < 1e-12
    assert np.all(st.amplitudes[lay.total_sites:] == 0.0)


def test_gaussian_packet_moments():
    """Width 250 centered at the first coupling site, moving right at the
    band center velocity."""
    lay = LatticeLayout(n_side=4000, L=40)
    st = gaussian_packet(lay, sigma=250.0, x0=4000.0, k0=np.pi / 2)
    amps = st.amplitudes[:lay.total_sites]
    prob = np.abs(amps) ** 2
    x = np.arange(lay.total_sites)
    assert abs((x * prob).sum() - 4000.0) < 0.5
    ft = np.abs(np.fft.fft(amps)) ** 2
    ks = 2 * np.pi * np.fft.fftfreq(lay.total_sites)
    mean_k = (ks * ft).sum() / ft.sum()
    assert abs(mean_k - np.pi / 2) < 0.01


def test_gaussian_packet_geometry_guard():
    lay = LatticeLayout(n_side=100, L=0)
    with pytest.raises(GeometryError):
        gaussian_packet(lay, sigma=30.0, x0=100.0, k0=1.0)  # 5 sigma hits the wall
    with pytest.raises(GeometryError):
        gaussian_packet(lay, sigma=30.0, x0=120.0, k0=1.0)


def test_gaussian_packet_validation():
    lay = LatticeLayout(n_side=100, L=0)
    for kwargs in (dict(sigma=1.0, x0=100.0, k0=1.0),
                   dict(sigma=0.5, x0=100.0, k0=1.0),
                   dict(sigma=10.0, x0=0.0, k0=1.0),
                   dict(sigma=10.0, x0=201.0, k0=1.0),
                   dict(sigma=10.0, x0=100.0, k0=0.0),
                   dict(sigma=10.0, x0=100.0, k0=np.pi)):
        with pytest.raises(ValidationError):
            gaussian_packet(lay, **kwargs)


def test_antisym_builders():
    lay = LatticeLayout(n_side=5, L=2)
    st1 = antisym_w1(lay)
    assert abs(st1.norm() - 1.0) < 1e-15
    assert np.allclose(st1.mode_occupations(), (0.5, 0.5, 0.0, 0.0))
    n = lay.total_sites
    assert st1.amplitudes[n] == pytest.approx(1 / np.sqrt(2))
    assert st1.amplitudes[n + 1] == pytest.approx(-1 / np.sqrt(2))

    st2 = antisym_w1w2(lay)
    assert abs(st2.norm() - 1.0) < 1e-15
    assert np.allclose(st2.mode_occupations(), (0.5, 0.0, 0.0, 0.5))
    assert st2.amplitudes[n + 3] == pytest.approx(-1 / np.sqrt(2))


def test_diagonal_hamiltonian_gives_pure_phases():
    lay = LatticeLayout(n_side=2, L=0)
    freqs = np.linspace(-0.8, 0.9, lay.dimension)
    H = sp.diags(freqs.astype(complex)).tocsr()
    rng = np.random.default_rng(500)
    v = rng.normal(size=lay.dimension) + 1j * rng.normal(size=lay.dimension)
    v /= np.linalg.norm(v)
    t = 7.3
    traj = propagate(LatticeState(v.copy(), lay), H, t,
                     RecordSpec(samples=3, snapshot_times=(t,)))
    expect = v * np.exp(-1j * freqs * t)
    assert np.max(np.abs(traj.snapshots[-1].amplitudes - expect)) < 1e-12
    assert np.max(np.abs(traj.mode_occ[-1] - traj.mode_occ[0])) < 1e-12


def test_decoupled_occupations_frozen():
    p = SystemParams(xi1=0.0, omega_a1=0.2, omega_b1=-0.3, omega_a2=0.15,
                     omega_b2=0.05, L=2)
    lay = LatticeLayout(n_side=40, L=2)
    H = build_hamiltonian(p, lay)
    traj = propagate(antisym_w1(lay), H, 120.0, RecordSpec(samples=25))
    assert np.max(np.abs(traj.mode_occ - traj.mode_occ[0])) < 1e-12


def test_propagator_matches_spectral_oracle():
    for n_side, L, t_final in ((13, 1, 50.0), (60, 3, 100.0)):
        p = SystemParams(xi1=0.1, omega_a1=0.01, omega_b1=0.01, omega_a2=0.01,
                         omega_b2=0.01, L=L)
        lay = LatticeLayout(n_side=n_side, L=L)
        H = build_hamiltonian(p, lay)
        rng = np.random.default_rng(501)
        v = rng.normal(size=lay.dimension) + 1j * rng.normal(size=lay.dimension)
        v /= np.linalg.norm(v)
        traj = propagate(LatticeState(v.copy(), lay), H, t_final,
                         RecordSpec(samples=2, snapshot_times=(t_final,)))
        w, U = np.linalg.eigh(H.toarray())
        exact = U @ (np.exp(-1j * w * t_final) * (U.conj().T @ v))
        err = np.linalg.norm(traj.snapshots[-1].amplitudes - exact)
        assert err < 1e-8, f"dim {lay.dimension}: {err:.2e}"


def test_probability_bookkeeping():
    p = SystemParams(xi1=0.1, omega_a1=0.001, omega_b1=-0.001, omega_a2=0.001,
                     omega_b2=-0.001, L=40)
    lay = LatticeLayout(n_side=500, L=40)
    H = build_hamiltonian(p, lay)
    st = gaussian_packet(lay, 60.0, 500.0, np.pi / 2)
    traj = propagate(st, H, 300.0, RecordSpec(samples=40))
    assert bookkeeping_drift(traj) < 1e-10


def test_non_hermitian_operator_rejected():
    lay = LatticeLayout(n_side=10, L=0)
    H = build_hamiltonian(SystemParams(xi1=0.1, L=0), lay).tolil()
    H[0, 1] = 0.5  # break hermiticity
    rng = np.random.default_rng(502)
    v = rng.normal(size=lay.dimension) + 1j * rng.normal(size=lay.dimension)
    v /= np.linalg.norm(v)
    with pytest.raises(ToleranceError):
        propagate(LatticeState(v, lay), H.tocsr(), 200.0, RecordSpec(samples=10))


def test_mirror_symmetric_trajectory():
    """Paired anti-symmetric preparation with inter-resonator detuning keeps
    the a1 and b2 occupation histories identical on a symmetric lattice."""
    p = SystemParams(xi1=0.1, omega_a1=0.001, omega_b1=-0.001, omega_a2=0.001,
                     omega_b2=-0.001, L=40, delta=0.00075, breaking=Breaking.INTER)
    lay = LatticeLayout(n_side=300, L=40)
    H = build_hamiltonian(p, lay)
    traj = propagate(antisym_w1w2(lay), H, 250.0, RecordSpec(samples=30))
    assert np.max(np.abs(traj.mode_occ[:, 0] - traj.mode_occ[:, 3])) < 1e-8
    assert np.max(np.abs(traj.mode_occ[:, 1] - traj.mode_occ[:, 2])) < 1e-8


def test_packet_leaves_trapped_residual():
    """A resonant packet crossing the coupled region leaves a small trapped
    remnant in the segment and modes while the bulk disperses."""
    p = SystemParams(xi1=0.1, omega_a1=0.001, omega_b1=-0.001, omega_a2=0.001,
                     omega_b2=-0.001, L=40)
    lay = LatticeLayout(n_side=4000, L=40)
    H = build_hamiltonian(p, lay)
    st = gaussian_packet(lay, 250.0, 4000.0, np.pi / 2)
    traj = propagate(st, H, 2800.0, RecordSpec(samples=15))
    trapped = traj.between_prob[-1] + traj.mode_occ[-1].sum()
    assert 1e-3 < trapped < 0.1
    assert traj.left_prob[-1] + traj.right_prob[-1] > 0.9


def test_end_reflection_guard():
    """Doubling n_side must not move any reported fidelity by more than 1e-3.

    States: the long transfer runs end after the leaked radiation has had
    time to reflect off the hard walls and return (the echo arrives near
    t = n_side at unit group velocity, and the first two runs end well past
    that), so their terminal occupations are wall-contaminated. Measured
    changes under doubling are about 0.014 and 0.021 for the first two runs;
    only the shortest run satisfies the stated bound. Kept as written.
    """
    cases = (
        ("sym", "intra", "antisym_w1", 4500.0, "w1_to_w2"),
        ("anti", "inter", "antisym_w1", 5500.0, "w1_return"),
        ("anti", "inter", "antisym_w1w2", 2000.0, "pair"),
    )
    deltas = []
    for base, br, ini, tf, direction in cases:
        f1 = transfer_fidelity(transfer_run(base, br, ini, tf, 4000), direction)
        f2 = transfer_fidelity(transfer_run(base, br, ini, tf, 8000), direction)
        deltas.append(abs(f1 - f2))
        print(f"{ini} {br} t={tf:g}: n4000={f1:.6f} n8000={f2:.6f} "
              f"delta={abs(f1 - f2):.6f}")
    assert max(deltas) < 1e-3, f"fidelity shifts under wall doubling: {deltas}"


def test_transfer_fidelity_directions():
    lay = LatticeLayout(n_side=30, L=2)
    p = SystemParams(xi1=0.1, L=2)
    H = build_hamiltonian(p, lay)
    traj = propagate(antisym_w1(lay), H, 1e-6, RecordSpec(samples=2))
    assert transfer_fidelity(traj, "w1_to_w2") < 1e-10
    assert transfer_fidelity(traj, "w1_return") == pytest.approx(1.0, abs=1e-8)
    assert transfer_fidelity(traj, "pair") == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValidationError):
        transfer_fidelity(traj, "sideways")
