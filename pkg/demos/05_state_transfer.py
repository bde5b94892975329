"""Resonator-to-resonator state transfer driven by weak mode detuning.

An anti-symmetric mode superposition is dark: it cannot decay into the
waveguide. A small detuning (within one resonator, or between the two)
opens a slow coherent channel between the resonators while radiation stays
suppressed. This script runs the three standard scenarios at full scale
(n_side=4000) for both mode-frequency assignments and prints the resulting
fidelity matrix. Takes roughly half a minute.
"""

import time

from wgrsim import (
    Breaking,
    LatticeLayout,
    RecordSpec,
    SystemParams,
    antisym_w1,
    antisym_w1w2,
    build_hamiltonian,
    propagate,
    transfer_fidelity,
)

BASES = {
    "sym": (0.001, 0.001, 0.001, 0.001),
    "anti": (0.001, -0.001, 0.001, -0.001),
}

SCENARIOS = (
    ("forward transfer", Breaking.INTRA, "antisym_w1", 4500.0, "w1_to_w2"),
    ("return after round trip", Breaking.INTER, "antisym_w1", 5500.0, "w1_return"),
    ("paired-state retention", Breaking.INTER, "antisym_w1w2", 2000.0, "pair"),
)


def run(base, breaking, initial, t_final):
    fr = BASES[base]
    p = SystemParams(xi1=0.1, omega_a1=fr[0], omega_b1=fr[1], omega_a2=fr[2],
                     omega_b2=fr[3], L=40, delta=0.00075, breaking=breaking)
    lay = LatticeLayout(n_side=4000, L=40)
    H = build_hamiltonian(p, lay)
    state = antisym_w1(lay) if initial == "antisym_w1" else antisym_w1w2(lay)
    return propagate(state, H, t_final, RecordSpec(samples=30))


def main():
    for name, breaking, initial, t_final, direction in SCENARIOS:
        print(f"\n{name}: {initial}, {breaking.value} detuning, t={t_final:g}")
        for base in ("sym", "anti"):
            t0 = time.time()
            traj = run(base, breaking, initial, t_final)
            fid = transfer_fidelity(traj, direction)
            occ = traj.mode_occ[-1]
            print(f"  {base:>4} assignment: fidelity({direction}) = {fid:.4f} "
                  f"[occupations a1={occ[0]:.3f} b1={occ[1]:.3f} "
                  f"a2={occ[2]:.3f} b2={occ[3]:.3f}] ({time.time() - t0:.0f}s)")
    print("\nnote: terminal values at this hard-wall size include a small "
          "wall-echo contribution for the two longest runs")


if __name__ == "__main__":
    main()
