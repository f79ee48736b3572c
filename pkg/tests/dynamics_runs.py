"""Cached L=12 trajectories shared by the dynamics and acceptance tests."""

import functools

import numpy as np

from xxzfloquet import DrivenXXZ, EvolutionConfig, ModelParams, SpinBasis, build_chain, library_state
from xxzfloquet.evolution import evolve_periodic, expm_apply, rotating_frame_distance
from xxzfloquet.hilbert import product_state_vector
from xxzfloquet.observables import sz_profile

L = 12
A = 2.4048
J_PERP = -0.75
J_PAR_BAR = -1.0
T_END = 5.0 / abs(J_PAR_BAR)


@functools.lru_cache(maxsize=None)
def run(omega: float, name: str, steps_per_period: int = 64) -> dict:
    model = DrivenXXZ(build_chain(L), SpinBasis(L), ModelParams(J_PERP, J_PAR_BAR, omega, A))
    psi0 = product_state_vector(library_state(name, L))
    traj = evolve_periodic(
        model, psi0, EvolutionConfig(T_END, snapshot_times=(0.0, T_END), steps_per_period=steps_per_period)
    )
    eff = expm_apply(model.handle("H_eff", a=A), T_END, psi0, tolerance=1e-12)
    final = traj.final_state
    return {
        "sigma": traj.entropy[-1],
        "dev": np.abs(sz_profile(final) - sz_profile(psi0)),
        "frame_distance": rotating_frame_distance(model, final, eff, T_END),
        "raw_distance": float(np.linalg.norm(final.amplitudes - eff.amplitudes)),
        "norm_drift": traj.norm_drift,
    }
