"""One-time reference run for the L=12 dynamics tests.

Integrates the lab-frame Schrodinger equation with scipy's DOP853 on the
dense Sz=0 sector.  Shares only the Hamiltonian construction with the
package (checked separately against explicit Kronecker products), not
the Krylov/Magnus propagator.  Prints the numbers frozen in
``tests/test_dynamics.py``.

    python tests/oracles/dynamics_oracle.py
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from xxzfloquet import DrivenXXZ, ModelParams, SpinBasis, build_chain, build_dense, library_state
from xxzfloquet.hilbert import product_state_vector, total_sz_diagonal
from xxzfloquet.observables import entanglement_entropy_per_site, sz_profile
from xxzfloquet.hilbert import StateVector

L, A, T_END = 12, 2.4048, 5.0


def run(omega, name):
    graph, basis = build_chain(L), SpinBasis(L)
    model = DrivenXXZ(graph, basis, ModelParams(-0.75, -1.0, omega, A))
    sector = np.flatnonzero(total_sz_diagonal(basis) == 0)
    h0 = build_dense(model.handle("H0"))[np.ix_(sector, sector)]
    d = model.ising_diag[sector]
    heff = build_dense(model.handle("H_eff", a=A))[np.ix_(sector, sector)]
    psi0 = product_state_vector(library_state(name, L)).amplitudes[sector]
    dj = omega * A

    def rhs(t, y):
        return -1j * (h0 @ y - dj * np.cos(omega * t) * d * y)

    sol = solve_ivp(rhs, (0.0, T_END), psi0.astype(complex), method="DOP853", rtol=1e-12, atol=1e-13)
    full = np.zeros(basis.dim, complex)
    full[sector] = sol.y[:, -1]
    psi = StateVector(basis, full)
    eff = np.zeros(basis.dim, complex)
    eff[sector] = expm(-1j * T_END * heff) @ psi0
    frame = np.exp(-1j * A * np.sin(omega * T_END) * model.ising_diag)
    prof0 = sz_profile(product_state_vector(library_state(name, L)))
    dev = np.abs(sz_profile(psi) - prof0)
    return {
        "sigma": entanglement_entropy_per_site(psi),
        "max_dev": dev.max(),
        "dev": dev,
        "frame_distance": np.linalg.norm(frame * full - eff),
        "final": full,
    }


if __name__ == "__main__":
    np.set_printoptions(precision=6, linewidth=150)
    out = {}
    for omega in (10.0, 4.0):
        for name in ("A0", "A1"):
            r = run(omega, name)
            out[(omega, name)] = r
            print(f"omega={omega} {name}: sigma={r['sigma']!r} max_dev={r['max_dev']!r} "
                  f"frame_distance={r['frame_distance']!r}")
            print("   dev:", r["dev"])
    np.savez("/tmp/dynamics_oracle.npz", **{f"{k[1]}_{int(k[0])}": v["final"] for k, v in out.items()})
