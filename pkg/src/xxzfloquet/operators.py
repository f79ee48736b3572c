"""Matrix-free XXZ operators with Bessel-dressed transverse exchange.

All operators act on the full product basis of :mod:`xxzfloquet.hilbert`.
The transverse part is stored as a list of *hopping terms*, one per bond
and ladder ordering.  A term maps each source basis state to exactly one
target, so applying it is a gather/scatter with no index collisions.

Ordering convention for the dressed exchange on bond ``(i, j)``::

    S_i^+ f(Z_ij) S_j^-   +   S_i^- g(Z_ij) S_j^+

``Z_ij`` is diagonal and is evaluated on the intermediate state reached
after the right-most ladder operator has acted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError, ResourceError
from .hilbert import ProductState, SpinBasis, StateVector
from .lattice import LatticeGraph, neighbor_sum_sites
from .specfun import BESSEL_TABLE

DENSE_MAX_DIM = 4096
HBAR = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the driven XXZ model (hbar = 1).

    ``J_par(t) = j_par_bar + delta_j * cos(omega * t)`` with
    ``delta_j = hbar * omega * amplitude_a``.
    """

    j_perp: float
    j_par_bar: float
    omega: float = 1.0
    amplitude_a: float = 0.0
    delta_j: float = field(default=None)

    def __post_init__(self):
        if not self.omega > 0:
            raise InvalidArgumentError(f"omega must be positive, got {self.omega}")
        if self.amplitude_a < 0:
            raise InvalidArgumentError(f"amplitude_a must be non-negative, got {self.amplitude_a}")
        if self.delta_j is None:
            object.__setattr__(self, "delta_j", HBAR * self.omega * self.amplitude_a)

    @classmethod
    def from_delta_j(cls, j_perp: float, j_par_bar: float, omega: float, delta_j: float) -> "ModelParams":
        if delta_j < 0:
            raise InvalidArgumentError(f"delta_j must be non-negative, got {delta_j}")
        return cls(j_perp, j_par_bar, omega, delta_j / (HBAR * omega), delta_j)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def j_par(self, t: float) -> float:
        return self.j_par_bar + self.delta_j * math.cos(self.omega * t)


@dataclass(frozen=True)
class HopTerm:
    """One ladder ordering ``S_raise^+ f(Z_bond) S_lower^-`` on one bond.

    ``phase_sign`` is +1 for the ``S_i^+ ... S_j^-`` ordering of bond
    ``(i, j)`` and -1 for its ``(+ <-> -)`` partner; it fixes the sign of
    the rotating-frame phase ``exp(-i * phase_sign * theta * Z)``.
    """

    bond: tuple[int, int]
    raise_site: int
    lower_site: int
    phase_sign: int
    src: np.ndarray
    tgt: np.ndarray
    ladder: np.ndarray
    two_z: np.ndarray


class DrivenXXZ:
    """Operator factory for one (lattice, basis, couplings) triple.

    Structural arrays (Ising energies, hopping index maps) are built once
    and shared; every ``apply_*`` allocates and returns a fresh vector.
    """

    def __init__(self, graph: LatticeGraph, basis: SpinBasis, params: ModelParams):
        if graph.num_sites != basis.num_sites:
            raise InvalidArgumentError(
                f"lattice has {graph.num_sites} sites but basis has {basis.num_sites}"
            )
        self.graph = graph
        self.basis = basis
        self.params = params
        self._coef_cache: dict[tuple, list[np.ndarray]] = {}

    def with_params(self, params: ModelParams) -> "DrivenXXZ":
        """Same structure, new couplings; the index maps are shared."""
        other = DrivenXXZ.__new__(DrivenXXZ)
        other.graph = self.graph
        other.basis = self.basis
        other.params = params
        other._coef_cache = {}
        for name in ("ising_diag", "hop_terms"):
            if name in self.__dict__:
                other.__dict__[name] = self.__dict__[name]
        return other

    # -- structure -----------------------------------------------------------

    @cached_property
    def ising_diag(self) -> np.ndarray:
        """``sum_bonds m_i m_j`` for every basis state."""
        tm = self.basis.two_m_table
        acc = np.zeros(self.basis.dim, dtype=np.int64)
        for i, j in self.graph.edges:
            acc += tm[i].astype(np.int64) * tm[j]
        return acc * 0.25

    def z_two_diag(self, i: int, j: int) -> np.ndarray:
        """``2 Z_ij`` on every basis state, as exact integers."""
        plus, minus = neighbor_sum_sites(self.graph, i, j)
        tm = self.basis.two_m_table
        acc = np.zeros(self.basis.dim, dtype=np.int64)
        for k in plus:
            acc += tm[k]
        for k in minus:
            acc -= tm[k]
        return acc

    @cached_property
    def hop_terms(self) -> list[HopTerm]:
        basis = self.basis
        digits = basis.digit_table
        tm = basis.two_m_table.astype(np.int64)
        s2 = basis.two_s
        # 4 [S(S+1) - m(m +/- 1)] for raising / lowering, per site and state
        raise4 = s2 * (s2 + 2) - tm * (tm + 2)
        lower4 = s2 * (s2 + 2) - tm * (tm - 2)
        terms = []
        for i, j in self.graph.edges:
            z2 = self.z_two_diag(i, j)
            for up, down, sign in ((i, j, 1), (j, i, -1)):
                src = np.flatnonzero((digits[up] < s2) & (digits[down] > 0))
                mid = src - basis.stride(down)
                tgt = mid + basis.stride(up)
                ladder = np.sqrt(lower4[down, src] * raise4[up, mid]) / 4
                terms.append(HopTerm((i, j), up, down, sign, src, tgt, ladder, z2[mid]))
        return terms

    def _terms_for(self, bond=None) -> list[HopTerm]:
        if bond is None:
            return self.hop_terms
        i, j = bond
        if not self.graph.has_edge(i, j):
            raise InvalidArgumentError(f"({i}, {j}) is not an edge of the lattice")
        key = (i, j) if (i, j) in self.graph.edges else (j, i)
        return [t for t in self.hop_terms if t.bond == key]

    def _bessel_coefs(self, a: float) -> list[np.ndarray]:
        key = ("j0", float(a))
        coefs = self._coef_cache.get(key)
        if coefs is None:
            if len(self._coef_cache) > 8:
                self._coef_cache.clear()
            coefs = [t.ladder * BESSEL_TABLE.lookup(a, t.two_z) for t in self.hop_terms]
            self._coef_cache[key] = coefs
        return coefs

    # -- kernels on raw arrays (1-D vectors or (dim, k) column blocks) ------------

    def _check(self, psi: StateVector) -> np.ndarray:
        if not isinstance(psi, StateVector):
            raise InvalidArgumentError("expected a StateVector")
        if psi.basis != self.basis:
            raise InvalidArgumentError(f"state lives on {psi.basis}, operator on {self.basis}")
        return psi.amplitudes

    def _hop(self, x: np.ndarray, terms, coefs, scale: complex, out: np.ndarray) -> np.ndarray:
        for t, c in zip(terms, coefs):
            c = scale * c
            if x.ndim == 2:
                c = c[:, None]
            out[t.tgt] += c * x[t.src]
        return out

    def _diag(self, x: np.ndarray, d: np.ndarray) -> np.ndarray:
        return d[:, None] * x if x.ndim == 2 else d * x

    def h0_matvec(self, x):
        p = self.params
        out = self._diag(x, -p.j_par_bar * self.ising_diag).astype(np.complex128)
        return self._hop(x, self.hop_terms, [t.ladder for t in self.hop_terms], -0.5 * p.j_perp, out)

    def ising_matvec(self, x):
        return self._diag(x, -self.params.j_par_bar * self.ising_diag).astype(np.complex128)

    def v_matvec(self, t: float, x):
        p = self.params
        return self._diag(x, -p.delta_j * math.cos(p.omega * t) * self.ising_diag).astype(np.complex128)

    def h_of_t_matvec(self, t: float, x):
        p = self.params
        out = self._diag(x, -p.j_par(t) * self.ising_diag).astype(np.complex128)
        return self._hop(x, self.hop_terms, [t_.ladder for t_ in self.hop_terms], -0.5 * p.j_perp, out)

    def h_eff_xy_matvec(self, a: float, x):
        out = np.zeros(x.shape, dtype=np.complex128)
        return self._hop(x, self.hop_terms, self._bessel_coefs(a), -0.5 * self.params.j_perp, out)

    def h_eff_matvec(self, a: float, x):
        out = self.ising_matvec(x)
        return self._hop(x, self.hop_terms, self._bessel_coefs(a), -0.5 * self.params.j_perp, out)

    def bond_matvec(self, i: int, j: int, a: float, x):
        terms = self._terms_for((i, j))
        coefs = [t.ladder * BESSEL_TABLE.lookup(a, t.two_z) for t in terms]
        return self._hop(x, terms, coefs, 1.0, np.zeros(x.shape, dtype=np.complex128))

    def z_matvec(self, i: int, j: int, x):
        return self._diag(x, 0.5 * self.z_two_diag(i, j)).astype(np.complex128)

    def dressed_h0_matvec(self, theta: float, x):
        """Rotating-frame Hamiltonian with the exchange dressed by ``exp(-/+ i theta Z)``.

        Closed form of ``U H0 U^dagger`` at ``theta = A sin(omega t)``.
        """
        p = self.params
        coefs = [t.ladder * np.exp(-1j * t.phase_sign * theta * 0.5 * t.two_z) for t in self.hop_terms]
        return self._hop(x, self.hop_terms, coefs, -0.5 * p.j_perp, self.ising_matvec(x))

    # -- StateVector API -------------------------------------------------------

    def _wrap(self, arr) -> StateVector:
        return StateVector(self.basis, arr)

    def apply_h0(self, psi: StateVector) -> StateVector:
        return self._wrap(self.h0_matvec(self._check(psi)))

    def apply_v(self, t: float, psi: StateVector) -> StateVector:
        return self._wrap(self.v_matvec(t, self._check(psi)))

    def apply_h_of_t(self, t: float, psi: StateVector) -> StateVector:
        return self._wrap(self.h_of_t_matvec(t, self._check(psi)))

    def apply_h_eff(self, a: float, psi: StateVector) -> StateVector:
        return self._wrap(self.h_eff_matvec(a, self._check(psi)))

    def apply_h_eff_xy(self, a: float, psi: StateVector) -> StateVector:
        return self._wrap(self.h_eff_xy_matvec(a, self._check(psi)))

    def apply_h_ising(self, psi: StateVector) -> StateVector:
        return self._wrap(self.ising_matvec(self._check(psi)))

    def apply_bond(self, i: int, j: int, a: float, psi: StateVector) -> StateVector:
        return self._wrap(self.bond_matvec(i, j, a, self._check(psi)))

    def apply_z(self, i: int, j: int, psi: StateVector) -> StateVector:
        return self._wrap(self.z_matvec(i, j, self._check(psi)))

    def handle(self, kind: str, **kwargs) -> "OperatorHandle":
        return OperatorHandle(kind, self, **kwargs)


def z_eigenvalue(graph: LatticeGraph, state: ProductState, i: int, j: int) -> float:
    """Eigenvalue of the staggered magnetization around bond ``(i, j)``."""
    plus, minus = neighbor_sum_sites(graph, i, j)
    two_z = sum(state.two_m(k) for k in plus) - sum(state.two_m(k) for k in minus)
    return two_z / 2


KINDS = ("H_of_t", "H0", "V", "H_eff", "H_eff_XY", "H_Ising", "Bond", "Z")
STATIC_KINDS = frozenset(("H0", "H_eff", "H_eff_XY", "H_Ising", "Bond", "Z"))


@dataclass(frozen=True)
class OperatorHandle:
    """A concrete operator bound to a model: kind plus its parameters.

    ``a`` is used by ``H_eff``, ``H_eff_XY`` and ``Bond``; ``t`` by
    ``H_of_t`` and ``V``; ``bond`` by ``Bond`` and ``Z``.  All kinds are
    Hermitian.
    """

    kind: str
    model: DrivenXXZ
    a: float | None = None
    t: float | None = None
    bond: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown operator kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("H_eff", "H_eff_XY", "Bond") and self.a is None:
            raise InvalidArgumentError(f"{self.kind} needs an amplitude a")
        if self.kind in ("H_of_t", "V") and self.t is None:
            raise InvalidArgumentError(f"{self.kind} needs a time t")
        if self.kind in ("Bond", "Z"):
            if self.bond is None or not self.model.graph.has_edge(*self.bond):
                raise InvalidArgumentError(f"{self.kind} needs a lattice bond, got {self.bond}")

    @property
    def basis(self) -> SpinBasis:
        return self.model.basis

    @property
    def is_static(self) -> bool:
        return self.kind in STATIC_KINDS

    def at(self, t: float) -> "OperatorHandle":
        return OperatorHandle(self.kind, self.model, self.a, t, self.bond)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        m = self.model
        k = self.kind
        if k == "H0":
            return m.h0_matvec(x)
        if k == "H_Ising":
            return m.ising_matvec(x)
        if k == "H_eff":
            return m.h_eff_matvec(self.a, x)
        if k == "H_eff_XY":
            return m.h_eff_xy_matvec(self.a, x)
        if k == "H_of_t":
            return m.h_of_t_matvec(self.t, x)
        if k == "V":
            return m.v_matvec(self.t, x)
        if k == "Bond":
            return m.bond_matvec(*self.bond, self.a, x)
        return m.z_matvec(*self.bond, x)

    def apply(self, psi: StateVector) -> StateVector:
        return StateVector(self.basis, self.matvec(self.model._check(psi)))


def build_dense(handle: OperatorHandle, max_dim: int = DENSE_MAX_DIM, block: int = 256) -> np.ndarray:
    """Dense matrix assembled column block by column block from the matvec."""
    dim = handle.basis.dim
    if dim > max_dim:
        raise ResourceError(f"dense build of dimension {dim} exceeds the cap {max_dim}")
    out = np.empty((dim, dim), dtype=np.complex128)
    for start in range(0, dim, block):
        stop = min(dim, start + block)
        cols = np.zeros((dim, stop - start), dtype=np.complex128)
        cols[np.arange(start, stop), np.arange(stop - start)] = 1.0
        out[:, start:stop] = handle.matvec(cols)
    return out
