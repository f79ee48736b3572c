"""Four-site cluster classes and the localized/non-localized decision.

For a bond ``(i, i+1)`` of a periodic spin-1/2 chain the cluster is the
window ``(m_{i-1}, m_i, m_{i+1}, m_{i+2})``.  At a zero of J0 the bond
operator annihilates the cluster unless it belongs to class ``H1``; a
product state is a fixed point of the effective dynamics iff no bond
carries an ``H1`` cluster.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceError, UnsupportedLatticeError
from .hilbert import ProductState, SpinBasis, parse_spin_string
from .lattice import MIN_DYNAMICS_CHAIN, LatticeGraph, build_chain

ENUMERATE_MAX_LENGTH = 20


class ClusterClass(enum.Enum):
    H0 = "h0"  # coefficient J0(A)
    H1 = "h1"  # coefficient 1
    HX = "hx"  # bond spins aligned: annihilated

    def coefficient_label(self) -> str | None:
        return {"h0": "J0(A)", "h1": "1", "hx": None}[self.value]


def _cluster(text: str) -> tuple[int, int, int, int]:
    return tuple(1 if c == "↑" else 0 for c in text)


# Membership lists, written left to right as (m_{i-1}, m_i, m_{i+1}, m_{i+2}).
H0_CLUSTERS = frozenset(map(_cluster, ("↑↑↓↓", "↑↓↑↓", "↓↑↓↑", "↓↓↑↑")))
H1_CLUSTERS = frozenset(map(_cluster, ("↑↑↓↑", "↑↓↑↑", "↓↓↑↓", "↓↑↓↓")))
HX_CLUSTERS = frozenset(
    (a, s, s, b) for a in (0, 1) for b in (0, 1) for s in (0, 1)
)


def classify_cluster(m_prev: int, m_i: int, m_j: int, m_next: int) -> ClusterClass:
    """Class of a four-site window given as bits (1 = up)."""
    key = (int(m_prev), int(m_i), int(m_j), int(m_next))
    if key in H0_CLUSTERS:
        return ClusterClass.H0
    if key in H1_CLUSTERS:
        return ClusterClass.H1
    if key in HX_CLUSTERS:
        return ClusterClass.HX
    raise InvalidArgumentError(f"{key} is not a spin-1/2 cluster")


def all_clusters() -> list[tuple[int, int, int, int]]:
    """The 16 windows in lexicographic order, first site most significant."""
    return [tuple((n >> (3 - k)) & 1 for k in range(4)) for n in range(16)]


def cluster_label(cluster) -> str:
    return "".join("↑" if c else "↓" for c in cluster)


@dataclass(frozen=True)
class StateClass:
    """Outcome of the global test; ``witness`` lists the ``H1`` bonds (0-based)."""

    localized: bool
    witness: tuple[tuple[int, int], ...]

    @property
    def tag(self) -> str:
        return "localized" if self.localized else "non-localized"


def _require_chain(graph: LatticeGraph, basis: SpinBasis) -> None:
    if not graph.is_periodic_chain:
        raise UnsupportedLatticeError("cluster classification is defined only for periodic chains")
    if basis.two_s != 1:
        raise UnsupportedLatticeError("cluster classification is defined only for S = 1/2")
    if graph.num_sites < MIN_DYNAMICS_CHAIN:
        raise UnsupportedLatticeError(
            f"cluster classification needs L >= {MIN_DYNAMICS_CHAIN}, got {graph.num_sites}"
        )


def bond_clusters(graph: LatticeGraph, state: ProductState):
    """Yield ``((i, i+1 mod L), ClusterClass)`` for every chain bond."""
    _require_chain(graph, state.basis)
    L = graph.num_sites
    d = state.digits
    for i in range(L):
        j = (i + 1) % L
        yield (i, j), classify_cluster(d[(i - 1) % L], d[i], d[j], d[(i + 2) % L])


def classify_product_state(graph: LatticeGraph, state: ProductState) -> StateClass:
    witness = tuple(bond for bond, cls in bond_clusters(graph, state) if cls is ClusterClass.H1)
    return StateClass(not witness, witness)


def localized_mask(length: int) -> np.ndarray:
    """Boolean mask over all ``2**length`` encodings: True where localized."""
    if length > ENUMERATE_MAX_LENGTH:
        raise ResourceError(f"enumeration capped at L = {ENUMERATE_MAX_LENGTH}, got {length}")
    if length < MIN_DYNAMICS_CHAIN:
        raise UnsupportedLatticeError(f"cluster classification needs L >= {MIN_DYNAMICS_CHAIN}")
    idx = np.arange(2**length, dtype=np.int64)
    bits = [(idx >> k) & 1 for k in range(length)]
    h1_codes = np.zeros(16, dtype=bool)
    for c in H1_CLUSTERS:
        h1_codes[c[0] << 3 | c[1] << 2 | c[2] << 1 | c[3]] = True
    ok = np.ones(idx.shape, dtype=bool)
    for i in range(length):
        code = (
            bits[(i - 1) % length] << 3
            | bits[i] << 2
            | bits[(i + 1) % length] << 1
            | bits[(i + 2) % length]
        )
        ok &= ~h1_codes[code]
    return ok


def enumerate_localized_states(length: int) -> list[ProductState]:
    """Every localized product state of a periodic chain, by increasing encoding."""
    basis = SpinBasis(length, 1)
    return [ProductState.from_index(basis, int(n)) for n in np.flatnonzero(localized_mask(length))]


# Exact 16-site patterns, site 1 leftmost.
_NAMED_STATES = {
    "A0": "↓↓↓↓↓↓↓↓↑↑↑↑↑↑↑↑",
    "A1": "↓↓↓↓↓↓↓↑↓↑↑↑↑↑↑↑",
    "B0": "↓↓↓↓↑↑↑↑↓↓↓↓↑↑↑↑",
    "B1": "↓↓↓↓↑↑↑↓↑↓↓↓↑↑↑↑",
}
LIBRARY_NAMES = tuple(_NAMED_STATES)


def library_pattern(name: str, length: int = 16) -> str:
    """Arrow string of a named initial state.

    ``A0`` has two ferromagnetic halves, ``B0`` four domains with the inner
    walls at bonds ``(L/2, L/2+1)``; the ``*1`` variants swap the spins of
    that central bond.  Lengths other than 16 place the domain walls
    proportionally: the first half holds ``L//4`` down then the rest up,
    the second half the mirror image.
    """
    if name not in _NAMED_STATES:
        raise InvalidArgumentError(f"unknown state {name!r}; expected one of {LIBRARY_NAMES}")
    if length == 16:
        return _NAMED_STATES[name]
    if length < 12 or length % 2:
        raise InvalidArgumentError(f"named states need L = 16 or an even L >= 12, got {length}")
    half = length // 2
    if name.startswith("A"):
        spins = ["↓"] * half + ["↑"] * half
    else:
        q = length // 4
        spins = ["↓"] * q + ["↑"] * (half - q) + ["↓"] * (half - q) + ["↑"] * q
    if name.endswith("1"):
        spins[half - 1], spins[half] = spins[half], spins[half - 1]
    return "".join(spins)


def library_state(name: str, length: int = 16) -> ProductState:
    return parse_spin_string(library_pattern(name, length), SpinBasis(length, 1))


def chain_for(length: int) -> LatticeGraph:
    return build_chain(length, periodic=True)
