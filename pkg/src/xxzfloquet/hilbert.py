"""Spin-S product basis, product states and state vectors.

A basis state is encoded as ``index = sum_k digit_k * d**k`` with local
dimension ``d = 2S + 1`` and site 0 in the least significant position.
The digit ``n`` stands for ``m = n - S``; for S=1/2 this is one bit per
site with 1 meaning spin up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError, ParseError, ResourceError

DEFAULT_MAX_DIM = 2**26

_UP = {"u", "↑"}
_DOWN = {"d", "↓"}


class SpinBasis:
    """Full tensor-product basis of ``num_sites`` spins with ``2S = two_s``."""

    def __init__(self, num_sites: int, two_s: int = 1, max_dim: int = DEFAULT_MAX_DIM):
        if num_sites < 1:
            raise InvalidArgumentError("num_sites must be positive")
        if two_s < 1:
            raise InvalidArgumentError("two_s must be a positive integer")
        self.num_sites = int(num_sites)
        self.two_s = int(two_s)
        self.local_dim = self.two_s + 1
        dim = self.local_dim**self.num_sites
        if dim > max_dim:
            raise ResourceError(f"Hilbert space dimension {dim} exceeds the cap {max_dim}")
        self.dim = dim

    def __repr__(self):
        return f"SpinBasis(num_sites={self.num_sites}, two_s={self.two_s})"

    def __eq__(self, other):
        return (
            isinstance(other, SpinBasis)
            and self.num_sites == other.num_sites
            and self.two_s == other.two_s
        )

    def __hash__(self):
        return hash((self.num_sites, self.two_s))

    @property
    def spin(self) -> float:
        return self.two_s / 2

    def stride(self, site: int) -> int:
        return self.local_dim**site

    def encode(self, digits) -> int:
        index = 0
        for k, n in enumerate(digits):
            index += int(n) * self.local_dim**k
        return index

    def decode(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise InvalidArgumentError(f"basis index {index} out of range")
        out = []
        for _ in range(self.num_sites):
            index, n = divmod(index, self.local_dim)
            out.append(n)
        return tuple(out)

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``(num_sites, dim)`` int8 array of local digits for every basis state."""
        idx = np.arange(self.dim, dtype=np.int64)
        table = np.empty((self.num_sites, self.dim), dtype=np.int8)
        for k in range(self.num_sites):
            table[k] = (idx // self.stride(k)) % self.local_dim
        return table

    @cached_property
    def two_m_table(self) -> np.ndarray:
        """``2 m`` per site and basis state, as exact small integers."""
        return (2 * self.digit_table.astype(np.int16) - self.two_s).astype(np.int16)

    def m_of_site(self, site: int) -> np.ndarray:
        return self.two_m_table[site] * 0.5


def ladder_coefficient(two_s: int, two_m: int, direction: str) -> float:
    """Matrix element of S^+ (direction ``'+'``) or S^- on ``|m>``.

    Takes ``2S`` and ``2m`` as integers; returns
    ``sqrt(S(S+1) - m(m +/- 1))``, which is zero off the multiplet edge.
    """
    if direction not in ("+", "-"):
        raise InvalidArgumentError(f"direction must be '+' or '-', got {direction!r}")
    if abs(two_m) > two_s or (two_s - two_m) % 2:
        raise InvalidArgumentError(f"m = {two_m}/2 is not a level of S = {two_s}/2")
    sign = 1 if direction == "+" else -1
    # 4 [S(S+1) - m(m±1)] = 2S(2S+2) - 2m(2m±2), exact in integers
    four_x = two_s * (two_s + 2) - two_m * (two_m + 2 * sign)
    return math.sqrt(four_x) / 2 if four_x > 0 else 0.0


@dataclass(frozen=True)
class ProductState:
    """Ising-like product state, stored as one digit per site."""

    basis: SpinBasis
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.basis.num_sites:
            raise InvalidArgumentError(
                f"expected {self.basis.num_sites} digits, got {len(self.digits)}"
            )
        for k, n in enumerate(self.digits):
            if not 0 <= n < self.basis.local_dim:
                raise InvalidArgumentError(f"digit {n} at site {k} outside 0..{self.basis.two_s}")

    @classmethod
    def from_index(cls, basis: SpinBasis, index: int) -> "ProductState":
        return cls(basis, basis.decode(index))

    @property
    def index(self) -> int:
        return self.basis.encode(self.digits)

    def two_m(self, site: int) -> int:
        return 2 * self.digits[site] - self.basis.two_s

    def label(self, arrows: bool = False) -> str:
        """Spin string with site 1 leftmost (inverse of :func:`parse_spin_string`)."""
        if self.basis.two_s == 1:
            up, down = ("↑", "↓") if arrows else ("u", "d")
            return "".join(up if n else down for n in self.digits)
        return ",".join(str(self.two_m(k) // 2 if self.two_m(k) % 2 == 0 else f"{self.two_m(k)}/2")
                        for k in range(len(self.digits)))


def parse_spin_string(text: str, basis: SpinBasis) -> ProductState:
    """Parse ``'uudd'``/``'↑↑↓↓'`` (S=1/2) or comma-separated m values.

    For general S the entries are m quantum numbers such as ``1,0,-1`` or
    half-integers written ``3/2``.  The leftmost entry is site 1.
    """
    if basis.two_s == 1 and "," not in text:
        text = text.strip()
        if len(text) != basis.num_sites:
            raise ParseError(f"spin string has length {len(text)}, expected {basis.num_sites}")
        digits = []
        for pos, ch in enumerate(text):
            if ch in _UP:
                digits.append(1)
            elif ch in _DOWN:
                digits.append(0)
            else:
                raise ParseError(f"invalid spin character {ch!r}", position=pos + 1)
        return ProductState(basis, tuple(digits))

    parts = [p.strip() for p in text.split(",")]
    if len(parts) != basis.num_sites:
        raise ParseError(f"spin list has {len(parts)} entries, expected {basis.num_sites}")
    digits = []
    for pos, p in enumerate(parts):
        try:
            if "/" in p:
                num, den = p.split("/")
                if int(den) != 2:
                    raise ValueError
                two_m = int(num)
            else:
                two_m = 2 * int(p)
        except ValueError:
            raise ParseError(f"invalid m value {p!r}", position=pos + 1) from None
        if abs(two_m) > basis.two_s or (two_m + basis.two_s) % 2:
            raise ParseError(f"m = {p} is not a level of S = {basis.spin}", position=pos + 1)
        digits.append((two_m + basis.two_s) // 2)
    return ProductState(basis, tuple(digits))


def sz_value(state: ProductState, site: int) -> float:
    if not 0 <= site < state.basis.num_sites:
        raise InvalidArgumentError(f"site {site} out of range 0..{state.basis.num_sites - 1}")
    return state.two_m(site) / 2


class StateVector:
    """Complex amplitudes over a :class:`SpinBasis`.

    The vector is never renormalized implicitly; :meth:`norm` reports it.
    """

    __slots__ = ("basis", "amplitudes")

    def __init__(self, basis: SpinBasis, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (basis.dim,):
            raise InvalidArgumentError(
                f"amplitude array has shape {amplitudes.shape}, expected ({basis.dim},)"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidArgumentError("state vector has non-finite entries")
        self.basis = basis
        self.amplitudes = amplitudes

    def __repr__(self):
        return f"StateVector({self.basis!r}, norm={self.norm():.6g})"

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.basis, self.amplitudes.copy())

    @classmethod
    def zeros(cls, basis: SpinBasis) -> "StateVector":
        return cls(basis, np.zeros(basis.dim, dtype=np.complex128))

    @classmethod
    def random(cls, basis: SpinBasis, rng: np.random.Generator, magnetization: float | None = None):
        """Normalized Gaussian random vector, optionally within one Sz sector."""
        amp = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
        if magnetization is not None:
            amp[total_sz_diagonal(basis) != magnetization] = 0.0
        return cls(basis, amp / np.linalg.norm(amp))


def product_state_vector(state: ProductState) -> StateVector:
    amp = np.zeros(state.basis.dim, dtype=np.complex128)
    amp[state.index] = 1.0
    return StateVector(state.basis, amp)


def total_sz_diagonal(basis: SpinBasis) -> np.ndarray:
    """Eigenvalue of the total Sz on every basis state."""
    return basis.two_m_table.sum(axis=0, dtype=np.int64) * 0.5


def total_magnetization(psi: StateVector) -> float:
    """Expectation value of the total Sz (for normalized input)."""
    prob = np.abs(psi.amplitudes) ** 2
    return float(prob @ total_sz_diagonal(psi.basis))
