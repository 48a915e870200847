"""Construction-A nested lattice codes for computing sums over the MAC.

A shaping lattice ``Lambda = B Z^n`` fixes the transmit region, and the fine
lattice ``Lambda_1 = p^-1 B (C + p Z^n)`` is lifted from a one-dimensional
linear code ``C = {w G mod p}`` over the prime field. The map from messages
to cosets of ``Lambda`` in ``Lambda_1`` is a group homomorphism, so the
receiver recovers ``sum(w_i) mod p`` and, with a large enough prime, the
integer sum itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import ATOL, Lattice


class NotPrime(ValueError):
    pass


class PrimeTooSmall(ValueError):
    """The field cannot hold every sum of quantized values without wraparound."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % f for f in range(3, math.isqrt(p) + 1, 2))


def smallest_prime_above(n: int) -> int:
    p = max(n + 1, 2)
    while not is_prime(p):
        p += 1
    return p


def validate_prime(p: int, num_devices: int, levels: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p <= num_devices * (levels - 1):
        raise PrimeTooSmall(
            f"p={p} must exceed K(q-1)={num_devices * (levels - 1)} to avoid wraparound"
        )


def construction_a_basis(generator: np.ndarray, p: int) -> np.ndarray:
    """Integer basis (columns) of ``C + p Z^n`` for the code spanned by ``generator``."""
    g = np.mod(np.asarray(generator, dtype=np.int64), p)
    nz = np.flatnonzero(g)
    if nz.size == 0:
        raise ValueError("generator vector is zero over F_p")
    j = nz[0]
    col = np.mod(g * pow(int(g[j]), -1, p), p)
    n = g.size
    basis = p * np.eye(n, dtype=np.int64)
    basis[:, j] = col
    return basis


@dataclass(frozen=True, eq=False)
class NestedCode:
    prime: int
    shaping: Lattice
    generator: np.ndarray
    fine: Lattice = field(repr=False)
    coset_table: np.ndarray = field(repr=False)
    _lift: np.ndarray = field(repr=False)
    _pivot: int = field(repr=False)
    _pivot_inverse: int = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.shaping.dimension

    @property
    def rate(self) -> float:
        """Bits per channel use, ``log2(p) / n``."""
        return math.log2(self.prime) / self.dimension

    def message_of(self, fine_coords) -> np.ndarray:
        """Message index of fine-lattice points given by their integer coordinates.

        ``fine_coords`` are coordinates with respect to ``fine.generator``;
        they are lifted to the integer vector ``x`` of the point ``B x / p``.
        """
        x = np.asarray(fine_coords, dtype=np.int64) @ self._lift.T
        return np.mod(x[..., self._pivot] * self._pivot_inverse, self.prime)


def random_generator(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform nonzero vector of ``F_p^n``."""
    while True:
        g = rng.integers(0, p, size=n, dtype=np.int64)
        if np.any(g):
            return g


def build_code(shaping: Lattice, p: int, generator=None, rng_seed=None) -> NestedCode:
    """Nested lattice code over ``F_p`` with message length one.

    When ``generator`` is omitted a uniform nonzero vector is drawn from a
    generator seeded with ``rng_seed``.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    n = shaping.dimension
    if generator is None:
        generator = random_generator(p, n, np.random.default_rng(rng_seed))
    g = np.mod(np.asarray(generator, dtype=np.int64).reshape(-1), p)
    if g.size != n:
        raise ValueError(f"generator needs {n} entries, got {g.size}")
    basis = construction_a_basis(g, p)
    fine = Lattice(shaping.generator @ basis / p)

    words = np.mod(np.outer(np.arange(p), g), p)
    coset_table = shaping.mod(shaping.point(words) / p)
    coset_table[0] = 0.0

    # nesting: every basis vector of the coarse lattice is a fine-lattice point
    if not np.all(fine.contains(shaping.generator.T, atol=1e-7)):
        raise AssertionError("shaping lattice is not contained in the fine lattice")
    if p <= 512:
        d = coset_table[:, None, :] - coset_table[None, :, :]
        d2 = np.einsum("ijn,ijn->ij", d, d) + np.eye(p)
        if np.min(d2) <= ATOL:
            raise AssertionError("coset representatives are not distinct")

    pivot = int(np.flatnonzero(g)[0])
    g.setflags(write=False)
    coset_table.setflags(write=False)
    basis.setflags(write=False)
    return NestedCode(p, shaping, g, fine, coset_table, basis, pivot, pow(int(g[pivot]), -1, p))


@dataclass(frozen=True)
class ReceiverConfig:
    num_devices: int
    noise_power: float
    power: float
    mmse: bool = True

    def __post_init__(self):
        if self.num_devices < 1:
            raise ValueError(f"num_devices must be >= 1, got {self.num_devices}")
        if self.noise_power < 0 or not self.power > 0:
            raise ValueError("need noise_power >= 0 and power > 0")

    @property
    def scale(self) -> float:
        """MMSE scale ``K P_X / (P_N + K P_X)``, or 1 when disabled."""
        if not self.mmse:
            return 1.0
        kp = self.num_devices * self.power
        return kp / (self.noise_power + kp)


def encode(code: NestedCode, w, dither) -> np.ndarray:
    """Transmit vector ``[c_w - dither] mod Lambda``."""
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0) or np.any(w >= code.prime):
        raise ValueError(f"message outside [0, {code.prime - 1}]")
    return code.shaping.mod(code.coset_table[w] - np.asarray(dither, dtype=float))


def _coarse_window(code: NestedCode) -> np.ndarray:
    """Coarse lattice points that can separate a codeword from its nearest fine point."""
    shaping = code.shaping
    reach = 2 * shaping.stats().covering_radius + code.fine.stats().covering_radius + ATOL
    w = int(math.ceil(np.linalg.norm(np.linalg.inv(shaping.generator), 2) * reach))
    grid = np.stack(np.meshgrid(*[np.arange(-w, w + 1)] * code.dimension, indexing="ij"), -1)
    pts = shaping.point(grid.reshape(-1, code.dimension))
    return pts[np.linalg.norm(pts, axis=1) <= reach]


def decode_fine(code: NestedCode, y_mod, method: str = "enumerate") -> np.ndarray:
    """Message index of the fine-lattice point nearest to each row of ``y_mod``.

    ``enumerate`` scans every coset representative shifted by the coarse
    points around the origin (the 3x3 block of coarse cells for well-shaped
    codes). ``reduced`` runs the generic nearest-point search on a reduced
    basis of the fine lattice. Both are exact; the second is much faster.
    """
    y_mod = np.asarray(y_mod, dtype=float)
    if method == "reduced":
        return code.message_of(code.fine.nearest_coordinates(y_mod))
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    cands = (code.coset_table[None, :, :] + _coarse_window(code)[:, None, :]).reshape(-1, code.dimension)
    labels = np.tile(np.arange(code.prime), len(cands) // code.prime)
    flat = y_mod.reshape(-1, code.dimension)
    out = np.empty(len(flat), dtype=np.int64)
    for start in range(0, len(flat), 256):
        chunk = flat[start:start + 256]
        d = chunk[:, None, :] - cands[None, :, :]
        out[start:start + 256] = labels[np.argmin(np.einsum("mcn,mcn->mc", d, d), axis=1)]
    return out.reshape(y_mod.shape[:-1])


def receive(code: NestedCode, rcfg: ReceiverConfig, y, dither_sum) -> np.ndarray:
    """Equivalent modulo-channel output ``[a y + sum(U_i)] mod Lambda``."""
    return code.shaping.mod(rcfg.scale * np.asarray(y, dtype=float) + dither_sum)


def decode_sum(code: NestedCode, rcfg: ReceiverConfig, y, dithers, method: str = "enumerate") -> np.ndarray:
    """Estimate ``sum(w_i) mod p`` from the superposition ``y``.

    ``dithers`` has shape ``(K, ..., n)``, one dither per device. The result
    equals the integer sum of messages when decoding succeeds and
    ``p > K (q - 1)``.
    """
    dithers = np.asarray(dithers, dtype=float)
    if dithers.shape[0] != rcfg.num_devices:
        raise ValueError(f"expected {rcfg.num_devices} dithers, got {dithers.shape[0]}")
    return decode_fine(code, receive(code, rcfg, y, dithers.sum(axis=0)), method)


def achievable_rate(power: float, noise_power: float, num_devices: int, scale: float | None = None) -> float:
    """Computation rate ``1/2 log2+(P_X / (a^2 P_N + K (1-a)^2 P_X))``.

    ``scale=None`` uses the MMSE value, for which the expression reduces to
    ``1/2 log2+(P_X/P_N + 1/K)``.
    """
    if scale is None:
        scale = num_devices * power / (noise_power + num_devices * power)
    eff = scale**2 * noise_power + num_devices * (1 - scale) ** 2 * power
    return max(0.5 * math.log2(power / eff), 0.0)
