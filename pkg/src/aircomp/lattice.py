"""Lattice geometry: nearest-point search, modulo reduction, dithers and stats.

Points are stored as row vectors, so a batch of ``m`` points in ``n``
dimensions is an array of shape ``(m, n)``. Generator matrices follow the
usual column convention: lattice points are ``B @ x`` for integer ``x``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

ATOL = 1e-9
MAX_DIMENSION = 8


@dataclass(frozen=True)
class LatticeStats:
    packing_radius: float
    covering_radius: float
    effective_radius: float
    cell_volume: float
    second_moment: float
    normalized_second_moment: float


def ball_volume(n: int, radius: float = 1.0) -> float:
    """Volume of the n-dimensional Euclidean ball."""
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1)) * radius**n


def ball_normalized_second_moment(n: int) -> float:
    """Normalized second moment of the n-ball, ``Gamma(n/2+1)^(2/n) / ((n+2) pi)``."""
    return math.exp(2.0 / n * gammaln(0.5 * n + 1)) / ((n + 2) * math.pi)


def gauss_reduce(basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-Gauss reduction of a 2-D basis.

    Returns ``(reduced, transform)`` with ``reduced = basis @ transform``,
    ``transform`` unimodular, ``|b1| <= |b2|`` and ``b1 . b2 <= 0``.
    """
    b = np.array(basis, dtype=float)
    u = np.eye(2, dtype=np.int64)
    while True:
        if b[:, 0] @ b[:, 0] > b[:, 1] @ b[:, 1]:
            b = b[:, ::-1].copy()
            u = u[:, ::-1].copy()
        mu = int(np.rint((b[:, 0] @ b[:, 1]) / (b[:, 0] @ b[:, 0])))
        if mu == 0:
            break
        b[:, 1] -= mu * b[:, 0]
        u[:, 1] -= mu * u[:, 0]
        if b[:, 0] @ b[:, 0] <= b[:, 1] @ b[:, 1]:
            break
    if b[:, 0] @ b[:, 1] > 0:
        b[:, 1] = -b[:, 1]
        u[:, 1] = -u[:, 1]
    return b, u


def voronoi_vertices_2d(reduced: np.ndarray) -> np.ndarray:
    """Vertices of the Voronoi cell of a Gauss-reduced 2-D basis, sorted by angle."""
    b1, b2 = reduced[:, 0], reduced[:, 1]
    relevant = np.array([b1, b1 + b2, b2, -b1, -b1 - b2, -b2])
    relevant = relevant[np.argsort(np.arctan2(relevant[:, 1], relevant[:, 0]))]
    verts = []
    for u, v in zip(relevant, np.roll(relevant, -1, axis=0)):
        a = np.array([u, v])
        rhs = 0.5 * np.array([u @ u, v @ v])
        verts.append(np.linalg.solve(a, rhs))
    verts = np.array(verts)
    return verts[np.argsort(np.arctan2(verts[:, 1], verts[:, 0]))]


def _covering_radius_bound(reduced: np.ndarray) -> float:
    if reduced.shape[0] == 2:
        return float(np.max(np.linalg.norm(voronoi_vertices_2d(reduced), axis=1)))
    # half the longest diagonal of the fundamental parallelotope
    return 0.5 * float(np.sum(np.linalg.norm(reduced, axis=0)))


def _lex_sorted(offsets: np.ndarray, transform: np.ndarray) -> np.ndarray:
    """Sort offsets by the lexicographic order of their original-basis coordinates."""
    orig = offsets @ transform.T
    return offsets[np.lexsort(orig.T[::-1])]


def polygon_second_moment(vertices: np.ndarray) -> tuple[float, float]:
    """Area and ``integral |x|^2 dx`` of a star-shaped polygon around the origin."""
    area = 0.0
    moment = 0.0
    for a, b in zip(vertices, np.roll(vertices, -1, axis=0)):
        tri = 0.5 * abs(a[0] * b[1] - a[1] * b[0])
        area += tri
        moment += tri * (a @ a + b @ b + a @ b) / 6.0
    return area, moment


@dataclass(frozen=True, eq=False)
class Lattice:
    """An n-dimensional lattice ``{B x : x in Z^n}``.

    ``cubic`` marks an axis-aligned scaled integer lattice, whose nearest-point
    map is per-coordinate rounding (half away from zero). Other lattices are
    searched over candidate integer coordinates of a reduced basis (see
    :meth:`nearest_coordinates`); among equidistant candidates the one with
    the lexicographically smallest integer coordinates wins.
    """

    generator: np.ndarray
    cubic: bool = False
    _inverse: np.ndarray = field(init=False, repr=False)
    _reduced: np.ndarray = field(init=False, repr=False)
    _reduced_inverse: np.ndarray = field(init=False, repr=False)
    _transform: np.ndarray = field(init=False, repr=False)
    _window: np.ndarray = field(init=False, repr=False)
    _corners: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = np.array(self.generator, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"generator must be square, got shape {b.shape}")
        n = b.shape[0]
        if n > MAX_DIMENSION:
            raise ValueError(f"dimension {n} exceeds supported maximum {MAX_DIMENSION}")
        det = abs(np.linalg.det(b))
        if not det > ATOL:
            raise ValueError("generator matrix is singular")
        b.setflags(write=False)
        object.__setattr__(self, "generator", b)
        object.__setattr__(self, "_inverse", np.linalg.inv(b))
        if self.cubic:
            if not np.allclose(b, np.diag(np.diag(b))):
                raise ValueError("cubic lattice needs a diagonal generator")
            return
        if n == 2:
            red, u = gauss_reduce(b)
        else:
            red, u = b.copy(), np.eye(n, dtype=np.int64)
        red_inv = np.linalg.inv(red)
        # exhaustive window: any point within r_cov of v differs from the
        # rounded coordinates by at most |row_i(R^-1)| r_cov + 1/2 in coordinate i
        r_cov = _covering_radius_bound(red)
        widths = np.floor(np.linalg.norm(red_inv, axis=1) * r_cov + 0.5 + ATOL).astype(int)
        window = np.array(list(itertools.product(*[range(-w, w + 1) for w in widths])),
                          dtype=np.int64)
        corners = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
        object.__setattr__(self, "_reduced", red)
        object.__setattr__(self, "_reduced_inverse", red_inv)
        object.__setattr__(self, "_transform", u)
        object.__setattr__(self, "_window", _lex_sorted(window, u))
        object.__setattr__(self, "_corners", _lex_sorted(corners, u))

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def cell_volume(self) -> float:
        return float(abs(np.linalg.det(self.generator)))

    def point(self, coords) -> np.ndarray:
        """Lattice point(s) ``B x`` for integer coordinate rows ``x``."""
        return np.asarray(coords, dtype=float) @ self.generator.T

    def coordinates(self, v) -> np.ndarray:
        """Real coordinates ``B^-1 v`` of row vectors ``v``."""
        return np.asarray(v, dtype=float) @ self._inverse.T

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[-1:] != (self.dimension,):
            raise ValueError(f"expected trailing dimension {self.dimension}, got shape {v.shape}")
        return v

    def nearest_coordinates(self, v, exhaustive: bool = False) -> np.ndarray:
        """Integer coordinates of the nearest lattice point to each row of ``v``.

        In 2-D the reduced basis tiles the plane with parallelograms split
        into two non-obtuse Delaunay triangles, so the nearest point is one
        of the four corners of the cell holding ``v``. ``exhaustive=True``
        (and every dimension above two) scans all coordinates that can lie
        within the covering radius instead.
        """
        v = self._check(v)
        if self.cubic:
            x = v / np.diag(self.generator)
            return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)
        flat = v.reshape(-1, self.dimension)
        x = flat @ self._reduced_inverse.T
        if self.dimension == 2 and not exhaustive:
            base = np.floor(x).astype(np.int64)
            offsets = self._corners
        else:
            base = np.rint(x).astype(np.int64)
            offsets = self._window
        diff = flat - base @ self._reduced.T
        shifts = offsets @ self._reduced.T
        best = np.full(len(flat), np.inf)
        pick = np.zeros(len(flat), dtype=np.int64)
        for j, s in enumerate(shifts):
            d = np.zeros(len(flat))
            for axis in range(self.dimension):
                d += (diff[:, axis] - s[axis]) ** 2
            better = d < best - ATOL
            best = np.where(better, d, best)
            pick[better] = j
        red_coords = base + offsets[pick]
        return (red_coords @ self._transform.T).reshape(v.shape).astype(np.int64)

    def nearest_point(self, v) -> np.ndarray:
        return self.point(self.nearest_coordinates(v))

    def mod(self, v) -> np.ndarray:
        v = self._check(v)
        return v - self.nearest_point(v)

    def contains(self, v, atol: float = ATOL) -> np.ndarray:
        x = self.coordinates(self._check(v))
        return np.all(np.abs(x - np.rint(x)) <= atol, axis=-1)

    def sample_dither(self, rng: np.random.Generator, size=None) -> np.ndarray:
        """Uniform samples over the fundamental Voronoi region.

        Uniform draws over the parallelotope ``B [0,1)^n`` are folded into
        the Voronoi cell with :meth:`mod`, which preserves the measure.
        """
        shape = (self.dimension,) if size is None else (*np.atleast_1d(size), self.dimension)
        return self.mod(rng.random(shape) @ self.generator.T)

    def stats(self) -> LatticeStats:
        """Geometric statistics computed from the generator.

        Exact for cubic lattices of any dimension and for every 2-D lattice
        (via the Voronoi polygon).
        """
        n = self.dimension
        vol = self.cell_volume
        r_eff = (vol / ball_volume(n)) ** (1.0 / n)
        if self.cubic:
            edges = np.abs(np.diag(self.generator))
            if not np.allclose(edges, edges[0]):
                raise NotImplementedError("stats need equal edges for cubic lattices")
            e = float(edges[0])
            sm = e**2 / 12.0
            return LatticeStats(e / 2, e * math.sqrt(n) / 2, r_eff, vol, sm, sm / vol ** (2 / n))
        if n != 2:
            raise NotImplementedError("stats for non-cubic lattices are available in 2-D only")
        verts = voronoi_vertices_2d(self._reduced)
        area, moment = polygon_second_moment(verts)
        sm = moment / (area * n)
        return LatticeStats(
            packing_radius=0.5 * float(np.linalg.norm(self._reduced[:, 0])),
            covering_radius=float(np.max(np.linalg.norm(verts, axis=1))),
            effective_radius=r_eff,
            cell_volume=vol,
            second_moment=sm,
            normalized_second_moment=sm / vol,
        )


def nearest_point(lat: Lattice, v) -> np.ndarray:
    return lat.nearest_point(v)


def mod_lattice(lat: Lattice, v) -> np.ndarray:
    return lat.mod(v)


def sample_dither(lat: Lattice, rng: np.random.Generator, size=None) -> np.ndarray:
    return lat.sample_dither(rng, size)


HEX_NSM = 5.0 / (36.0 * math.sqrt(3.0))


def hexagonal_lattice(power: float) -> tuple[Lattice, LatticeStats]:
    """Hexagonal lattice scaled so that its second moment equals ``power``.

    Basis vectors are ``s (1, 0)`` and ``s (1/2, sqrt(3)/2)``. The stats are
    closed forms: ``r_pack = s/2``, ``r_cov = s/sqrt(3)``,
    ``Vol = s^2 sqrt(3)/2`` and ``G = 5 / (36 sqrt(3))``.
    """
    if not power > 0:
        raise ValueError(f"power must be positive, got {power}")
    vol = power / HEX_NSM
    s = math.sqrt(2.0 * vol / math.sqrt(3.0))
    gen = s * np.array([[1.0, 0.5], [0.0, math.sqrt(3.0) / 2.0]])
    stats = LatticeStats(
        packing_radius=s / 2.0,
        covering_radius=s / math.sqrt(3.0),
        effective_radius=math.sqrt(vol / math.pi),
        cell_volume=vol,
        second_moment=power,
        normalized_second_moment=HEX_NSM,
    )
    return Lattice(gen), stats


def cubic_lattice(edge: float, n: int) -> tuple[Lattice, LatticeStats]:
    """Scaled integer lattice ``edge * Z^n``."""
    if not edge > 0:
        raise ValueError(f"edge must be positive, got {edge}")
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    lat = Lattice(edge * np.eye(n), cubic=True)
    return lat, lat.stats()
