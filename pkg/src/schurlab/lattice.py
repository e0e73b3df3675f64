"""Index geometry: finite lattices and multi-indices.

Every grid object in the package is indexed by the points of a `Lattice`.
Point ordering is lexicographic on integer coordinates and fixed once, so
matrices and reports are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import ValidationError

TOPOLOGIES = ("integer", "sampled_box", "cyclic")


@dataclass(frozen=True)
class Lattice:
    """A finite index set: Z^n box, h-scaled box, or cyclic group Z_N^n.

    integer / sampled_box carry the (2N+1)^n points of {-N..N}^n (scaled by
    the spacing h for sampled_box); cyclic carries the N^n points of
    {0..N-1}^n with wraparound arithmetic.
    """

    dimension: int
    half_width: int
    spacing: float
    topology: str

    @property
    def point_count(self) -> int:
        if self.topology == "cyclic":
            return self.half_width**self.dimension
        return (2 * self.half_width + 1) ** self.dimension

    @property
    def axis_size(self) -> int:
        """Number of distinct coordinates per axis."""
        if self.topology == "cyclic":
            return self.half_width
        return 2 * self.half_width + 1

    @cached_property
    def points(self) -> np.ndarray:
        """Integer coordinates, shape (point_count, dimension), lex order."""
        if self.topology == "cyclic":
            axis = range(self.half_width)
        else:
            axis = range(-self.half_width, self.half_width + 1)
        pts = np.array(list(product(axis, repeat=self.dimension)), dtype=np.int64)
        pts.setflags(write=False)
        return pts

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Physical coordinates h * points, shape (point_count, dimension)."""
        coords = self.points * self.spacing
        coords.setflags(write=False)
        return coords

    def index_of(self, point) -> int:
        """Lexicographic index of an integer coordinate tuple."""
        idx = 0
        for s, c in enumerate(np.atleast_1d(point)):
            if self.topology == "cyclic":
                c = int(c) % self.half_width
                idx = idx * self.half_width + c
            else:
                c = int(c)
                if abs(c) > self.half_width:
                    raise ValidationError(f"coordinate {c} outside box of half-width {self.half_width}")
                idx = idx * self.axis_size + (c + self.half_width)
        return idx

    def index_lookup(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized coordinate -> index map.

        coords has shape (..., dimension) in integer units.  Returns
        (indices, valid) where invalid entries (off the box on non-cyclic
        lattices) get index 0 and valid=False.  Cyclic lattices wrap, so
        everything is valid there.
        """
        coords = np.asarray(coords, dtype=np.int64)
        if self.topology == "cyclic":
            wrapped = np.mod(coords, self.half_width)
            idx = np.zeros(coords.shape[:-1], dtype=np.int64)
            for s in range(self.dimension):
                idx = idx * self.half_width + wrapped[..., s]
            return idx, np.ones(coords.shape[:-1], dtype=bool)
        valid = np.all(np.abs(coords) <= self.half_width, axis=-1)
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for s in range(self.dimension):
            idx = idx * self.axis_size + (coords[..., s] + self.half_width)
        idx = np.where(valid, idx, 0)
        return idx, valid

    def pair_differences(self) -> np.ndarray:
        """Integer differences x - y for every point pair, shape (P, P, n).

        On cyclic lattices the difference is the centered representative in
        [-N//2, N - N//2), so signed quantities like sign(x - y) make sense.
        """
        pts = self.points
        diff = pts[:, None, :] - pts[None, :, :]
        if self.topology == "cyclic":
            n = self.half_width
            diff = np.mod(diff + n // 2, n) - n // 2
        return diff

    def pair_distances(self) -> np.ndarray:
        """Physical |x - y| per pair (wraparound metric on cyclic lattices)."""
        diff = self.pair_differences()
        if self.topology == "cyclic":
            n = self.half_width
            diff = np.minimum(np.mod(diff, n), np.mod(-diff, n))
        if self.dimension == 1:
            return np.abs(diff[..., 0] * self.spacing)
        return np.sqrt(np.sum((diff * self.spacing) ** 2.0, axis=-1))


def make_lattice(n: int, N: int, h: float = 1.0, topology: str = "integer") -> Lattice:
    """Build a lattice with deterministic lexicographic point ordering.

    n must be 1 or 2 (desk-scale memory guard), N at least 2, and the
    spacing must be exactly 1 unless the topology is sampled_box.
    """
    if topology not in TOPOLOGIES:
        raise ValidationError(f"unknown topology {topology!r}, expected one of {TOPOLOGIES}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"dimension must be a positive integer, got {n!r}")
    if n > 2:
        raise ValidationError(f"dimension {n} rejected: only n in {{1, 2}} is supported at desk scale")
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise ValidationError(f"half-width must be an integer >= 2, got {N!r}")
    h = float(h)
    if h <= 0:
        raise ValidationError(f"spacing must be positive, got {h}")
    if topology != "sampled_box" and h != 1.0:
        raise ValidationError(f"spacing must be exactly 1 for topology {topology!r}, got {h}")
    return Lattice(dimension=int(n), half_width=int(N), spacing=h, topology=topology)


@dataclass(frozen=True)
class MultiIndex:
    """Derivative multi-index gamma with nonnegative integer entries."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) == 0:
            raise ValidationError("multi-index needs at least one exponent")
        if any((not isinstance(g, (int, np.integer))) or g < 0 for g in self.exponents):
            raise ValidationError(f"multi-index exponents must be nonnegative integers: {self.exponents}")
        object.__setattr__(self, "exponents", tuple(int(g) for g in self.exponents))

    @property
    def order(self) -> int:
        return sum(self.exponents)

    def __str__(self) -> str:
        return "(" + ",".join(str(g) for g in self.exponents) + ")"


def multi_indices(n: int, max_order: int) -> list[MultiIndex]:
    """All multi-indices of dimension n with 0 <= |gamma| <= max_order, lex order."""
    out = []
    for exps in product(range(max_order + 1), repeat=n):
        if sum(exps) <= max_order:
            out.append(MultiIndex(exps))
    out.sort(key=lambda g: (g.order, g.exponents))
    return out


def derivative_order_cap(n: int) -> int:
    """Highest derivative order entering the regularity functionals: [n/2] + 1."""
    return n // 2 + 1
