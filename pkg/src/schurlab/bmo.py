"""Matrix BMO at desk scale.

A matrix A is conjugated into the phase field pi(A)(z) =
(exp(2 pi i <z, x-y>) A_xy); the column BMO seminorm is the largest
operator norm, over a finite family of balls, of the root mean square
oscillation of that field.  The row seminorm is the column seminorm of A*,
and the BMO seminorm is the max of the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .lattice import Lattice
from .schatten import MatrixOperator

PI_POINT_CAP = 64


@dataclass(frozen=True)
class MatrixField:
    """Function z -> matrix: values[k] is the matrix at the k-th z point."""

    z_lattice: Lattice
    op_lattice: Lattice
    values: np.ndarray  # shape (Z, K, K)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        z, k = self.z_lattice.point_count, self.op_lattice.point_count
        if vals.shape != (z, k, k):
            raise ValidationError(f"field values must have shape ({z}, {k}, {k}), got {vals.shape}")
        if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
            raise ValidationError("field contains non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class BallFamily:
    """Finite list of (center point index, radius) metric balls on a lattice."""

    lattice: Lattice
    balls: tuple

    def __post_init__(self):
        if not self.balls:
            raise ValidationError("ball family is empty")
        dist = _center_distances(self.lattice)
        covered = np.zeros(self.lattice.point_count, dtype=bool)
        for center, radius in self.balls:
            if radius <= 0:
                raise ValidationError("ball radii must be positive")
            members = dist[int(center)] <= radius + 1e-12
            if not members.any():
                raise ValidationError("every ball must contain at least one grid point")
            covered |= members
        if not covered.all():
            raise ValidationError("ball family does not cover the lattice")
        object.__setattr__(self, "balls", tuple((int(c), float(r)) for c, r in self.balls))

    def members(self, ball_index: int) -> np.ndarray:
        center, radius = self.balls[ball_index]
        dist = _center_distances(self.lattice)
        return np.nonzero(dist[center] <= radius + 1e-12)[0]


def _center_distances(lattice: Lattice) -> np.ndarray:
    return lattice.pair_distances()


def default_ball_family(lattice: Lattice) -> BallFamily:
    """All metric balls with grid centers and dyadic radii 1, 2, 4, ..., N."""
    radii = []
    r = 1
    while r < lattice.half_width:
        radii.append(float(r))
        r *= 2
    radii.append(float(lattice.half_width))
    balls = [(c, r) for c in range(lattice.point_count) for r in radii]
    return BallFamily(lattice, tuple(balls))


def _phase_grid(A: MatrixOperator, z_lattice: Lattice, sign: float) -> np.ndarray:
    """Phases exp(sign * 2 pi i <z, x - y>) for all (z, x, y)."""
    op = A.lattice
    if op.topology == "cyclic":
        if z_lattice.topology != "cyclic" or z_lattice.half_width != op.half_width:
            raise ValidationError("cyclic operator lattices need the matching cyclic z-lattice")
        diff = op.points[:, None, :] - op.points[None, :, :]
        dots = np.tensordot(z_lattice.points, diff, axes=([1], [2])) / op.half_width
    else:
        diff = A.lattice.coordinates[:, None, :] - A.lattice.coordinates[None, :, :]
        dots = np.tensordot(z_lattice.coordinates, diff, axes=([1], [2]))
    return np.exp(sign * 2.0j * math.pi * dots)


def pi_embed(A: MatrixOperator, z_lattice: Lattice) -> MatrixField:
    """Phase conjugation field z -> (exp(2 pi i <z, x-y>) A_xy).

    On cyclic Z_N the phase is exp(2 pi i z (x - y) / N), so each value is a
    unitary conjugate of A and the embedding is exact.
    """
    phases = _phase_grid(A, z_lattice, +1.0)
    return MatrixField(z_lattice, A.lattice, phases * A.entries[None, :, :])


def sigma_embed(A: MatrixOperator, xi_lattice: Lattice) -> MatrixField:
    """Adjoint-side embedding xi -> (exp(2 pi i <xi, y-x>) A_xy)."""
    phases = _phase_grid(A, xi_lattice, -1.0)
    return MatrixField(xi_lattice, A.lattice, phases * A.entries[None, :, :])


def _bmo_col(A: MatrixOperator, balls: BallFamily, z_lattice: Lattice) -> float:
    field = pi_embed(A, z_lattice).values
    worst = 0.0
    for idx in range(len(balls.balls)):
        members = balls.members(idx)
        # pivot-centered mean: constant fields oscillate exactly zero
        rel = field[members] - field[members[0]][None, :, :]
        osc = rel - np.mean(rel, axis=0)[None, :, :]
        avg = np.einsum("zab,zac->bc", np.conj(osc), osc) / len(members)
        lam = np.linalg.eigvalsh(0.5 * (avg + avg.conj().T))
        worst = max(worst, math.sqrt(max(float(lam[-1]), 0.0)))
    return worst


def bmo_norm(
    A: MatrixOperator,
    balls: BallFamily | None = None,
    z_lattice: Lattice | None = None,
) -> tuple[float, float, float]:
    """(bmo, bmo_r, bmo_c) over a finite ball family.

    bmo_c is the max over balls Q of || (avg_{z in Q} |pi(A)(z) -
    mean_Q|^2)^(1/2) ||_inf with |g|^2 = g* g; bmo_r is bmo_c of A*; bmo is
    the max of the two.  The default ball family is dyadic-radius balls
    around every grid center, and the default z-grid is the operator grid.
    """
    if z_lattice is None:
        z_lattice = A.lattice
    if A.lattice.point_count > PI_POINT_CAP or z_lattice.point_count > PI_POINT_CAP:
        raise ValidationError(f"phase field too large to materialize (cap {PI_POINT_CAP} points)")
    if balls is None:
        balls = default_ball_family(z_lattice)
    if balls.lattice != z_lattice:
        raise ValidationError("ball family lives on a different lattice than the z-grid")
    col = _bmo_col(A, balls, z_lattice)
    Astar = MatrixOperator(A.lattice, A.entries.conj().T, label=A.label + "*")
    row = _bmo_col(Astar, balls, z_lattice)
    return max(row, col), row, col
