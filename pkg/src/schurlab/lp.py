"""Dyadic partitions of unity and matrix Littlewood-Paley machinery.

The profile phi is a smooth radial cutoff: 1 on the unit ball, a bump taper
on 1 < t < 2, 0 beyond.  psi_j(xi) = phi(2^-j xi) - phi(2^(1-j) xi) gives a
partition of unity over dyadic annuli; the two-variable partitions reuse
the radial generator psi0(t) = phi(t) - phi(2t) either on |x - y| (annuli)
or on sqrt(|x|^2 + |y|^2) (coronas), dilated as Psi_j(x,y) = Psi(2^j x, 2^j y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .lattice import Lattice
from .schatten import MatrixOperator, schatten_norm_array, schur_apply, validate_exponent
from .symbols import SymbolGrid

PARTITION_KINDS = ("toeplitz_annuli", "corona", "custom")


def make_profile() -> Callable:
    """Smooth radial cutoff: 1 for t <= 1, exp(1 - 1/(1 - (t-1)^2)) for
    1 < t < 2, 0 for t >= 2.  Vectorized over numpy arrays."""

    def phi(t):
        t = np.abs(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        out[t <= 1.0] = 1.0
        mid = (t > 1.0) & (t < 2.0)
        u = t[mid] - 1.0
        out[mid] = np.exp(1.0 - 1.0 / (1.0 - u * u))
        return out if out.ndim else float(out)

    return phi


def radial_generator(phi: Callable) -> Callable:
    """psi0(t) = phi(t) - phi(2t): the radial generator of the dyadic band."""

    def psi0(t):
        t = np.asarray(t, dtype=float)
        return phi(t) - phi(2.0 * t)

    return psi0


@dataclass(frozen=True)
class PartitionFamily:
    """Dyadic family over j_range with a given profile and partition kind."""

    profile: Callable
    j_range: tuple[int, int]  # inclusive (j_min, j_max)
    kind: str = "toeplitz_annuli"

    def __post_init__(self):
        if self.kind not in PARTITION_KINDS:
            raise ValidationError(f"unknown partition kind {self.kind!r}")
        jmin, jmax = self.j_range
        if jmin > jmax:
            raise ValidationError(f"empty j_range {self.j_range}")

    @property
    def js(self) -> range:
        return range(self.j_range[0], self.j_range[1] + 1)

    def psi_j(self, j: int, xi: np.ndarray) -> np.ndarray:
        """Frequency band psi_j(xi) = phi(2^-j |xi|) - phi(2^(1-j) |xi|)."""
        r = np.linalg.norm(np.atleast_2d(xi), axis=-1) if np.ndim(xi) > 1 else np.abs(np.asarray(xi, dtype=float))
        return self.profile(r * 2.0**-j) - self.profile(r * 2.0 ** (1 - j))


def partition_sum_check(P: PartitionFamily, sample_points: Sequence) -> float:
    """Max deviation |sum_j psi_j(xi) - 1| over samples in the covered annulus.

    Samples must satisfy 2^j_min <= |xi| <= 2^(j_max - 1); anything outside
    is flagged by a ValidationError rather than silently included.
    """
    jmin, jmax = P.j_range
    pts = np.atleast_1d(np.asarray(sample_points, dtype=float))
    radii = np.linalg.norm(pts, axis=-1) if pts.ndim > 1 else np.abs(pts)
    low, high = 2.0**jmin, 2.0 ** (jmax - 1)
    outside = (radii < low) | (radii > high)
    if np.any(outside):
        bad = radii[outside][0]
        raise ValidationError(
            f"sample with |xi| = {bad} lies outside the covered annulus [{low}, {high}]"
        )
    total = np.zeros_like(radii)
    for j in P.js:
        total += P.profile(radii * 2.0**-j) - P.profile(radii * 2.0 ** (1 - j))
    return float(np.max(np.abs(total - 1.0)))


def symbol_partition(P: PartitionFamily, lattice: Lattice) -> list[SymbolGrid]:
    """Sampled two-variable partition pieces Psi_j for j in j_range.

    toeplitz_annuli: Psi(x,y) = psi0(|x-y|); corona: Psi(x,y) =
    psi0(sqrt(|x|^2 + |y|^2)).  Dilation puts Psi_j at radius ~ 2^-j.
    """
    psi0 = radial_generator(P.profile)
    if P.kind == "toeplitz_annuli":
        radius = lattice.pair_distances()
    elif P.kind == "corona":
        coords = lattice.coordinates
        if lattice.topology == "cyclic":
            n = lattice.half_width
            coords = (np.mod(lattice.points + n // 2, n) - n // 2) * lattice.spacing
        r2 = np.sum(coords**2, axis=-1)
        radius = np.sqrt(r2[:, None] + r2[None, :])
    else:
        raise ValidationError("custom partitions must be sampled by the caller")
    return [
        SymbolGrid(lattice, psi0(radius * 2.0**j), label=f"{P.kind}[j={j}]")
        for j in P.js
    ]


def covered_pair_mask(parts: Sequence[SymbolGrid]) -> np.ndarray:
    """Pairs where the sampled pieces sum to 1 (within 1e-9)."""
    total = np.zeros(parts[0].values.shape, dtype=float)
    for part in parts:
        total += part.values.real
    return np.abs(total - 1.0) <= 1e-9


def lp_decompose(A: MatrixOperator, parts: Sequence[SymbolGrid]) -> list[MatrixOperator]:
    """Schur pieces S_{Psi_j}(A) for every sampled partition piece."""
    return [schur_apply(part, A) for part in parts]


def square_function_norm(parts: Sequence[MatrixOperator], p) -> float:
    """|| (sum_j A_j A_j* + A_j* A_j)^(1/2) ||_{S_p} for p >= 2.

    The positive sum is rooted through a Hermitian eigendecomposition with
    eigenvalues clipped at 0 to guard tiny negatives from rounding.
    """
    p = validate_exponent(p)
    if p < 2.0:
        raise ValidationError("square functions are for p >= 2; use rc_split_upper below 2")
    if not parts:
        raise ValidationError("need at least one piece")
    acc = np.zeros_like(parts[0].entries)
    for part in parts:
        a = part.entries
        acc = acc + a @ a.conj().T + a.conj().T @ a
    lam, V = np.linalg.eigh(0.5 * (acc + acc.conj().T))
    lam = np.clip(lam, 0.0, None)
    root = (V * np.sqrt(lam)) @ V.conj().T
    return schatten_norm_array(root, p, "square_function")


def _split_objective(As: list[np.ndarray], Bs: list[np.ndarray], p: float) -> float:
    acc = np.zeros_like(As[0])
    for a, b in zip(As, Bs):
        acc = acc + a @ a.conj().T + b.conj().T @ b
    lam, V = np.linalg.eigh(0.5 * (acc + acc.conj().T))
    lam = np.clip(lam, 0.0, None)
    root = (V * np.sqrt(lam)) @ V.conj().T
    return schatten_norm_array(root, p, "rc_split")


def rc_split_upper(parts: Sequence[MatrixOperator], p, sweeps: int = 2) -> float:
    """Upper bound on the row/column split norm for 1 < p <= 2.

    Approximates inf over splittings S_{Psi_j}(A) = A_j + B_j of
    || (sum A_j A_j* + B_j* B_j)^(1/2) ||_{S_p} by alternating minimization
    over entrywise splitting masks, starting from the trivial splits
    (piece, 0) and (0, piece).  Only ever reports the best value found,
    so it is an upper bound on the infimum; non-improvement is normal.
    """
    p = validate_exponent(p)
    if not 1.0 < p <= 2.0:
        raise ValidationError("rc_split_upper is for 1 < p <= 2")
    if not parts:
        raise ValidationError("need at least one piece")
    pieces = [part.entries for part in parts]
    levels = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    # trivial splits (piece, 0) and (0, piece), plus uniform convex mixes
    best = math.inf
    masks = None
    for lv in levels:
        uniform = [np.full(pc.shape, lv) for pc in pieces]
        As = [m * q for m, q in zip(uniform, pieces)]
        Bs = [(1.0 - m) * q for m, q in zip(uniform, pieces)]
        val = _split_objective(As, Bs, p)
        if val < best:
            best = val
            masks = uniform
    n = pieces[0].shape[0]
    for _ in range(max(0, sweeps)):
        improved = False
        for jdx, pc in enumerate(pieces):
            for a in range(n):
                for b in range(n):
                    if pc[a, b] == 0:
                        continue
                    current = masks[jdx][a, b]
                    for lv in levels:
                        if lv == current:
                            continue
                        masks[jdx][a, b] = lv
                        As = [m * q for m, q in zip(masks, pieces)]
                        Bs = [(1.0 - m) * q for m, q in zip(masks, pieces)]
                        val = _split_objective(As, Bs, p)
                        if val < best - 1e-12:
                            best = val
                            current = lv
                            improved = True
                        else:
                            masks[jdx][a, b] = current
        if not improved:
            break
    return best
