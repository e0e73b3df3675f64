"""Symbol grids and the named symbol constructors.

A SymbolGrid holds a complex symbol M(x, y) sampled on all point pairs of a
lattice.  Constructors cover Toeplitz (Herz-Schur) symbols, divided
differences, alpha-divided differences, corona cutoffs, and the row/column
reparameterizations M_r(x,y) = M(y-x, y), M_c(x,y) = M(x, x-y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .errors import ValidationError
from .lattice import Lattice

_EMPTY_META: Mapping = MappingProxyType({})


@dataclass(frozen=True)
class SymbolGrid:
    """Complex symbol sampled on (x, y) point pairs of one lattice.

    Immutable after construction; the values array is write-protected so
    grids can be shared across threads.
    """

    lattice: Lattice
    values: np.ndarray
    label: str = ""
    meta: Mapping = field(default=_EMPTY_META, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        p = self.lattice.point_count
        if vals.shape != (p, p):
            raise ValidationError(f"symbol values must have shape ({p}, {p}), got {vals.shape}")
        if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
            raise ValidationError(f"symbol {self.label!r} contains non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    @property
    def sup_abs(self) -> float:
        """Largest entry modulus sup |M|."""
        return float(np.max(np.abs(self.values)))

    def argmax_abs(self) -> tuple[int, int]:
        """Lexicographically first pair attaining sup |M|."""
        flat = int(np.argmax(np.abs(self.values)))
        p = self.lattice.point_count
        return flat // p, flat % p


def _squeeze_diff(diff: np.ndarray, n: int) -> np.ndarray:
    """Present differences as scalars for n=1 and as (..., n) arrays otherwise."""
    return diff[..., 0] if n == 1 else diff


def toeplitz_symbol(lattice: Lattice, m: Callable, label: str = "toeplitz") -> SymbolGrid:
    """Sample M(x, y) = m(x - y) on every pair.

    m must be vectorized (numpy-style) over difference arrays: scalars for
    one-dimensional lattices, shape (..., n) for higher dimension.  Cyclic
    lattices feed m the centered wraparound difference.  Non-finite values
    of m are rejected with the offending difference named.
    """
    diff = lattice.pair_differences() * lattice.spacing
    vals = np.asarray(m(_squeeze_diff(diff, lattice.dimension)), dtype=np.complex128)
    vals = np.broadcast_to(vals, (lattice.point_count, lattice.point_count))
    bad = ~(np.isfinite(vals.real) & np.isfinite(vals.imag))
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise ValidationError(f"m returned a non-finite value at difference {diff[i, j]}")
    return SymbolGrid(lattice, vals, label=label)


def divided_difference(
    lattice: Lattice,
    f: Callable,
    f_prime_on_diagonal: Callable | None = None,
    label: str = "divided_difference",
) -> SymbolGrid:
    """Arazy symbol M(x, y) = (f(x) - f(y)) / (x - y) on a one-dimensional lattice.

    The diagonal is not defined by the quotient, so it is supplied explicitly;
    the default is the symmetric difference quotient of f at the lattice
    spacing, (f(x + h) - f(x - h)) / (2h).
    """
    if lattice.dimension != 1:
        raise ValidationError("divided differences require a one-dimensional lattice")
    x = lattice.coordinates[:, 0]
    fx = np.asarray(f(x), dtype=np.complex128)
    if not np.all(np.isfinite(fx.real) & np.isfinite(fx.imag)):
        raise ValidationError("f is non-finite on a lattice point")
    denom = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (fx[:, None] - fx[None, :]) / denom
    if f_prime_on_diagonal is None:
        h = lattice.spacing
        diag = (np.asarray(f(x + h), dtype=np.complex128) - np.asarray(f(x - h), dtype=np.complex128)) / (2.0 * h)
    else:
        diag = np.asarray(f_prime_on_diagonal(x), dtype=np.complex128)
    diag = np.broadcast_to(diag, x.shape)
    np.fill_diagonal(vals, diag)
    return SymbolGrid(lattice, vals, label=label)


def alpha_divided_difference(
    lattice: Lattice, f: Callable, alpha: float, label: str = "alpha_divided"
) -> SymbolGrid:
    """Hölder symbol M(x, y) = (f(x) - f(y)) / |x - y|^alpha, zero on the diagonal.

    The symbol is genuinely singular at x = y; fixing the diagonal to 0
    changes any multiplier norm by at most the sup of the chosen diagonal.
    """
    if lattice.dimension != 1:
        raise ValidationError("alpha-divided differences require a one-dimensional lattice")
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    x = lattice.coordinates[:, 0]
    fx = np.asarray(f(x), dtype=np.complex128)
    if not np.all(np.isfinite(fx.real) & np.isfinite(fx.imag)):
        raise ValidationError("f is non-finite on a lattice point")
    dist = np.abs(x[:, None] - x[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (fx[:, None] - fx[None, :]) / dist**alpha
    np.fill_diagonal(vals, 0.0)
    return SymbolGrid(lattice, vals, label=label)


def corona_symbol(lattice: Lattice, psi0: Callable, j: int, label: str = "corona") -> SymbolGrid:
    """Corona cutoff Psi_j(x, y) = psi0(2^j sqrt(|x|^2 + |y|^2)).

    psi0 is the radial generator of the dyadic partition profile (see
    littlewood_paley.radial_generator); scaling by 2^j places the corona at
    radius about 2^-j.
    """
    coords = lattice.coordinates
    if lattice.topology == "cyclic":
        n = lattice.half_width
        coords = (np.mod(lattice.points + n // 2, n) - n // 2) * lattice.spacing
    r2 = np.sum(coords**2, axis=-1)
    radius = np.sqrt(r2[:, None] + r2[None, :])
    vals = np.asarray(psi0((2.0**j) * radius), dtype=np.complex128)
    return SymbolGrid(lattice, vals, label=f"{label}[j={j}]")


def row_col_symbols(M: SymbolGrid) -> tuple[SymbolGrid, SymbolGrid]:
    """Row/column views M_r(x,y) = M(y-x, y) and M_c(x,y) = M(x, x-y).

    Cyclic lattices wrap, making the reindexing a bijection; integer
    lattices fill reindexed points that fall off the box with 0 and flag
    the fill count in the output metadata.
    """
    lat = M.lattice
    if lat.topology not in ("integer", "cyclic"):
        raise ValidationError("row/column views need integer or cyclic topology")
    pts = lat.points
    target_r = pts[None, :, :] - pts[:, None, :]  # (y - x) per (x, y) pair
    idx_r, ok_r = lat.index_lookup(target_r)
    target_c = pts[:, None, :] - pts[None, :, :]  # (x - y) per (x, y) pair
    idx_c, ok_c = lat.index_lookup(target_c)

    y_idx = np.arange(lat.point_count)
    vals_r = M.values[idx_r, y_idx[None, :]]
    vals_r = np.where(ok_r, vals_r, 0.0)
    x_idx = np.arange(lat.point_count)
    vals_c = M.values[x_idx[:, None], idx_c]
    vals_c = np.where(ok_c, vals_c, 0.0)

    meta_r = {"out_of_range_fill": int(np.sum(~ok_r))} if not ok_r.all() else {}
    meta_c = {"out_of_range_fill": int(np.sum(~ok_c))} if not ok_c.all() else {}
    Mr = SymbolGrid(lat, vals_r, label=f"{M.label}::row", meta=meta_r)
    Mc = SymbolGrid(lat, vals_c, label=f"{M.label}::col", meta=meta_c)
    return Mr, Mc


def sign_scalar(t):
    """Sign with the sign(0) = 0 convention used by the sign Toeplitz family."""
    return np.sign(t)
