"""Symbol regularity functionals.

Four related quantities over a sampled symbol M(x, y):

* the mixed-derivative sum with weights |x - y|^|gamma| over all derivative
  multi-indices up to order [n/2] + 1 (hms_norm),
* its discrete analogue built from exact forward differences (hms_delta_norm),
* the windowed fractional Sobolev form: sup over dyadic rescalings of
  psi-windowed one-variable slices measured in an order-sigma, exponent-q
  Sobolev norm realized by a Bessel multiplier on a padded torus
  (hms_sobolev_norm / sobolev_window_norm),
* Hölder moduli of the same windowed slices under grid shifts
  (holder_modulus).

Conventions: the order-zero term contributes sup |M| once (stored as the
x-part of gamma = 0); every other multi-index contributes a separate x-part
and y-part supremum.  Suprema run over grid points whose stencil stays on
the grid; one-sided stencils are never used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import ValidationError
from .lattice import Lattice, MultiIndex, derivative_order_cap, multi_indices
from .lp import make_profile, radial_generator
from .symbols import SymbolGrid

WINDOW_PERIOD = 8.0
SUPPORT_BOX = 2.5
SUPPORT_LEAK_TOL = 1e-8


@dataclass(frozen=True)
class SobolevParams:
    """Exponent q >= 2 and fractional order sigma > 0 of the window norm."""

    q: float
    sigma: float

    def __post_init__(self):
        if self.q < 2.0:
            raise ValidationError(f"Sobolev exponent must satisfy q >= 2, got {self.q}")
        if self.sigma <= 0.0:
            raise ValidationError(f"Sobolev order must be positive, got {self.sigma}")


def default_sobolev_order(n: int) -> float:
    """Concrete fractional order n/2 + 1/2 used by the sweep defaults."""
    return n / 2.0 + 0.5


@dataclass(frozen=True)
class HmsBreakdown:
    """Total plus the per-multi-index (x_part, y_part) supremum terms."""

    total: float
    per_multiindex: dict

    def recompute_total(self) -> float:
        return float(sum(x + y for x, y in self.per_multiindex.values()))

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "terms": [
                {"gamma": list(g.exponents), "x_part": xp, "y_part": yp}
                for g, (xp, yp) in sorted(
                    self.per_multiindex.items(), key=lambda kv: (kv[0].order, kv[0].exponents)
                )
            ],
        }


def _axis_diff(arr: np.ndarray, axis: int, order: int, h: float, stencil: str) -> tuple[np.ndarray, int, int]:
    """Iterated finite difference along one axis.

    Returns (array, lo_margin, hi_margin).  np.roll wraps, which is exact on
    cyclic lattices; box lattices mask the margins out downstream.
    """
    out = arr
    for _ in range(order):
        if stencil == "central":
            out = (np.roll(out, -1, axis=axis) - np.roll(out, 1, axis=axis)) / (2.0 * h)
        elif stencil == "forward":
            out = (np.roll(out, -1, axis=axis) - out) / h
        else:
            raise ValidationError(f"unknown stencil {stencil!r}")
    if stencil == "central":
        return out, order, order
    return out, 0, order


def _variable_derivative(
    vals: np.ndarray, n: int, gamma: MultiIndex, variable: str, h: float, stencil: str, wrap: bool
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Apply the multi-index derivative in x or y on the (L,)*2n grid."""
    offset = 0 if variable == "x" else n
    out = vals
    margins = [(0, 0)] * (2 * n)
    for s, order in enumerate(gamma.exponents):
        if order == 0:
            continue
        out, lo, hi = _axis_diff(out, offset + s, order, h, stencil)
        if not wrap:
            margins[offset + s] = (lo, hi)
    return out, margins


def _masked_max(arr: np.ndarray, margins: list[tuple[int, int]]) -> float:
    slices = tuple(slice(lo, arr.shape[ax] - hi) for ax, (lo, hi) in enumerate(margins))
    view = arr[slices]
    if view.size == 0:
        raise ValidationError("grid too small for the requested stencil")
    return float(np.max(view))


def _hms_functional(M: SymbolGrid, stencil: str, wrap: bool) -> HmsBreakdown:
    lat = M.lattice
    n = lat.dimension
    L = lat.axis_size
    cap = derivative_order_cap(n)
    vals = M.values.reshape((L,) * (2 * n))
    dist = lat.pair_distances().reshape((L,) * (2 * n))
    per = {}
    total = 0.0
    for gamma in multi_indices(n, cap):
        if gamma.order == 0:
            x_part, y_part = M.sup_abs, 0.0
        else:
            weight = dist**gamma.order
            dx, mx = _variable_derivative(vals, n, gamma, "x", lat.spacing, stencil, wrap)
            x_part = _masked_max(weight * np.abs(dx), mx)
            dy, my = _variable_derivative(vals, n, gamma, "y", lat.spacing, stencil, wrap)
            y_part = _masked_max(weight * np.abs(dy), my)
        per[gamma] = (x_part, y_part)
        total += x_part + y_part
    return HmsBreakdown(total=float(total), per_multiindex=per)


def hms_norm(M: SymbolGrid, stencil: str | None = None) -> HmsBreakdown:
    """Weighted derivative functional of the symbol up to order [n/2] + 1.

    Derivatives are finite differences at the lattice spacing: central by
    default on sampled boxes, forward on integer lattices (where the result
    then agrees exactly with hms_delta_norm).  Suprema exclude the margin
    where the stencil would leave the grid.
    """
    lat = M.lattice
    if lat.topology not in ("sampled_box", "integer"):
        raise ValidationError("hms_norm needs a sampled_box or integer lattice")
    cap = derivative_order_cap(lat.dimension)
    if lat.half_width < cap + 1:
        raise ValidationError(f"grid too small for the stencil: need N >= {cap + 1}")
    if stencil is None:
        stencil = "central" if lat.topology == "sampled_box" else "forward"
    return _hms_functional(M, stencil, wrap=False)


def hms_delta_norm(M: SymbolGrid) -> HmsBreakdown:
    """Discrete functional from exact forward differences on Z^n.

    Valid on integer lattices (differences shrink the valid region) and
    cyclic lattices (differences wrap).
    """
    lat = M.lattice
    if lat.topology not in ("integer", "cyclic"):
        raise ValidationError("hms_delta_norm needs an integer or cyclic lattice")
    cap = derivative_order_cap(lat.dimension)
    if lat.axis_size <= cap:
        raise ValidationError("forward-difference order exceeds the lattice width")
    return _hms_functional(M, "forward", wrap=(lat.topology == "cyclic"))


def discrete_derivative(M: SymbolGrid, gamma: MultiIndex, variable: str) -> SymbolGrid:
    """Iterated forward differences of the symbol in the x or y points.

    On non-cyclic lattices the valid region shrinks by gamma_s steps at the
    top of each axis; the shrunk band is zero-filled and the margins are
    recorded in the output metadata.
    """
    lat = M.lattice
    if lat.topology not in ("integer", "cyclic"):
        raise ValidationError("discrete derivatives need an integer or cyclic lattice")
    if variable not in ("x", "y"):
        raise ValidationError("variable must be 'x' or 'y'")
    if len(gamma.exponents) != lat.dimension:
        raise ValidationError("multi-index dimension does not match the lattice")
    if any(g >= lat.axis_size for g in gamma.exponents):
        raise ValidationError("difference order exceeds the lattice width")
    n = lat.dimension
    L = lat.axis_size
    wrap = lat.topology == "cyclic"
    vals = M.values.reshape((L,) * (2 * n))
    out, margins = _variable_derivative(vals, n, gamma, variable, 1.0, "forward", wrap)
    out = np.array(out)
    if not wrap:
        for ax, (lo, hi) in enumerate(margins):
            if hi:
                index = [slice(None)] * (2 * n)
                index[ax] = slice(L - hi, L)
                out[tuple(index)] = 0.0
    P = lat.point_count
    meta = {"derivative": {"gamma": list(gamma.exponents), "variable": variable,
                           "invalid_tail_per_axis": [hi for (_, hi) in margins]}}
    return SymbolGrid(lat, out.reshape(P, P), label=f"{M.label}::D{variable}{gamma}", meta=meta)


def _torus_axes(shape: tuple[int, ...], period: float):
    spacings = [period / p for p in shape]
    coords = [(-period / 2.0 + s * np.arange(p)) for p, s in zip(shape, spacings)]
    return spacings, coords


def _bessel_apply(g: np.ndarray, sigma: float, period: float) -> np.ndarray:
    freqs = np.meshgrid(
        *[np.fft.fftfreq(p, d=period / p) for p in g.shape], indexing="ij"
    )
    xi2 = sum(f**2 for f in freqs)
    weight = (1.0 + xi2) ** (sigma / 2.0)
    return np.fft.ifftn(np.fft.fftn(g) * weight)


def _riemann_lq(vals: np.ndarray, q: float, cell: float) -> float:
    if math.isinf(q):
        return float(np.max(np.abs(vals)))
    return float((np.sum(np.abs(vals) ** q) * cell) ** (1.0 / q))


def sobolev_window_norm(samples: np.ndarray, params: SobolevParams, period: float = WINDOW_PERIOD) -> float:
    """Order-sigma, exponent-q Sobolev norm of a window on the padded torus.

    samples live on a uniform periodic grid of the given period per axis
    covering [-period/2, period/2); the window must be supported in
    [-2, 2]^n.  The Bessel multiplier (1 + |xi|^2)^(sigma/2) is applied in
    the discrete Fourier domain and the result measured by an L_q Riemann
    sum.  Mass beyond [-2.5, 2.5]^n above 1e-8 (relative) is rejected as
    support leakage.
    """
    g = np.asarray(samples, dtype=np.complex128)
    if g.ndim not in (1, 2):
        raise ValidationError("windows are one- or two-dimensional")
    spacings, coords = _torus_axes(g.shape, period)
    cell = float(np.prod(spacings))
    outside = np.zeros(g.shape, dtype=bool)
    for ax, c in enumerate(coords):
        shape = [1] * g.ndim
        shape[ax] = -1
        outside |= np.abs(c).reshape(shape) > SUPPORT_BOX
    total_mass = float(np.sum(np.abs(g) ** 2) * cell)
    leak = float(np.sum(np.abs(g[outside]) ** 2) * cell)
    if leak > SUPPORT_LEAK_TOL * max(1.0, total_mass):
        raise ValidationError(f"window mass {leak:.3e} leaks beyond the [-2.5, 2.5] support box")
    return _riemann_lq(_bessel_apply(g, params.sigma, period), params.q, cell)


def _batched_window_norms(windows: np.ndarray, params: SobolevParams, period: float) -> np.ndarray:
    """L_q window norms for a stack of 1-d windows, shape (batch, P)."""
    p = windows.shape[-1]
    spacing = period / p
    xi2 = np.fft.fftfreq(p, d=spacing) ** 2
    weight = (1.0 + xi2) ** (params.sigma / 2.0)
    bg = np.fft.ifft(np.fft.fft(windows, axis=-1) * weight[None, :], axis=-1)
    if math.isinf(params.q):
        return np.max(np.abs(bg), axis=-1)
    return (np.sum(np.abs(bg) ** params.q, axis=-1) * spacing) ** (1.0 / params.q)


def _window_geometry(lat: Lattice, j: int, period: float):
    """Spacing, torus size, and support reach (in grid steps) at scale j."""
    delta = (2.0**-j) * lat.spacing
    size = period / delta
    if abs(size - round(size)) > 1e-9 or round(size) < 4:
        raise ValidationError(
            f"dyadic scale j={j} is unresolvable: period {period} over spacing {delta} "
            "is not a usable integer torus size"
        )
    size = int(round(size))
    margin = int(math.floor(2.0 / delta))
    if margin < 1:
        raise ValidationError(f"dyadic scale j={j} is unresolvable: window support has no interior samples")
    return delta, size, margin


def _slice_windows(M: SymbolGrid, j: int, psi: Callable, period: float, transpose: bool) -> np.ndarray:
    """psi-windowed slices around every admissible center, stacked.

    transpose=False slices the first argument (rows) against a frozen
    second argument; transpose=True the other way around.
    """
    lat = M.lattice
    delta, size, margin = _window_geometry(lat, j, period)
    L = lat.axis_size
    centers = np.arange(margin, L - margin)
    if centers.size == 0:
        raise ValidationError(f"dyadic scale j={j} is unresolvable: no grid center keeps the window on the box")
    ks = np.arange(-margin, margin + 1)
    psi_vals = psi(ks * delta)
    vals = M.values.T if transpose else M.values
    block = vals[centers[:, None] + ks[None, :], centers[:, None]]
    windows = np.zeros((centers.size, size), dtype=np.complex128)
    windows[:, (ks + size // 2)] = psi_vals[None, :] * block
    return windows


def hms_sobolev_norm(M: SymbolGrid, params: SobolevParams, j_range: Iterable[int]) -> float:
    """Windowed Sobolev functional: sup over scales of row plus column terms.

    For each j the symbol is rescaled by 2^j, windowed by the dyadic band
    psi around every admissible grid center, and each one-variable slice is
    measured through sobolev_window_norm; the value is the largest over j of
    (sup over centers of the row term) + (same for the column term).
    Resampling by interpolation is forbidden: a scale whose windows do not
    land on native grid points is rejected.
    """
    lat = M.lattice
    if lat.topology not in ("sampled_box", "integer"):
        raise ValidationError("the windowed Sobolev norm needs a sampled_box or integer lattice")
    if lat.dimension != 1:
        raise ValidationError("the windowed Sobolev norm is implemented for one-dimensional lattices")
    js = sorted(set(int(j) for j in j_range))
    if not js:
        raise ValidationError("empty j_range")
    psi = radial_generator(make_profile())
    best = 0.0
    for j in js:
        row = _slice_windows(M, j, psi, WINDOW_PERIOD, transpose=False)
        col = _slice_windows(M, j, psi, WINDOW_PERIOD, transpose=True)
        term = float(np.max(_batched_window_norms(row, params, WINDOW_PERIOD)))
        term += float(np.max(_batched_window_norms(col, params, WINDOW_PERIOD)))
        best = max(best, term)
    return best


def holder_modulus(M: SymbolGrid, q: float, j: int, s: float, variable: str = "x") -> float:
    """Shift modulus of the psi-windowed slices at scale j.

    Largest L_q increment (Riemann sum over the moving variable) of
    psi(x - y) M(2^j x, 2^j y) under a shift s of the chosen variable, over
    all admissible frozen centers.  s must align with the scaled grid
    spacing 2^-j h.
    """
    lat = M.lattice
    if lat.dimension != 1:
        raise ValidationError("the shift modulus is implemented for one-dimensional lattices")
    if lat.topology not in ("sampled_box", "integer"):
        raise ValidationError("the shift modulus needs a sampled_box or integer lattice")
    if variable not in ("x", "y"):
        raise ValidationError("variable must be 'x' or 'y'")
    if q < 1.0:
        raise ValidationError("q must be at least 1")
    delta, size, margin = _window_geometry(lat, j, WINDOW_PERIOD)
    steps = s / delta
    if abs(steps - round(steps)) > 1e-9:
        raise ValidationError(f"shift {s} is not a multiple of the scaled grid spacing {delta}")
    steps = int(round(steps))
    if steps == 0:
        return 0.0
    psi = radial_generator(make_profile())
    windows = _slice_windows(M, j, psi, WINDOW_PERIOD, transpose=(variable == "y"))
    shifted = np.roll(windows, -steps, axis=-1)
    reach = margin + abs(steps)
    if 2 * reach >= size:
        raise ValidationError("shift pushes the window around the torus; enlarge the grid")
    diffs = shifted - windows
    if math.isinf(q):
        norms = np.max(np.abs(diffs), axis=-1)
    else:
        norms = (np.sum(np.abs(diffs) ** q, axis=-1) * delta) ** (1.0 / q)
    return float(np.max(norms))


def hm_toeplitz_sum_1d(lattice: Lattice, m: Callable, stencil: str | None = None) -> float:
    """Classical one-variable regularity sum for a Toeplitz generator.

    Reduces the two-variable functional of m(x - y) to the difference grid
    the lattice realizes, with the same stencil convention as hms_norm.  Both
    variable slices differentiate m, so the derivative term appears twice;
    under the forward stencil the y-slice lands one step off, carrying the
    weight |t + h| instead of |t|.  Independent reduction target for
    Toeplitz symbols.
    """
    if lattice.dimension != 1:
        raise ValidationError("the one-variable reduction lives on 1-d lattices")
    if lattice.topology not in ("sampled_box", "integer"):
        raise ValidationError("the one-variable reduction needs a sampled_box or integer lattice")
    if stencil is None:
        stencil = "central" if lattice.topology == "sampled_box" else "forward"
    N = lattice.half_width
    h = lattice.spacing
    t = h * np.arange(-2 * N, 2 * N + 1, dtype=float)
    mt = np.asarray(m(t), dtype=np.complex128)
    total = float(np.max(np.abs(mt)))
    if stencil == "central":
        dm = np.abs((mt[2:] - mt[:-2]) / (2.0 * h))
        # pairs with a valid central stencil realize t in h*{-2N+1 .. 2N-1}
        tt = np.abs(t[1:-1])
        total += float(np.max(tt * dm)) + float(np.max(tt * dm))
    else:
        dm = np.abs((mt[1:] - mt[:-1]) / h)
        total += float(np.max(np.abs(t[:-1]) * dm))   # x slice: weight |t|
        total += float(np.max(np.abs(t[1:]) * dm))    # y slice: weight |t + h|
    return total
