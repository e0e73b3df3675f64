"""Dense complex matrices, Schatten norms, and Schur multiplier application.

The Schatten p-norm is the l_p norm of the singular value spectrum, with
p = inf (use math.inf / numpy.inf, which is exact) giving the operator norm
and p = 2 the Frobenius norm.  All norms use a full dense SVD: desk-scale
dimensions make that exact and simple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LatticeMismatchError, NumericalFailureError, ValidationError
from .lattice import Lattice
from .symbols import SymbolGrid


@dataclass(frozen=True)
class MatrixOperator:
    """Square complex matrix indexed by the points of a lattice."""

    lattice: Lattice
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=np.complex128)
        p = self.lattice.point_count
        if ent.shape != (p, p):
            raise ValidationError(f"matrix must have shape ({p}, {p}), got {ent.shape}")
        if not np.all(np.isfinite(ent.real)) or not np.all(np.isfinite(ent.imag)):
            raise ValidationError(f"matrix {self.label!r} contains non-finite entries")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)


def validate_exponent(p) -> float:
    """Check a Schatten exponent: a real p >= 1, with inf allowed."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValidationError(f"Schatten exponent must satisfy p >= 1, got {p}")
    return p


def conjugate_exponent(p: float) -> float:
    """Dual exponent p' with 1/p + 1/p' = 1."""
    p = validate_exponent(p)
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def singular_values(a: np.ndarray, label: str = "") -> np.ndarray:
    """Singular values in decreasing order, surfacing SVD failures by label."""
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NumericalFailureError(f"SVD failed to converge on matrix {label!r}") from exc


def schatten_norm_array(a: np.ndarray, p, label: str = "") -> float:
    p = validate_exponent(p)
    if p == 2.0:
        return float(np.linalg.norm(a))
    s = singular_values(a, label)
    if math.isinf(p):
        return float(s[0]) if s.size else 0.0
    return float(np.sum(s**p) ** (1.0 / p))


def schatten_norm(A: MatrixOperator, p) -> float:
    """Schatten p-norm (sum of s_i^p)^(1/p); max singular value for p = inf."""
    return schatten_norm_array(A.entries, p, A.label)


def schur_apply(M: SymbolGrid, A: MatrixOperator) -> MatrixOperator:
    """Entrywise product S_M(A) = (M(x,y) A_{xy})."""
    if M.lattice != A.lattice:
        raise LatticeMismatchError("symbol and matrix live on different lattices")
    return MatrixOperator(A.lattice, M.values * A.entries, label=A.label)


def trace_pairing(a: np.ndarray, b: np.ndarray) -> complex:
    """Frobenius pairing tr(a b*), accumulated with pairwise summation."""
    return complex(np.sum(a * np.conj(b)))


def schur_adjoint_check(M: SymbolGrid, A: MatrixOperator, B: MatrixOperator) -> float:
    """Residual of the adjoint identity tr(S_M(A) B*) = tr(A S_{conj(M)}(B)*).

    Both sides are entrywise sums; the residual is bounded by roughly
    1e-12 times the Frobenius scale of A and B.
    """
    if not (M.lattice == A.lattice == B.lattice):
        raise LatticeMismatchError("adjoint check needs a common lattice")
    lhs = trace_pairing(M.values * A.entries, B.entries)
    rhs = trace_pairing(A.entries, np.conj(M.values) * B.entries)
    return abs(lhs - rhs)


def random_matrix(lattice: Lattice, rng: np.random.Generator, label: str = "random") -> MatrixOperator:
    """Complex standard Gaussian matrix on a lattice."""
    p = lattice.point_count
    ent = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
    return MatrixOperator(lattice, ent, label=label)


def random_symbol(lattice: Lattice, rng: np.random.Generator, label: str = "random") -> SymbolGrid:
    """Complex Gaussian symbol grid on a lattice."""
    p = lattice.point_count
    vals = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
    return SymbolGrid(lattice, vals, label=label)
