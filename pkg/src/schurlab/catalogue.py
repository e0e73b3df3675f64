"""Named scalar functions and the symbol families used by sweeps and tests.

Everything is addressed by name so that JSON configs stay declarative; the
comparison catalogue at the bottom is the fixed roster of one-dimensional
symbols the regularity cross-checks run over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .lattice import Lattice, make_lattice
from .lp import make_profile, radial_generator
from .symbols import (
    SymbolGrid,
    alpha_divided_difference,
    corona_symbol,
    divided_difference,
    toeplitz_symbol,
)

# Lipschitz test functions (all with Lipschitz constant 1 where stated).
SCALAR_FUNCTIONS = {
    "identity": lambda x: np.asarray(x, dtype=float),
    "square": lambda x: np.asarray(x, dtype=float) ** 2,
    "abs": np.abs,
    "softplus": lambda x: np.logaddexp(0.0, np.asarray(x, dtype=float)),
    "sin": np.sin,
    "sqrt_abs": lambda x: np.sqrt(np.abs(x)),
}

# Toeplitz generators m(t); sign uses the sign(0) = 0 convention.
TOEPLITZ_GENERATORS = {
    "one": lambda t: np.ones_like(np.asarray(t, dtype=float)),
    "sign": np.sign,
    "exp_abs": lambda t: np.exp(-np.abs(t)),
    "sin": np.sin,
}

FAMILIES = ("toeplitz_hm", "divided_difference", "alpha_divided", "corona", "custom_file")


def scalar_function(name: str):
    try:
        return SCALAR_FUNCTIONS[name]
    except KeyError:
        raise ValidationError(f"unknown scalar function {name!r}; known: {sorted(SCALAR_FUNCTIONS)}") from None


def toeplitz_generator(name: str):
    try:
        return TOEPLITZ_GENERATORS[name]
    except KeyError:
        raise ValidationError(f"unknown Toeplitz generator {name!r}; known: {sorted(TOEPLITZ_GENERATORS)}") from None


def build_symbol(family: str, params: dict, lattice: Lattice) -> SymbolGrid:
    """Instantiate a catalogued symbol family on a lattice."""
    if family == "toeplitz_hm":
        m = toeplitz_generator(params.get("m", "sign"))
        return toeplitz_symbol(lattice, m, label=f"toeplitz[{params.get('m', 'sign')}]")
    if family == "divided_difference":
        f = scalar_function(params.get("f", "abs"))
        return divided_difference(lattice, f, label=f"divided[{params.get('f', 'abs')}]")
    if family == "alpha_divided":
        f = scalar_function(params.get("f", "sqrt_abs"))
        alpha = float(params.get("alpha", 0.5))
        return alpha_divided_difference(lattice, f, alpha,
                                        label=f"alpha_divided[{params.get('f', 'sqrt_abs')},a={alpha}]")
    if family == "corona":
        psi0 = radial_generator(make_profile())
        return corona_symbol(lattice, psi0, int(params.get("j", 0)))
    if family == "custom_file":
        from .serialize import load_symbol  # local import to avoid a cycle

        path = params.get("path")
        if not path:
            raise ValidationError("custom_file symbols need a 'path' parameter")
        grid = load_symbol(path)
        if grid.lattice != lattice:
            raise ValidationError("custom symbol file does not match the configured lattice")
        return grid
    raise ValidationError(f"unknown family {family!r}; known: {FAMILIES}")


@dataclass(frozen=True)
class CatalogueEntry:
    """One comparison-catalogue symbol plus the grid it is sampled on."""

    name: str
    family: str
    params: dict = field(default_factory=dict)

    def build(self, N: int, h: float) -> SymbolGrid:
        lat = make_lattice(1, N, h, "sampled_box")
        return build_symbol(self.family, self.params, lat)


#: Roster for the regularity comparison chain: one-dimensional symbols on a
#: sampled box, resolvable by the windowed Sobolev norm at scales -2..1.
COMPARISON_CATALOGUE = (
    CatalogueEntry("constant", "toeplitz_hm", {"m": "one"}),
    CatalogueEntry("toeplitz_sin", "toeplitz_hm", {"m": "sin"}),
    CatalogueEntry("toeplitz_exp", "toeplitz_hm", {"m": "exp_abs"}),
    CatalogueEntry("toeplitz_sign", "toeplitz_hm", {"m": "sign"}),
    CatalogueEntry("arazy_abs", "divided_difference", {"f": "abs"}),
    CatalogueEntry("alpha_sqrt", "alpha_divided", {"f": "sqrt_abs", "alpha": 0.5}),
    CatalogueEntry("corona0", "corona", {"j": 0}),
)

#: Grid and scale choices the comparison chain is measured at.
COMPARISON_BASE_GRID = (32, 0.125)   # (N, h); refinement doubles N, halves h
COMPARISON_J_RANGE = (-2, 1)
