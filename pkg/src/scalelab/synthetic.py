"""Seeded synthetic datasets for exercising the fitting machinery.

Real price and metabolic-rate compilations are not shipped here, so the
suite recovers known exponents from generated data instead: the generator
is its own oracle.  All randomness comes from numpy's ``default_rng``
(PCG64) with the fixed seeds below, so every run of the suite sees the
same data.  Reproducibility is statistical, not bit-exact, across numpy
versions; the recovery tests use tolerances stated in terms of the fitted
standard errors.
"""

from __future__ import annotations

import math

import numpy as np

from .regression import DataSet
from .units import UnitRegistry, default_registry

__all__ = [
    "METABOLIC_SEED",
    "YACHT_SEED",
    "metabolic_dataset",
    "yacht_dataset",
]

METABOLIC_SEED = 314159
YACHT_SEED = 271828

# Desk-scale mass range: a 20 g dormouse up to a 200 kg bear.
_MASS_LO_G = 20.0
_MASS_HI_G = 2.0e5


def metabolic_dataset(
    n: int = 60,
    beta: float = 0.75,
    sigma: float = 0.05,
    seed: int = METABOLIC_SEED,
    registry: UnitRegistry | None = None,
) -> DataSet:
    """Metabolic-rate style data: log(bmr/W) = alpha + beta log(mass/g) + eps.

    Masses are log-uniform between 20 g and 200 kg; eps ~ N(0, sigma^2).
    The intercept is an arbitrary desk-scale constant.
    """
    registry = registry or default_registry()
    rng = np.random.default_rng(seed)
    u = rng.uniform(math.log(_MASS_LO_G), math.log(_MASS_HI_G), n)
    eps = rng.normal(0.0, sigma, n)
    alpha = -3.9
    mass_g = np.exp(u)
    bmr_w = np.exp(alpha + beta * u + eps)
    return DataSet(
        {
            "mass": (mass_g, registry.symbol("g")),
            "bmr": (bmr_w, registry.symbol("W")),
        }
    )


def yacht_dataset(
    n: int = 80,
    beta: float = 3.5,
    age_rate: float = -0.03,
    sigma: float = 0.3,
    seed: int = YACHT_SEED,
    registry: UnitRegistry | None = None,
) -> DataSet:
    """Secondhand-boat style data with an age covariate.

    log(price/GBP) = log 2 + beta log(length/ft) + age_rate * (age/yr) + eps,
    lengths uniform on 14..109 ft, ages uniform on 0..30 yr,
    eps ~ N(0, sigma^2).
    """
    registry = registry or default_registry()
    rng = np.random.default_rng(seed)
    length_ft = rng.uniform(14.0, 109.0, n)
    age_yr = rng.uniform(0.0, 30.0, n)
    eps = rng.normal(0.0, sigma, n)
    price = np.exp(
        math.log(2.0) + beta * np.log(length_ft) + age_rate * age_yr + eps
    )
    return DataSet(
        {
            "length": (length_ft, registry.symbol("ft")),
            "age": (age_yr, registry.symbol("yr")),
            "price": (price, registry.symbol("GBP")),
        }
    )
