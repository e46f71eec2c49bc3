"""Physical constants for the two supported unit systems."""

from dataclasses import dataclass

import scipy.constants as spc


@dataclass(frozen=True)
class UnitSystem:
    name: str
    hbar: float
    c: float
    k_B: float


# Gaussian CGS: erg s, cm/s, erg/K
GAUSSIAN = UnitSystem(
    name="gaussian",
    hbar=spc.hbar * 1e7,
    c=spc.c * 1e2,
    k_B=spc.k * 1e7,
)

NATURAL = UnitSystem(name="natural", hbar=1.0, c=1.0, k_B=1.0)

UNIT_SYSTEMS = {u.name: u for u in (GAUSSIAN, NATURAL)}


def get_units(name: str) -> UnitSystem:
    try:
        return UNIT_SYSTEMS[name]
    except KeyError:
        raise ValueError(
            f"unknown unit system {name!r}; expected one of {sorted(UNIT_SYSTEMS)}"
        ) from None
