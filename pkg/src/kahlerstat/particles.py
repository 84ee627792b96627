"""Particle statistics and coordinate containers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_KINDS = ("boson", "fermion", "anyon")


@dataclass(frozen=True)
class Statistics:
    """Exchange statistics of identical particles.

    ``nu`` is the statistics (exclusion) parameter: 0 for bosons, 1 for
    fermions and anything in ``[0, 1]`` for anyons.
    """

    kind: str
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown statistics {self.kind!r}")
        if self.kind == "boson" and self.nu != 0:
            raise DomainError("bosons have nu = 0")
        if self.kind == "fermion" and self.nu != 1:
            raise DomainError("fermions have nu = 1")
        if self.kind == "anyon" and not 0.0 <= self.nu <= 1.0:
            raise DomainError(f"anyon nu must lie in [0, 1], got {self.nu}")

    @classmethod
    def boson(cls):
        return cls("boson", 0.0)

    @classmethod
    def fermion(cls):
        return cls("fermion", 1.0)

    @classmethod
    def anyon(cls, nu):
        return cls("anyon", float(nu))

    @classmethod
    def parse(cls, name, nu=None):
        """Build from a CLI-style name; ``nu`` is required for anyons."""
        name = name.lower()
        if name in ("b", "boson", "bosons"):
            return cls.boson()
        if name in ("f", "fermion", "fermions"):
            return cls.fermion()
        if name in ("a", "anyon", "anyons"):
            if nu is None:
                raise DomainError("anyon statistics needs nu")
            return cls.anyon(nu)
        raise DomainError(f"unknown statistics {name!r}")

    @property
    def exclusion(self):
        return float(self.nu)

    @property
    def permutation_kind(self):
        """'boson' or 'fermion' when a permutation sign rule exists, else None.

        Anyons at the endpoints nu=0 and nu=1 reduce to the ordinary rules.
        """
        if self.kind != "anyon":
            return self.kind
        if self.nu == 0:
            return "boson"
        if self.nu == 1:
            return "fermion"
        return None

    def sign(self, parity):
        """eta_P for a permutation of the given parity (0 even, 1 odd)."""
        kind = self.permutation_kind
        if kind is None:
            raise DomainError("no permutation sign rule for anyons with 0 < nu < 1")
        return -1 if (kind == "fermion" and parity % 2) else 1


BOSON = Statistics.boson()
FERMION = Statistics.fermion()


@dataclass(frozen=True, eq=False)
class ParticleConfig:
    """N dimensionless complex coordinates on the plane or a sphere chart."""

    coords: np.ndarray
    geometry: str = "plane"
    j: float | None = None

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.coords, dtype=complex))
        if z.ndim != 1:
            raise DomainError("coords must be a flat sequence of complex numbers")
        object.__setattr__(self, "coords", z)
        if self.geometry not in ("plane", "sphere"):
            raise DomainError(f"unknown geometry {self.geometry!r}")
        if self.geometry == "sphere" and (self.j is None or self.j <= 0):
            raise DomainError("sphere geometry needs j > 0")

    @property
    def n(self):
        return self.coords.size

    def center_of_mass(self):
        return self.coords.mean()

    def relative(self):
        """Relative coordinate z1 - z2 of a two-particle configuration."""
        if self.n != 2:
            raise DomainError("relative coordinate defined for N = 2 only")
        return self.coords[0] - self.coords[1]
