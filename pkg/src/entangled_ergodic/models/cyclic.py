"""Rotation on the cyclic group ``Z_m``.

``H = l^2(Z_m)`` with the uniform vector ``Omega``; ``U`` is the shift
``(U f)(x) = f(x - 1)``.  The algebra ``M`` is generated by the character
multipliers ``chi_j(x) = exp(2 pi i j x / m)``; it is maximal abelian, so
``M' = M``.  Since ``U chi_j = exp(-2 pi i j / m) chi_j``, the eigenphase
``p/m`` is carried by ``chi_{-p}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..spectral import Phase, SpectralUnitary


def _character_values(m: int, j: int) -> np.ndarray:
    return np.array([Phase(Fraction(j * x, m)).value for x in range(m)], dtype=complex)


@dataclass(frozen=True)
class CyclicRotationSystem:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")

    @cached_property
    def u(self) -> SpectralUnitary:
        pairs = [(Phase(Fraction(p, self.m)), [self.character_vector(-p)])
                 for p in range(self.m)]
        return SpectralUnitary.from_eigensystem(pairs)

    @cached_property
    def omega(self) -> np.ndarray:
        return np.full(self.m, 1 / np.sqrt(self.m), dtype=complex)

    @cached_property
    def shift_matrix(self) -> np.ndarray:
        """Explicit ``U e_y = e_{y+1}``, independent of the spectral data."""
        s = np.zeros((self.m, self.m), dtype=complex)
        for y in range(self.m):
            s[(y + 1) % self.m, y] = 1
        return s

    def character(self, j: int) -> np.ndarray:
        """Multiplication operator ``V_j`` by ``chi_j``."""
        return np.diag(_character_values(self.m, j % self.m))

    def character_vector(self, j: int) -> np.ndarray:
        """``V_j Omega = chi_j / sqrt(m)``."""
        return _character_values(self.m, j % self.m) / np.sqrt(self.m)

    @property
    def algebra_M(self) -> list[np.ndarray]:
        return [self.character(j) for j in range(self.m)]

    @property
    def algebra_Mprime(self) -> list[np.ndarray]:
        return self.algebra_M

    def generator(self, z: Phase) -> np.ndarray:
        """The unitary ``V_z`` in ``M_z = {A : U A U* = z A}``."""
        if not z.is_rational or (z.turns * self.m).denominator != 1:
            raise ValueError(f"{z} is not an eigenphase of the rotation on Z_{self.m}")
        return self.character(-int(z.turns * self.m))

    # dynamical-system interface

    def evolve(self, v, n: int):
        return self.u.power_apply(n, v)

    def act(self, a, v):
        return np.asarray(a) @ v

    def inner(self, v, w) -> complex:
        return complex(np.vdot(w, v))

    def norm(self, v) -> float:
        return float(np.linalg.norm(v))

    def alpha(self, a, n: int) -> np.ndarray:
        """``U^n A U^-n``."""
        return self.u.power_matrix(n) @ np.asarray(a) @ self.u.power_matrix(-n)

    def state(self, a) -> complex:
        return self.inner(self.act(a, self.omega), self.omega)

    def identity(self) -> np.ndarray:
        return np.eye(self.m, dtype=complex)

    def zero_vector(self) -> np.ndarray:
        return np.zeros(self.m, dtype=complex)

    def adjoint(self, a) -> np.ndarray:
        return np.asarray(a).conj().T


def cyclic_system(m: int) -> CyclicRotationSystem:
    return CyclicRotationSystem(m)
