"""Diagonal averages ``(1/N) sum_n U^{n m1} A U^{n (m2 - m1)} B Omega``.

The tensor dynamics is ``gamma = Ad_{U^m1} (x) Ad_{U^m2}`` on ``M (x) M'``
with GNS unitary ``U^m1 (x) U^m2`` on ``H (x) H``.  In the cyclic model all
of this is materialised as matrices; in the Bernoulli model the invariant
subspace of the tensor unitary is the line through ``Omega (x) Omega`` and
is handled symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ModelNotMaterializable, NotIsometric
from .linalg import kron
from .models import BernoulliShiftSystem, CyclicRotationSystem, DynamicalSystem
from .report import ConvergenceReport, fit_loglog_slope
from .spectral import ONE, Phase, SpectralUnitary

ISOMETRY_TOL = 1e-10


@dataclass(frozen=True)
class TensorDynamics:
    base: DynamicalSystem
    m1: int = 1
    m2: int = 2

    def __post_init__(self):
        if not 0 < self.m1 < self.m2:
            raise ValueError("exponents must satisfy 0 < m1 < m2")

    @property
    def materializable(self) -> bool:
        return isinstance(self.base, CyclicRotationSystem)

    @cached_property
    def tensor_unitary(self) -> SpectralUnitary:
        """``U^m1 (x) U^m2`` in spectral form (cyclic model only)."""
        u = self._require_matrices().u
        return u.power(self.m1).kron(u.power(self.m2))

    def _require_matrices(self) -> CyclicRotationSystem:
        if not self.materializable:
            raise ModelNotMaterializable(
                f"{self.base!r} has an infinite cylinder basis; use the symbolic helpers")
        return self.base


@dataclass(frozen=True)
class SigmaSet:
    pairs: tuple[tuple[Phase, Phase], ...]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def sigma_pairs(td: TensorDynamics) -> SigmaSet:
    """Eigenphase pairs ``(z, w)`` with ``z^m1 w^m2 == 1``."""
    if not td.materializable:
        return SigmaSet(((ONE, ONE),))
    phases = td.base.u.phases
    pairs = tuple((z, w) for z in phases for w in phases
                  if ((z ** td.m1) * (w ** td.m2)).is_one())
    return SigmaSet(pairs)


def invariant_projection_tensor(td: TensorDynamics) -> np.ndarray:
    """``E_1 = sum_{(z, w) in Sigma} E_z (x) E_w`` on ``H (x) H``."""
    base = td._require_matrices()
    d = base.m
    out = np.zeros((d * d, d * d), dtype=complex)
    for z, w in sigma_pairs(td):
        out += kron(base.u.eig_projection(z), base.u.eig_projection(w))
    return out


@dataclass(frozen=True)
class PartialIsometryV:
    """``V_z Omega (x) W_w Omega -> V_z W_w Omega`` on the invariant subspace, zero elsewhere."""

    domain_basis: tuple[np.ndarray, ...]
    images: tuple[np.ndarray, ...]
    matrix: np.ndarray = field(repr=False)

    def apply(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=complex)

    def apply_product(self, x, y) -> np.ndarray:
        return self.apply(kron(x, y))


def build_partial_isometry(td: TensorDynamics) -> PartialIsometryV:
    """Raises NotIsometric if the images ``V_z W_w Omega`` fail to be orthonormal."""
    base = td._require_matrices()
    om = base.omega
    domain, images = [], []
    for z, w in sigma_pairs(td):
        vz, ww = base.generator(z), base.generator(w)
        domain.append(kron(vz @ om, ww @ om))
        images.append(vz @ ww @ om)
    img = np.column_stack(images)
    gram = img.conj().T @ img
    if np.linalg.norm(gram - np.eye(len(images))) > ISOMETRY_TOL:
        raise NotIsometric(
            f"exponents ({td.m1}, {td.m2}) send distinct invariant pairs to overlapping vectors")
    matrix = img @ np.column_stack(domain).conj().T
    return PartialIsometryV(tuple(domain), tuple(images), matrix)


def _partial_isometry(td: TensorDynamics):
    if td.materializable:
        return build_partial_isometry(td)
    return None


def v_of_product(td: TensorDynamics, x, y, v: PartialIsometryV | None = None):
    """``V(x (x) y)``; in the Bernoulli model ``<x, Omega> <y, Omega> Omega``."""
    if td.materializable:
        v = v or build_partial_isometry(td)
        return v.apply_product(x, y)
    base = td.base
    om = base.omega
    return om * (base.inner(x, om) * base.inner(y, om))


def _diagonal_term(td: TensorDynamics, a, y, j: int):
    base = td.base
    return base.evolve(base.act(a, base.evolve(y, j * (td.m2 - td.m1))), j * td.m1)


def _diagonal_mean(td: TensorDynamics, a, y, n: int):
    if n < 1:
        raise ValueError("n must be positive")
    base = td.base
    total = base.zero_vector()
    for j in range(n):
        total = total + _diagonal_term(td, a, y, j)
    return total / n


def diagonal_cesaro_vector(td: TensorDynamics, a, b, n: int):
    """``(1/N) sum_{j<N} U^{j m1} A U^{j (m2 - m1)} B Omega``.

    With the default exponents this is ``(1/N) sum U^j A U^j B Omega``.
    The limit is :func:`diagonal_limit_vector`.
    """
    base = td.base
    return _diagonal_mean(td, a, base.act(b, base.omega), n)


def diagonal_limit_vector(td: TensorDynamics, a, b):
    """``V(A Omega (x) B Omega)``."""
    base = td.base
    om = base.omega
    return v_of_product(td, base.act(a, om), base.act(b, om))


def diagonal_limit_operator(td: TensorDynamics, a) -> np.ndarray:
    """Matrix of ``xi -> V(A Omega (x) xi)`` (cyclic model)."""
    base = td._require_matrices()
    v = build_partial_isometry(td)
    a_om = (np.asarray(a) @ base.omega).reshape(-1, 1)
    return v.matrix @ kron(a_om, np.eye(base.m))


def conjugated_sandwich_limit(td: TensorDynamics, a) -> np.ndarray:
    """``sum_w E_{conj(w)} A E_w`` over the point spectrum (cyclic model)."""
    base = td._require_matrices()
    u = base.u
    out = np.zeros((base.m, base.m), dtype=complex)
    for w in u.phases:
        out += u.eig_projection(w.conj()) @ np.asarray(a) @ u.eig_projection(w)
    return out


def _scalar_mean(base, total, n: int):
    # exact division keeps Bernoulli averages rational
    if isinstance(base, BernoulliShiftSystem):
        return total * Fraction(1, n)
    return total / n


def _distance(base, x, y) -> float:
    return base.norm(x - y)


def diagonal_cesaro_operator(td: TensorDynamics, a, n_grid: Sequence[int],
                             probes: Sequence) -> ConvergenceReport:
    """Strong convergence of ``(1/N) sum U^{j m1} A U^{j (m2 - m1)}`` to ``V(A Omega (x) .)``.

    ``deviation(N)`` is the largest probe error at ``N``.
    """
    base = td.base
    v = _partial_isometry(td)
    a_om = base.act(a, base.omega)
    limits = [v_of_product(td, a_om, xi, v) for xi in probes]
    rows = []
    for n in n_grid:
        dev = max(_distance(base, _diagonal_mean(td, a, xi, n), lim)
                  for xi, lim in zip(probes, limits))
        rows.append((int(n), float(dev)))
    rows = tuple(rows)
    return ConvergenceReport(rows, fit_loglog_slope(rows), len(probes))


def triple_correlation_sweep(td: TensorDynamics, a0, a1, a2, n_grid: Sequence[int]) -> list:
    """:func:`triple_correlation` at every ``N`` in ``n_grid`` from one pass over the terms."""
    grid = [int(n) for n in n_grid]
    if any(n < 1 for n in grid):
        raise ValueError("n must be positive")
    wanted = set(grid)
    base = td.base
    om = base.omega
    total, means = 0, {}
    for j in range(max(grid, default=0)):
        v = base.act(base.alpha(a2, j * td.m2), om)
        v = base.act(base.alpha(a1, j * td.m1), v)
        total += base.inner(base.act(a0, v), om)
        if j + 1 in wanted:
            means[j + 1] = _scalar_mean(base, total, j + 1)
    return [means[n] for n in grid]


def triple_correlation(td: TensorDynamics, a0, a1, a2, n: int):
    """``(1/N) sum_{j<N} omega(A0 alpha^{j m1}(A1) alpha^{j m2}(A2))``."""
    return triple_correlation_sweep(td, a0, a1, a2, [n])[0]


def triple_limit(td: TensorDynamics, a0, a1, a2):
    """``<V(A1 Omega (x) A2 Omega), A0* Omega>``."""
    base = td.base
    om = base.omega
    target = base.act(base.adjoint(a0), om)
    return base.inner(diagonal_limit_vector(td, a1, a2), target)


def triple_limit_spectral(td: TensorDynamics, a0, a1, a2) -> complex:
    """``<A0 sum_{z w^2 = 1} E_{zw} A1 E_w A2 Omega, Omega>`` (cyclic model, exponents 1, 2)."""
    base = td._require_matrices()
    u = base.u
    om = base.omega
    acc = np.zeros(base.m, dtype=complex)
    for z, w in sigma_pairs(td):
        acc += u.eig_projection(z * w) @ np.asarray(a1) @ u.eig_projection(w) @ np.asarray(a2) @ om
    return complex(np.vdot(om, np.asarray(a0) @ acc))


def general_exponent_average(td: TensorDynamics, a, b, n: int):
    """Return ``(finite, limit)`` for ``(1/N) sum_j <A U^{j (m2 - m1)} B Omega, Omega>``.

    The limit is ``sum_{z^(m2-m1) = 1} <A E_z B Omega, Omega>`` in the cyclic
    model and ``<A Omega, Omega> <B Omega, Omega>`` in the weakly mixing one.
    """
    if n < 1:
        raise ValueError("n must be positive")
    base = td.base
    om = base.omega
    step = td.m2 - td.m1
    b_om = base.act(b, om)
    total = 0
    for j in range(n):
        total += base.inner(base.act(a, base.evolve(b_om, j * step)), om)
    finite = _scalar_mean(base, total, n)
    if td.materializable:
        u = base.u
        limit = 0j
        for z in u.phases:
            if (z ** step).is_one():
                limit += complex(np.vdot(om, np.asarray(a) @ u.eig_projection(z) @ b_om))
        return finite, limit
    return finite, base.state(a) * base.state(b)


def weak_mixing_operator_average(td: TensorDynamics, a, xi, n: int):
    """``(1/N) sum_{j<N} U^{j m1} A U^{j m2} xi`` and its limit ``<A Omega, Omega> <xi, Omega> Omega``."""
    if n < 1:
        raise ValueError("n must be positive")
    base = td.base
    total = base.zero_vector()
    for j in range(n):
        total = total + base.evolve(base.act(a, base.evolve(xi, j * td.m2)), j * td.m1)
    om = base.omega
    limit = om * (base.state(a) * base.inner(xi, om))
    return total / n, limit


def weak_mixing_deviation(td: TensorDynamics, a, xi, n: int) -> float:
    avg, limit = weak_mixing_operator_average(td, a, xi, n)
    return td.base.norm(avg - limit)
