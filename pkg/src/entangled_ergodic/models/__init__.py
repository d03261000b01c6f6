"""Concrete ergodic systems and state averages on them.

Both models expose the same small interface: ``omega``, ``evolve(v, n)``
(apply ``U^n``), ``act(A, v)``, ``inner(v, w)``, ``norm(v)``,
``alpha(A, n)`` (``U^n A U^-n``), ``state(A)`` and ``identity()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .bernoulli import (EMPTY, BernoulliOperator, BernoulliShiftSystem, CylinderVector,
                        CylinderWord, bernoulli_apply_U, bernoulli_multiply)
from .cyclic import CyclicRotationSystem, cyclic_system

DynamicalSystem = Union[CyclicRotationSystem, BernoulliShiftSystem]


@dataclass(frozen=True)
class TensorElement:
    """``sum_j A_j (x) B_j`` with ``A_j`` in ``M`` and ``B_j`` in ``M'``."""

    terms: tuple[tuple[Any, Any], ...]

    @classmethod
    def simple(cls, a, b) -> "TensorElement":
        return cls(((a, b),))


def make_system(spec: dict) -> DynamicalSystem:
    """Build a model from ``{"model": "cyclic", "m": 5}`` or ``{"model": "bernoulli", "q": 3}``."""
    kind = spec.get("model")
    if kind == "cyclic":
        return CyclicRotationSystem(int(spec["m"]))
    if kind == "bernoulli":
        return BernoulliShiftSystem(int(spec["q"]))
    raise ValueError(f"unknown model {kind!r}")


def _mean_factor(n: int):
    return Fraction(1, n)


def diagonal_state(system: DynamicalSystem, b: TensorElement):
    """``psi(A (x) B) = <A B Omega, Omega>``, extended linearly."""
    om = system.omega
    return sum((system.inner(system.act(a, system.act(bb, om)), om) for a, bb in b.terms), 0)


def product_state(system: DynamicalSystem, b: TensorElement):
    """``phi(A (x) B) = <A Omega, Omega> <B Omega, Omega>``, extended linearly."""
    return sum((system.state(a) * system.state(bb) for a, bb in b.terms), 0)


def generic_state_average(system: DynamicalSystem, b, n: int, m1: int = 1, m2: int = 2):
    """Cesàro average of a state along the dynamics.

    For a plain operator ``B`` this is ``(1/N) sum_{j<N} omega(alpha^j(B))``.
    For a :class:`TensorElement` it is the diagonal-state average
    ``(1/N) sum_j psi(gamma^j(B))`` with ``gamma = Ad_{U^m1} (x) Ad_{U^m2}``;
    callers compare it with :func:`product_state`.
    """
    if n < 1:
        raise ValueError("n must be positive")
    om = system.omega
    total = 0
    for j in range(n):
        if isinstance(b, TensorElement):
            for a, bb in b.terms:
                v = system.act(system.alpha(bb, j * m2), om)
                v = system.act(system.alpha(a, j * m1), v)
                total += system.inner(v, om)
        else:
            total += system.state(system.alpha(b, j))
    return total * _mean_factor(n)


__all__ = [
    "BernoulliOperator", "BernoulliShiftSystem", "CyclicRotationSystem", "CylinderVector",
    "CylinderWord", "DynamicalSystem", "EMPTY", "TensorElement", "bernoulli_apply_U",
    "bernoulli_multiply", "cyclic_system", "diagonal_state", "generic_state_average",
    "make_system", "product_state",
]
