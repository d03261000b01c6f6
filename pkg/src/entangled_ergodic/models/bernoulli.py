"""Bernoulli shift on ``Z_q^Z`` with the uniform product measure.

The characters of the product group form an orthonormal basis of ``L^2``:
a basis element is a :class:`CylinderWord`, a finite map from sites to
non-zero character indices, and the empty word is the constant function
``Omega``.  Multiplication by a character adds indices site-wise modulo
``q``, and the shift translates sites, so every operation stays inside
finitely supported vectors and never touches a float unless the caller
supplied one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from numbers import Number
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class CylinderWord:
    """Sorted ``(site, index)`` pairs with every index in ``1..q-1``."""

    sites: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], q: int) -> "CylinderWord":
        items = tuple(sorted((int(s), int(k) % q) for s, k in mapping.items() if int(k) % q))
        return cls(items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.sites)

    def is_empty(self) -> bool:
        return not self.sites

    def shift(self, n: int) -> "CylinderWord":
        return CylinderWord(tuple((s + n, k) for s, k in self.sites))

    def combine(self, other: "CylinderWord", q: int) -> "CylinderWord":
        """Character product: indices add modulo ``q``; cancelled sites disappear."""
        acc = dict(self.sites)
        for s, k in other.sites:
            acc[s] = (acc.get(s, 0) + k) % q
        return CylinderWord(tuple(sorted((s, k) for s, k in acc.items() if k)))

    def inverse(self, q: int) -> "CylinderWord":
        return CylinderWord(tuple((s, (-k) % q) for s, k in self.sites))

    def support(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.sites)


EMPTY = CylinderWord()


def _clean(terms: Mapping[CylinderWord, Number]) -> dict:
    return {w: c for w, c in terms.items() if c != 0}


class _WordCombination:
    """Finite linear combination of cylinder words; shared by vectors and operators."""

    __slots__ = ("q", "terms")

    def __init__(self, q: int, terms: Mapping[CylinderWord, Number] | None = None):
        self.q = q
        self.terms = _clean(terms or {})

    def _new(self, terms):
        return type(self)(self.q, terms)

    def _check(self, other):
        if not isinstance(other, type(self)) or other.q != self.q:
            raise TypeError(f"cannot combine with {other!r}")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return self._new(acc)

    def __neg__(self):
        return self._new({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _WordCombination):
            return NotImplemented
        return self._new({w: c * scalar for w, c in self.terms.items()})

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __truediv__(self, n):
        if isinstance(n, int):
            n = Fraction(n)
        return self * (1 / n)

    def __eq__(self, other):
        return isinstance(other, type(self)) and self.q == other.q and self.terms == other.terms

    def shift(self, n: int):
        return self._new({w.shift(n): c for w, c in self.terms.items()})

    def sites(self) -> set[int]:
        return {s for w in self.terms for s in w.support()}

    def width(self) -> int:
        """Length of the smallest site interval holding every non-trivial character."""
        s = self.sites()
        return max(s) - min(s) + 1 if s else 0

    def coefficient_mass(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def coefficient(self, word: CylinderWord):
        return self.terms.get(word, 0)

    def __repr__(self):
        body = " + ".join(f"{c}*{dict(w.sites)}" for w, c in sorted(self.terms.items()))
        return f"{type(self).__name__}(q={self.q}, {body or '0'})"


class CylinderVector(_WordCombination):
    __slots__ = ()

    def inner(self, other: "CylinderVector"):
        """``<self, other>``, linear in the first argument; exact for exact coefficients."""
        self._check(other)
        total = 0
        for w, c in self.terms.items():
            d = other.terms.get(w)
            if d is not None:
                total += c * d.conjugate()
        return total

    def norm(self) -> float:
        return sqrt(float(abs(self.inner(self))))


class BernoulliOperator(_WordCombination):
    """Finite combination of character multipliers ``prod_s chi_{k_s @ s}``."""

    __slots__ = ()

    def apply(self, v: CylinderVector) -> CylinderVector:
        if v.q != self.q:
            raise TypeError("alphabet sizes differ")
        acc: dict[CylinderWord, Number] = {}
        for wa, ca in self.terms.items():
            for wv, cv in v.terms.items():
                w = wa.combine(wv, self.q)
                acc[w] = acc.get(w, 0) + ca * cv
        return CylinderVector(self.q, acc)

    def __matmul__(self, other):
        if isinstance(other, CylinderVector):
            return self.apply(other)
        self._check(other)
        acc: dict[CylinderWord, Number] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa.combine(wb, self.q)
                acc[w] = acc.get(w, 0) + ca * cb
        return BernoulliOperator(self.q, acc)

    def adjoint(self) -> "BernoulliOperator":
        return BernoulliOperator(
            self.q, {w.inverse(self.q): c.conjugate() for w, c in self.terms.items()})

    def expectation(self):
        """``<A Omega, Omega>``: the coefficient of the constant character."""
        return self.terms.get(EMPTY, 0)


class BernoulliShiftSystem:
    """Shift on ``Z_q^Z``; ``U`` translates every site by ``+1``."""

    def __init__(self, q: int):
        if q < 2:
            raise ValueError("alphabet size must be at least 2")
        self.q = q

    def __repr__(self):
        return f"BernoulliShiftSystem(q={self.q})"

    @property
    def omega(self) -> CylinderVector:
        return CylinderVector(self.q, {EMPTY: 1})

    def word_vector(self, mapping: Mapping[int, int], coef: Number = 1) -> CylinderVector:
        return CylinderVector(self.q, {CylinderWord.from_mapping(mapping, self.q): coef})

    def character(self, site: int, index: int, coef: Number = 1) -> BernoulliOperator:
        """``coef * chi_{index @ site}``; index 0 is the scalar ``coef``."""
        return BernoulliOperator(self.q, {CylinderWord.from_mapping({site: index}, self.q): coef})

    def monomial(self, chars: Iterable[tuple[int, int]], coef: Number = 1) -> BernoulliOperator:
        """``coef * prod chi_{k @ s}`` for ``(s, k)`` in ``chars``."""
        word = EMPTY
        for s, k in chars:
            word = word.combine(CylinderWord.from_mapping({s: k}, self.q), self.q)
        return BernoulliOperator(self.q, {word: coef})

    def from_terms(self, terms: Iterable[tuple[int, int, Number]]) -> BernoulliOperator:
        """Sum of single-site characters given as ``(site, index, coefficient)``."""
        out = BernoulliOperator(self.q)
        for s, k, c in terms:
            out = out + self.character(s, k, c)
        return out

    # dynamical-system interface

    def evolve(self, v: CylinderVector, n: int) -> CylinderVector:
        return v.shift(n)

    def act(self, a: BernoulliOperator, v: CylinderVector) -> CylinderVector:
        return a.apply(v)

    def inner(self, v: CylinderVector, w: CylinderVector):
        return v.inner(w)

    def norm(self, v: CylinderVector) -> float:
        return v.norm()

    def alpha(self, a: BernoulliOperator, n: int) -> BernoulliOperator:
        """``U^n A U^-n``: the multiplier translated by ``n`` sites."""
        return a.shift(n)

    def state(self, a: BernoulliOperator):
        return a.expectation()

    def identity(self) -> BernoulliOperator:
        return BernoulliOperator(self.q, {EMPTY: 1})

    def zero_vector(self) -> CylinderVector:
        return CylinderVector(self.q)

    def adjoint(self, a: BernoulliOperator) -> BernoulliOperator:
        return a.adjoint()


def bernoulli_apply_U(system: BernoulliShiftSystem, v: CylinderVector, n: int) -> CylinderVector:
    return system.evolve(v, n)


def bernoulli_multiply(system: BernoulliShiftSystem, op, v: CylinderVector) -> CylinderVector:
    """Apply ``op`` (an operator or a list of ``(site, index, coef)`` terms) to ``v``."""
    if not isinstance(op, BernoulliOperator):
        op = system.from_terms(op)
    return system.act(op, v)
