"""Unitaries given by their spectral data.

A :class:`SpectralUnitary` stores eigenphases and orthonormal eigenbases
instead of a dense matrix; powers, eigenprojections and Cesàro means are
all evaluated through the spectral sum ``U^n = sum_z z^n E_z``.  Phases
given as exact fractions of a full turn stay exact, which is what makes
finite-N identities such as ``c_N(z) == 0`` for ``z^N == 1`` literal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (DimensionMismatch, DuplicatePhase, IncompleteBasis,
                     InsufficientLength, NonOrthonormalInput)
from .linalg import GRAM_TOL, as_vector, frobenius_distance, random_unitary_matrix

PHASE_TOL = 1e-12

_EXACT_ROOTS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


@dataclass(frozen=True)
class Phase:
    """A point ``exp(2 pi i t)`` of the unit circle, stored as turns ``t``.

    ``turns`` is either a :class:`fractions.Fraction` in ``[0, 1)`` (exact
    variant) or a float in ``[0, 1)``.  Products of exact phases stay exact;
    anything touching a float phase becomes a float phase.
    """

    turns: Union[Fraction, float]

    def __post_init__(self):
        t = self.turns
        if isinstance(t, (int, Fraction)) and not isinstance(t, bool):
            t = Fraction(t) % 1
        else:
            t = float(t) % 1.0
            # within tolerance of a full turn (or -tiny % 1.0 rounding up): the phase is 1
            if min(t, 1.0 - t) <= PHASE_TOL:
                t = 0.0
        object.__setattr__(self, "turns", t)

    @classmethod
    def rational(cls, p: int, q: int) -> "Phase":
        return cls(Fraction(p, q))

    @classmethod
    def parse(cls, spec) -> "Phase":
        """Accept ``"p/q"`` strings (exact) or numbers (float turns)."""
        if isinstance(spec, Phase):
            return spec
        if isinstance(spec, str):
            try:
                return cls(Fraction(spec.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad phase string {spec!r}") from exc
        if isinstance(spec, (int, Fraction)) and not isinstance(spec, bool):
            return cls(Fraction(spec))
        if isinstance(spec, float):
            return cls(spec)
        raise ValueError(f"cannot interpret {spec!r} as a phase")

    @property
    def is_rational(self) -> bool:
        return isinstance(self.turns, Fraction)

    @property
    def denominator(self) -> int | None:
        return self.turns.denominator if self.is_rational else None

    @property
    def value(self) -> complex:
        if self.is_rational and self.turns in _EXACT_ROOTS:
            return _EXACT_ROOTS[self.turns]
        return cmath.exp(2j * math.pi * float(self.turns))

    def is_one(self) -> bool:
        if self.is_rational:
            return self.turns == 0
        return self.turns == 0.0

    def conj(self) -> "Phase":
        return Phase(-self.turns)

    def __mul__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        if self.is_rational and other.is_rational:
            return Phase(self.turns + other.turns)
        return Phase(float(self.turns) + float(other.turns))

    def __pow__(self, n: int) -> "Phase":
        if self.is_rational:
            return Phase(self.turns * n)
        return Phase(self.turns * n)

    def matches(self, other: "Phase", tol: float = PHASE_TOL) -> bool:
        """Equality of phases; exact for two rationals, circular distance otherwise."""
        if self.is_rational and other.is_rational:
            return self.turns == other.turns
        d = abs(float(self.turns) - float(other.turns))
        return min(d, 1.0 - d) <= tol

    def __str__(self):
        if self.is_rational:
            return f"{self.turns.numerator}/{self.turns.denominator}"
        return repr(self.turns)


ONE = Phase(Fraction(0))


def cesaro_kernel(w: Phase, n: int) -> complex:
    """``c_N(w) = (1/N) sum_{j<N} w^j`` in closed form.

    Exactly ``1`` for ``w == 1`` and exactly ``0`` when ``w`` is a rational
    phase with ``w^N == 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if w.is_one():
        return 1 + 0j
    if w.is_rational and (w.turns * n).denominator == 1:
        return 0j
    # centre the angle in [-1/2, 1/2) so sin(pi theta) keeps its relative precision
    theta = float(w.turns)
    theta -= round(theta)
    # Dirichlet form avoids cancellation in (1 - w^N) / (1 - w)
    ratio = math.sin(math.pi * n * theta) / (n * math.sin(math.pi * theta))
    return cmath.exp(1j * math.pi * (n - 1) * theta) * ratio


class SpectralUnitary:
    """A finite-dimensional unitary ``U = sum_z z E_z``.

    Attributes:
        dim: dimension of the underlying space.
        phases: eigenphases, pairwise distinct.
        bases: for each phase, a ``dim x r`` array of orthonormal columns
            spanning the eigenspace.
    """

    def __init__(self, dim: int, phases: Sequence[Phase], bases: Sequence[np.ndarray]):
        self.dim = dim
        self.phases = tuple(phases)
        self.bases = tuple(bases)
        for b in self.bases:
            b.setflags(write=False)

    @classmethod
    def from_eigensystem(cls, pairs: Iterable) -> "SpectralUnitary":
        """Build from ``(phase, [eigenvectors])`` pairs.

        Raises:
            DuplicatePhase: two phases coincide.
            IncompleteBasis: the eigenvectors do not span the whole space.
            NonOrthonormalInput: the joint family is not orthonormal.
        """
        phases, bases = [], []
        for phase, vecs in pairs:
            phase = Phase.parse(phase)
            vecs = [as_vector(v) for v in vecs]
            if not vecs:
                continue
            if any(phase.matches(p) for p in phases):
                raise DuplicatePhase(f"phase {phase} given twice")
            phases.append(phase)
            bases.append(np.column_stack(vecs))
        if not bases:
            raise IncompleteBasis("no eigenvectors given")
        dim = bases[0].shape[0]
        if any(b.shape[0] != dim for b in bases):
            raise DimensionMismatch("eigenvectors have inconsistent dimensions")
        total = sum(b.shape[1] for b in bases)
        if total < dim:
            raise IncompleteBasis(f"{total} eigenvectors cannot span dimension {dim}")
        allcols = np.hstack(bases)
        gram = allcols.conj().T @ allcols
        if frobenius_distance(gram, np.eye(total)) > GRAM_TOL:
            raise NonOrthonormalInput("eigenvectors are not jointly orthonormal")
        return cls(dim, phases, bases)

    @classmethod
    def random(cls, phases: Sequence[Phase], multiplicities: Sequence[int],
               rng: np.random.Generator) -> "SpectralUnitary":
        """Given spectrum, Haar-random eigenbasis."""
        dim = int(sum(multiplicities))
        q = random_unitary_matrix(dim, rng)
        pairs, start = [], 0
        for phase, mult in zip(phases, multiplicities):
            pairs.append((Phase.parse(phase), list(q[:, start:start + mult].T)))
            start += mult
        return cls.from_eigensystem(pairs)

    @cached_property
    def projections(self) -> tuple:
        out = []
        for b in self.bases:
            p = b @ b.conj().T
            p.setflags(write=False)
            out.append(p)
        return tuple(out)

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.power_matrix(1)

    @property
    def all_rational(self) -> bool:
        return all(p.is_rational for p in self.phases)

    @property
    def common_denominator(self) -> int | None:
        """Least common multiple of phase denominators, or None if any phase is a float."""
        if not self.all_rational:
            return None
        return math.lcm(*(p.denominator for p in self.phases))

    def index_of(self, z: Phase) -> int | None:
        for i, p in enumerate(self.phases):
            if p.matches(z):
                return i
        return None

    def eig_projection(self, z: Phase) -> np.ndarray:
        i = self.index_of(z)
        if i is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.projections[i]

    def power_matrix(self, n: int) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for z, p in zip(self.phases, self.projections):
            out += (z ** n).value * p
        return out

    def power_apply(self, n: int, x) -> np.ndarray:
        x = as_vector(x)
        if x.size != self.dim:
            raise DimensionMismatch(f"vector of size {x.size} for dimension {self.dim}")
        out = np.zeros(self.dim, dtype=complex)
        for z, b in zip(self.phases, self.bases):
            out += (z ** n).value * (b @ (b.conj().T @ x))
        return out

    def power(self, k: int) -> "SpectralUnitary":
        """``U^k``, merging eigenspaces whose phases coincide after powering."""
        return _grouped(self.dim, [((z ** k), b) for z, b in zip(self.phases, self.bases)])

    def kron(self, other: "SpectralUnitary") -> "SpectralUnitary":
        """``U (x) W`` on the tensor product space."""
        items = []
        for z, bz in zip(self.phases, self.bases):
            for w, bw in zip(other.phases, other.bases):
                cols = [np.kron(bz[:, i], bw[:, j])
                        for i in range(bz.shape[1]) for j in range(bw.shape[1])]
                items.append((z * w, np.column_stack(cols)))
        return _grouped(self.dim * other.dim, items)

    def __repr__(self):
        spec = ", ".join(f"{p}x{b.shape[1]}" for p, b in zip(self.phases, self.bases))
        return f"SpectralUnitary(dim={self.dim}, [{spec}])"


def _grouped(dim, items) -> SpectralUnitary:
    phases, bases = [], []
    for z, b in items:
        for i, p in enumerate(phases):
            if p.matches(z):
                bases[i] = np.hstack([bases[i], b])
                break
        else:
            phases.append(z)
            bases.append(b)
    return SpectralUnitary(dim, phases, bases)


def from_eigensystem(pairs) -> SpectralUnitary:
    return SpectralUnitary.from_eigensystem(pairs)


def power_apply(u: SpectralUnitary, n: int, x) -> np.ndarray:
    return u.power_apply(n, x)


def eig_projection(u: SpectralUnitary, z: Phase) -> np.ndarray:
    return u.eig_projection(z)


def mean_ergodic_projection(u: SpectralUnitary) -> np.ndarray:
    """Projection onto the ``U``-invariant vectors."""
    return u.eig_projection(ONE)


def cesaro_mean_spectral(u: SpectralUnitary, n: int, x) -> np.ndarray:
    """``sum_z c_N(z) E_z x``, the closed form of ``(1/N) sum_{j<N} U^j x``."""
    x = as_vector(x)
    out = np.zeros(u.dim, dtype=complex)
    for z, b in zip(u.phases, u.bases):
        c = cesaro_kernel(z, n)
        if c != 0:
            out += c * (b @ (b.conj().T @ x))
    return out


def cesaro_mean_direct(u: SpectralUnitary, n: int, x) -> np.ndarray:
    """``(1/N) sum_{j<N} U^j x`` by repeated application of the dense matrix."""
    x = as_vector(x)
    m = u.matrix
    acc = np.zeros(u.dim, dtype=complex)
    y = x.copy()
    for _ in range(n):
        acc += y
        y = m @ y
    return acc / n


def mean_ergodic_gap(u: SpectralUnitary, n: int, x) -> tuple[float, float]:
    """Return ``(||avg_N x - E_1 x||, ||sum_{z != 1} c_N(z) E_z x||)``; the two agree."""
    x = as_vector(x)
    e1x = mean_ergodic_projection(u) @ x
    direct = float(np.linalg.norm(cesaro_mean_direct(u, n, x) - e1x))
    rest = np.zeros(u.dim, dtype=complex)
    for z, b in zip(u.phases, u.bases):
        if not z.is_one():
            rest += cesaro_kernel(z, n) * (b @ (b.conj().T @ x))
    return direct, float(np.linalg.norm(rest))


def asymmetric_point_spectrum(u: SpectralUnitary) -> tuple:
    """Eigenphases ``z`` whose conjugate is also an eigenphase, sorted by turns."""
    found = [z for z in u.phases if u.index_of(z.conj()) is not None]
    return tuple(sorted(found, key=lambda z: float(z.turns)))


def psd_average_bound_defect(mats: Sequence) -> float:
    """Smallest eigenvalue of ``mean |A_k|^2 - |mean A_k|^2`` (non-negative in theory)."""
    arrs = [np.asarray(a, dtype=complex) for a in mats]
    if not arrs:
        raise ValueError("need at least one matrix")
    shape = arrs[0].shape
    if len(shape) != 2 or shape[0] != shape[1] or any(a.shape != shape for a in arrs):
        raise DimensionMismatch("matrices must be square and of equal size")
    stack = np.stack(arrs)
    avg = stack.mean(axis=0)
    rhs = np.einsum("kji,kjl->il", stack.conj(), stack) / len(arrs)
    d = rhs - avg.conj().T @ avg
    d = (d + d.conj().T) / 2
    return float(np.linalg.eigvalsh(d)[0])


def double_average_defect(seq: Sequence[complex], n: int, m: int) -> float:
    """``|(1/MN) sum_{n'<N} sum_{m'<M} a_{m'+n'} - (1/N) sum_{n'<N} a_{n'}|``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    a = np.asarray(seq, dtype=complex)
    if a.size < n + m:
        raise InsufficientLength(f"need at least {n + m} terms, got {a.size}")
    # sum_{n'<N} a_{m'+n'} via prefix sums
    csum = np.concatenate([[0], np.cumsum(a)])
    shifted = np.array([csum[j + n] - csum[j] for j in range(m)])
    double = shifted.sum() / (m * n)
    single = csum[n] / n
    return float(abs(double - single))


def double_average_bound(seq: Sequence[complex], n: int, m: int) -> float:
    """``(M-1)(M+2)/(MN) * sup|a_k|`` over the terms the double average touches."""
    a = np.asarray(seq, dtype=complex)[: n + m - 1]
    return (m - 1) * (m + 2) / (m * n) * float(np.max(np.abs(a)))
