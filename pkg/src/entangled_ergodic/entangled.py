"""Entangled Cesàro means of a unitary and their limits.

For a pair-partition ``alpha`` with ``k`` classes and operators
``A_1 .. A_{2k-1}`` the entangled mean is

    (1/N^k) sum_{n_1..n_k < N} U^{n_alpha(1)} A_1 U^{n_alpha(2)} ... A_{2k-1} U^{n_alpha(2k)}.

Two evaluations are provided: a time-domain sum over the index grid and a
spectral expansion in which every class contributes a Cesàro kernel
``c_N(zeta * zeta')``.  The limit operator keeps only the pairs with
``zeta * zeta' == 1``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, NotAnEigenvector
from .linalg import as_vector
from .partitions import PairPartition, from_word, reduce, sign_assignment
from .report import ConvergenceReport, fit_loglog_slope
from .spectral import SpectralUnitary, asymmetric_point_spectrum, cesaro_kernel

MAX_TIME_DOMAIN_K = 3
MAX_INDEX_GRID = 10**7
MAX_TUPLES = 10**7
EIGVEC_TOL = 1e-10


@dataclass(frozen=True)
class EntangledInstance:
    u: SpectralUnitary
    partition: PairPartition
    ops: tuple

    def __post_init__(self):
        if not isinstance(self.partition, PairPartition):
            object.__setattr__(self, "partition", from_word(self.partition))
        ops = tuple(np.asarray(a, dtype=complex) for a in self.ops)
        k = self.partition.k
        expected = 2 * k - 1 if k > 0 else 0
        if len(ops) != expected:
            raise DimensionMismatch(
                f"partition {self.partition} needs {expected} operators, got {len(ops)}")
        d = self.u.dim
        for a in ops:
            if a.shape != (d, d):
                raise DimensionMismatch(f"operator of shape {a.shape} for dimension {d}")
        object.__setattr__(self, "ops", ops)

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def dim(self) -> int:
        return self.u.dim


def _power_stack(u: SpectralUnitary, n: int) -> np.ndarray:
    """Array of shape ``(n, d, d)`` holding ``U^0 .. U^{n-1}``."""
    vals = np.array([[(z ** j).value for j in range(n)] for z in u.phases])
    projs = np.stack(u.projections)
    return np.einsum("zj,zab->jab", vals, projs)


def average_time_domain(inst: EntangledInstance, n: int) -> np.ndarray:
    """Entangled mean evaluated directly on the ``N^k`` index grid.

    The last class index is vectorised; the others are looped over.

    Raises:
        BudgetExceeded: ``k > 3`` or ``N^k > 10^7``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    k, d = inst.k, inst.dim
    if k == 0:
        return np.eye(d, dtype=complex)
    if k > MAX_TIME_DOMAIN_K or n ** k > MAX_INDEX_GRID:
        raise BudgetExceeded(f"time-domain sum with k={k}, N={n} exceeds budget")
    powers = _power_stack(inst.u, n)
    word = inst.partition.word
    total = np.zeros((d, d), dtype=complex)
    for outer in itertools.product(range(n), repeat=k - 1):
        m = np.broadcast_to(np.eye(d, dtype=complex), (n, d, d))
        for pos, cls in enumerate(word):
            if cls == k:
                m = m @ powers
            else:
                m = m @ powers[outer[cls - 1]]
            if pos < len(inst.ops):
                m = m @ inst.ops[pos]
        total += m.sum(axis=0)
    return total / n ** k


def _check_tuple_budget(r: int, k: int):
    if r ** (2 * k) > MAX_TUPLES:
        raise BudgetExceeded(f"{r}^{2 * k} eigenphase tuples exceeds {MAX_TUPLES}")


def average_spectral(inst: EntangledInstance, n: int) -> np.ndarray:
    """Entangled mean through the spectral expansion.

    Sums ``prod_j c_N(zeta_{p1(j)} zeta_{p2(j)}) E_{zeta_1} A_1 ... E_{zeta_2k}``
    over eigenphase tuples, pruning branches whose kernel weight or partial
    product is exactly zero.
    """
    if n < 1:
        raise ValueError("n must be positive")
    u, k, d = inst.u, inst.k, inst.dim
    if k == 0:
        return np.eye(d, dtype=complex)
    r = len(u.phases)
    _check_tuple_budget(r, k)
    kern = [[cesaro_kernel(za * zb, n) for zb in u.phases] for za in u.phases]
    projs = u.projections
    op_proj = [[a @ p for p in projs] for a in inst.ops]
    word = inst.partition.word
    first_pos = {}
    for i, cls in enumerate(word):
        first_pos.setdefault(cls, i)
    signs = sign_assignment(inst.partition)
    choice = [0] * (2 * k)
    total = np.zeros((d, d), dtype=complex)

    def walk(i, partial, weight):
        nonlocal total
        if i == 2 * k:
            total += weight * partial
            return
        cls, second = signs[i]
        for b in range(r):
            w = weight
            if second:
                w = w * kern[choice[first_pos[cls]]][b]
                if w == 0:
                    continue
            nxt = projs[b] if i == 0 else partial @ op_proj[i - 1][b]
            if not nxt.any():
                continue
            choice[i] = b
            walk(i + 1, nxt, w)

    walk(0, None, 1 + 0j)
    return total


def entangled_limit(inst: EntangledInstance) -> np.ndarray:
    """The limit operator ``S_alpha``.

    Sum over ``(z_1..z_k)`` in the asymmetric point spectrum of
    ``E_{z#_alpha(1)} A_1 ... A_{2k-1} E_{z#_alpha(2k)}``, where a class
    contributes ``z_j`` at its first position and ``conj(z_j)`` at its second.
    """
    u, k, d = inst.u, inst.k, inst.dim
    if k == 0:
        return np.eye(d, dtype=complex)
    sym = [u.index_of(z) for z in asymmetric_point_spectrum(u)]
    conj_index = {i: u.index_of(u.phases[i].conj()) for i in sym}
    projs = u.projections
    op_proj = [[a @ p for p in projs] for a in inst.ops]
    signs = sign_assignment(inst.partition)
    chosen: dict[int, int] = {}
    total = np.zeros((d, d), dtype=complex)

    def walk(i, partial):
        nonlocal total
        if i == 2 * k:
            total += partial
            return
        cls, second = signs[i]
        if second:
            candidates = [conj_index[chosen[cls]]]
        else:
            candidates = sym
        for b in candidates:
            if not second:
                chosen[cls] = b
            nxt = projs[b] if i == 0 else partial @ op_proj[i - 1][b]
            if nxt.any():
                walk(i + 1, nxt)
        if not second:
            chosen.pop(cls, None)

    walk(0, None)
    return total


def _eigenphase_of(u: SpectralUnitary, x: np.ndarray):
    ux = u.matrix @ x
    lam = np.vdot(x, ux) / np.vdot(x, x)
    if np.linalg.norm(ux - lam * x) > EIGVEC_TOL * max(1.0, np.linalg.norm(x)):
        raise NotAnEigenvector("vector is not an eigenvector of U")
    i = int(np.argmin([abs(z.value - lam) for z in u.phases]))
    return u.phases[i]


def zaz_sides(beta_inst: EntangledInstance, x) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the eigenvector reduction ``S_beta x = L S_{alpha_beta} R x``.

    The class holding the final position is deleted.  Its first position
    ``k_beta`` receives the projection onto the conjugate eigenphase of
    ``x``; the operators around the two deleted slots are fused, giving
    ``A_{k_beta-1} E A_{k_beta}`` inside the reduced word, a left factor
    ``E A_1`` when ``k_beta == 1``, and the trailing right factor
    (``A_{2k+1}``, or ``A_{2k} E A_{2k+1}`` if ``k_beta == 2k+1``).
    """
    x = as_vector(x)
    u = beta_inst.u
    z0 = _eigenphase_of(u, x)
    fixed = u.eig_projection(z0.conj())
    lhs = entangled_limit(beta_inst) @ x

    beta = beta_inst.partition
    terminal = beta.word[-1]
    k_beta, (p1, p2), alpha = reduce(beta, terminal)
    d = u.dim
    # chain of projector slots and operators; slot p1 is fixed, the last slot is dropped
    groups: list[np.ndarray] = []
    current = np.eye(d, dtype=complex)
    for pos in range(1, len(beta.word) + 1):
        if pos == p1:
            current = current @ fixed
        elif pos != p2:
            groups.append(current)
            current = np.eye(d, dtype=complex)
        if pos <= len(beta_inst.ops):
            current = current @ beta_inst.ops[pos - 1]
    groups.append(current)
    if alpha.k == 0:
        return lhs, groups[0] @ x
    left, mids, right = groups[0], groups[1:-1], groups[-1]
    reduced = entangled_limit(EntangledInstance(u, alpha, tuple(mids)))
    return lhs, left @ reduced @ right @ x


def zaz_reduction_check(beta_inst: EntangledInstance, eigvec) -> float:
    """``||LHS - RHS||`` of the eigenvector reduction; zero up to rounding."""
    lhs, rhs = zaz_sides(beta_inst, eigvec)
    return float(np.linalg.norm(lhs - rhs))


def convergence_report(inst: EntangledInstance, n_grid: Sequence[int],
                       probes: Sequence, threads: int = 1) -> ConvergenceReport:
    """Max-over-probes deviation ``||avg_N x - S_alpha x||`` along ``n_grid``."""
    grid = [int(n) for n in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be non-empty and strictly increasing")
    panel = np.column_stack([as_vector(p) for p in probes])
    limit_panel = entangled_limit(inst) @ panel

    def deviation(n):
        diff = average_spectral(inst, n) @ panel - limit_panel
        return float(np.max(np.linalg.norm(diff, axis=0)))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            devs = list(pool.map(deviation, grid))
    else:
        devs = [deviation(n) for n in grid]
    rows = tuple(zip(grid, devs))
    return ConvergenceReport(rows, fit_loglog_slope(rows), panel.shape[1])
