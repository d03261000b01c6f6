import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entangled_ergodic.entangled import (EntangledInstance, average_spectral, average_time_domain,
                                         convergence_report, entangled_limit, zaz_reduction_check,
                                         zaz_sides)
from entangled_ergodic.errors import BudgetExceeded, DimensionMismatch, NotAnEigenvector
from entangled_ergodic.linalg import operator_norm, random_matrix, random_vector
from entangled_ergodic.models import CyclicRotationSystem
from entangled_ergodic.partitions import (enumerate_pair_partitions, from_word,
                                          random_pair_partition)
from entangled_ergodic.spectral import ONE, Phase, SpectralUnitary, cesaro_kernel


def scaled_ops(count, dim, rng):
    return tuple(random_matrix(dim, rng, scale=1 / np.sqrt(2 * dim)) for _ in range(count))


def literal_average(inst, n):
    """Naive entangled mean: fresh dense matrix powers for every index tuple."""
    u = inst.u.matrix
    word = inst.partition.word
    total = np.zeros((inst.dim, inst.dim), dtype=complex)
    for idx in itertools.product(range(n), repeat=inst.k):
        m = np.eye(inst.dim, dtype=complex)
        for pos, cls in enumerate(word):
            m = m @ np.linalg.matrix_power(u, idx[cls - 1])
            if pos < len(inst.ops):
                m = m @ inst.ops[pos]
        total += m
    return total / n ** inst.k


def rational_unitary(rng, dim=4, q=6):
    phases, seen = [], set()
    while len(phases) < min(dim, 3, q):
        p = int(rng.integers(0, q))
        if p not in seen:
            seen.add(p)
            phases.append(Phase.rational(p, q))
    mults = [1] * len(phases)
    mults[0] += dim - len(phases)
    return SpectralUnitary.random(phases, mults, rng)


def test_instance_validation(rng):
    u = rational_unitary(rng)
    with pytest.raises(DimensionMismatch):
        EntangledInstance(u, from_word([1, 2, 1, 2]), scaled_ops(2, 4, rng))
    with pytest.raises(DimensionMismatch):
        EntangledInstance(u, from_word([1, 1]), (np.eye(3),))
    inst = EntangledInstance(u, [2, 1, 2, 1], scaled_ops(3, 4, rng))
    assert inst.partition.word == (1, 2, 1, 2)


def test_empty_partition_is_identity(rng):
    inst = EntangledInstance(rational_unitary(rng), from_word([]), ())
    for n in (1, 5):
        assert np.array_equal(average_time_domain(inst, n), np.eye(4))
        assert np.array_equal(average_spectral(inst, n), np.eye(4))
    assert np.array_equal(entangled_limit(inst), np.eye(4))


def test_two_term_hand_sum():
    u = SpectralUnitary.from_eigensystem([(ONE, [[1, 0]]), (Phase.rational(1, 2), [[0, 1]])])
    inst = EntangledInstance(u, from_word([1, 1]), (np.eye(2),))
    assert np.allclose(average_time_domain(inst, 2), np.eye(2), atol=1e-15)
    assert np.allclose(average_spectral(inst, 2), np.eye(2), atol=1e-15)


def test_time_domain_matches_literal_oracle(rng):
    u = SpectralUnitary.random([Phase(0.1), Phase.rational(1, 3), Phase(0.77)], [2, 1, 1], rng)
    inst = EntangledInstance(u, from_word([1, 2, 1, 2]), scaled_ops(3, 4, rng))
    assert np.linalg.norm(average_time_domain(inst, 3) - literal_average(inst, 3)) <= 1e-10
    inst3 = EntangledInstance(u, from_word([1, 2, 3, 1, 3, 2]), scaled_ops(5, 4, rng))
    assert np.linalg.norm(average_time_domain(inst3, 3) - literal_average(inst3, 3)) <= 1e-10


def test_k1_spectral_formula(rng):
    u = SpectralUnitary.random([Phase(0.2), Phase(0.45), Phase.rational(1, 2)], [1, 2, 1], rng)
    a = random_matrix(4, rng)
    inst = EntangledInstance(u, from_word([1, 1]), (a,))
    for n in (1, 4, 9):
        ref = sum(cesaro_kernel(z1 * z2, n) * u.eig_projection(z1) @ a @ u.eig_projection(z2)
                  for z1 in u.phases for z2 in u.phases)
        assert np.linalg.norm(average_spectral(inst, n) - ref) <= 1e-12


def test_identity_unitary_gives_plain_product(rng):
    u = SpectralUnitary.from_eigensystem([(ONE, list(np.eye(3)))])
    ops = scaled_ops(3, 3, rng)
    inst = EntangledInstance(u, from_word([1, 2, 2, 1]), ops)
    prod = ops[0] @ ops[1] @ ops[2]
    for n in (1, 7):
        assert np.linalg.norm(average_spectral(inst, n) - prod) <= 1e-14
    assert np.linalg.norm(entangled_limit(inst) - prod) <= 1e-14


def test_exact_limit_at_common_multiple(rng):
    u = rational_unitary(rng, dim=5, q=6)
    q = u.common_denominator
    for word in ([1, 1], [1, 2, 1, 2], [1, 2, 2, 1], [1, 1, 2, 2]):
        part = from_word(word)
        inst = EntangledInstance(u, part, scaled_ops(2 * part.k - 1, 5, rng))
        lim = entangled_limit(inst)
        for n in (q, 2 * q):
            assert np.linalg.norm(average_spectral(inst, n) - lim) <= 1e-10


def test_limit_footnote_form(rng):
    u = rational_unitary(rng, dim=4, q=4)
    a, b, c = scaled_ops(3, 4, rng)
    inst = EntangledInstance(u, from_word([1, 2, 1, 2]), (a, b, c))
    e = u.eig_projection
    ref = sum(e(z) @ a @ e(w) @ b @ e(z.conj()) @ c @ e(w.conj())
              for z in u.phases for w in u.phases)
    assert np.linalg.norm(entangled_limit(inst) - ref) <= 1e-12


def test_flip_on_two_point_rotation():
    sys2 = CyclicRotationSystem(2)
    u = sys2.u
    flip = np.array([[0, 1], [1, 0]], dtype=complex)
    inst = EntangledInstance(u, from_word([1, 1]), (flip,))
    e1, em = u.eig_projection(ONE), u.eig_projection(Phase.rational(1, 2))
    hand = e1 @ flip @ e1 + em @ flip @ em
    lim = entangled_limit(inst)
    assert np.linalg.norm(lim - hand) <= 1e-15
    assert np.linalg.norm(average_time_domain(inst, 2) - lim) <= 1e-15


def test_limit_invariant_under_relabelling(rng):
    u = rational_unitary(rng)
    ops = scaled_ops(3, 4, rng)
    a = entangled_limit(EntangledInstance(u, [1, 2, 2, 1], ops))
    b = entangled_limit(EntangledInstance(u, [2, 1, 1, 2], ops))
    assert np.array_equal(a, b)


def test_budget_guards(rng):
    u = rational_unitary(rng, dim=2, q=2)
    inst4 = EntangledInstance(u, random_pair_partition(4, rng), scaled_ops(7, 2, rng))
    with pytest.raises(BudgetExceeded):
        average_time_domain(inst4, 2)
    inst3 = EntangledInstance(u, from_word([1, 2, 3, 1, 2, 3]), scaled_ops(5, 2, rng))
    with pytest.raises(BudgetExceeded):
        average_time_domain(inst3, 216)
    big = SpectralUnitary.random([Phase.rational(j, 17) for j in range(17)], [1] * 17, rng)
    inst = EntangledInstance(big, from_word([1, 2, 3, 1, 2, 3]), scaled_ops(5, 17, rng))
    with pytest.raises(BudgetExceeded):
        average_spectral(inst, 3)
    with pytest.raises(ValueError):
        average_spectral(inst3, 0)


def test_time_domain_norm_bound(rng):
    u = SpectralUnitary.random([Phase(0.3), Phase(0.6), ONE], [1, 1, 2], rng)
    for word in ([1, 1], [1, 2, 1, 2], [1, 2, 3, 3, 2, 1]):
        part = from_word(word)
        ops = tuple(random_matrix(4, rng) for _ in range(2 * part.k - 1))
        bound = np.prod([operator_norm(a) for a in ops])
        inst = EntangledInstance(u, part, ops)
        assert operator_norm(average_time_domain(inst, 5)) <= bound * (1 + 1e-6)


@st.composite
def small_instances(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    dim = draw(st.integers(1, 8))
    r = draw(st.integers(1, min(dim, 5)))
    phases = []
    while len(phases) < r:
        z = (Phase.rational(int(rng.integers(0, 8)), int(rng.integers(1, 9)))
             if draw(st.booleans()) else Phase(float(rng.random())))
        if not any(z.matches(p, tol=1e-6) for p in phases):
            phases.append(z)
    mults = [1] * r
    for _ in range(dim - r):
        mults[int(rng.integers(0, r))] += 1
    u = SpectralUnitary.random(phases, mults, rng)
    k = draw(st.integers(1, 2))
    part = random_pair_partition(k, rng)
    return EntangledInstance(u, part, scaled_ops(2 * k - 1, dim, rng))


@given(small_instances(), st.integers(1, 50))
def test_oracle_equivalence_property(inst, n):
    gap = np.linalg.norm(average_time_domain(inst, n) - average_spectral(inst, n))
    assert gap <= 1e-9


def test_zaz_examples(rng):
    u = rational_unitary(rng, dim=4, q=4)
    for word in ([1, 1], [1, 2, 1, 2], [1, 2, 2, 1], [1, 1, 2, 2]):
        beta = from_word(word)
        inst = EntangledInstance(u, beta, scaled_ops(2 * beta.k - 1, 4, rng))
        for b in u.bases:
            for v in b.T:
                assert zaz_reduction_check(inst, v) <= 1e-9


def test_zaz_single_class_reduces_to_projection(rng):
    u = rational_unitary(rng, dim=3, q=3)
    a = random_matrix(3, rng)
    inst = EntangledInstance(u, from_word([1, 1]), (a,))
    z = u.phases[1]
    x = u.bases[1][:, 0]
    lhs, rhs = zaz_sides(inst, x)
    assert np.linalg.norm(rhs - u.eig_projection(z.conj()) @ a @ x) <= 1e-14
    assert np.linalg.norm(lhs - rhs) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_zaz_property(seed, classes):
    rng = np.random.default_rng(seed)
    u = rational_unitary(rng, dim=int(rng.integers(2, 6)), q=int(rng.integers(2, 7)))
    beta = random_pair_partition(classes, rng)
    inst = EntangledInstance(u, beta, scaled_ops(2 * classes - 1, u.dim, rng))
    for b in u.bases:
        for v in b.T:
            assert zaz_reduction_check(inst, v) <= 1e-9


def test_zaz_rejects_non_eigenvectors(rng):
    u = rational_unitary(rng, dim=4, q=4)
    inst = EntangledInstance(u, from_word([1, 1]), scaled_ops(1, 4, rng))
    with pytest.raises(NotAnEigenvector):
        zaz_reduction_check(inst, u.bases[0][:, 0] + u.bases[1][:, 0])


def test_convergence_report_rational_and_identity(rng):
    u = CyclicRotationSystem(4).u
    inst = EntangledInstance(u, from_word([1, 2, 1, 2]), scaled_ops(3, 4, rng))
    probes = list(np.eye(4))
    rep = convergence_report(inst, [4, 8, 12, 16], probes)
    assert rep.max_deviation <= 1e-10 and rep.fitted_slope is None and rep.probe_count == 4
    ident = SpectralUnitary.from_eigensystem([(ONE, list(np.eye(3)))])
    inst = EntangledInstance(ident, from_word([1, 1]), scaled_ops(1, 3, rng))
    rep = convergence_report(inst, [1, 2, 3], list(np.eye(3)))
    assert rep.max_deviation == 0.0
    with pytest.raises(ValueError):
        convergence_report(inst, [3, 2], probes)


def test_convergence_report_golden_slope_and_threads(rng):
    gold = (5 ** 0.5 - 1) / 2
    u = SpectralUnitary.random([ONE, Phase(gold), Phase(2 * gold)], [2, 2, 2], rng)
    inst = EntangledInstance(u, from_word([1, 2, 1, 2]), scaled_ops(3, 6, rng))
    grid = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    rep = convergence_report(inst, grid, list(np.eye(6)))
    assert -1.2 <= rep.fitted_slope <= -0.8
    rep4 = convergence_report(inst, grid, list(np.eye(6)), threads=4)
    assert rep4.to_csv() == rep.to_csv()


def test_k1_identity_op_is_mean_of_square(rng):
    u = SpectralUnitary.random([Phase(0.1), Phase.rational(1, 2), ONE], [1, 1, 1], rng)
    inst = EntangledInstance(u, from_word([1, 1]), (np.eye(3),))
    x = random_vector(3, rng)
    for n in (3, 10):
        ref = sum(np.linalg.matrix_power(u.matrix, 2 * j) for j in range(n)) / n
        assert np.linalg.norm(average_spectral(inst, n) @ x - ref @ x) <= 1e-12
    e1_sq = u.power(2).eig_projection(ONE)
    assert np.linalg.norm(entangled_limit(inst) - e1_sq) <= 1e-12
