from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from entangled_ergodic.errors import (DuplicatePhase, IncompleteBasis, InsufficientLength,
                                      NonOrthonormalInput)
from entangled_ergodic.linalg import is_unitary, random_matrix, random_vector
from entangled_ergodic.spectral import (ONE, Phase, SpectralUnitary, asymmetric_point_spectrum,
                                        cesaro_kernel, cesaro_mean_direct, cesaro_mean_spectral,
                                        double_average_bound, double_average_defect,
                                        eig_projection, from_eigensystem, mean_ergodic_gap,
                                        mean_ergodic_projection, power_apply,
                                        psd_average_bound_defect)

GOLD = (5 ** 0.5 - 1) / 2


def shift(m):
    s = np.zeros((m, m), dtype=complex)
    for y in range(m):
        s[(y + 1) % m, y] = 1
    return s


def fourier_unitary(m):
    # U e_y = e_{y+1} has eigenvector (omega^{-p y})_y for eigenvalue omega^p
    pairs = []
    for p in range(m):
        v = np.exp(-2j * np.pi * p * np.arange(m) / m) / np.sqrt(m)
        pairs.append((Phase.rational(p, m), [v]))
    return from_eigensystem(pairs)


phase_lists = st.lists(st.one_of(
    st.builds(Phase.rational, st.integers(0, 11), st.integers(1, 12)),
    st.floats(0, 1, exclude_max=True).map(Phase),
), min_size=1, max_size=5)


def distinct(phases):
    out = []
    for z in phases:
        if not any(z.matches(p, tol=1e-6) for p in out):
            out.append(z)
    return out


@st.composite
def unitaries(draw, max_dim=6):
    phases = distinct(draw(phase_lists))
    mults = [draw(st.integers(1, 2)) for _ in phases]
    seed = draw(st.integers(0, 2**32 - 1))
    return SpectralUnitary.random(phases, mults, np.random.default_rng(seed))


def test_phase_normalisation_and_parse():
    assert Phase.rational(5, 4).turns == Fraction(1, 4)
    assert Phase.parse("3/6").turns == Fraction(1, 2)
    assert Phase.parse(-0.25).turns == 0.75
    assert Phase.parse(0.5).is_rational is False
    assert Phase.rational(1, 4).value == 1j
    assert (Phase.rational(1, 3) * Phase.rational(2, 3)).is_one()
    assert not (Phase.rational(1, 3) * Phase(0.5)).is_rational
    assert Phase(1 - 1e-15).is_one() and Phase(-1e-13).turns == 0.0
    assert Phase.rational(1, 2).matches(Phase(0.5))
    assert str(Phase.rational(2, 6)) == "1/3"
    with pytest.raises(ValueError):
        Phase.parse("1/0")
    with pytest.raises(ValueError):
        Phase.parse(None)


def test_identity_unitary():
    u = from_eigensystem([("0/1", list(np.eye(3)))])
    assert np.array_equal(u.matrix, np.eye(3))
    assert np.array_equal(eig_projection(u, ONE), np.eye(3))
    assert np.array_equal(mean_ergodic_projection(u), np.eye(3))


def test_fourier_system_is_the_shift():
    for m in (2, 3, 5):
        assert np.linalg.norm(fourier_unitary(m).matrix - shift(m)) <= 1e-12


def test_from_eigensystem_errors():
    e = np.eye(2)
    with pytest.raises(DuplicatePhase):
        from_eigensystem([("1/2", [e[0]]), ("2/4", [e[1]])])
    with pytest.raises(IncompleteBasis):
        from_eigensystem([("0", [e[0]])])
    with pytest.raises(NonOrthonormalInput):
        from_eigensystem([("0", [e[0]]), ("1/2", [[1, 1]])])


def test_power_apply_examples(rng):
    u = SpectralUnitary.random([Phase.rational(1, 4), Phase(GOLD)], [2, 1], rng)
    x = random_vector(3, rng)
    assert np.allclose(power_apply(u, 0, x), x, atol=1e-14)
    v = u.bases[0][:, 0]
    assert np.linalg.norm(power_apply(u, 2, v) + v) <= 1e-14
    u6 = SpectralUnitary.random([Phase(0.1), Phase(0.3), Phase.rational(1, 3)], [2, 2, 2], rng)
    x = random_vector(6, rng)
    dense = np.linalg.matrix_power(u6.matrix, 7) @ x
    assert np.linalg.norm(u6.power_apply(7, x) - dense) <= 1e-10


def test_eig_projection_examples():
    u = fourier_unitary(3)
    assert not eig_projection(u, Phase.rational(1, 2)).any()
    w = np.exp(2j * np.pi / 3)
    v = np.array([1, np.conj(w), np.conj(w) ** 2]) / np.sqrt(3)
    p = eig_projection(u, Phase.rational(1, 3))
    assert np.linalg.norm(p - np.outer(v, v.conj())) <= 1e-12
    # brute-force eigendecomposition of the 3x3 shift
    vals, vecs = np.linalg.eig(shift(3))
    i = int(np.argmin(abs(vals - w)))
    b = vecs[:, i] / np.linalg.norm(vecs[:, i])
    assert np.linalg.norm(p - np.outer(b, b.conj())) <= 1e-12


def test_cesaro_kernel_examples():
    for n in (1, 2, 7, 100):
        assert cesaro_kernel(ONE, n) == 1
    assert cesaro_kernel(Phase.rational(1, 2), 2) == 0
    assert cesaro_kernel(Phase.rational(1, 4), 4) == 0
    assert cesaro_kernel(Phase.rational(1, 4), 8) == 0
    with pytest.raises(ValueError):
        cesaro_kernel(ONE, 0)


@given(st.floats(0, 1, exclude_min=True, exclude_max=True), st.integers(1, 500))
def test_cesaro_kernel_matches_geometric_sum(t, n):
    z = Phase(t)
    assume(not z.is_one())  # phases within 1e-12 of a full turn are identified with 1
    ref = np.mean(np.exp(2j * np.pi * t * np.arange(n)))
    c = cesaro_kernel(z, n)
    assert abs(c - ref) <= 1e-10
    assert abs(c) <= 1 + 1e-12
    assert abs(c) <= 2 / (n * abs(1 - z.value)) + 1e-12


def test_mean_ergodic_projection_examples():
    u5 = fourier_unitary(5)
    e1 = mean_ergodic_projection(u5)
    ones = np.full(5, 1 / np.sqrt(5))
    assert np.linalg.norm(e1 - np.outer(ones, ones)) <= 1e-12
    direct = sum(np.linalg.matrix_power(shift(5), n) for n in range(5)) / 5
    assert np.linalg.norm(direct - e1) <= 1e-12
    u = SpectralUnitary.random([Phase.rational(1, 3), Phase(0.2)], [1, 1],
                               np.random.default_rng(0))
    assert not mean_ergodic_projection(u).any()


def test_asymmetric_point_spectrum_examples():
    u = fourier_unitary(5)
    assert len(asymmetric_point_spectrum(u)) == 5
    rng = np.random.default_rng(1)
    u = SpectralUnitary.random([ONE, Phase(GOLD)], [1, 1], rng)
    assert [z.turns for z in asymmetric_point_spectrum(u)] == [0]
    u = SpectralUnitary.random([Phase.rational(1, 4), Phase.rational(3, 4)], [1, 1], rng)
    assert [str(z) for z in asymmetric_point_spectrum(u)] == ["1/4", "3/4"]


def test_sigma_pp_a_need_not_be_a_subgroup():
    # {i, -i} is closed under conjugation but contains neither 1 nor i * i
    u = SpectralUnitary.random([Phase.rational(1, 4), Phase.rational(3, 4)], [1, 1],
                               np.random.default_rng(2))
    spec = asymmetric_point_spectrum(u)
    assert not any(z.is_one() for z in spec)
    assert u.index_of(spec[0] * spec[0]) is None


@given(unitaries())
def test_resolution_of_identity(u):
    total = sum(u.projections)
    assert np.linalg.norm(total - np.eye(u.dim)) <= 1e-10
    for i, p in enumerate(u.projections):
        for q in u.projections[i + 1:]:
            assert np.linalg.norm(p @ q) <= 1e-10
    assert is_unitary(u.matrix)


@given(unitaries())
def test_asymmetric_spectrum_conjugation_closed(u):
    spec = asymmetric_point_spectrum(u)
    for z in spec:
        assert any(z.conj().matches(w) for w in spec)


@given(unitaries(), st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 2**32 - 1))
def test_power_group_law(u, n, m, seed):
    x = random_vector(u.dim, np.random.default_rng(seed))
    lhs = u.power_apply(n + m, x)
    rhs = u.power_apply(n, u.power_apply(m, x))
    assert np.linalg.norm(lhs - rhs) <= 1e-10


@given(unitaries(), st.integers(1, 64), st.integers(0, 2**32 - 1))
def test_finite_mean_ergodic_identity(u, n, seed):
    x = random_vector(u.dim, np.random.default_rng(seed))
    assert np.linalg.norm(cesaro_mean_direct(u, n, x) - cesaro_mean_spectral(u, n, x)) <= 1e-10
    direct, rest = mean_ergodic_gap(u, n, x)
    assert abs(direct - rest) <= 1e-12


def test_power_and_kron_merge_phases(rng):
    u = SpectralUnitary.random([ONE, Phase.rational(1, 2)], [1, 2], rng)
    u2 = u.power(2)
    assert len(u2.phases) == 1 and u2.phases[0].is_one()
    t = u.kron(u)
    assert t.dim == 9 and len(t.phases) == 2
    assert np.linalg.norm(t.matrix - np.kron(u.matrix, u.matrix)) <= 1e-12


def test_psd_defect_examples(rng):
    a = random_matrix(3, rng)
    assert abs(psd_average_bound_defect([a])) <= 1e-12
    ref = np.linalg.eigvalsh(a.conj().T @ a)[0]
    assert abs(psd_average_bound_defect([a, -a]) - ref) <= 1e-10
    for _ in range(20):
        mats = [random_matrix(4, rng) for _ in range(int(rng.integers(1, 6)))]
        assert psd_average_bound_defect(mats) >= -1e-10


def test_double_average_examples(rng):
    const = np.full(20, 2.5 - 1j)
    assert double_average_defect(const, 10, 5) <= 1e-14
    seq = rng.standard_normal(30)
    assert double_average_defect(seq, 20, 1) <= 1e-15
    seq = rng.uniform(-1, 1, 105) + 1j * rng.uniform(-1, 1, 105)
    bound = 4 * 7 / 500 * np.max(np.abs(seq[:104]))
    assert double_average_bound(seq, 100, 5) == pytest.approx(bound)
    assert double_average_defect(seq, 100, 5) <= bound
    with pytest.raises(InsufficientLength):
        double_average_defect(seq[:10], 8, 3)


@given(st.integers(1, 150), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_double_average_bound_holds(n, m, seed):
    rng = np.random.default_rng(seed)
    seq = rng.standard_normal(n + m) + 1j * rng.standard_normal(n + m)
    assert double_average_defect(seq, n, m) <= double_average_bound(seq, n, m) + 1e-12
