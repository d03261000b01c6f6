"""Experiment kinds run by the command-line harness.

Every kind takes a parsed JSON config plus a seed and returns an
:class:`Outcome`: a :class:`ConvergenceReport` (the CSV payload) and a list
of named pass/fail checks.  Results depend only on the config and seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import diagonal as dg
from . import entangled as en
from .errors import ConfigError, NotAPairPartition, NotIsometric
from .linalg import random_matrix, random_vector
from .models import (BernoulliOperator, BernoulliShiftSystem, CyclicRotationSystem,
                     CylinderVector, make_system)
from .partitions import from_word, random_pair_partition
from .report import ConvergenceReport, fit_loglog_slope
from .spectral import (Phase, SpectralUnitary, double_average_bound, double_average_defect,
                       mean_ergodic_gap, psd_average_bound_defect)

EXACT_TOL = 1e-10
ORACLE_TOL = 1e-9
ZAZ_TOL = 1e-9
PSD_TOL = 1e-10
JVN_TOL = 1e-12
SLOPE_RANGE = (-1.2, -0.8)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Outcome:
    report: ConvergenceReport
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------- parsing


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError("missing required field", key)
    return cfg[key]


def parse_scalar(x, where: str = "value"):
    """Numbers, ``"p/q"`` or ``"a+bj"`` strings, or ``[re, im]`` pairs."""
    if isinstance(x, bool):
        raise ConfigError(f"boolean is not a number: {x!r}", where)
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            try:
                return complex(x.replace(" ", ""))
            except ValueError as exc:
                raise ConfigError(f"cannot parse number {x!r}", where) from exc
    if isinstance(x, list) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise ConfigError(f"cannot parse number {x!r}", where)


def parse_matrix(spec, dim: int, where: str) -> np.ndarray:
    try:
        rows = [[complex(parse_scalar(v, where)) for v in row] for row in spec]
        m = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed matrix: {exc}", where) from exc
    if m.shape != (dim, dim):
        raise ConfigError(f"expected a {dim}x{dim} matrix, got shape {m.shape}", where)
    return m


def parse_partition(spec, where: str = "partition"):
    if not isinstance(spec, list):
        raise ConfigError("partition must be an integer array", where)
    try:
        return from_word(spec)
    except NotAPairPartition as exc:
        raise ConfigError(str(exc), where) from exc


def parse_unitary(spec: dict, rng: np.random.Generator) -> SpectralUnitary:
    """A spectral unitary from ``{"model": "cyclic", "m": ..}`` or explicit phases."""
    if not isinstance(spec, dict):
        raise ConfigError("model must be an object", "model")
    kind = spec.get("model")
    if kind == "cyclic":
        return CyclicRotationSystem(int(_require(spec, "m"))).u
    if kind == "spectral":
        try:
            phases = [Phase.parse(p) for p in _require(spec, "phases")]
        except ValueError as exc:
            raise ConfigError(str(exc), "model.phases") from exc
        mults = spec.get("multiplicities", [1] * len(phases))
        if len(mults) != len(phases) or any(int(k) < 1 for k in mults):
            raise ConfigError("one positive multiplicity per phase required",
                              "model.multiplicities")
        return SpectralUnitary.random(phases, [int(k) for k in mults], rng)
    raise ConfigError(f"unsupported model {kind!r} for this kind", "model.model")


def parse_system(spec: dict):
    try:
        return make_system(spec)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad model spec: {exc}", "model") from exc


def random_cylinder_operator(system: BernoulliShiftSystem, width: int,
                             rng: np.random.Generator) -> BernoulliOperator:
    """A single character monomial supported in sites ``[0, width)``."""
    chars = [(s, int(rng.integers(1, system.q))) for s in range(width)
             if rng.random() < 0.7]
    if not chars:
        chars = [(0, int(rng.integers(1, system.q)))]
    return system.monomial(chars)


def random_cylinder_vector(system: BernoulliShiftSystem, width: int, terms: int,
                           rng: np.random.Generator) -> CylinderVector:
    """Unit-norm rational combination of a few words supported in ``[0, width)``."""
    v = system.omega * Fraction(int(rng.integers(1, 5)))
    for _ in range(terms):
        word = {s: int(rng.integers(0, system.q)) for s in range(width)}
        v = v + system.word_vector(word, Fraction(int(rng.integers(-4, 5))))
    return v / v.norm()


def parse_operator(system, spec, rng, where: str):
    """Operator spec for the models.

    Cyclic: ``{"character": j}``, ``{"diag": [..]}``, ``{"matrix": [[..]]}``
    or ``"random"`` (random element of the diagonal algebra).
    Bernoulli: ``{"chars": [[site, index], ..], "coef": c}``,
    ``{"terms": [[site, index, coef], ..]}``, a list of such monomials
    (summed), or ``"random"`` (a character monomial of width at most 2).
    """
    if isinstance(system, CyclicRotationSystem):
        m = system.m
        if spec == "random":
            return np.diag(random_vector(m, rng, normalize=False))
        if isinstance(spec, dict) and "character" in spec:
            return system.character(int(spec["character"]))
        if isinstance(spec, dict) and "diag" in spec:
            vals = [complex(parse_scalar(v, where)) for v in spec["diag"]]
            if len(vals) != m:
                raise ConfigError(f"need {m} diagonal entries", where)
            return np.diag(vals)
        if isinstance(spec, dict) and "matrix" in spec:
            return parse_matrix(spec["matrix"], m, where)
        raise ConfigError(f"unrecognised cyclic operator {spec!r}", where)
    if spec == "random":
        return random_cylinder_operator(system, 2, rng)
    if isinstance(spec, list):
        out = BernoulliOperator(system.q)
        for i, mono in enumerate(spec):
            out = out + parse_operator(system, mono, rng, f"{where}[{i}]")
        return out
    if isinstance(spec, dict) and "chars" in spec:
        coef = parse_scalar(spec.get("coef", 1), where)
        return system.monomial([(int(s), int(k)) for s, k in spec["chars"]], coef)
    if isinstance(spec, dict) and "terms" in spec:
        return system.from_terms([(int(s), int(k), parse_scalar(c, where))
                                  for s, k, c in spec["terms"]])
    raise ConfigError(f"unrecognised cylinder operator {spec!r}", where)


def _n_grid(cfg: dict) -> list[int]:
    grid = _require(cfg, "n_grid")
    if (not isinstance(grid, list) or not grid
            or any(not isinstance(n, int) or n < 1 for n in grid)
            or any(b <= a for a, b in zip(grid, grid[1:]))):
        raise ConfigError("must be a non-empty strictly increasing list of positive integers",
                          "n_grid")
    return grid


def _tol(cfg: dict, name: str, default: float) -> float:
    return float(cfg.get("tolerances", {}).get(name, default))


def _random_ops(count: int, dim: int, rng) -> tuple:
    return tuple(random_matrix(dim, rng, scale=1 / math.sqrt(2 * dim)) for _ in range(count))


def _rows_divisible(rows, q: int | None):
    if q is None:
        return []
    return [(n, d) for n, d in rows if n % q == 0]


def _exact_check(name: str, rows, q, tol) -> Check:
    hits = _rows_divisible(rows, q)
    if not hits:
        return Check(name, True, "no grid point is a multiple of the period; nothing to check")
    worst = max(d for _, d in hits)
    return Check(name, worst <= tol, f"max deviation {worst:.3e} at N divisible by {q} (tol {tol:g})")


# ---------------------------------------------------------------- kinds


def run_entangled_convergence(cfg: dict, rng, threads: int = 1) -> Outcome:
    u = parse_unitary(_require(cfg, "model"), rng)
    part = parse_partition(_require(cfg, "partition"))
    ops_spec = cfg.get("operators", "random")
    if ops_spec == "random":
        ops = _random_ops(max(2 * part.k - 1, 0), u.dim, rng)
    else:
        if not isinstance(ops_spec, list):
            raise ConfigError("operators must be 'random' or a list of matrices", "operators")
        ops = tuple(parse_matrix(a, u.dim, f"operators[{i}]") for i, a in enumerate(ops_spec))
    try:
        inst = en.EntangledInstance(u, part, ops)
    except ValueError as exc:
        raise ConfigError(str(exc), "operators") from exc
    probes = list(np.eye(u.dim, dtype=complex))
    report = en.convergence_report(inst, _n_grid(cfg), probes, threads=threads)
    checks = []
    q = u.common_denominator
    if q is not None:
        checks.append(_exact_check("exact limit at multiples of the period", report.rows, q,
                                   _tol(cfg, "max_deviation", EXACT_TOL)))
    tols = cfg.get("tolerances", {})
    if q is None or "slope_min" in tols or "slope_max" in tols:
        lo = float(tols.get("slope_min", SLOPE_RANGE[0]))
        hi = float(tols.get("slope_max", SLOPE_RANGE[1]))
        s = report.fitted_slope
        checks.append(Check("log-log decay slope", s is not None and lo <= s <= hi,
                            f"slope {s} (range [{lo}, {hi}])"))
    return Outcome(report, checks)


def _random_spectrum(rng, count: int, rational: bool) -> list[Phase]:
    phases: list[Phase] = []
    while len(phases) < count:
        if rational:
            q = int(rng.integers(1, 9))
            z = Phase.rational(int(rng.integers(0, q)), q)
        else:
            z = Phase(float(rng.random()))
        if not any(z.matches(p) for p in phases):
            phases.append(z)
    return phases


def _random_unitary(rng, dim: int, eigs: int, rational: bool) -> SpectralUnitary:
    eigs = min(eigs, dim)
    mults = [1] * eigs
    for _ in range(dim - eigs):
        mults[int(rng.integers(0, eigs))] += 1
    return SpectralUnitary.random(_random_spectrum(rng, eigs, rational), mults, rng)


def run_oracle_equivalence(cfg: dict, rng, threads: int = 1) -> Outcome:
    dim = int(cfg.get("dim", 4))
    k = int(cfg.get("k", 2))
    eigs = int(cfg.get("eigenvalues", min(dim, 5)))
    trials = int(cfg.get("trials", 25))
    if not 1 <= dim <= 8:
        raise ConfigError("dim must be in 1..8", "dim")
    if not 1 <= k <= 2:
        raise ConfigError("k must be 1 or 2", "k")
    if not 1 <= eigs <= 5:
        raise ConfigError("eigenvalues must be in 1..5", "eigenvalues")
    if not 1 <= trials <= 50:
        raise ConfigError("trials must be in 1..50", "trials")
    part_spec = cfg.get("partition")
    rows = []
    for n in range(1, trials + 1):
        u = _random_unitary(rng, dim, eigs, rational=bool(rng.random() < 0.5))
        part = parse_partition(part_spec) if part_spec else random_pair_partition(k, rng)
        inst = en.EntangledInstance(u, part, _random_ops(2 * part.k - 1, dim, rng))
        gap = np.linalg.norm(en.average_time_domain(inst, n) - en.average_spectral(inst, n))
        rows.append((n, float(gap)))
    tol = _tol(cfg, "max_defect", ORACLE_TOL)
    report = ConvergenceReport.from_rows(rows)
    return Outcome(report, [Check("time domain equals spectral expansion",
                                  report.max_deviation <= tol,
                                  f"max defect {report.max_deviation:.3e} (tol {tol:g})")])


def run_zaz(cfg: dict, rng, threads: int = 1) -> Outcome:
    trials = int(cfg.get("trials", 30))
    max_classes = int(cfg.get("max_classes", 3))
    part_spec = cfg.get("partition", "random")
    model = cfg.get("model", {"model": "cyclic", "m": 4})
    rows = []
    for t in range(1, trials + 1):
        if model == "random":
            u = _random_unitary(rng, int(rng.integers(2, 7)), 4, rational=True)
        else:
            u = parse_unitary(model, rng)
        if part_spec == "random":
            beta = random_pair_partition(int(rng.integers(1, max_classes + 1)), rng)
        else:
            beta = parse_partition(part_spec)
        inst = en.EntangledInstance(u, beta, _random_ops(2 * beta.k - 1, u.dim, rng))
        defect = max(en.zaz_reduction_check(inst, v)
                     for basis in u.bases for v in basis.T)
        rows.append((t, defect))
    tol = _tol(cfg, "max_defect", ZAZ_TOL)
    report = ConvergenceReport.from_rows(rows)
    return Outcome(report, [Check("eigenvector reduction identity", report.max_deviation <= tol,
                                  f"max defect {report.max_deviation:.3e} (tol {tol:g})")])


def _pairs_for_vector(system, cfg, rng):
    if "A" in cfg or "B" in cfg:
        return [(parse_operator(system, cfg.get("A", "random"), rng, "A"),
                 parse_operator(system, cfg.get("B", "random"), rng, "B"))]
    if isinstance(system, CyclicRotationSystem):
        chars = system.algebra_M
        return [(a, b) for a in chars for b in chars]
    return [(random_cylinder_operator(system, 2, rng), random_cylinder_operator(system, 2, rng))
            for _ in range(int(cfg.get("pairs", 4)))]


def _tensor_dynamics(system, cfg) -> dg.TensorDynamics:
    try:
        return dg.TensorDynamics(system, int(cfg.get("m1", 1)), int(cfg.get("m2", 2)))
    except ValueError as exc:
        raise ConfigError(str(exc), "m1") from exc


def _bernoulli_span(*objs) -> int:
    sites = set()
    for o in objs:
        sites |= o.sites()
    return max(sites) - min(sites) + 1 if sites else 0


def _rate_check(name, rows, constants, power: float, tol_override=None) -> Check:
    worst = 0.0
    for n, d in rows:
        worst = max(worst, d * n ** power / constants)
    limit = 1.0 if tol_override is None else tol_override
    return Check(name, worst <= limit,
                 f"max N^{power:g} * deviation / C = {worst:.3e} with C = {constants:.3g}")


def _cyclic_structure_check(system: CyclicRotationSystem) -> Check:
    u, om = system.u, system.omega
    worst = 0.0
    for z in u.phases:
        v = system.generator(z) @ om
        worst = max(worst, np.linalg.norm(u.eig_projection(z) - np.outer(v, v.conj())))
        w = system.generator(z).conj().T @ om
        worst = max(worst, np.linalg.norm(u.eig_projection(z.conj()) - np.outer(w, w.conj())))
    return Check("eigenspaces spanned by V_z Omega and V_z* Omega", worst <= EXACT_TOL,
                 f"max projector gap {worst:.3e}")


def run_diag_vector(cfg: dict, rng, threads: int = 1) -> Outcome:
    system = parse_system(_require(cfg, "model"))
    td = _tensor_dynamics(system, cfg)
    grid = _n_grid(cfg)
    pairs = _pairs_for_vector(system, cfg, rng)
    limits = [dg.diagonal_limit_vector(td, a, b) for a, b in pairs]
    rows = []
    for n in grid:
        dev = max(system.norm(dg.diagonal_cesaro_vector(td, a, b, n) - lim)
                  for (a, b), lim in zip(pairs, limits))
        rows.append((n, dev))
    report = ConvergenceReport.from_rows(rows, probe_count=len(pairs))
    checks = []
    if isinstance(system, CyclicRotationSystem):
        v = dg.build_partial_isometry(td)
        e1 = dg.invariant_projection_tensor(td)
        gap = np.linalg.norm(v.matrix.conj().T @ v.matrix - e1)
        checks.append(Check("V*V equals E_1", gap <= EXACT_TOL, f"gap {gap:.3e}"))
        checks.append(_cyclic_structure_check(system))
        checks.append(_exact_check("exact limit at multiples of m", report.rows, system.m,
                                   _tol(cfg, "max_deviation", EXACT_TOL)))
    else:
        c = max(2.0 * (_bernoulli_span(a, b) + 1) * a.coefficient_mass() * b.coefficient_mass()
                for a, b in pairs)
        checks.append(_rate_check("deviation within C / sqrt(N)", report.rows, c, 0.5))
    return Outcome(report, checks)


def _probes(system, count: int, rng):
    if isinstance(system, CyclicRotationSystem):
        return [random_vector(system.m, rng) for _ in range(count)]
    return [random_cylinder_vector(system, 2, 3, rng) for _ in range(count)]


def run_diag_operator(cfg: dict, rng, threads: int = 1) -> Outcome:
    system = parse_system(_require(cfg, "model"))
    td = _tensor_dynamics(system, cfg)
    grid = _n_grid(cfg)
    if "A" in cfg:
        ops = [parse_operator(system, cfg["A"], rng, "A")]
    elif isinstance(system, CyclicRotationSystem):
        ops = system.algebra_M + [parse_operator(system, "random", rng, "A")]
    else:
        ops = [random_cylinder_operator(system, 2, rng) for _ in range(3)]
    probes = _probes(system, int(cfg.get("probes", 10)), rng)
    reports = [dg.diagonal_cesaro_operator(td, a, grid, probes) for a in ops]
    rows = tuple((n, max(r.rows[i][1] for r in reports)) for i, n in enumerate(grid))
    report = ConvergenceReport(rows, fit_loglog_slope(rows), len(probes))
    checks = []
    if isinstance(system, CyclicRotationSystem):
        checks.append(_exact_check("exact strong limit at multiples of m", rows, system.m,
                                   _tol(cfg, "max_deviation", EXACT_TOL)))
        if (td.m1, td.m2) == (1, 2):
            gap = max(np.linalg.norm(dg.diagonal_limit_operator(td, a)
                                     - dg.conjugated_sandwich_limit(td, a)) for a in ops)
            checks.append(Check("V(A Omega x .) equals sum_w E_conj(w) A E_w",
                                gap <= EXACT_TOL, f"gap {gap:.3e}"))
    else:
        mass = max(p.coefficient_mass() for p in probes)
        c = max(2.0 * (_bernoulli_span(a, *probes) + 1) * a.coefficient_mass() * mass
                for a in ops)
        checks.append(_rate_check("deviation within C / sqrt(N)", rows, c, 0.5))
    return Outcome(report, checks)


def run_triple(cfg: dict, rng, threads: int = 1) -> Outcome:
    system = parse_system(_require(cfg, "model"))
    td = _tensor_dynamics(system, cfg)
    grid = _n_grid(cfg)
    if isinstance(system, CyclicRotationSystem):
        default = {"character": 1}
    else:
        default = "random"
    a0, a1, a2 = (parse_operator(system, cfg.get(name, default), rng, name)
                  for name in ("A0", "A1", "A2"))
    limit = dg.triple_limit(td, a0, a1, a2)
    values = dg.triple_correlation_sweep(td, a0, a1, a2, grid)
    rows = [(n, float(abs(v - limit))) for n, v in zip(grid, values)]
    report = ConvergenceReport.from_rows(rows)
    checks = []
    if isinstance(system, CyclicRotationSystem):
        checks.append(_exact_check("exact at multiples of m", report.rows, system.m,
                                   _tol(cfg, "max_deviation", EXACT_TOL)))
        if (td.m1, td.m2) == (1, 2):
            gap = abs(limit - dg.triple_limit_spectral(td, a0, a1, a2))
            checks.append(Check("V formula equals spectral sum", gap <= EXACT_TOL,
                                f"gap {gap:.3e}"))
    else:
        width = max(a.width() for a in (a0, a1, a2))
        c = 4.0 * width * max(1.0, a0.coefficient_mass() * a1.coefficient_mass()
                              * a2.coefficient_mass())
        checks.append(_rate_check("deviation within 4 width / N", report.rows, c, 1.0))
    return Outcome(report, checks)


def run_general_exponent(cfg: dict, rng, threads: int = 1) -> Outcome:
    system = parse_system(_require(cfg, "model"))
    td = _tensor_dynamics(system, cfg)
    grid = _n_grid(cfg)
    mode = cfg.get("mode", "scalar")
    a = parse_operator(system, cfg.get("A", "random"), rng, "A")
    checks = []
    if mode == "operator":
        if not isinstance(system, BernoulliShiftSystem):
            raise ConfigError("operator mode needs the weakly mixing (bernoulli) model", "mode")
        probes = _probes(system, int(cfg.get("probes", 10)), rng)
        rows = [(n, max(dg.weak_mixing_deviation(td, a, xi, n) for xi in probes)) for n in grid]
        report = ConvergenceReport.from_rows(rows, probe_count=len(probes))
        mass = max([a.coefficient_mass()] + [p.coefficient_mass() for p in probes])
        c = 2.0 * (_bernoulli_span(a, *probes) + 1) * mass
        checks.append(_rate_check("deviation within C / sqrt(N)", report.rows, c, 0.5))
        return Outcome(report, checks)
    if mode != "scalar":
        raise ConfigError("mode must be 'scalar' or 'operator'", "mode")
    b = parse_operator(system, cfg.get("B", "random"), rng, "B")
    rows, limit = [], None
    for n in grid:
        finite, limit = dg.general_exponent_average(td, a, b, n)
        rows.append((n, float(abs(finite - limit))))
    report = ConvergenceReport.from_rows(rows)
    product = system.state(a) * system.state(b)
    if isinstance(system, CyclicRotationSystem):
        checks.append(_exact_check("exact at multiples of m", report.rows, system.m,
                                   _tol(cfg, "max_deviation", EXACT_TOL)))
    else:
        c = 2.0 * max(_bernoulli_span(a, b), 1) * a.coefficient_mass() * b.coefficient_mass()
        checks.append(_rate_check("deviation within C / N", report.rows, c, 1.0))
    gap = abs(complex(limit) - complex(product))
    checks.append(Check("limit vs product state", True,
                        f"|limit - phi(A x B)| = {gap:.6g} (informational)"))
    return Outcome(report, checks)


def run_lemma_checks(cfg: dict, rng, threads: int = 1) -> Outcome:
    trials = int(cfg.get("trials", 100))
    rows = []
    worst_psd, tec1_violations, worst_jvn = math.inf, 0, 0.0
    for t in range(1, trials + 1):
        dim = int(rng.integers(1, 7))
        mats = [random_matrix(dim, rng) for _ in range(int(rng.integers(1, 7)))]
        psd = psd_average_bound_defect(mats)
        worst_psd = min(worst_psd, psd)
        n, m = int(rng.integers(1, 200)), int(rng.integers(1, 12))
        seq = rng.standard_normal(n + m) + 1j * rng.standard_normal(n + m)
        excess = double_average_defect(seq, n, m) - double_average_bound(seq, n, m)
        tec1_violations += excess > 0
        u = _random_unitary(rng, int(rng.integers(1, 13)), 5, rational=bool(rng.random() < 0.5))
        direct, spectral = mean_ergodic_gap(u, int(rng.integers(1, 65)),
                                            random_vector(u.dim, rng))
        worst_jvn = max(worst_jvn, abs(direct - spectral))
        rows.append((t, max(0.0, -psd) + max(0.0, excess)))
    report = ConvergenceReport.from_rows(rows)
    checks = [
        Check("operator-convexity bound", worst_psd >= -PSD_TOL,
              f"min eigenvalue {worst_psd:.3e} (tol {-PSD_TOL:g})"),
        Check("double-average bound", tec1_violations == 0, f"{tec1_violations} violations"),
        Check("mean ergodic remainder identity", worst_jvn <= JVN_TOL,
              f"max gap {worst_jvn:.3e} (tol {JVN_TOL:g})"),
    ]
    return Outcome(report, checks)


@dataclass(frozen=True)
class Kind:
    name: str
    description: str
    verifies: tuple[str, ...]
    runner: Callable


THEOREMS = (
    "mean ergodic theorem",
    "multiple correlations along entangled means",
    "spectral limit operator over the asymmetric point spectrum",
    "entangled ergodic theorem for almost periodic unitaries",
    "eigenvector reduction of the entangled limit",
    "eigenspace structure of ergodic systems",
    "operator convexity of averages",
    "double average defect bound",
    "genericity of the diagonal state",
    "partial isometry of the diagonal measure",
    "diagonal ergodic theorem for generic states",
    "diagonal ergodic theorem (vector form)",
    "diagonal ergodic theorem (strong operator form)",
    "triple correlation limit",
    "general exponent diagonal averages",
    "weakly mixing diagonal averages",
)

KINDS = {k.name: k for k in (
    Kind("entangled_convergence",
         "distance of the entangled mean from its limit along an N grid",
         ("entangled ergodic theorem for almost periodic unitaries",
          "multiple correlations along entangled means",
          "spectral limit operator over the asymmetric point spectrum"), run_entangled_convergence),
    Kind("zaz", "reduction of the limit operator on eigenvectors",
         ("eigenvector reduction of the entangled limit",), run_zaz),
    Kind("oracle_equivalence", "time-domain entangled mean vs spectral expansion",
         ("entangled ergodic theorem for almost periodic unitaries",), run_oracle_equivalence),
    Kind("diag_vector", "(1/N) sum U^n A U^n B Omega vs V(A Omega x B Omega)",
         ("partial isometry of the diagonal measure", "diagonal ergodic theorem (vector form)",
          "diagonal ergodic theorem for generic states",
          "eigenspace structure of ergodic systems"), run_diag_vector),
    Kind("diag_operator", "strong convergence of (1/N) sum U^n A U^n on probes",
         ("diagonal ergodic theorem (strong operator form)",), run_diag_operator),
    Kind("triple", "triple correlations omega(A0 alpha^n(A1) alpha^2n(A2))",
         ("triple correlation limit",), run_triple),
    Kind("general_exponent", "averages with exponents m1 < m2, scalar or operator form",
         ("general exponent diagonal averages", "genericity of the diagonal state",
          "weakly mixing diagonal averages"), run_general_exponent),
    Kind("lemma_checks", "operator convexity, double-average and mean ergodic identities",
         ("operator convexity of averages", "double average defect bound",
          "mean ergodic theorem"), run_lemma_checks),
)}


def run_experiment(cfg: dict, seed: int, threads: int = 1) -> Outcome:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    kind = _require(cfg, "kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {sorted(KINDS)}", "kind")
    rng = np.random.default_rng(seed)
    try:
        return KINDS[kind].runner(cfg, rng, threads=threads)
    except ConfigError:
        raise
    except NotIsometric as exc:
        raise ConfigError(str(exc), "m2") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from exc
