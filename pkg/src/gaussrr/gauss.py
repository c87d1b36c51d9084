"""Gaussian degrees of subvarieties of the torus (C*)^n.

The conormal variety of Z = V(f_1, ..., f_c) meets the graph of the invariant
form sum_i gamma_i dz_i/z_i where

    f_j(z) = 0,    sum_j lambda_j * z_i df_j/dz_i (z) = gamma_i    (i = 1..n).

For generic gamma the torus solutions (z, lambda) are finite and transverse,
and their number is the Gaussian degree. Denominators are cleared by a common
monomial so the system can be handed to the total-degree solver.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _intmath
from .homotopy import PolynomialSystem, SolutionSet, TrackerConfig, bkk_bound, solve_square_system
from .laurent import LaurentPolynomial, clear_denominators, log_derivative, substitute
from .polytope import newton_polytope

log = logging.getLogger(__name__)

TORUS_FILTER = 1e-8
ROOT_DEDUP = 1e-8


class GaussError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroSection:
    dimension: int


@dataclass(frozen=True)
class Point:
    coordinates: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(complex(c) for c in self.coordinates))
        if not self.coordinates or any(abs(c) == 0 for c in self.coordinates):
            raise GaussError("a torus point needs nonzero coordinates")

    @property
    def dimension(self) -> int:
        return len(self.coordinates)


@dataclass(frozen=True)
class InvariantCovector:
    gamma: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(complex(g) for g in self.gamma))
        if all(g == 0 for g in self.gamma):
            raise GaussError("gamma must be nonzero")

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "InvariantCovector":
        return cls(tuple((rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)))


@dataclass
class GaussFiberSystem:
    system: PolynomialSystem
    n: int
    codim: int
    gamma: InvariantCovector
    shifts: tuple[tuple[int, ...], ...]  # g_j = z^shifts[j] * f_j

    @property
    def equations(self):
        return self.system.equations

    def torus_mask(self, points) -> np.ndarray:
        """All z_i and lambda_j away from zero."""
        X = np.asarray(points).reshape(-1, self.n + self.codim)
        return (np.abs(X) > TORUS_FILTER).all(axis=1)


@dataclass
class Sample:
    seed: int
    count: int
    singular: int = 0
    collisions: int = 0
    path_stats: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.singular == 0 and self.collisions == 0

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "singular_torus_roots": self.singular,
            "collisions": self.collisions,
            "valid": self.valid,
        }


@dataclass
class GaussDegreeReport:
    gdeg: int
    samples: list[Sample] = field(default_factory=list)
    agreed: bool = True
    bkk: int | None = None
    path_stats: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "gdeg": self.gdeg,
            "agreed": self.agreed,
            "bkk": self.bkk,
            "samples": [s.as_dict() for s in self.samples],
            "path_stats": dict(sorted(self.path_stats.items())),
            "warnings": list(self.warnings),
        }


def _lift(f: LaurentPolynomial, m: int) -> LaurentPolynomial:
    """Embed a polynomial in n variables into m >= n variables (extra exponents zero)."""
    pad = (0,) * (m - f.dimension)
    return LaurentPolynomial(m, {a + pad: c for a, c in f})


def build_ci_conormal_system(equations: Sequence[LaurentPolynomial], gamma: InvariantCovector) -> GaussFiberSystem:
    """Conormal of V(f_1..f_c) intersected with the graph of the invariant form gamma."""
    equations = list(equations)
    c = len(equations)
    if c == 0:
        raise GaussError("need at least one equation")
    n = equations[0].dimension
    if any(f.dimension != n for f in equations):
        raise GaussError("equations live in different dimensions")
    if c > n:
        raise GaussError(f"codimension {c} exceeds the torus dimension {n}")
    if len(gamma.gamma) != n:
        raise GaussError("gamma has the wrong length")
    for f in equations:
        if f.is_zero() or f.is_monomial():
            raise GaussError(f"{f} is a monomial: its zero set in the torus is empty")
    m = n + c
    cleared = []
    shifts = []
    for f in equations:
        g, s = clear_denominators(f)
        cleared.append(g)
        shifts.append(s)
    eqs = [_lift(g, m) for g in cleared]
    lam = [LaurentPolynomial.variable(m, n + j) for j in range(c)]
    for i in range(n):
        acc = LaurentPolynomial(m)
        for j, g in enumerate(cleared):
            # on V(f_j), theta_i g_j = z^s_j theta_i f_j, so lambda_j absorbs the monomial
            acc = acc + lam[j] * _lift(log_derivative(g, i + 1), m)
        acc = acc - LaurentPolynomial.constant(m, gamma.gamma[i])
        if acc.is_zero():
            raise GaussError("degenerate conormal equation")
        eqs.append(acc)
    return GaussFiberSystem(PolynomialSystem(eqs), n, c, gamma, tuple(shifts))


def build_gauss_fiber_system(f: LaurentPolynomial, gamma: InvariantCovector) -> GaussFiberSystem:
    return build_ci_conormal_system([f], gamma)


@dataclass
class EliminatedFiberSystem:
    """The hypersurface fiber system with lambda = gamma_n / theta_n g solved away.

    Unknowns are z only: g = 0 and gamma_n theta_i g - gamma_i theta_n g = 0
    for i < n. Torus roots with theta_n g(z) != 0 correspond one-to-one to
    torus points of the full (z, lambda) system.
    """

    system: PolynomialSystem
    n: int
    gamma: InvariantCovector
    shift: tuple[int, ...]
    theta_last: LaurentPolynomial

    @property
    def equations(self):
        return self.system.equations

    def torus_mask(self, points) -> np.ndarray:
        X = np.asarray(points).reshape(-1, self.n)
        mask = (np.abs(X) > TORUS_FILTER).all(axis=1)
        for k, x in enumerate(X):
            if mask[k]:
                terms = np.array([c * np.prod(x ** np.array(a)) for a, c in self.theta_last])
                # lambda would be infinite: x is a singular point of V(f)
                mask[k] = abs(terms.sum()) > TORUS_FILTER * np.abs(terms).sum()
        return mask


def build_eliminated_fiber_system(f: LaurentPolynomial, gamma: InvariantCovector) -> EliminatedFiberSystem:
    n = f.dimension
    if n < 2:
        raise GaussError("elimination needs n >= 2")
    if f.is_zero() or f.is_monomial():
        raise GaussError(f"{f} is a monomial: its zero set in the torus is empty")
    g, s = clear_denominators(f)
    thetas = [log_derivative(g, i + 1) for i in range(n)]
    gm = gamma.gamma
    eqs = [g]
    for i in range(n - 1):
        e = thetas[i] * gm[n - 1] - thetas[n - 1] * gm[i]
        if e.is_zero():
            raise GaussError("degenerate conormal equation")
        eqs.append(e)
    return EliminatedFiberSystem(PolynomialSystem(eqs), n, gamma, s, thetas[n - 1])


def _cleared_degree(equations) -> int:
    return sum(clear_denominators(f)[0].degree() for f in equations)


def _support_key(equations) -> tuple:
    # supports up to translation: the cleared degree depends on nothing else
    return tuple(tuple(sorted(clear_denominators(f)[0].support)) for f in equations)


def compact_presentation(equations: Sequence[LaurentPolynomial], budget: int = 200) -> tuple[list[LaurentPolynomial], list[list[int]]]:
    """Apply a monomial automorphism of the torus that shrinks the cleared degrees.

    Best-first search over x_i -> x_i x_j^(+-1) and x_i -> 1/x_i, expanding at
    most ``budget`` presentations. Gaussian degrees are invariant under these
    maps, and lower degrees mean far fewer homotopy paths heading to infinity.
    Returns (transformed equations, exponent matrix M with a -> M a).
    """
    equations = list(equations)
    n = equations[0].dimension
    moves = []
    for i in range(n):
        neg = _intmath.identity(n)
        neg[i][i] = -1
        moves.append(neg)
        for j in range(n):
            if i != j:
                for sgn in (1, -1):
                    m = _intmath.identity(n)
                    m[i][j] = sgn
                    moves.append(m)
    start = (_cleared_degree(equations), 0, equations, _intmath.identity(n))
    best = start
    frontier = [start]
    seen = {_support_key(equations)}
    counter = 0
    while frontier and counter < budget:
        frontier.sort(key=lambda item: (item[0], item[1]))
        deg, _, eqs, total = frontier.pop(0)
        for m in moves:
            cand = [substitute(f, m) for f in eqs]
            key = _support_key(cand)
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            cdeg = _cleared_degree(cand)
            ctotal = [[sum(m[r][k] * total[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
            item = (cdeg, counter, cand, ctotal)
            if cdeg < best[0]:
                best = item
            # allow sideways and slightly uphill moves to escape local minima
            if cdeg <= deg + 1:
                frontier.append(item)
    return best[2], best[3]


def _sample_seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)]


def count_fiber(fiber: GaussFiberSystem | EliminatedFiberSystem, cfg: TrackerConfig) -> tuple[int, int, int, SolutionSet]:
    """(nonsingular torus roots, singular torus roots, collisions, raw solution set)."""
    sols = solve_square_system(fiber.system, cfg)
    count = singular = collisions = 0
    pts = np.array(sols.points, dtype=complex).reshape(-1, fiber.system.unknowns)
    torus = fiber.torus_mask(pts) if len(pts) else np.zeros(0, bool)
    for k in range(len(sols)):
        if not torus[k]:
            continue
        if sols.singular_flags[k]:
            singular += 1
            continue
        count += 1
        # a transverse root is the endpoint of exactly one path
        if sols.multiplicities[k] > 1:
            collisions += 1
    return count, singular, collisions, sols


def sampled_gaussian_degree(equations: Sequence[LaurentPolynomial], cfg: TrackerConfig | None = None, samples: int = 3) -> GaussDegreeReport:
    """Count conormal/invariant-form intersections for several random gammas.

    Samples with singular torus roots or path collisions are non-generic and
    replaced by fresh draws. If the first ``samples`` valid counts disagree,
    two more are drawn and the mode is returned; ``agreed`` then requires the
    mode to occur at least ``samples + 1`` times.
    """
    cfg = cfg or TrackerConfig()
    if samples < 3:
        raise ValueError("at least 3 samples are required")
    equations = list(equations)
    n = equations[0].dimension
    for f in equations:
        if f.is_zero() or f.is_monomial():
            return GaussDegreeReport(0, agreed=True, bkk=0, warnings=[f"{f} is a monomial: empty variety"])
    warnings = []
    if len(equations) == 1:
        P = newton_polytope(equations[0])
        if P.affine_dim < n:
            return GaussDegreeReport(
                0,
                agreed=True,
                bkk=0,
                warnings=["Newton polytope is lower-dimensional: Gauss map is not dominant, gdeg = 0"],
            )
    equations, _ = compact_presentation(equations)
    seeds = _sample_seeds(cfg.seed, 4 * (samples + 2))
    valid: list[Sample] = []
    drawn: list[Sample] = []
    stats: Counter = Counter()
    bkk = None
    target = samples
    for s in seeds:
        if len(valid) >= target:
            if target == samples and len({v.count for v in valid}) > 1:
                target = samples + 2
            else:
                break
        rng = np.random.default_rng(s)
        gamma = InvariantCovector.random(n, rng)
        if len(equations) == 1 and n >= 2:
            fiber = build_eliminated_fiber_system(equations[0], gamma)
        else:
            fiber = build_ci_conormal_system(equations, gamma)
        if bkk is None and fiber.system.unknowns <= 4:
            bkk = bkk_bound(fiber.equations)
        count, singular, collisions, sols = count_fiber(fiber, cfg.with_seed(s))
        stats.update(sols.path_stats)
        smp = Sample(s, count, singular, collisions, dict(sols.path_stats))
        drawn.append(smp)
        if smp.valid:
            valid.append(smp)
        else:
            log.info("discarding non-generic sample %d (singular=%d collisions=%d)", s, singular, collisions)
    if not valid:
        raise GaussError("no generic sample found")
    counts = Counter(x.count for x in valid)
    gdeg, freq = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    if len(valid) < samples:
        agreed = False
        warnings.append(f"only {len(valid)} generic sample(s) found")
    elif len(counts) == 1:
        agreed = True
    else:
        agreed = freq >= samples + 1
        warnings.append("samples disagree: input possibly non-reduced or non-generic")
    if len(valid) < len(drawn):
        warnings.append(f"{len(drawn) - len(valid)} non-generic sample(s) resampled")
    if bkk is not None and gdeg > bkk:
        warnings.append(f"count {gdeg} exceeds the BKK bound {bkk}")
        agreed = False
    return GaussDegreeReport(gdeg, drawn, agreed, bkk, dict(stats), warnings)


def gaussian_degree_hypersurface(f: LaurentPolynomial, cfg: TrackerConfig | None = None, samples: int = 3) -> GaussDegreeReport:
    if f.dimension > 3:
        raise GaussError("hypersurface Gaussian degrees are supported for n <= 3")
    if f.is_zero():
        raise GaussError("the zero polynomial does not define a hypersurface")
    return sampled_gaussian_degree([f], cfg, samples)


def gaussian_degree_complete_intersection(equations: Sequence[LaurentPolynomial], cfg: TrackerConfig | None = None, samples: int = 3) -> GaussDegreeReport:
    equations = list(equations)
    if not equations:
        raise GaussError("need at least one equation")
    n = equations[0].dimension
    if len(equations) > n:
        raise GaussError(f"codimension {len(equations)} exceeds the torus dimension {n}")
    if n + len(equations) > 6:
        raise GaussError("conormal system exceeds 6 unknowns")
    return sampled_gaussian_degree(equations, cfg, samples)


def companion_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of sum_k coeffs[k] t^k via companion-matrix eigenvalues."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def distinct_torus_roots(coeffs: Sequence[complex]) -> list[complex]:
    """Distinct nonzero roots; numerically split multiple roots are merged.

    Roots within ROOT_DEDUP (relative) are merged outright. A root of
    multiplicity k is only located to about eps^(1/k), so roots where the
    derivative also (nearly) vanishes are merged at a wider radius.
    """
    c = np.asarray(coeffs, dtype=complex)
    roots = companion_roots(c)
    roots = roots[np.abs(roots) > TORUS_FILTER]
    if roots.size == 0:
        return []
    dc = c[1:] * np.arange(1, len(c))
    absc = np.abs(c)

    def rel_derivative(r):
        num = abs(np.polyval(dc[::-1], r)) * abs(r)
        den = sum(absc[k] * abs(r) ** k for k in range(len(c)))
        return num / den

    roots = roots[np.lexsort((roots.imag, roots.real))]
    multiple = np.array([rel_derivative(r) < 1e-3 for r in roots])
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            scale = max(1.0, abs(roots[i]), abs(roots[j]))
            d = abs(roots[i] - roots[j])
            if d <= ROOT_DEDUP * scale or (multiple[i] and multiple[j] and d <= 1e-3 * scale):
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(i)
    return [complex(np.mean(roots[g])) for g in sorted(groups.values())]


def gaussian_degree_1d(f: LaurentPolynomial) -> int:
    """Number of distinct roots of f in C*."""
    if f.dimension != 1:
        raise GaussError("gaussian_degree_1d needs a polynomial in one variable")
    if f.is_zero():
        raise GaussError("the zero polynomial has no finite root set")
    g, _ = clear_denominators(f)
    coeffs = np.zeros(g.degree() + 1, dtype=complex)
    for (e,), c in g:
        coeffs[e] = c
    return len(distinct_torus_roots(coeffs))


def gaussian_degree_special(descriptor) -> int:
    if isinstance(descriptor, ZeroSection):
        return 0
    if isinstance(descriptor, Point):
        return 1
    raise GaussError(f"not a special descriptor: {descriptor!r}")


__all__ = [
    "GaussDegreeReport",
    "GaussError",
    "GaussFiberSystem",
    "InvariantCovector",
    "Point",
    "ZeroSection",
    "build_ci_conormal_system",
    "compact_presentation",
    "build_eliminated_fiber_system",
    "build_gauss_fiber_system",
    "gaussian_degree_1d",
    "gaussian_degree_complete_intersection",
    "gaussian_degree_hypersurface",
    "gaussian_degree_special",
]
