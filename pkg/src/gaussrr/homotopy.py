"""Total-degree homotopy continuation for square polynomial systems over C.

All paths of a solve are tracked together as numpy batches; each path keeps
its own t and step size, so the result is the same as tracking them one by
one. Predictor is RK4 on the Davidenko equation dx/dt = -H_x^{-1} H_t,
corrector is Newton with at most ``max_corrector_iters`` steps.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .laurent import LaurentPolynomial
from .polytope import MAX_DIM, mixed_volume, newton_polytope

log = logging.getLogger(__name__)

MAX_UNKNOWNS = 6
MAX_PATHS = 20000

CONVERGED, DIVERGED, FAILED = "converged", "diverged", "step-underflow"
_ACTIVE, _CONV, _DIV, _FAIL = 0, 1, 2, 3


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-8
    max_step: float = 0.1
    corrector_tol: float = 1e-11
    max_corrector_iters: int = 3
    jump_ratio: float = 0.25
    divergence: float = 1e8
    endpoint_tol: float = 1e-12
    dedup_radius: float = 1e-6
    singular_cond: float = 1e10
    # paths whose step collapses this close to t=1 are handed to endpoint refinement;
    # off by default because it also rescues paths drifting onto positive-dimensional
    # solution sets off the torus
    endgame_window: float = 0.0
    endzone: float = 0.9
    endzone_ratio: float = 0.75
    seed: int = 42

    def __post_init__(self):
        if not 0 < self.min_step < self.initial_step < 1:
            raise ValueError("need 0 < min_step < initial_step < 1")
        if min(self.corrector_tol, self.endpoint_tol, self.dedup_radius, self.divergence) <= 0:
            raise ValueError("tolerances must be positive")

    def with_seed(self, seed: int) -> "TrackerConfig":
        return replace(self, seed=int(seed))


class PolynomialSystem:
    """Square system of ordinary polynomials (nonnegative exponents) in m unknowns."""

    def __init__(self, equations: Sequence[LaurentPolynomial]):
        equations = list(equations)
        if not equations:
            raise ValueError("empty system")
        m = equations[0].dimension
        if len(equations) != m or any(f.dimension != m for f in equations):
            raise ValueError("system must be square")
        for f in equations:
            if f.is_zero():
                raise ValueError("system contains a zero equation")
            if not f.is_polynomial():
                raise ValueError("system equations must have nonnegative exponents")
        self.equations = equations
        self.unknowns = m
        self._compile()

    def _compile(self):
        m = self.unknowns
        tmax = max(len(f) for f in self.equations)
        E = np.zeros((m, tmax, m), dtype=np.int64)
        C = np.zeros((m, tmax), dtype=complex)
        for i, f in enumerate(self.equations):
            for j, (a, c) in enumerate(f):
                E[i, j] = a
                C[i, j] = c
        self._E, self._C = E, C
        self.max_degree = int(E.max()) if E.size else 0
        self.degrees = [f.degree() for f in self.equations]
        self.coefficient_norms = np.array([f.coefficient_norm() for f in self.equations])
        # derivative tables: d/dx_k of c x^a = a_k c x^(a - e_k)
        self._DE = []
        self._DC = []
        for k in range(m):
            DE = E.copy()
            DE[..., k] = np.maximum(E[..., k] - 1, 0)
            self._DE.append(DE)
            self._DC.append(C * E[..., k])

    def _powers(self, X):
        P, m = X.shape
        pw = np.ones((P, m, self.max_degree + 1), dtype=complex)
        for d in range(1, self.max_degree + 1):
            pw[:, :, d] = pw[:, :, d - 1] * X
        return pw

    @staticmethod
    def _monomials(pw, E):
        # pw: (P, m, D+1); E: (neq, T, m) -> (P, neq, T)
        m = E.shape[-1]
        out = pw[:, 0, :][:, E[..., 0]]
        for j in range(1, m):
            out = out * pw[:, j, :][:, E[..., j]]
        return out

    def evaluate(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        pw = self._powers(X)
        return (self._monomials(pw, self._E) * self._C).sum(-1)

    def evaluate_with_jacobian(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        pw = self._powers(X)
        F = (self._monomials(pw, self._E) * self._C).sum(-1)
        J = np.empty(X.shape + (self.unknowns,), dtype=complex)
        for k in range(self.unknowns):
            J[:, :, k] = (self._monomials(pw, self._DE[k]) * self._DC[k]).sum(-1)
        return F, J

    def jacobian_magnitude(self, X):
        """Row-wise max of sum_a |c_a d/dx_k x^a|: the Jacobian size with no cancellation."""
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        pw = np.abs(self._powers(X))
        out = np.zeros((len(X), self.unknowns))
        for k in range(self.unknowns):
            out = np.maximum(out, (self._monomials(pw, self._DE[k]) * np.abs(self._DC[k])).sum(-1))
        return out

    def relative_residual(self, X) -> np.ndarray:
        """max_i |F_i(x)| / (||c_i||_1 * max(1, ||x||_inf)^deg_i), per point."""
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        F = self.evaluate(X)
        scale = np.maximum(1.0, np.abs(X).max(axis=1))[:, None] ** np.array(self.degrees)[None, :]
        return (np.abs(F) / (self.coefficient_norms[None, :] * scale)).max(axis=1)

    def __repr__(self):
        return f"PolynomialSystem({[str(f) for f in self.equations]})"


@dataclass
class StartSystem:
    degrees: list[int]
    constants: np.ndarray

    def evaluate_with_jacobian(self, X):
        d = np.array(self.degrees)
        F = X ** d[None, :] - self.constants[None, :]
        diag = d[None, :] * X ** (d[None, :] - 1)
        J = np.zeros(X.shape + (X.shape[1],), dtype=complex)
        idx = np.arange(X.shape[1])
        J[:, idx, idx] = diag
        return F, J

    def as_polynomial_system(self) -> PolynomialSystem:
        m = len(self.degrees)
        eqs = []
        for i, (d, c) in enumerate(zip(self.degrees, self.constants)):
            e = tuple(d if j == i else 0 for j in range(m))
            eqs.append(LaurentPolynomial(m, {e: 1.0, (0,) * m: -c}))
        return PolynomialSystem(eqs)


@dataclass
class PathResult:
    status: str
    point: np.ndarray
    t: float
    steps: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


@dataclass
class SolutionSet:
    points: list[np.ndarray]
    singular_flags: list[bool]
    multiplicities: list[int] = field(default_factory=list)
    path_stats: dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.points)


def _check_cap(degrees: Sequence[int]):
    if len(degrees) > MAX_UNKNOWNS:
        raise CapExceeded(f"{len(degrees)} unknowns exceeds the cap of {MAX_UNKNOWNS}")
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    if int(np.prod(degrees)) > MAX_PATHS:
        raise CapExceeded(f"Bezout number {int(np.prod(degrees))} exceeds the cap of {MAX_PATHS}")


def _unit_complex(rng: np.random.Generator, size=None):
    return np.exp(2j * np.pi * rng.random(size))


def bezout_start(degrees: Sequence[int], seed: int | np.random.Generator = 42):
    """Start system x_i^d_i = c_i with random unit-modulus c_i and all of its roots."""
    degrees = [int(d) for d in degrees]
    _check_cap(degrees)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    c = _unit_complex(rng, len(degrees))
    per_axis = []
    for d, ci in zip(degrees, c):
        r = abs(ci) ** (1.0 / d)
        phase = np.angle(ci) / d
        per_axis.append(r * np.exp(1j * (phase + 2 * np.pi * np.arange(d) / d)))
    roots = np.array(list(itertools.product(*per_axis)), dtype=complex).reshape(-1, len(degrees))
    return StartSystem(degrees, c), roots


def _norm_inf(X):
    return np.abs(X).max(axis=-1)


class _Homotopy:
    def __init__(self, target: PolynomialSystem, start: StartSystem, gamma: complex):
        self.target, self.start, self.gamma = target, start, gamma

    def HJ(self, X, t):
        Ft, Jt = self.target.evaluate_with_jacobian(X)
        Fs, Js = self.start.evaluate_with_jacobian(X)
        tt = t[:, None]
        H = (1 - tt) * self.gamma * Fs + tt * Ft
        J = (1 - tt[..., None]) * self.gamma * Js + tt[..., None] * Jt
        return H, J, Ft - self.gamma * Fs

    def velocity(self, X, t):
        _, J, Ht = self.HJ(X, t)
        return -_solve(J, Ht)


def _solve(J, b):
    try:
        return np.linalg.solve(J, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(b)
        for i in range(len(b)):
            out[i] = np.linalg.lstsq(J[i], b[i], rcond=None)[0]
        return out


def track_paths(target: PolynomialSystem, start: StartSystem, points, cfg: TrackerConfig, gamma: complex):
    """Track a batch of start points from t=0 to t=1; returns a list of PathResult."""
    X = np.array(points, dtype=complex).reshape(-1, target.unknowns)
    P = len(X)
    t = np.zeros(P)
    h = np.full(P, cfg.initial_step)
    streak = np.zeros(P, dtype=np.int64)
    status = np.full(P, _ACTIVE)
    steps = np.zeros(P, dtype=np.int64)
    hom = _Homotopy(target, start, gamma)
    with np.errstate(all="ignore"):
        while True:
            act = np.flatnonzero(status == _ACTIVE)
            if act.size == 0:
                break
            x0, t0 = X[act], t[act]
            rest = 1.0 - t0
            # approach t=1 geometrically so slowly diverging paths cannot snap onto
            # a finite root in one long final step
            cap = np.where((t0 > cfg.endzone) & (rest > 1e-10), cfg.endzone_ratio * rest, rest)
            dt = np.minimum(h[act], cap)
            dtc = dt[:, None]
            k1 = hom.velocity(x0, t0)
            k2 = hom.velocity(x0 + 0.5 * dtc * k1, t0 + 0.5 * dt)
            k3 = hom.velocity(x0 + 0.5 * dtc * k2, t0 + 0.5 * dt)
            k4 = hom.velocity(x0 + dtc * k3, t0 + dt)
            x1 = x0 + dtc / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            t1 = t0 + dt
            ok = np.zeros(act.size, dtype=bool)
            alive = np.isfinite(x1).all(axis=1)
            moved = _norm_inf(x1 - x0)
            for it in range(cfg.max_corrector_iters):
                H, J, _ = hom.HJ(x1, t1)
                delta = -_solve(J, H)
                x1 = x1 + delta
                scale = np.maximum(1.0, _norm_inf(x1))
                size = _norm_inf(delta)
                if it == 0:
                    # a large first correction means the predictor left the path's basin
                    alive &= size <= cfg.jump_ratio * moved + 1e-9 * scale
                small = size <= cfg.corrector_tol * scale
                ok |= small & alive
                alive &= np.isfinite(x1).all(axis=1)
                if ok[alive].all():
                    break
            ok &= alive
            steps[act] += 1
            good, bad = act[ok], act[~ok]
            X[good] = x1[ok]
            t[good] = np.where(1.0 - t1[ok] < 1e-15, 1.0, t1[ok])
            streak[good] += 1
            grow = good[streak[good] >= 5]
            h[grow] = np.minimum(h[grow] * 1.5, cfg.max_step)
            streak[grow] = 0
            h[bad] *= 0.5
            streak[bad] = 0
            status[good[t[good] >= 1.0]] = _CONV
            status[good[_norm_inf(X[good]) > cfg.divergence]] = _DIV
            under = bad[h[bad] < cfg.min_step]
            # a path that blows up while its step collapses is going to infinity
            big = under[_norm_inf(X[under]) > np.sqrt(cfg.divergence)]
            status[under] = _FAIL
            status[under[1.0 - t[under] <= cfg.endgame_window]] = _CONV
            status[big] = _DIV
    names = {_CONV: CONVERGED, _DIV: DIVERGED, _FAIL: FAILED}
    return [PathResult(names[s], X[i].copy(), float(t[i]), int(steps[i])) for i, s in enumerate(status)]


def track_path(target: PolynomialSystem, start: StartSystem, point, cfg: TrackerConfig | None = None, gamma: complex | None = None) -> PathResult:
    cfg = cfg or TrackerConfig()
    if gamma is None:
        gamma = complex(_unit_complex(np.random.default_rng(cfg.seed)))
    x = np.asarray(point, dtype=complex).reshape(1, -1)
    F, _ = start.evaluate_with_jacobian(x)
    if np.abs(F).max() > 1e-10:
        raise ValueError("start point does not solve the start system")
    return track_paths(target, start, x, cfg, gamma)[0]


def refine(system: PolynomialSystem, X, tol: float, max_iters: int = 60):
    """Newton refinement of endpoints; returns (points, residuals).

    Iteration continues past ``tol`` while the residual keeps dropping, so
    that endpoints at a multiple root (where Newton is only linear) still
    end up close enough together to be clustered.
    """
    X = np.array(X, dtype=complex).reshape(-1, system.unknowns)
    with np.errstate(all="ignore"):
        res = system.relative_residual(X)
        active = np.isfinite(X).all(axis=1)
        for _ in range(max_iters):
            todo = np.flatnonzero(active)
            if todo.size == 0:
                break
            F, J = system.evaluate_with_jacobian(X[todo])
            delta = _solve(J, F)
            Xn = X[todo] - delta
            rn = system.relative_residual(Xn)
            better = np.isfinite(rn) & (rn <= res[todo]) & np.isfinite(Xn).all(axis=1)
            X[todo[better]] = Xn[better]
            res[todo[better]] = rn[better]
            tiny = _norm_inf(delta) <= 1e-15 * np.maximum(1.0, _norm_inf(Xn))
            active[todo[~better | tiny | (rn == 0)]] = False
    return X, res


def condition_numbers(system: PolynomialSystem, X) -> np.ndarray:
    """Condition number of the Jacobian with rows scaled by their cancellation-free magnitude."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    if len(X) == 0:
        return np.zeros(0)
    _, J = system.evaluate_with_jacobian(X)
    rows = system.jacobian_magnitude(X)[..., None]
    rows[rows == 0] = 1.0
    with np.errstate(all="ignore"):
        c = np.linalg.cond(J / rows)
    return np.where(np.isfinite(c), c, np.inf)


def canonical_order(X) -> np.ndarray:
    X = np.asarray(X)
    if len(X) == 0:
        return np.zeros(0, dtype=np.int64)
    keys = []
    for j in reversed(range(X.shape[1])):
        keys.append(np.round(X[:, j].imag, 12))
        keys.append(np.round(X[:, j].real, 12))
    return np.lexsort(keys)


def cluster(X, radius: float) -> list[list[int]]:
    """Single-linkage clusters at relative radius; input assumed canonically ordered."""
    n = len(X)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n:
        norms = np.maximum(1.0, _norm_inf(X))
        for i in range(n):
            d = _norm_inf(X[i + 1 :] - X[i])
            thr = radius * np.maximum(norms[i], norms[i + 1 :])
            for j in np.flatnonzero(d <= thr):
                a, b = find(i), find(i + 1 + j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _endpoints(system: PolynomialSystem, results, cfg: TrackerConfig):
    """Refined, canonically ordered endpoints with clusters as lists of path indices."""
    idx = np.array([k for k, r in enumerate(results) if r.converged], dtype=np.int64)
    ends = np.array([results[k].point for k in idx], dtype=complex).reshape(-1, system.unknowns)
    ends, res = refine(system, ends, cfg.endpoint_tol)
    keep = res < cfg.endpoint_tol
    ends, idx = ends[keep], idx[keep]
    order = canonical_order(ends)
    ends, idx = ends[order], idx[order]
    groups = cluster(ends, cfg.dedup_radius)
    points = [ends[g[0]] for g in groups]
    conds = condition_numbers(system, np.array(points).reshape(-1, system.unknowns))
    return points, [[int(idx[i]) for i in g] for g in groups], conds, int((~keep).sum())


def solve_square_system(system: PolynomialSystem, cfg: TrackerConfig | None = None, retracks: int = 2) -> SolutionSet:
    """All isolated solutions reachable by a total-degree homotopy.

    Several paths ending at one well-conditioned root means some path jumped;
    those paths are tracked again with a smaller step, up to ``retracks`` times.
    """
    cfg = cfg or TrackerConfig()
    _check_cap(system.degrees)
    rng = np.random.default_rng(cfg.seed)
    start, roots = bezout_start(system.degrees, rng)
    gamma = complex(_unit_complex(rng))
    results = track_paths(system, start, roots, cfg, gamma)
    points, groups, conds, unrefined = _endpoints(system, results, cfg)
    tight = cfg
    for _ in range(retracks):
        jumped = [k for g, c in zip(groups, conds) if len(g) > 1 and c <= cfg.singular_cond for k in g]
        if not jumped:
            break
        tight = replace(tight, initial_step=tight.initial_step / 4, max_step=tight.max_step / 4)
        log.debug("re-tracking %d paths that met at a nonsingular root", len(jumped))
        for k, r in zip(jumped, track_paths(system, start, roots[jumped], tight, gamma)):
            results[k] = r
        points, groups, conds, unrefined = _endpoints(system, results, cfg)
    stats = {CONVERGED: 0, DIVERGED: 0, FAILED: 0, "unrefined": unrefined, "total": len(results)}
    for r in results:
        stats[r.status] += 1
    return SolutionSet(
        points=points,
        # several paths meeting at one endpoint can only happen at a multiple root
        singular_flags=[bool(c > cfg.singular_cond) or len(g) > 1 for c, g in zip(conds, groups)],
        multiplicities=[len(g) for g in groups],
        path_stats=stats,
    )


def bkk_bound(equations: Sequence[LaurentPolynomial]) -> int:
    """Mixed volume of the Newton polytopes of a square Laurent system."""
    equations = list(equations)
    m = len(equations)
    if m == 0 or any(f.dimension != m for f in equations):
        raise ValueError("bkk_bound needs a square system")
    if m > MAX_DIM:
        raise CapExceeded(f"BKK bound limited to {MAX_DIM} unknowns")
    return mixed_volume(*(newton_polytope(f) for f in equations))
