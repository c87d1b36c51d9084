"""Combinatorial Euler characteristics of torus hypersurfaces.

These are independent oracles for the Gaussian degree: for a Newton
nondegenerate f, Khovanskii's formula gives chi(V(f)) = (-1)^(n-1) n! vol(Newton(f)),
and in the plane Pick's theorem rewrites the volume as 2I + B - 2.
Nothing here calls the Gauss-fiber machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _intmath
from .gauss import TORUS_FILTER, companion_roots
from .homotopy import PolynomialSystem, TrackerConfig, solve_square_system
from .laurent import LaurentPolynomial, clear_denominators, log_derivative
from .polytope import lattice_point_counts, newton_polytope, normalized_volume

FACE_RESIDUAL = 1e-9
UNIVARIATE_CRITICAL = 1e-6

NONDEGENERATE, DEGENERATE, INCONCLUSIVE = "nondegenerate", "degenerate", "inconclusive"


class EulerError(ValueError):
    pass


@dataclass
class ChiReport:
    chi: int
    method: str
    nondegenerate: bool | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"chi": self.chi, "method": self.method, "nondegenerate": self.nondegenerate, **self.details}


@dataclass
class Verdict:
    status: str
    face: tuple[tuple[int, ...], ...] = ()
    witness: tuple[complex, ...] = ()
    faces_checked: int = 0

    @property
    def nondegenerate(self) -> bool:
        return self.status == NONDEGENERATE

    def as_dict(self) -> dict:
        out = {"status": self.status, "faces_checked": self.faces_checked}
        if self.status == DEGENERATE:
            out["face"] = [list(v) for v in self.face]
            out["witness"] = [[w.real, w.imag] for w in self.witness]
        return out

    def __str__(self):
        if self.status == DEGENERATE:
            wit = ", ".join(f"{w.real:.6g}{w.imag:+.6g}i" for w in self.witness)
            return f"degenerate(face {list(self.face)}) witness ({wit})"
        return self.status


def _require_hypersurface(f: LaurentPolynomial):
    if f.is_zero() or f.is_monomial():
        raise EulerError(f"{f} is a monomial: its zero set in the torus is empty")
    if f.dimension > 3:
        raise EulerError("Euler characteristic oracles support n <= 3")


def chi_nondegenerate_hypersurface(f: LaurentPolynomial) -> ChiReport:
    """(-1)^(n-1) times the normalized volume of the Newton polytope."""
    _require_hypersurface(f)
    n = f.dimension
    vol = normalized_volume(newton_polytope(f))
    method = "one_dim" if n == 1 else "khovanskii"
    return ChiReport((-1) ** (n - 1) * vol, method, details={"normalized_volume": vol})


def chi_curve_pick(f: LaurentPolynomial) -> ChiReport:
    """chi = -(2I + B - 2) from the lattice points of the Newton polygon."""
    _require_hypersurface(f)
    if f.dimension != 2:
        raise EulerError("the Pick oracle needs n = 2")
    P = newton_polytope(f)
    if P.affine_dim < 2:
        raise EulerError("Newton polygon is not full-dimensional")
    interior, boundary = lattice_point_counts(P)
    chi = -(2 * interior + boundary - 2)
    vol = normalized_volume(P)
    if vol != 2 * interior + boundary - 2:
        raise EulerError(f"Pick identity violated: volume {vol}, I={interior}, B={boundary}")
    return ChiReport(chi, "pick", details={"interior": interior, "boundary": boundary, "normalized_volume": vol})


def chi_complement(f: LaurentPolynomial) -> int:
    """Euler characteristic of the torus minus V(f); chi of the torus itself is 0."""
    return -chi_nondegenerate_hypersurface(f).chi


# ---------------------------------------------------------------------------
# nondegeneracy


def _face_polynomial(f: LaurentPolynomial, face_vertices, k: int):
    """Rewrite f restricted to a k-dimensional face as a Laurent polynomial in k variables.

    Returns (p, U) where U is unimodular and z_i = prod_j w_j^U[j][i] (w_j = 1
    for j >= k) maps torus points of p to torus points of f_F.
    """
    n = f.dimension
    v0 = face_vertices[0]
    base = [tuple(a - b for a, b in zip(v, v0)) for v in face_vertices[1:]]
    r = _intmath.rank(base) if base else 0
    terms = {}
    for a, c in f:
        d = tuple(x - y for x, y in zip(a, v0))
        if _intmath.rank(base + [d]) == r:
            terms[d] = c
    if k == n:
        return LaurentPolynomial(n, terms), _intmath.identity(n)
    U, rk = _intmath.row_echelon_unimodular(list(terms), n)
    assert rk == k
    reduced = {}
    for d, c in terms.items():
        e = _intmath.matvec(U, d)
        assert all(x == 0 for x in e[k:])
        reduced[e[:k]] = c
    return LaurentPolynomial(k, reduced), U


def _lift_witness(w, U, n: int) -> tuple[complex, ...]:
    full = list(w) + [1.0 + 0j] * (n - len(w))
    out = []
    for i in range(n):
        z = 1.0 + 0j
        for j in range(n):
            if U[j][i]:
                z *= full[j] ** U[j][i]
        out.append(complex(z))
    return tuple(out)


def _univariate_critical(p: LaurentPolynomial):
    g, _ = clear_denominators(p)
    coeffs = np.zeros(g.degree() + 1, dtype=complex)
    for (e,), c in g:
        coeffs[e] = c
    dc = coeffs[1:] * np.arange(1, len(coeffs))
    absc = np.abs(coeffs)
    for r in companion_roots(coeffs):
        if abs(r) <= TORUS_FILTER:
            continue
        num = abs(np.polyval(dc[::-1], r)) * abs(r)
        den = float(np.sum(absc * np.abs(r) ** np.arange(len(coeffs))))
        if num <= UNIVARIATE_CRITICAL * den:
            return (complex(r),)
    return None


def _multivariate_critical(p: LaurentPolynomial, cfg: TrackerConfig):
    """Common torus zero of p, theta_1 p, ..., theta_k p via all square subsystems."""
    k = p.dimension
    eqs = [p] + [log_derivative(p, i + 1) for i in range(k)]
    shift = clear_denominators(p)[1]
    cleared = []
    for e in eqs:
        if e.is_zero():
            cleared.append(None)
        else:
            cleared.append(e.shift(shift))
    full = [c for c in cleared if c is not None]
    if len(full) < k:
        # p is (after reduction) independent of some variable; the face was mis-dimensioned
        raise EulerError("face polynomial does not depend on all face coordinates")
    checker = _ResidualCheck(full)
    for subset in itertools.combinations(range(len(full)), k):
        sub = [full[i] for i in subset]
        if any(s.is_monomial() for s in sub):
            continue
        try:
            sols = solve_square_system(PolynomialSystem(sub), cfg)
        except ValueError:
            continue
        for x in sols.points:
            if (np.abs(x) > TORUS_FILTER).all() and checker(x):
                return tuple(complex(v) for v in x)
    return None


class _ResidualCheck:
    """|q(x)| <= tol * sum_a |c_a x^a| for every polynomial q: invariant under monomial scaling."""

    def __init__(self, polys):
        self.polys = polys

    def __call__(self, x) -> bool:
        x = np.asarray(x, dtype=complex)
        if not ((np.abs(x) > TORUS_FILTER) & (np.abs(x) < 1 / TORUS_FILTER)).all():
            return False
        for p in self.polys:
            terms = np.array([c * np.prod(x ** np.array(a)) for a, c in p])
            if abs(terms.sum()) > FACE_RESIDUAL * np.abs(terms).sum():
                return False
        return True


def nondegeneracy_check(f: LaurentPolynomial, cfg: TrackerConfig | None = None) -> Verdict:
    """Look for a critical torus zero of f restricted to each face of its Newton polytope."""
    _require_hypersurface(f)
    cfg = cfg or TrackerConfig()
    n = f.dimension
    P = newton_polytope(f)
    faces = P.faces()
    checked = 0
    # smallest faces first: a degenerate edge also produces near-solutions at
    # infinity for every larger face containing it, and the edge is the real culprit
    for face in sorted(faces, key=lambda s: (len(s), sorted(s))):
        verts = [P.vertices[i] for i in sorted(face)]
        k = _intmath.affine_rank(verts)
        if k == 0:
            continue
        p, U = _face_polynomial(f, verts, k)
        checked += 1
        if k == 1:
            w = _univariate_critical(p)
        else:
            w = _multivariate_critical(p, cfg)
        if w is not None:
            return Verdict(DEGENERATE, tuple(verts), _lift_witness(w, U, n), checked)
    if n > 3:
        return Verdict(INCONCLUSIVE, faces_checked=checked)
    return Verdict(NONDEGENERATE, faces_checked=checked)
