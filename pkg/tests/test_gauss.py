from __future__ import annotations

import numpy as np
import pytest

from gaussrr import _intmath
from gaussrr.gauss import (
    build_eliminated_fiber_system,
    compact_presentation,
    GaussError,
    InvariantCovector,
    Point,
    ZeroSection,
    build_ci_conormal_system,
    build_gauss_fiber_system,
    count_fiber,
    gaussian_degree_1d,
    gaussian_degree_complete_intersection,
    gaussian_degree_hypersurface,
    gaussian_degree_special,
)
from gaussrr.homotopy import TrackerConfig
from gaussrr.laurent import clear_denominators, parse, substitute
from gaussrr.polytope import newton_polytope, normalized_volume

GAMMA2 = InvariantCovector((0.3 + 0.7j, -1.1 + 0.2j))


def test_fiber_system_for_a_line():
    fib = build_gauss_fiber_system(parse("1+x+y", 2), GAMMA2)
    eqs = fib.equations
    assert eqs[0] == parse("1 + x + y", 3)
    assert eqs[1] == parse("x*z", 3) - GAMMA2.gamma[0]
    assert eqs[2] == parse("y*z", 3) - GAMMA2.gamma[1]
    assert fib.shifts == ((0, 0),)


def test_fiber_system_records_shift():
    fib = build_gauss_fiber_system(parse("x^-1+y", 2), GAMMA2)
    assert fib.shifts == ((1, 0),)
    assert fib.equations[0] == parse("1 + x*y", 3)


def test_monomial_multiples_keep_polynomial_fibers():
    f = parse("x^2*y + x^3*y + x^2*y^2", 2)
    fib = build_gauss_fiber_system(f, GAMMA2)
    assert all(e.is_polynomial() for e in fib.equations)
    assert gaussian_degree_hypersurface(f).gdeg == gaussian_degree_hypersurface(parse("1 + x + y", 2)).gdeg


def test_fiber_system_in_one_variable():
    fib = build_gauss_fiber_system(parse("z^2-3z+2", 1), InvariantCovector((1.0,)))
    assert fib.equations[0] == parse("x^2 - 3*x + 2", 2)
    assert fib.equations[1] == parse("2*x^2*y - 3*x*y - 1", 2)


def test_fiber_system_rejects_monomials():
    with pytest.raises(GaussError):
        build_gauss_fiber_system(parse("x*y^2", 2), GAMMA2)


def test_point_as_complete_intersection_has_one_fiber_point():
    eqs = [parse("x - 2", 2), parse("y - 3", 2)]
    fib = build_ci_conormal_system(eqs, GAMMA2)
    count, singular, collisions, sols = count_fiber(fib, TrackerConfig())
    assert (count, singular, collisions) == (1, 0, 0)
    z1, z2, l1, l2 = sols.points[0]
    # lambda_i a_i = gamma_i
    assert np.allclose([l1 * 2, l2 * 3], GAMMA2.gamma)


def test_product_of_lines_has_empty_torus_fiber():
    fib = build_ci_conormal_system([parse("(1+x)*(1+y)", 2)], GAMMA2)
    assert count_fiber(fib, TrackerConfig())[0] == 0


def test_ci_rejects_overdetermined():
    with pytest.raises(GaussError):
        build_ci_conormal_system([parse("x-1", 1), parse("x-2", 1)], InvariantCovector((1.0,)))


@pytest.mark.parametrize(
    "text,n,expected",
    [("1+x+y", 2, 1), ("1+x+y+3*x*y", 2, 2), ("(1+x)*(1+y)", 2, 0), ("1+x+y+z", 3, 1), ("1+x+3*x^2*y^2+y", 2, 4)],
)
def test_hypersurface_gdeg(text, n, expected):
    rep = gaussian_degree_hypersurface(parse(text, n))
    assert rep.gdeg == expected
    assert rep.agreed
    assert rep.gdeg <= rep.bkk


def test_degenerate_product_sits_below_bkk():
    rep = gaussian_degree_hypersurface(parse("(1+x)*(1+y)", 2))
    assert rep.bkk == 2 and rep.gdeg == 0


def test_special_inputs():
    rep = gaussian_degree_hypersurface(parse("x*y^2", 2))
    assert rep.gdeg == 0 and rep.warnings
    rep = gaussian_degree_hypersurface(parse("x^-1 + y^2*x", 2))
    assert rep.gdeg == 0 and any("dimension" in w for w in rep.warnings)


def test_reports_are_reproducible():
    f = parse("1 + 2*x^2 - 1.5*y + 0.7*y^2 + x*y", 2)
    a = gaussian_degree_hypersurface(f, TrackerConfig(seed=5))
    b = gaussian_degree_hypersurface(f, TrackerConfig(seed=5))
    assert a.as_dict() == b.as_dict()


def test_changing_seed_keeps_the_count():
    f = parse("1 + x^3 + y^2 - 2.5*x*y", 2)
    vol = normalized_volume(newton_polytope(f))
    assert vol == 6
    assert {gaussian_degree_hypersurface(f, TrackerConfig(seed=s)).gdeg for s in (1, 2, 3)} == {vol}


def test_more_samples_are_honoured():
    rep = gaussian_degree_hypersurface(parse("1+x+y", 2), samples=5)
    assert len([s for s in rep.samples if s.valid]) == 5


def test_complete_intersection_curve_in_three_space():
    # the line {1+x+y = 0, z = 2} is a translate of V(1+x+y) x {2}; gdeg matches the plane curve
    rep = gaussian_degree_complete_intersection([parse("1+x+y", 3), parse("z-2", 3)])
    assert rep.gdeg == 1 and rep.agreed


@pytest.mark.parametrize("text,expected", [("z^2-3z+2", 2), ("z^2-2z+1", 1), ("z^3-z^2", 1), ("z^-1 - 4 + z", 2)])
def test_gdeg_in_one_variable(text, expected):
    assert gaussian_degree_1d(parse(text, 1)) == expected


def test_gdeg_1d_rejects_zero():
    with pytest.raises(GaussError):
        gaussian_degree_1d(parse("0", 1))


def test_gdeg_1d_hypersurface_path_agrees():
    assert gaussian_degree_hypersurface(parse("z^2-3z+2", 1)).gdeg == 2


def test_special_descriptors():
    assert gaussian_degree_special(ZeroSection(2)) == 0
    assert gaussian_degree_special(Point((2, 3))) == 1
    assert gaussian_degree_special(Point((5,))) == 1
    with pytest.raises(ValueError):
        Point((0, 1))


def test_compact_presentation_undoes_monomial_changes():
    f = parse("1 + x + y", 2)
    spread = substitute(f, [[2, 1], [1, 1]], (1.5, -2))
    (g,), M = compact_presentation([spread])
    assert clear_denominators(g)[0].degree() == 1
    assert abs(_intmath.det(M)) == 1
    assert g == substitute(spread, M)


def test_eliminated_fiber_matches_full_fiber():
    f = parse("1 + 2*x^2 - 1.5*y + 0.7*y^2 + x*y", 2)
    cfg = TrackerConfig()
    full = count_fiber(build_gauss_fiber_system(f, GAMMA2), cfg)[0]
    reduced = count_fiber(build_eliminated_fiber_system(f, GAMMA2), cfg)[0]
    assert full == reduced == normalized_volume(newton_polytope(f))


def test_eliminated_fiber_excludes_singular_points():
    # the node of y^2 = x^2 (x + 1) at (-1, 0) is off the torus, so use a translate
    f = parse("(y-1)^2 - (x-1)^2*(x+1)", 2)
    fib = build_eliminated_fiber_system(f, GAMMA2)
    assert not fib.torus_mask([[1.0, 1.0]])[0]
