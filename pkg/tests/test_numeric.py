import math

import pytest

from lvcycles.pipeline.numeric import (
    IntegrationError,
    ReturnMapError,
    Section,
    boundary_behavior,
    integrate,
    lv_field,
    may_leonard,
    return_map,
    section_from,
)
from lvcycles.pipeline.verify import orthant_radius, spectrum_check, stability_under_refinement

I3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


def limit_cycle_field(eps, R=0.5):
    """r' = eps r (1 - r^2/R^2), theta' = 1, z' = -z around (1, 1, 1)."""

    def f(t, v):
        x, y, z = (c - 1.0 for c in v)
        g = eps * (1.0 - (x * x + y * y) / R**2)
        return (-y + x * g, x + y * g, -z)

    return f


def harmonic(t, v):
    x, y, z = v
    return (-y, x, -z)


def test_harmonic_drift():
    tr = integrate(harmonic, (1.0, 0.0, 0.0), 20 * math.pi, 1e-10)
    x, y, _ = tr.y[-1]
    assert abs(math.hypot(x, y) - 1.0) <= 1e-8
    assert abs(x - 1.0) <= 1e-8 and abs(y) <= 1e-8


def test_equilibrium_stays():
    A = [[-1.0, -0.5, -0.2], [-0.3, -1.0, -0.4], [-0.6, -0.1, -1.0]]
    tr = integrate(lv_field(A), (1.0, 1.0, 1.0), 50.0, 1e-10, positive=True)
    assert tr.y[-1] == (1.0, 1.0, 1.0)


def test_positive_start_required():
    with pytest.raises(IntegrationError):
        integrate(lv_field(I3), (1.0, 0.0, 1.0), 1.0, positive=True)


def test_limit_cycle_radius_and_slope():
    eps = 0.05
    d = return_map(limit_cycle_field(eps), Section(I3, I3, 1), (0.1, 0.9), 6, 1e-10, 20.0)
    (fp,) = d.fixed_points
    assert abs(fp.r - 0.5) < 1e-8
    # linearization r' = -2 eps (r - R) over one period 2 pi
    assert abs(fp.slope - math.exp(-4 * math.pi * eps)) < 1e-4
    assert fp.stable


def test_strong_contraction_without_burn_in():
    def f(t, v):
        x, y, z = v
        g = 1 - (x * x + y * y)
        return (-y + x * g, x + y * g, -z)

    sec = Section(I3, I3, 1, (0.0, 0.0, 0.0))
    d = return_map(f, sec, (0.3, 1.7), 8, 1e-10, 20.0, burn_in=0, positive=False)
    (fp,) = d.fixed_points
    assert abs(fp.r - 1.0) < 1e-8
    assert abs(fp.slope - math.exp(-4 * math.pi)) < 1e-4


def test_linear_center_identity_map():
    sec = Section(I3, I3, 1, (0.0, 0.0, 0.0))
    d = return_map(harmonic, sec, (0.3, 1.7), 5, 1e-10, 20.0, positive=False)
    assert all(abs(b - a) < 1e-8 for a, b in d.samples)


def test_refinement_shift_within_literal_bound():
    f = limit_cycle_field(0.05)
    sec = Section(I3, I3, 1)
    tol = 1e-10
    (fp,) = return_map(f, sec, (0.1, 0.9), 6, tol, 20.0).fixed_points
    c = stability_under_refinement(f, sec, fp, tol, 20.0)
    assert c.fine is not None
    assert c.shift < 10 * tol and c.literal_ok and c.scaled_ok


def test_bad_range():
    with pytest.raises(ReturnMapError):
        return_map(harmonic, Section(I3, I3, 1), (0.5, 0.1))


def test_section_from_needs_rotation():
    C = [[0.0, -1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]]
    with pytest.raises(ReturnMapError):
        section_from(I3, C)
    C[1][0] = -2.0
    assert section_from(I3, C).orientation == -1


def test_orthant_radius():
    T = [[-2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    sec = section_from(T, [[0, -1, 0], [1, 0, 0], [0, 0, -1]])
    # x1 = 1 - r/2 reaches zero at r = 2
    assert orthant_radius(sec) == pytest.approx(2.0)
    assert orthant_radius(section_from(I3, [[0, -1, 0], [1, 0, 0], [0, 0, -1]])) == math.inf


def test_spectrum_check():
    C = [[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, -3.0]]
    got, want, ok = spectrum_check(C, C)
    assert ok and len(got) == 3
    _, _, bad = spectrum_check(I3, C)
    assert not bad


def test_may_leonard_boundary():
    # alpha + beta < 2: interior attractor, the boundary repels
    assert boundary_behavior(lv_field(may_leonard(1.5, 0.3)), 1e-2).verdict == "boundary-repelling"
    # alpha + beta > 2: the heteroclinic cycle on the boundary attracts
    assert boundary_behavior(lv_field(may_leonard(1.8, 0.6)), 1e-2).verdict == "boundary-attracting"


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 2.0])
def test_probe_distance_validated(eps):
    with pytest.raises(ValueError):
        boundary_behavior(lv_field(may_leonard(1.5, 0.3)), eps)
