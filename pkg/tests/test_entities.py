import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mpga.algebra import M2, M3, M4, geometric_product, inner, polar, regressive_join, wedge
from mpga.entities import (
    angle_lines,
    as_entity,
    classify,
    distance_line_point,
    distance_parallel_lines,
    distance_points,
    line_params_m2,
    make_hyperplane,
    make_line,
    make_plane,
    make_point,
    metric_kind,
    normalize_point,
    orientation,
    parametrize_line_m2,
    point_coords,
    project,
    reflect,
    reject,
    scale,
    simplex_volume,
    triangle_area,
    worldline_m3,
    worldline_m4,
    worldline_params_m3,
    worldline_params_m4,
)
from mpga.errors import ParametrizationError, UndefinedMeasure, UndefinedOrientation, UsageError


def test_constructors():
    assert make_point(M2, 1, 1, 0) == M2.blade("e12") + M2.blade("e20")
    assert make_point(M4, 1, 0, 0, 0, 0) == M4.blade("e1234")
    p = make_point(M3, 2, 1, -1, 3)
    assert (p["e123"], p["e320"], p["e130"], p["e210"]) == (2, 1, -1, 3)
    line = regressive_join(make_point(M3, 1, 0, 0, 0), make_point(M3, 1, 0, 1, 3))
    assert as_entity(line).role == "line"
    assert wedge(line, line).is_zero()
    assert make_plane(M3, 1, 2, 3, 4).role == "plane"
    assert make_hyperplane(M4, 1, 2, 3, 4, 5).grade == 1
    with pytest.raises(UsageError):
        make_line(M3, 1, 0, 0, 1, 0, 0)  # p10 p23 != 0 violates the Pluecker condition
    with pytest.raises(UsageError):
        make_point(M3, 1, 2)


def test_classification_examples():
    c = classify(M2.blade("e1"))
    assert (c.metric_kind, c.locus, c.orientation) == ("proper", "finite", "future")
    assert metric_kind(-M3.blade("e23") + M3.blade("e12")) == "null"
    a, b = 0.3, 1.1
    sigma_b = (
        M4.blade("e41", math.cos(a) * math.sin(b))
        + M4.blade("e42", math.sin(a) * math.sin(b))
        + M4.blade("e43", math.cos(b))
    )
    assert metric_kind(sigma_b) == "improper"
    # e0 is at infinity, not null
    c0 = classify(M2.blade("e0"))
    assert c0.locus == "at_infinity" and c0.metric_kind is None
    assert classify(polar(M2.vector([0.2, 2.0, 1.0]))).locus == "at_infinity"


def test_orientation_examples():
    assert orientation(M2.blade("e1")) == "future"
    assert orientation(-M2.blade("e1")) == "past"
    assert orientation(worldline_m3(0.3, 0.0)) == "past"
    assert orientation(worldline_m4(0.3, 1.0, 0.5)) == "past"
    with pytest.raises(UndefinedOrientation):
        orientation(M2.blade("e2"))


def test_distance_points_examples():
    o = make_point(M2, 1, 0, 0)
    assert distance_points(o, make_point(M2, 1, 0, 2)) == pytest.approx(2.0)
    assert distance_points(o, make_point(M2, 1, 1, 2)) == pytest.approx(math.sqrt(3))
    with pytest.raises(UndefinedMeasure) as e:
        distance_points(o, make_point(M2, 1, 2, 1))
    assert e.value.reason == "improper"
    with pytest.raises(UndefinedMeasure) as e:
        distance_points(o, make_point(M2, 1, 1, 1))
    assert e.value.reason == "null"
    assert distance_points(o, make_point(M2, 1, 1, 1), formal=True) == pytest.approx(0.0, abs=1e-12)
    assert distance_points(o, o) == 0.0


def test_distance_line_point_examples():
    p = make_point(M2, 1, 0, 2)
    assert distance_line_point(M2.blade("e2"), p) == pytest.approx(2.0)
    assert distance_line_point(M2.blade("e2"), make_point(M2, 1, 5, 0)) == pytest.approx(0.0)
    with pytest.raises(UndefinedMeasure):
        distance_line_point(M2.blade("e1"), p)


def test_distance_parallel_lines_examples():
    a = M2.blade("e2")
    assert distance_parallel_lines(a, a - M2.blade("e0", 2)) == pytest.approx(2.0)
    assert distance_parallel_lines(a, a) == 0.0
    with pytest.raises(UndefinedMeasure):
        distance_parallel_lines(M2.blade("e1"), M2.blade("e1") + M2.blade("e0"))


def test_angle_examples():
    a = (M2.blade("e0") + M2.blade("e1", 3) - M2.blade("e2", 2)) / math.sqrt(5)
    b = (M2.blade("e0", -2) + M2.blade("e1", 2) + M2.blade("e2")) / math.sqrt(3)
    phi = angle_lines(a, b)
    assert phi == pytest.approx(1.35, abs=0.01)
    assert math.tanh(phi) == pytest.approx(7 / 8, abs=1e-12)
    assert angle_lines(a, a) == pytest.approx(0.0, abs=1e-7)
    with pytest.raises(UndefinedMeasure):
        angle_lines(M2.blade("e1"), -M2.blade("e1"))
    # parallel proper lines: zero angle
    assert angle_lines(M2.blade("e1"), M2.blade("e1") + M2.blade("e0")) == pytest.approx(0.0)


def test_angle_m3_coplanar():
    l1 = worldline_m3(0.2, 0.4)
    l2 = worldline_m3(0.2, 1.0)
    assert angle_lines(l1, l2) == pytest.approx(0.6, abs=1e-12)
    with pytest.raises(UsageError):
        angle_lines(l1, worldline_m3(0.2, 0.4) + M3.blade("e10"))


def test_area_and_volume():
    pts = [make_point(M2, 1, 0, 0), make_point(M2, 1, 0, 2), make_point(M2, 1, 0.5, 1)]
    assert triangle_area(*pts) == pytest.approx(0.5)
    hom = np.array([[1, 0, 0], [1, 0, 2], [1, 0.5, 1]])
    assert triangle_area(*pts) == pytest.approx(abs(np.linalg.det(hom)) / 2)
    col = [make_point(M2, 1, 0, 0), make_point(M2, 1, 0, 1), make_point(M2, 1, 0, 2)]
    assert triangle_area(*col) == pytest.approx(0.0, abs=1e-15)
    coords = [(0, 0, 0), (0.2, 0.1, 1), (-0.1, 0.3, 2), (0.1, -0.2, 3)]
    vol = simplex_volume(*(make_point(M3, 1, *c) for c in coords))
    hom = np.array([[1, *c] for c in coords])
    assert vol == pytest.approx(abs(np.linalg.det(hom)) / 6, rel=1e-12)


def test_line_parametrisation_m2():
    assert parametrize_line_m2(0, 0) == M2.blade("e1")
    a = M2.vector([1, 3, -2]) / math.sqrt(5)
    d, phi, o = line_params_m2(a)
    assert math.tanh(phi) == pytest.approx(2 / 3) and round(phi, 2) == 0.80
    with pytest.raises(ParametrizationError):
        line_params_m2(M2.blade("e2"))


@given(st.floats(-5, 5), st.floats(-3, 3), st.sampled_from(["future", "past"]))
def test_line_parametrisation_roundtrip(d, phi, orient):
    assert line_params_m2(parametrize_line_m2(d, phi, orient)) == pytest.approx((d, phi, orient), abs=1e-12)


def test_worldlines():
    assert worldline_m3(0, 0) == M3.blade("e12")
    phi = 0.7
    assert worldline_m4(0, math.pi / 2, phi).allclose(M4.blade("e234", math.sinh(phi)) + M4.blade("e321", math.cosh(phi)))
    with pytest.raises(ParametrizationError):
        worldline_params_m3(worldline_m3(0.1, 0.2) + M3.blade("e10", 0.5) - M3.blade("e30", 0.0))
    with pytest.raises(ParametrizationError):
        worldline_params_m3(M3.blade("e23"))


@given(st.floats(-math.pi + 1e-6, math.pi), st.floats(0.01, 3))
def test_worldline_m3_roundtrip(alpha, phi):
    assert worldline_params_m3(worldline_m3(alpha, phi)) == pytest.approx((alpha, phi), abs=1e-9)


@given(st.floats(-math.pi + 1e-6, math.pi), st.floats(0.05, math.pi - 0.05), st.floats(0.01, 3))
def test_worldline_m4_roundtrip(alpha, beta, phi):
    assert worldline_params_m4(worldline_m4(alpha, beta, phi)) == pytest.approx((alpha, beta, phi), abs=1e-9)


def test_project_reject_reflect(rng):
    for _ in range(20):
        a = M2.vector(rng.normal(size=3))
        b = M2.vector(rng.normal(size=3))
        assume_ok = abs(b.square()) > 1e-3
        if not assume_ok:
            continue
        assert (project(a, b) + reject(a, b)).allclose(a)
        assert reflect(b, b).allclose(b)
    # bottom-up reflection keeps the angle to the mirror
    a = parametrize_line_m2(0.0, 0.3)
    b = parametrize_line_m2(0.0, 0.9)
    r = reflect(b, a)
    assert orientation(r) == "future"
    assert angle_lines(b, r) == pytest.approx(angle_lines(b, a))
    assert angle_lines(a, r) == pytest.approx(2 * angle_lines(a, b))


def test_reflection_of_m3_line_in_plane_uses_minus_sign():
    plane = M3.blade("e1")
    line = worldline_m3(0.0, 0.5)  # moves along +x
    r = reflect(plane, line)
    # mirror image moves along -x and stays past-oriented like the input
    assert r.allclose(worldline_m3(math.pi, 0.5))


def test_scale():
    p = scale(make_point(M2, 1, 2, 4), make_point(M2, 1, 0, 0), 0.5)
    assert point_coords(p) == pytest.approx((1, 2))


# ------------------------------------------------------------ properties

coord = st.floats(-3, 3)


@st.composite
def timelike_triple_m2(draw):
    pts = []
    t = 0.0
    x = draw(coord)
    for _ in range(3):
        t += draw(st.floats(0.5, 2))
        x += draw(st.floats(-0.4, 0.4))
        pts.append((x, t))
    return pts


@given(timelike_triple_m2())
def test_reverse_triangle_inequality(pts):
    p, r, q = (make_point(M2, 1, *c) for c in pts)
    try:
        pq, pr, rq = distance_points(p, q), distance_points(p, r), distance_points(r, q)
    except UndefinedMeasure:
        assume(False)
    assert pq >= pr + rq - 1e-12


@given(coord, coord, st.floats(0.5, 3), st.floats(-0.9, 0.9), st.floats(0.05, 0.95))
def test_distance_additivity(x, t, dt, v, s):
    p = make_point(M2, 1, x, t)
    q = make_point(M2, 1, x + v * dt, t + dt)
    r = normalize_point(p + (q - p) * s)
    assert distance_points(p, q) == pytest.approx(distance_points(p, r) + distance_points(r, q), rel=1e-9)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_angle_additivity(fa, fb, fc):
    fa, fb, fc = sorted((fa, fb, fc))
    assume(fb - fa > 1e-3 and fc - fb > 1e-3)
    a, b, c = (parametrize_line_m2(0.0, f) for f in (fa, fb, fc))
    assert angle_lines(a, c) == pytest.approx(angle_lines(a, b) + angle_lines(b, c), rel=1e-9, abs=1e-12)


@given(coord, coord, coord, coord)
def test_distance_matches_coordinates(x1, t1, x2, t2):
    p, q = make_point(M2, 1, x1, t1), make_point(M2, 1, x2, t2)
    dt2 = (t2 - t1) ** 2 - (x2 - x1) ** 2
    assume(dt2 > 1e-6)
    assert distance_points(p, q) == pytest.approx(math.sqrt(dt2), rel=1e-12)


@given(st.lists(coord, min_size=3, max_size=3), st.lists(coord, min_size=3, max_size=3))
def test_join_of_points_satisfies_pluecker(p, q):
    line = regressive_join(make_point(M3, 1, *p), make_point(M3, 1, *q))
    pl = line["e10"] * line["e23"] + line["e20"] * line["e31"] + line["e30"] * line["e12"]
    assert abs(pl) <= 1e-12 * max(1.0, line.scale_of() ** 2)


def test_incidence():
    a = M2.vector([0.4, 1.2, 0.5])
    assert regressive_join(wedge(M2.blade("e0"), a), a).is_zero()
    p = make_point(M2, 1, 0.3, 0.7)
    perp = inner(a, p)
    assert regressive_join(perp, p).is_zero()
    l3 = worldline_m3(0.2, 0.3)
    p3 = make_point(M3, 1, 1, 2, 3)
    assert regressive_join(inner(l3, p3), p3).is_zero()
