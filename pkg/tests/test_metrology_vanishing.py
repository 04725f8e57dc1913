import numpy as np
import pytest

from printproof.errors import DegenerateSegments, IdenticalVPs, TooFewSegments
from printproof.metrology import fit_horizon, fit_vanishing_point
from printproof.metrology.annotations import LineSegment
from printproof.metrology.synthetic import make_camera
from printproof.metrology.vanishing import VanishingPoint


def _seg(sid, a, b, axis="x"):
    return LineSegment(sid, a, b, axis=axis)


def test_exact_intersection():
    vp = fit_vanishing_point([
        _seg("a", (0.0, 0.0), (5.0, 5.0)),        # y = x
        _seg("b", (0.0, 2.0), (5.0, -3.0)),       # y = -x + 2
    ])
    assert vp.point() == pytest.approx((1.0, 1.0), abs=1e-9)
    assert vp.rms_residual == pytest.approx(0.0, abs=1e-12)
    assert vp.support == 2


def test_parallel_segments_vp_at_infinity():
    vp = fit_vanishing_point([
        _seg("a", (0.0, 0.0), (7.0, 0.0)),
        _seg("b", (0.0, 3.0), (7.0, 3.0)),
    ])
    assert vp.is_infinite
    assert vp.point() is None
    dx, dy = vp.direction()
    assert abs(dx) == pytest.approx(1.0, abs=1e-12)
    assert dy == pytest.approx(0.0, abs=1e-12)


def test_too_few_segments():
    with pytest.raises(TooFewSegments):
        fit_vanishing_point([_seg("a", (0.0, 0.0), (5.0, 5.0))])


def test_collinear_segments_degenerate():
    with pytest.raises(DegenerateSegments):
        fit_vanishing_point([
            _seg("a", (0.0, 0.0), (5.0, 5.0)),
            _seg("b", (6.0, 6.0), (9.0, 9.0)),
        ])


def test_short_segments_degenerate():
    with pytest.raises(DegenerateSegments):
        fit_vanishing_point([
            _seg("a", (0.0, 0.0), (1.0, 1.0)),
            _seg("b", (0.0, 2.0), (1.0, 1.5)),
        ])


def test_synthetic_box_vp_accuracy():
    cam = make_camera(focal_mm=32, width=800, height=600,
                      position=(20.0, 0.0, 150.0), yaw_deg=9, pitch_deg=-3)
    # six world segments along the x axis at assorted depths and heights
    segs = []
    for i, (y, z) in enumerate([(350, 0), (350, 120), (420, 0), (420, 200),
                                (500, 60), (560, 150)]):
        a = cam.project((-140.0, float(y), float(z)))
        b = cam.project((150.0, float(y), float(z)))
        segs.append(_seg(f"s{i}", a, b))
    vp = fit_vanishing_point(segs)
    truth_h = cam.vanishing_point_h((1.0, 0.0, 0.0))
    truth = (truth_h[0] / truth_h[2], truth_h[1] / truth_h[2])
    got = vp.point()
    assert np.hypot(got[0] - truth[0], got[1] - truth[1]) < 1.5


def test_orientation_flip_invariance():
    base = [
        _seg("a", (0.0, 0.0), (5.0, 5.0)),
        _seg("b", (0.0, 2.0), (5.0, -3.0)),
        _seg("c", (2.0, 0.5), (6.0, 3.2)),
    ]
    flipped = [LineSegment(s.id, s.b, s.a, axis=s.axis) for s in base]
    vp1 = fit_vanishing_point(base)
    vp2 = fit_vanishing_point(flipped)
    assert vp1.point() == pytest.approx(vp2.point(), abs=1e-9)


def test_subdivision_invariance():
    whole = [
        _seg("a", (0.0, 0.0), (8.0, 8.0)),
        _seg("b", (0.0, 2.0), (8.0, -6.0)),
    ]
    split = [
        _seg("a1", (0.0, 0.0), (4.0, 4.0)),
        _seg("a2", (4.0, 4.0), (8.0, 8.0)),
        _seg("b", (0.0, 2.0), (8.0, -6.0)),
    ]
    p1 = fit_vanishing_point(whole).point()
    p2 = fit_vanishing_point(split).point()
    assert p1 == pytest.approx(p2, abs=1e-9)


def test_horizon_from_two_finite_vps():
    vp_a = fit_vanishing_point([
        _seg("a", (-10.0, 90.0), (-5.0, 95.0)),
        _seg("b", (-10.0, 110.0), (-5.0, 105.0)),
    ])  # meets at (0, 100)
    vp_b = fit_vanishing_point([
        _seg("c", (990.0, 90.0), (995.0, 95.0)),
        _seg("d", (990.0, 110.0), (995.0, 105.0)),
    ])  # meets at (1000, 100)
    line = fit_horizon(vp_a, vp_b)
    # y = 100: normal (0, 1), offset -100
    assert abs(line[0]) < 1e-9
    assert line[1] == pytest.approx(1.0, abs=1e-9) or line[1] == pytest.approx(-1.0, abs=1e-9)
    assert line[2] / line[1] == pytest.approx(-100.0, abs=1e-6)


def test_horizon_finite_plus_infinite():
    finite = VanishingPoint(homogeneous=np.array([0.0, 0.0, 1.0]),
                            rms_residual=0.0, support=2)
    infinite = VanishingPoint(homogeneous=np.array([1.0, 0.0, 0.0]),
                              rms_residual=0.0, support=2)
    line = fit_horizon(finite, infinite)
    # line y = 0
    assert abs(line[0]) < 1e-12
    assert abs(line[2]) < 1e-12
    assert abs(line[1]) == pytest.approx(1.0)


def test_identical_vps_rejected():
    vp = VanishingPoint(homogeneous=np.array([0.0, 0.0, 1.0]),
                        rms_residual=0.0, support=2)
    with pytest.raises(IdenticalVPs):
        fit_horizon(vp, vp)


def test_synthetic_horizon_accuracy():
    cam = make_camera(focal_mm=28, width=800, height=600,
                      position=(0.0, 0.0, 155.0), yaw_deg=6, pitch_deg=-2)
    segs_x, segs_y = [], []
    for i, (y, z) in enumerate([(380, 0), (440, 90), (520, 180)]):
        segs_x.append(_seg(f"x{i}", cam.project((-150, y, z)), cam.project((150, y, z))))
    for i, x in enumerate((-120, 0, 130)):
        segs_y.append(_seg(f"y{i}", cam.project((x, 330, 0)), cam.project((x, 560, 0)), axis="y"))
    horizon = fit_horizon(fit_vanishing_point(segs_x), fit_vanishing_point(segs_y))
    truth = cam.horizon_h()
    # compare vertical position at the image center column
    x_mid = 400.0
    y_est = -(horizon[0] * x_mid + horizon[2]) / horizon[1]
    y_true = -(truth[0] * x_mid + truth[2]) / truth[1]
    assert abs(y_est - y_true) < 2.0
