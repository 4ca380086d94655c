import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmax.geometry import (BallSpec, ConeSpec, Variant, admissibility, admissibility_many,
                               annulus_index, as_point, cone_contains, enclosing_ball,
                               sample_ball, switch_index)

coord = st.floats(-6, 6, allow_nan=False)


@pytest.mark.parametrize("x, variant, expected", [
    ([0.0], Variant.FULL, 1.0),
    ([2.0, 0.0], Variant.FULL, 0.5),
    ([0.0], Variant.REDUCED, 0.5),
    ([0.5], Variant.FULL, 1.0),
    ([1.5], Variant.REDUCED, 0.5),
    ([4.0], Variant.REDUCED, 0.25),
])
def test_admissibility_values(x, variant, expected):
    assert admissibility(x, variant) == expected


@given(st.lists(coord, min_size=1, max_size=3))
def test_admissibility_many_matches_scalar(x):
    assert admissibility_many(np.array([x]))[0] == pytest.approx(admissibility(x))


@given(st.lists(coord, min_size=1, max_size=3))
def test_reduced_never_exceeds_full(x):
    assert admissibility(x, Variant.REDUCED) <= admissibility(x, Variant.FULL)


@pytest.mark.parametrize("x, y, t, expected", [
    ([0.0], [0.0], 0.5, True),
    ([0.0], [0.0], 2.0, False),
    ([2.0], [2.0], 0.6, False),
    ([0.0], [0.5], 0.5, False),  # open in the aperture
    ([0.0], [0.49], 0.5, True),
])
def test_cone_membership(x, y, t, expected):
    assert cone_contains(ConeSpec(1.0, 1.0), x, y, t) is expected


def test_cone_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        cone_contains(ConeSpec(), [0.0], [0.0], 0.0)


def test_reduced_cone_pins_parameters():
    cone = ConeSpec.reduced()
    assert (cone.aperture, cone.cutoff, cone.variant) == (1.0, 1.0, Variant.REDUCED)
    assert cone.height([0.0]) == 0.5


def test_cone_spec_validates():
    with pytest.raises(ValueError):
        ConeSpec(0.0, 1.0)
    with pytest.raises(ValueError):
        ConeSpec(1.0, -1.0)


@pytest.mark.parametrize("factor, k", [(1.5, 0), (3.0, 1), (8.0, 3), (2.0, 1), (4.0, 2), (0.0, 0)])
def test_annulus_index_examples(factor, k):
    assert annulus_index([0.0], 0.7, [factor * 0.7]) == k


@given(st.floats(1e-3, 5), st.floats(1e-3, 1e3))
def test_annulus_index_brackets_distance(t, ratio):
    k = annulus_index([0.0], t, [ratio * t])
    rho = ratio * t
    if k == 0:
        assert rho < 2 * t
    else:
        assert math.ldexp(t, k) <= rho < math.ldexp(t, k + 1)


@pytest.mark.parametrize("A, K", [(1.0, 0), (2.0, 0), (3.0, 1), (8.0, 2), (0.5, 0), (16.0, 3)])
def test_switch_index(A, K):
    assert switch_index(A) == K


@pytest.mark.parametrize("A, k, factor", [(1.0, 0, 4.0), (8.0, 1, 16.0), (3.0, 0, 6.0)])
def test_enclosing_ball_examples(A, k, factor):
    assert enclosing_ball([0.0], 1.0, k, A).radius == factor


@given(st.floats(0.3, 8), st.integers(0, 6), st.floats(0.01, 1), st.floats(-1, 1),
       st.floats(0, 1))
def test_enclosing_ball_holds_shell(A, k, t, v, frac):
    # y anywhere in B_{At}(x), xi on the outer edge of C_k(B_t(y))
    x = np.array([0.3])
    y = x + A * t * v * 0.999
    rho = t * (2.0 ** k * (1 + frac) if k else 2.0 * frac)
    xi = y + rho
    ball = enclosing_ball(x, t, k, A)
    assert abs(xi[0] - x[0]) <= ball.radius * (1 + 1e-12)


def test_ball_spec_validation():
    with pytest.raises(ValueError):
        BallSpec((0.0,), 0.0)
    assert BallSpec((1.0, 2.0), 1.0).dim == 2


def test_as_point():
    assert as_point(2.0, 1).tolist() == [2.0]
    assert as_point([1, 2]).tolist() == [1.0, 2.0]
    with pytest.raises(ValueError):
        as_point([1.0, 2.0], 3)


def test_sample_ball_inside():
    rng = np.random.default_rng(0)
    for d in (1, 2, 3):
        pts = sample_ball(rng, 5000, np.ones(d), 0.5, d)
        assert np.all(np.linalg.norm(pts - 1.0, axis=1) < 0.5)
        # uniform: the mean radius fraction is d / (d + 1)
        frac = np.linalg.norm(pts - 1.0, axis=1) / 0.5
        assert abs(frac.mean() - d / (d + 1)) < 0.02
