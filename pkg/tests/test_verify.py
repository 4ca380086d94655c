import math

import numpy as np
import pytest

from gaussmax.functions import TestFunction, default_corpus
from gaussmax.geometry import ConeSpec
from gaussmax.maximal import SearchParams
from gaussmax.quadrature import gamma_ball_erf
from gaussmax.verify import (LemmaId, annulus_bounds, annulus_decomposition, cone_constant,
                             log_tail_term, margin_l1a, margin_l2, margin_l3, minimal_kmax,
                             proof_constant, ratio_scan, verify_lemma, whole_space)

GOLDEN_LOG_C = 499.57200634246647


def test_l2_boundary_equality():
    assert margin_l2(np.array([[1.0]]), np.array([[2.0]]), 1.0)[0] == pytest.approx(0.0, abs=1e-15)


def test_l1a_at_origin():
    rng = np.random.default_rng(0)
    t = rng.uniform(1e-3, 1.0, 200)
    y = rng.uniform(-1, 1, 200) * t
    m = margin_l1a(np.zeros((200, 1)), y[:, None], t, 1.0, 1.0)
    assert np.all(m >= -1e-12)


def test_l3_example():
    mass = gamma_ball_erf([1.0], 1.0)
    assert mass == pytest.approx(0.49766, abs=1e-5)
    bound = 2 / math.sqrt(math.pi) * math.e ** 2 * math.e ** -1
    assert bound == pytest.approx(3.067, abs=1e-3)
    assert margin_l3(np.array([[1.0]]), 1.0)[0] == pytest.approx(math.log(bound / mass), rel=1e-12)


@pytest.mark.parametrize("lemma", list(LemmaId))
def test_lemma_suites_small(lemma):
    for d in (1, 2):
        rep = verify_lemma(lemma, samples=5000, seed=3, params={"d": d, "A": 2.0, "a": 0.5,
                                                                 "alpha": 2.0})
        assert rep.violations == 0 and rep.worst_margin >= -1e-12
        assert rep.samples == 5000 and rep.seed == 3


def test_verify_independent_of_workers():
    one = verify_lemma("L4", samples=60_000, seed=7, params={"d": 2})
    two = verify_lemma("L4", samples=60_000, seed=7, params={"d": 2}, workers=2)
    assert one == two


def test_verify_validates():
    with pytest.raises(ValueError):
        verify_lemma("L1a", samples=999)
    with pytest.raises(ValueError):
        verify_lemma("L1a", params={"A": 0.0})
    with pytest.raises(ValueError):
        verify_lemma("L3", params={"d": 4})
    with pytest.raises(ValueError):
        verify_lemma("L9")


def test_golden_constant():
    pc = proof_constant(1.0, 1.0, 1)
    assert pc.K == 0 and pc.head_terms == []
    assert pc.alpha == 1.0
    assert pc.lemma2_factor == pytest.approx(math.e ** 3, rel=1e-15)
    assert pc.log_C_total == pytest.approx(GOLDEN_LOG_C, rel=1e-13)
    assert pc.C_total == pytest.approx(math.exp(GOLDEN_LOG_C), rel=1e-12)
    assert math.isfinite(pc.tail_sum) and pc.tail_sum > 0


@pytest.mark.parametrize("d", [1, 2, 3])
def test_constant_grid(d):
    grid = [0.5, 1.0, 2.0, 4.0]
    for A in grid:
        for a in grid:
            pc = proof_constant(A, a, d)
            assert pc.log_C_total >= 0
            assert math.isfinite(pc.log_tail_sum)
            # eventually monotone: terms past the peak keep falling
            k0 = max(pc.K, 1)
            terms = [log_tail_term(k, A, a, d) for k in range(k0, k0 + pc.tail_terms + 3)]
            peak = int(np.argmax(terms))
            assert np.all(np.diff(terms[peak:]) < 0)


def test_constant_monotone():
    grid = [0.5, 1.0, 2.0, 4.0]
    for d in (1, 2, 3):
        for fixed in grid:
            in_a = [proof_constant(fixed, a, d).log_C_total for a in grid]
            in_A = [proof_constant(A, fixed, d).log_C_total for A in grid]
            assert in_a == sorted(in_a) and in_A == sorted(in_A)


def test_constant_validates_and_serialises():
    with pytest.raises(ValueError):
        proof_constant(1.0, 1.0, 4)
    with pytest.raises(ValueError):
        proof_constant(-1.0, 1.0, 1)
    big = proof_constant(4.0, 4.0, 3).to_dict()
    assert big["C_total"] is None and math.isfinite(big["log_C_total"])
    assert cone_constant(ConeSpec.reduced(), 2) == proof_constant(1.0, 1.0, 2)


def test_annulus_inside_first_cell():
    u = TestFunction.bump(0.0, 0.05)
    t = 0.5
    parts = annulus_decomposition(u, [0.0], t, kmax=3)
    assert parts[0] > 0 and parts[1:] == [0.0, 0.0, 0.0]


def test_annulus_sum_and_bounds():
    rng = np.random.default_rng(4)
    for u in default_corpus(1):
        for _ in range(3):
            y = rng.uniform(-2, 2, 1)
            t = float(rng.uniform(0.1, 1.0))
            kmax = minimal_kmax(u, y, t)
            parts = annulus_decomposition(u, y, t, kmax, tol=1e-7)
            assert abs(sum(parts) - whole_space(u, y, t, tol=1e-7)) <= 2e-7
            bounds = annulus_bounds(u, y, t, kmax)
            for k in range(1, kmax + 1):
                assert parts[k] <= bounds[k] * (1 + 1e-9) + 1e-12


def test_annulus_rejects_short_cover():
    u = TestFunction.ball(2.0, 0.5)
    with pytest.raises(ValueError):
        annulus_decomposition(u, [0.0], 0.25, kmax=2)
    with pytest.raises(ValueError):
        annulus_decomposition(TestFunction.hermite(1), [0.0], 0.5, kmax=2)


def test_scan_examples():
    cone = ConeSpec(1.0, 1.0)
    u = TestFunction.ball(0.0, 1.0)
    [rep] = ratio_scan([u], [[0.0]], cone)
    cell = rep.points[0]
    assert cell["hl_value"] == pytest.approx(1.0, abs=1e-12)
    assert cell["nt_value"] <= 1.0 and rep.max_ratio <= 1.0 + 1e-12
    assert rep.passed
    xs = [[-1.0], [0.5], [2.0]]
    plain = ratio_scan([TestFunction.bump(1.5, 0.3)], xs, cone)[0]
    tripled = ratio_scan([TestFunction.bump(1.5, 0.3).scaled(3.0)], xs, cone)[0]
    assert [p["ratio"] for p in plain.points] == pytest.approx([p["ratio"] for p in tripled.points],
                                                               rel=1e-14)


def test_scan_report_shape():
    reps = ratio_scan(default_corpus(1)[:2], [[0.0], [1.0]], ConeSpec(1.0, 1.0),
                      SearchParams(coarse_grid=16))
    assert len(reps) == 2
    d = reps[0].to_dict()
    assert set(d) >= {"function_id", "cone", "points", "max_ratio", "proof_constant", "passed"}
    assert d["function_id"] == "ball:0,1"
    assert d["log_proof_constant"] == pytest.approx(GOLDEN_LOG_C, rel=1e-13)
