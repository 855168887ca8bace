"""Tests for the coefficient engine."""

import json
import math
import random

import pytest

from singularheat.coeff import (BoundaryConditionKind, CoefficientTable,
                                DEFAULT_DELTA, ExponentPair, base_epsilon,
                                build_table, closed_form_crosscheck,
                                exponent_grid, recursion_check)
from singularheat.errors import AdmissibilityError
from singularheat.specfun import beta_fn, gamma

D = BoundaryConditionKind.DIRICHLET
R = BoundaryConditionKind.ROBIN


def _random_pair(rng, complex_ok=True):
    while True:
        a1 = complex(rng.uniform(-3, 0.9),
                     rng.uniform(-1, 1) if complex_ok else 0.0)
        a2 = complex(rng.uniform(-3, 0.9),
                     rng.uniform(-1, 1) if complex_ok else 0.0)
        try:
            return ExponentPair(a1, a2)
        except AdmissibilityError:
            continue


def test_admissibility_rejections():
    with pytest.raises(AdmissibilityError):
        ExponentPair(1.2, 0.3)          # Re(alpha1) >= 1
    with pytest.raises(AdmissibilityError):
        ExponentPair(0.3, 0.7)          # sum is an integer
    with pytest.raises(AdmissibilityError):
        ExponentPair(0.3, 0.7 + 1e-8)   # sum within default delta of 1
    ExponentPair(0.3, 0.7 + 1e-4)       # outside delta: fine


def test_swap_symmetry_of_base():
    pair = ExponentPair(0.3, 0.4)
    swapped = ExponentPair(0.4, 0.3)
    for bc in (D, R):
        assert base_epsilon(bc, pair) == pytest.approx(base_epsilon(bc, swapped),
                                                       rel=1e-14)


def test_neumann_minus_dirichlet_closed_form():
    # the difference of the two signs isolates twice the first term of the
    # closed form, which also equals the half-line image-kernel integral
    pair = ExponentPair(0.3, 0.4)
    diff = base_epsilon(R, pair) - base_epsilon(D, pair)
    want = (2.0 * 2.0 ** (-0.7) / math.sqrt(math.pi) * gamma(0.65)
            * beta_fn(0.7, 0.6))
    assert abs(diff - want) < 1e-13 * abs(want)


def test_classical_limit_of_dirichlet_base():
    # as both exponents -> 0 the Dirichlet coefficient approaches -2/sqrt(pi),
    # the classical flat heat-content slope per boundary point
    val = base_epsilon(D, ExponentPair(1e-5, 1.5e-5))
    assert abs(val - (-2.0 / math.sqrt(math.pi))) < 1e-3


def test_recursion_residuals_random_sweep():
    rng = random.Random(3141592653)
    for _ in range(100):
        pair = _random_pair(rng)
        for bc in (D, R):
            res = recursion_check(bc, pair)
            for name, r in res.items():
                assert r <= 1e-10, f"{name} residual {r} at {pair}"


def test_recursion_example_points():
    for r in recursion_check(D, ExponentPair(0.3, 0.4)).values():
        assert r <= 1e-10
    for r in recursion_check(R, ExponentPair(0.3 + 0.2j, 0.4 - 0.1j)).values():
        assert r <= 1e-10


def test_crosscheck_residuals():
    for pair in (ExponentPair(0.3, 0.4), ExponentPair(0.25, 0.5),
                 ExponentPair(-0.7, 0.2), ExponentPair(0.1 + 0.3j, 0.2 - 0.2j)):
        res = closed_form_crosscheck(pair)
        assert set(res) >= {"eps9", "eps10", "eps11", "eps19"}
        for name, r in res.items():
            assert r <= 1e-10, f"{name} residual {r} at {pair}"


def test_crosscheck_random_sweep():
    rng = random.Random(271828)
    for _ in range(50):
        pair = _random_pair(rng)
        for name, r in closed_form_crosscheck(pair).items():
            assert r <= 1e-10, f"{name} residual {r} at {pair}"


def test_table_identities():
    pair = ExponentPair(0.3, 0.4)
    for bc in (D, R):
        t = build_table(bc, pair)
        assert t["eps6"] == t["eps0"]
        assert t["eps12"] == -t["eps0"]
        assert t["eps13"] == 0
        assert t["eps9"] == t["eps11"]
    td = build_table(D, pair)
    assert "eps15" not in td.values
    # Dirichlet eps2 equals the Theorem form -(eps1 + eps3)/2
    assert td["eps2"] == pytest.approx(-0.5 * (td["eps1"] + td["eps3"]), rel=1e-14)


def test_eps19_simplified_form():
    # eps19 reduces to (a1 + a2)/(3 - a1 - a2) times the difference of the
    # Robin and Dirichlet base coefficients
    pair = ExponentPair(0.3, 0.4)
    t = build_table(R, pair)
    want = (0.7 / 2.3) * (base_epsilon(R, pair) - base_epsilon(D, pair))
    assert abs(t["eps19"] - want) <= 1e-12 * abs(want)


def test_table_swap_duality():
    rng = random.Random(99)
    for _ in range(25):
        pair = _random_pair(rng)
        swapped = ExponentPair(pair.alpha2, pair.alpha1)
        for bc in (D, R):
            t = build_table(bc, pair)
            s = build_table(bc, swapped)
            swaps = {"eps1": "eps3", "eps4": "eps7", "eps5": "eps8"}
            fixed = ["eps0", "eps2", "eps6", "eps9", "eps10", "eps11",
                     "eps12", "eps13", "eps14"]
            if bc is R:
                swaps["eps17"] = "eps18"
                fixed += ["eps15", "eps16", "eps19"]
            for k, v in swaps.items():
                scale = max(abs(t[k]), 1e-30)
                assert abs(t[k] - s[v]) <= 1e-12 * scale
                assert abs(t[v] - s[k]) <= 1e-12 * max(abs(t[v]), 1e-30)
            for k in fixed:
                assert abs(t[k] - s[k]) <= 1e-12 * max(abs(t[k]), 1e-30)


def test_meromorphy_probe_sum_to_one():
    # eps0 has a simple pole at alpha1 + alpha2 = 1: the product with
    # (alpha1 + alpha2 - 1) must stay bounded approaching it off-integer
    vals = []
    for eps in (1e-2, 1e-3, 1e-4, 1e-5):
        pair = ExponentPair(0.3, 0.7 - eps + 1e-7j)
        vals.append(abs((pair.sigma - 1.0) * base_epsilon(D, pair)))
    assert max(vals) < 10 * min(vals)
    assert all(math.isfinite(v) for v in vals)


def test_json_round_trip():
    pair = ExponentPair(0.3 + 0.1j, 0.4)
    for bc in (D, R):
        t = build_table(bc, pair)
        blob = json.dumps(t.to_json_dict())
        back = CoefficientTable.from_json_dict(json.loads(blob))
        assert back.bc == t.bc
        for k in t.keys:
            assert back[k] == t[k]
        obj = json.loads(blob)
        assert obj["alpha1"] == [0.3, 0.1]
        for key in obj:
            if key.startswith("eps"):
                assert isinstance(obj[key], list) and len(obj[key]) == 2


def test_exponent_grid():
    pair = ExponentPair(0.3, 0.4)
    grid = exponent_grid(pair, 1, 2)
    assert grid == pytest.approx([0.0, 0.15, 0.65, 1.0, 1.15])
