import os
import subprocess
import sys
from fractions import Fraction

import numpy as np

from bubble_correction import kernels
from bubble_correction.polynomials import Polynomial

from conftest import random_homogeneous


def test_poly_arrays_follow_term_order():
    p = Polynomial(2, {(0, 2): Fraction(1, 2), (1, 0): 3})
    exps, coeffs = kernels.poly_arrays(p)
    assert exps.tolist() == [[1, 0], [0, 2]]
    assert coeffs.tolist() == [3.0, 0.5]


def test_eval_polynomial_matches_exact_evaluation(rng):
    for _ in range(10):
        n = rng.choice([2, 3, 4])
        p = random_homogeneous(rng, n, rng.choice([1, 2, 3, 4]))
        pts = np.array(
            [[rng.uniform(-2, 2) for _ in range(n)] for _ in range(20)]
        )
        fast = kernels.eval_polynomial(p, pts)
        slow = np.array([p.evaluate(list(pt)) for pt in pts])
        assert np.allclose(fast, slow, rtol=1e-12, atol=1e-12)


def test_numpy_and_active_backends_agree(rng):
    n = 3
    p = random_homogeneous(rng, n, 4)
    exps, coeffs = kernels.poly_arrays(p)
    pts = np.random.default_rng(0).uniform(-1.5, 1.5, (64, n))
    a = kernels.eval_poly(pts, exps, coeffs)
    b = kernels.eval_poly_numpy(pts, exps, coeffs)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)

    center = np.zeros(n)
    a = kernels.bubble_values(pts, 0.7, center, (n - 2) / 2.0)
    b = kernels.bubble_values_numpy(pts, 0.7, center, (n - 2) / 2.0)
    assert np.allclose(a, b, rtol=1e-13)

    sources = np.array([[2.0, 0.0, 0.0], [0.0, -3.0, 1.0]])
    weights = np.array([1.0, 0.5])
    a = kernels.tail_values(pts, sources, weights, n - 2)
    b = kernels.tail_values_numpy(pts, sources, weights, n - 2)
    assert np.allclose(a, b, rtol=1e-12)


def test_empty_polynomial_evaluates_to_zero():
    exps, coeffs = kernels.poly_arrays(Polynomial.zero(3))
    pts = np.ones((5, 3))
    assert kernels.eval_poly(pts, exps, coeffs).tolist() == [0.0] * 5


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ)
    env["BUBBLE_CORRECTION_NO_NUMBA"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", "from bubble_correction import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_backend_is_numba_when_available():
    numba_present = True
    try:
        import numba  # noqa: F401
    except ImportError:
        numba_present = False
    env = dict(os.environ)
    env.pop("BUBBLE_CORRECTION_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", "from bubble_correction import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    expected = "numba" if numba_present else "numpy"
    assert out.stdout.strip() == expected


def test_thread_cap_env_var_is_accepted():
    env = dict(os.environ)
    env["BUBBLE_CORRECTION_THREADS"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", "from bubble_correction import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.returncode == 0
