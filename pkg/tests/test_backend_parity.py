import os
import subprocess
import sys

import numpy as np
import pytest

from digraph_pstar import _kernels_py as py

cy = pytest.importorskip("digraph_pstar._kernels")

PARAMS = [(p, b1) for p in (2, 3, 4, 6) for b1 in (-0.01, -0.3, -1.0, -4.0, -12.0)]


def _close(a, b, tol):
    assert len(a) == len(b)
    for u, v in zip(a, b):
        assert u == pytest.approx(v, abs=tol, rel=tol)


class TestScalars:
    def test_ell(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            p = int(rng.integers(2, 7))
            b1, b2, x = rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(1e-6, 1 - 1e-6)
            assert cy.ell(p, b1, b2, x) == pytest.approx(py.ell(p, b1, b2, x), rel=1e-14,
                                                          abs=1e-14)
            assert cy.ell_prime(p, b1, b2, x) == pytest.approx(
                py.ell_prime(p, b1, b2, x), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_critical(self, p):
        assert cy.beta1_critical(p) == py.beta1_critical(p)
        assert cy.beta2_critical(p) == py.beta2_critical(p)

    @pytest.mark.parametrize("p,b2", [(2, 2.5), (3, 1.2), (4, 7.0), (2, 1.0)])
    def test_inflections(self, p, b2):
        _close(cy.inflections(p, b2), py.inflections(p, b2), 1e-12)


class TestSolvers:
    @pytest.mark.parametrize("p,offset", PARAMS)
    def test_curve_solve(self, p, offset):
        b1 = py.beta1_critical(p) + offset
        _close(cy.curve_solve(p, b1, 1e-13), py.curve_solve(p, b1, 1e-13), 1e-10)

    @pytest.mark.parametrize("p,offset", [(2, 0.01), (3, 0.5), (4, 3.0), (6, 10.0)])
    def test_q_inverse_solve(self, p, offset):
        b2 = py.beta2_critical(p) + offset
        _close(cy.q_inverse_solve(p, b2, 1e-13), py.q_inverse_solve(p, b2, 1e-13), 1e-10)

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_bipodal_solve(self, p):
        rng = np.random.default_rng(p)
        for _ in range(25):
            e = rng.uniform(0.05, 0.95)
            s = rng.uniform(e**p + 1e-3, e - 1e-3) if e - e**p > 2e-3 else None
            if s is None:
                continue
            a = cy.bipodal_solve(p, e, s, 1e-6, 50.0, 1e-13)
            b = py.bipodal_solve(p, e, s, 1e-6, 50.0, 1e-13)
            assert a[-1] == b[-1]
            _close(a[:-1], b[:-1], 1e-9)

    def test_equal_max_gap(self):
        for p, b1, b2 in ((2, -3.0, 3.0), (2, -3.0, 2.5), (3, -2.0, 2.0), (4, -5.0, 6.0)):
            _close(cy.equal_max_gap(p, b1, b2), py.equal_max_gap(p, b1, b2), 1e-10)


def test_python_backend_selected_by_env():
    env = dict(os.environ, DIGRAPH_PSTAR_BACKEND="python")
    code = ("import digraph_pstar as d; print(d.BACKEND); "
            "print(repr(d.entropy(3, 0.5, 0.2)))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "python"
    from digraph_pstar import entropy
    assert float(out[1]) == pytest.approx(entropy(3, 0.5, 0.2), abs=1e-12)
