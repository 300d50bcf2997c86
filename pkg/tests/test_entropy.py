import math

import numpy as np
import pytest

from digraph_pstar import (BACKEND, ConvergenceError, DomainError, RegionES, classify_es,
                           curve_point, entropy, entropy_gradient, entropy_I, entropy_p2_closed,
                           rate_function, solve_bipodal)
from digraph_pstar._backend import kernels
from digraph_pstar.scalar import LOG2


def _interior_samples(p, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        e = rng.uniform(0.02, 0.98)
        s = rng.uniform(e**p, e)
        if classify_es(p, e, s) is RegionES.INTERIOR and (s - e**p) > 1e-3 and (e - s) > 1e-3:
            out.append((float(e), float(s)))
    return out


class TestClassify:
    @pytest.mark.parametrize("e,s,tag", [
        (0.5, 0.3, RegionES.INTERIOR),
        (0.5, 0.25, RegionES.LOWER_BOUNDARY),
        (0.5, 0.6, RegionES.OUTSIDE),
        (0.5, 0.5, RegionES.UPPER_BOUNDARY),
        (0.0, 0.0, RegionES.CORNER),
        (1.0, 1.0, RegionES.CORNER),
        (0.5, 0.1, RegionES.OUTSIDE),
        (1.2, 1.0, RegionES.OUTSIDE),
        (0.5, math.nan, RegionES.OUTSIDE),
    ])
    def test_examples(self, e, s, tag):
        assert classify_es(2, e, s) is tag

    def test_tolerance(self):
        assert classify_es(2, 0.5, 0.25 + 5e-10) is RegionES.LOWER_BOUNDARY
        assert classify_es(2, 0.5, 0.25 + 5e-9) is RegionES.INTERIOR
        assert classify_es(2, 0.5, 0.25 + 5e-9, tol=1e-8) is RegionES.LOWER_BOUNDARY
        with pytest.raises(DomainError):
            classify_es(2, 0.5, 0.3, tol=0.0)


class TestSolveBipodal:
    def test_symmetric_example(self):
        prof = solve_bipodal(2, 0.5, 0.3)
        assert prof.x1 == pytest.approx(0.5 - math.sqrt(0.05), abs=1e-14)
        assert prof.x2 == pytest.approx(0.5 + math.sqrt(0.05), abs=1e-14)
        assert prof.lam == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("closed_form", [True, False])
    def test_asymmetric_example(self, closed_form):
        prof = solve_bipodal(2, 0.4, 0.28, closed_form=closed_form)
        assert prof.x1 == pytest.approx((1 - math.sqrt(0.52)) / 2, abs=1e-9)
        assert prof.x2 == pytest.approx((1 + math.sqrt(0.52)) / 2, abs=1e-9)
        assert prof.lam == pytest.approx(0.63867504905630728, abs=1e-9)
        assert prof.beta1 == pytest.approx(-prof.beta2, abs=1e-8)

    def test_near_critical_degenerate(self):
        e = 2 / 3
        prof = solve_bipodal(3, e, e**3 + 1e-8)
        assert prof.degenerate
        assert prof.x1 == prof.x2 == e

    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_constraint_residuals(self, p):
        for e, s in _interior_samples(p, 200, seed=p):
            prof = solve_bipodal(p, e, s, closed_form=False)
            if prof.degenerate:
                continue
            me, ms = prof.moments(p)
            assert abs(me - e) <= 1e-9 and abs(ms - s) <= 1e-9
            assert 0.0 <= prof.lam <= 1.0

    @pytest.mark.parametrize("p", [2, 3])
    def test_profile_is_curve_point(self, p):
        for e, s in _interior_samples(p, 30, seed=10 + p):
            prof = solve_bipodal(p, e, s, closed_form=False)
            if prof.degenerate:
                continue
            pt = curve_point(p, prof.beta1)
            assert pt.beta2 == pytest.approx(prof.beta2, abs=1e-8)
            assert pt.x1 == pytest.approx(prof.x1, abs=1e-8)
            assert pt.x2 == pytest.approx(prof.x2, abs=1e-8)

    def test_uniqueness_under_bracket_perturbation(self):
        count = 1000 if BACKEND == "cython" else 100
        for e, s in _interior_samples(3, count, seed=7):
            roots = []
            for guard, span in ((1e-6, 50.0), (1e-7, 37.0), (3e-6, 80.0)):
                b1, _, _, _, status = kernels.bipodal_solve(3, e, s, guard, span, 1e-13)
                if status:
                    break
                roots.append(b1)
            else:
                assert max(roots) - min(roots) <= 1e-8

    def test_not_interior(self):
        with pytest.raises(DomainError):
            solve_bipodal(2, 0.5, 0.25)
        with pytest.raises(DomainError):
            solve_bipodal(2, 0.5, 0.7)

    def test_convergence_error_type(self):
        assert issubclass(ConvergenceError, RuntimeError)


class TestEntropy:
    def test_examples(self):
        assert entropy(3, 0.7, 0.343) == pytest.approx(-0.082282878505051846, abs=1e-15)
        assert entropy(2, 0.6, 0.6) == -LOG2
        assert entropy(2, 0.5, 0.3) == pytest.approx(-0.10363269482489714, abs=1e-15)
        assert entropy(2, 0.5, 0.3) == pytest.approx(-entropy_I(0.5 + math.sqrt(0.05)), abs=1e-14)
        assert entropy(2, 0.5, 0.6) == -math.inf

    def test_zero_rate_point(self):
        v = entropy(2, 0.5, 0.25)
        assert v == 0.0 and math.copysign(1.0, v) == 1.0

    def test_closed_form_examples(self):
        assert entropy_p2_closed(0.5, 0.25) == 0.0
        assert entropy_p2_closed(0.5, 0.5) == -LOG2
        assert entropy_p2_closed(0.4, 0.28) == pytest.approx(
            -entropy_I(0.5 + math.sqrt(0.13)), abs=1e-15)
        with pytest.raises(DomainError):
            entropy_p2_closed(0.5, 0.1)

    def test_general_solver_matches_closed_form(self):
        worst = 0.0
        for e in np.linspace(0.0, 1.0, 60):
            for s in np.linspace(0.0, 1.0, 60):
                e, s = float(e), float(s)
                if classify_es(2, e, s) is RegionES.OUTSIDE:
                    continue
                worst = max(worst, abs(entropy(2, e, s, closed_form=False)
                                       - entropy_p2_closed(e, s)))
        assert worst <= 1e-8

    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("e", [0.3, 0.5, 0.8])
    def test_boundary_continuity(self, p, e):
        lower, upper = -entropy_I(e), -LOG2
        gaps_lo, gaps_up = [], []
        for eps in (1e-3, 1e-5, 1e-7):
            gaps_lo.append(abs(entropy(p, e, e**p + eps) - lower))
            gaps_up.append(abs(entropy(p, e, e - eps) - upper))
        for gaps in (gaps_lo, gaps_up):
            assert gaps[0] > gaps[1] > gaps[2]
            assert gaps[2] <= 1e-2

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_nonpositive(self, p):
        for e in np.linspace(0, 1, 41):
            for s in np.linspace(0, 1, 41):
                assert entropy(p, float(e), float(s)) <= 0.0

    def test_maximum_only_at_typical_point(self):
        assert entropy(2, 0.5, 0.25) == 0.0
        for e, s in _interior_samples(2, 50, seed=3):
            assert entropy(2, e, s) < 0.0


class TestGradient:
    def test_p2_example(self):
        x2 = 0.5 + math.sqrt(0.05)
        beta2 = math.log(x2 / (1 - x2)) / (2 * x2 - 1)
        de, ds = entropy_gradient(2, 0.5, 0.3)
        assert beta2 == pytest.approx(2.1520, abs=1e-4)
        assert ds == pytest.approx(-beta2, rel=1e-14)
        assert de == pytest.approx(beta2, rel=1e-14)

    @pytest.mark.parametrize("p", [2, 3])
    def test_matches_finite_differences(self, p):
        h = 1e-6
        for e, s in _interior_samples(p, 30, seed=20 + p):
            if min(s - e**p, e - s) < 1e-2:
                continue
            de, ds = entropy_gradient(p, e, s, closed_form=False)
            fde = (entropy(p, e + h, s) - entropy(p, e - h, s)) / (2 * h)
            fds = (entropy(p, e, s + h) - entropy(p, e, s - h)) / (2 * h)
            assert fde == pytest.approx(de, rel=1e-4)
            assert fds == pytest.approx(ds, rel=1e-4)
            assert de > 0.0 and ds < 0.0

    def test_star_multiplier_grows_toward_upper_boundary(self):
        b2 = [solve_bipodal(2, 0.5, 0.5 - eps).beta2 for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
        assert all(a < b for a, b in zip(b2, b2[1:]))
        # growth is logarithmic in the distance to the upper boundary
        steps = np.diff(b2)
        assert np.allclose(steps, math.log(100), rtol=0.05)

    @pytest.mark.xfail(strict=True, reason="beta2 grows like log(1/eps); it is ~13.8 at eps=1e-6")
    def test_star_multiplier_exceeds_1e3_near_upper_boundary(self):
        assert solve_bipodal(2, 0.5, 0.5 - 1e-6).beta2 > 1e3

    def test_off_interior(self):
        with pytest.raises(DomainError):
            entropy_gradient(2, 0.5, 0.25)


class TestRateFunction:
    def test_examples(self):
        v = rate_function(2, 0.5, 0.25)
        assert v == 0.0 and math.copysign(1.0, v) == 1.0
        assert rate_function(2, 0.6, 0.6) == LOG2
        assert rate_function(2, 0.5, 0.3) == pytest.approx(0.10363269482489714, abs=1e-15)
        assert rate_function(2, 0.5, 0.9) == math.inf

    @pytest.mark.parametrize("p", [2, 3])
    def test_nonnegative(self, p):
        for e in np.linspace(0, 1, 21):
            for s in np.linspace(0, 1, 21):
                assert rate_function(p, float(e), float(s)) >= 0.0
