import itertools
import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import binom

from digraph_pstar import (DomainError, EmptyWindowError, ResourceError, conditional_row_law,
                           exact_joint_law, load_law, sample_conditioned, save_law,
                           window_log_prob)
from digraph_pstar.oracle import (CACHE_MAGIC, _HEADER, cache_path, default_delta,
                                  default_n_max)
from digraph_pstar.scalar import LOG2


def _counts(law):
    return {k: round(math.exp(v)) for k, v in law.as_dict().items()}


def _brute_force(n, p):
    out = Counter()
    for bits in itertools.product((0, 1), repeat=n * n):
        degs = [sum(bits[i * n:(i + 1) * n]) for i in range(n)]
        out[(sum(degs), sum(d**p for d in degs))] += 1
    return dict(out)


class TestJointLaw:
    def test_n1(self):
        assert _counts(exact_joint_law(1, 2)) == {(0, 0): 1, (1, 1): 1}

    def test_n2_p2(self):
        assert _counts(exact_joint_law(2, 2)) == {
            (0, 0): 1, (1, 1): 4, (2, 2): 4, (2, 4): 2, (3, 5): 4, (4, 8): 1}

    def test_n2_p3(self):
        law = exact_joint_law(2, 3)
        assert sorted(set(law.S.tolist())) == [0, 1, 2, 8, 9, 16]
        e_marg = Counter()
        for (E, _), c in _counts(law).items():
            e_marg[E] += c
        assert dict(e_marg) == {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}

    @pytest.mark.parametrize("n,p", [(1, 3), (2, 2), (3, 2), (3, 3), (3, 4)])
    def test_matches_enumeration(self, n, p):
        assert _counts(exact_joint_law(n, p)) == _brute_force(n, p)

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_edge_marginal_binomial(self, n):
        law = exact_joint_law(n, 2)
        marg = np.full(n * n + 1, -np.inf)
        for E, w in zip(law.E, law.logw):
            marg[E] = np.logaddexp(marg[E], w)
        expected = binom.logpmf(np.arange(n * n + 1), n * n, 0.5) + n * n * LOG2
        assert np.allclose(marg, expected, rtol=1e-12, atol=0)

    @pytest.mark.parametrize("n,p", [(5, 2), (16, 2), (12, 3), (6, 4)])
    def test_normalization(self, n, p):
        assert abs(exact_joint_law(n, p).log_total() - n * n * LOG2) <= 1e-9

    @pytest.mark.parametrize("n,p", [(6, 2), (5, 3)])
    def test_entry_bounds(self, n, p):
        law = exact_joint_law(n, p)
        E, S = law.E.astype(float), law.S.astype(float)
        assert np.all(S >= E**p / n ** (p - 1) - 1e-9)
        assert np.all(S <= n ** (p - 1) * E + 1e-9)

    def test_sorted(self):
        law = exact_joint_law(5, 2)
        keys = list(zip(law.E.tolist(), law.S.tolist()))
        assert keys == sorted(keys)

    def test_size_limits(self):
        assert default_n_max(2) == 16 and default_n_max(3) == 12
        with pytest.raises(DomainError):
            exact_joint_law(17, 2)
        with pytest.raises(DomainError):
            exact_joint_law(0, 2)
        with pytest.raises(ResourceError):
            exact_joint_law(10, 2, memory_budget=1024)
        assert len(exact_joint_law(17, 2, n_max=17)) > 0

    def test_default_delta(self):
        assert default_delta(8) == 0.25
        assert default_delta(100) == 0.05


class TestCache:
    def test_round_trip(self, tmp_path):
        law = exact_joint_law(6, 3)
        path = tmp_path / "law.bin"
        save_law(law, path)
        back = load_law(path)
        assert (back.n, back.p) == (6, 3)
        assert np.array_equal(back.E, law.E) and np.array_equal(back.S, law.S)
        assert np.array_equal(back.logw, law.logw)

    def test_layout(self, tmp_path):
        law = exact_joint_law(2, 2)
        path = tmp_path / "law.bin"
        save_law(law, path)
        raw = path.read_bytes()
        magic, version, n, p, count = _HEADER.unpack_from(raw)
        assert (magic, version, n, p, count) == (CACHE_MAGIC, 1, 2, 2, 6)
        assert len(raw) == _HEADER.size + 24 * 6
        rec = np.frombuffer(raw[_HEADER.size:], dtype=[("E", "<i8"), ("S", "<i8"),
                                                        ("w", "<f8")])
        assert rec["E"].tolist() == [0, 1, 2, 2, 3, 4]
        assert rec["S"].tolist() == [0, 1, 2, 4, 5, 8]

    def test_cache_dir_identical(self, tmp_path):
        fresh = exact_joint_law(7, 2)
        first = exact_joint_law(7, 2, cache_dir=tmp_path)
        assert cache_path(tmp_path, 7, 2).exists()
        cached = exact_joint_law(7, 2, cache_dir=tmp_path)
        for law in (first, cached):
            assert np.array_equal(law.logw, fresh.logw)
            assert np.array_equal(law.E, fresh.E) and np.array_equal(law.S, fresh.S)

    def test_corrupt(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTALAW!" + bytes(40))
        with pytest.raises(ValueError):
            load_law(path)
        path.write_bytes(b"abc")
        with pytest.raises(ValueError):
            load_law(path)


class TestWindow:
    def test_single_node_corner(self):
        assert window_log_prob(exact_joint_law(1, 2), 1.0, 1.0, 0.1) == -LOG2

    def test_n2_typical(self):
        v = window_log_prob(exact_joint_law(2, 2), 0.5, 0.25, 0.01)
        assert v == pytest.approx(math.log(4) / 4 - LOG2, abs=1e-15)
        assert v == pytest.approx(-0.34657359, abs=1e-8)

    def test_empty(self):
        assert window_log_prob(exact_joint_law(2, 2), 0.5, 0.9, 0.01) == -math.inf

    def test_open_interval(self):
        law = exact_joint_law(2, 2)
        # at delta = 0.25 the points (2, 2) and (3, 5) sit exactly on the window edge
        assert window_log_prob(law, 0.5, 0.5, 0.25) == pytest.approx(
            math.log(2) / 4 - LOG2, abs=1e-15)
        assert window_log_prob(law, 0.5, 0.5, 0.25 + 1e-9) == pytest.approx(
            math.log(10) / 4 - LOG2, abs=1e-15)

    def test_bad_delta(self):
        with pytest.raises(DomainError):
            window_log_prob(exact_joint_law(2, 2), 0.5, 0.25, 0.0)


class TestConditional:
    def test_examples(self):
        law = conditional_row_law(2, 2, 0.75, 0.625, 0.01)
        assert law.probabilities.tolist() == pytest.approx([0.0, 0.5, 0.5], abs=1e-15)
        law = conditional_row_law(2, 2, 0.5, 0.25, 0.01)
        assert law.probabilities.tolist() == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)
        assert law.rates().tolist() == [0.0, 0.5, 1.0]

    @pytest.mark.parametrize("n,p,e,s", [(10, 2, 0.5, 0.3), (8, 3, 0.5, 0.2), (16, 2, 0.4, 0.2)])
    def test_normalized(self, n, p, e, s):
        probs = conditional_row_law(n, p, e, s, 0.05).probabilities
        assert np.all(probs >= 0.0)
        assert abs(probs.sum() - 1.0) <= 1e-12

    def test_matches_brute_force(self):
        n, p, e, s, delta = 3, 2, 0.5, 0.35, 0.1
        weights = np.zeros(n + 1)
        for degs in itertools.product(range(n + 1), repeat=n):
            E, S = sum(degs), sum(d**p for d in degs)
            if abs(E / n**2 - e) < delta and abs(S / n ** (p + 1) - s) < delta:
                weights[degs[0]] += math.prod(math.comb(n, d) for d in degs)
        probs = conditional_row_law(n, p, e, s, delta).probabilities
        assert probs == pytest.approx(weights / weights.sum(), abs=1e-15)

    def test_empty_window(self):
        with pytest.raises(EmptyWindowError):
            conditional_row_law(2, 2, 0.5, 0.9, 0.01)
        with pytest.raises(EmptyWindowError):
            conditional_row_law(4, 2, 0.53, 0.41, 1e-4)
        assert issubclass(EmptyWindowError, DomainError)


class TestSampler:
    def test_unique_support(self):
        out = sample_conditioned(2, 2, 0.5, 0.25, 0.01, seed=5, count=50)
        assert out.shape == (50, 2)
        assert np.all(out == 1)

    def test_matches_conditional_law(self):
        n = 12
        law = conditional_row_law(n, 2, 0.5, 0.3, 0.05).probabilities
        out = sample_conditioned(n, 2, 0.5, 0.3, 0.05, seed=1, count=10_000)
        hist = np.bincount(out[:, 0], minlength=n + 1) / len(out)
        assert 0.5 * np.abs(hist - law).sum() <= 0.03
        # rows are exchangeable, so every column has the same law
        pooled = np.bincount(out.ravel(), minlength=n + 1) / out.size
        assert 0.5 * np.abs(pooled - law).sum() <= 0.03

    def test_samples_land_in_window(self):
        n, p, e, s, delta = 10, 3, 0.5, 0.2, 0.05
        out = sample_conditioned(n, p, e, s, delta, seed=3, count=2000)
        E = out.sum(axis=1) / n**2
        S = (out**p).sum(axis=1) / n ** (p + 1)
        assert np.all(np.abs(E - e) < delta) and np.all(np.abs(S - s) < delta)

    def test_seed_reproducible(self):
        a = sample_conditioned(12, 2, 0.5, 0.3, 0.05, seed=42, count=500)
        b = sample_conditioned(12, 2, 0.5, 0.3, 0.05, seed=42, count=500)
        c = sample_conditioned(12, 2, 0.5, 0.3, 0.05, seed=43, count=500)
        assert a.tobytes() == b.tobytes()
        assert a.tobytes() != c.tobytes()

    @pytest.mark.parametrize("count", [0, -1, 2.5, True])
    def test_bad_count(self, count):
        with pytest.raises(DomainError):
            sample_conditioned(4, 2, 0.5, 0.3, 0.1, seed=0, count=count)
