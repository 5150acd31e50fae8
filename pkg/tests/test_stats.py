import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from isingnet.stats import histogram2d, p_band, pearson


class TestPearson:
    def test_perfect(self):
        xs = np.arange(10.0)
        assert pearson(xs, 2 * xs + 1).pearson_r == pytest.approx(1)
        assert pearson(xs, -xs).pearson_r == pytest.approx(-1)
        assert pearson(xs, -xs).p_inequality == "p<0.001"

    def test_hand_example(self):
        # covariance 8, both variances 10
        rep = pearson([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])
        assert rep.pearson_r == pytest.approx(0.8, abs=1e-15)
        assert rep.p_inequality == "n.s."

    def test_constant_is_undefined(self):
        rep = pearson([1, 2, 3], [4, 4, 4])
        assert rep.pearson_r is None and not rep.defined
        assert "undefined" in str(rep)

    def test_too_short(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [3, 4])

    @pytest.mark.parametrize("p, band", [(0.0005, "p<0.001"), (0.005, "p<0.01"), (0.03, "p<0.05"), (0.05, "n.s."), (0.5, "n.s.")])
    def test_bands(self, p, band):
        assert p_band(p) == band

    @settings(max_examples=50, deadline=None)
    @given(st.integers(3, 40).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, 2**32 - 1))))
    def test_matches_scipy(self, args):
        m, seed = args
        r = np.random.default_rng(seed)
        x = r.normal(size=m)
        y = 0.5 * x + r.normal(size=m)
        rep = pearson(x, y)
        ref = sps.pearsonr(x, y)
        assert rep.pearson_r == pytest.approx(ref.statistic, abs=1e-12)
        assert rep.p_value == pytest.approx(ref.pvalue, rel=1e-6, abs=1e-300)


class TestHistogram:
    def test_single_point(self):
        h = histogram2d([1.5], [2.5])
        assert h.counts.sum() == 1 and h.counts.shape == (1, 1)

    def test_identical_points(self):
        h = histogram2d([3, 3, 3], [1, 1, 1])
        assert h.counts.tolist() == [[3]]

    def test_one_degenerate_axis(self):
        h = histogram2d([0, 1, 2], [5, 5, 5])
        assert h.counts.shape == (64, 1) and h.counts.sum() == 3

    def test_uniform_grid(self):
        g = np.arange(64.0)
        xs, ys = np.meshgrid(g, g)
        h = histogram2d(xs.ravel(), ys.ravel())
        assert h.counts.shape == (64, 64)
        assert np.all(h.counts == 1)

    def test_max_in_top_bin(self):
        h = histogram2d([0, 0.5, 1], [0, 0.5, 1])
        assert h.counts[63, 63] == 1 and h.counts[0, 0] == 1

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=1, max_size=200))
    def test_total(self, points):
        xs, ys = zip(*points)
        assert histogram2d(xs, ys).counts.sum() == len(points)

    def test_matches_numpy_for_regular_data(self, rng):
        x, y = rng.normal(size=500), rng.uniform(size=500)
        h = histogram2d(x, y)
        ref, _, _ = np.histogram2d(x, y, bins=64, range=[[x.min(), x.max()], [y.min(), y.max()]])
        assert np.array_equal(h.counts, ref.astype(int))
