import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import ParameterError, SpecMismatchError
from src.experiments.stats import mean_and_se, within_mean
from src.groups.abelian import GroupSpec, involution_count, parse_group_spec
from src.groups.sampler import (
    ConnectionSet,
    RandomStream,
    draw_representatives,
    sample_connection_set,
    trial_count,
)


class TestRandomStream:
    @pytest.mark.parametrize("seed, index", [(-1, 0), (2 ** 64, 0), (1, -1)])
    def test_rejects_bad_arguments(self, seed, index):
        with pytest.raises(ParameterError):
            RandomStream(seed, index)

    def test_generator_restarts(self):
        """每次 generator() 都从子流起点开始"""
        stream = RandomStream(42, 3)
        assert stream.generator().random() == stream.generator().random()
        assert RandomStream(42, 3).generator().random() != RandomStream(42, 4).generator().random()
        assert stream.substream(4) == RandomStream(42, 4)


class TestConnectionSet:
    def setup_method(self):
        self.z8 = GroupSpec((8,))

    def test_validation(self):
        """测试逆封闭与零元检查"""
        with pytest.raises(ParameterError):
            ConnectionSet.from_indices(self.z8, [0, 1, 7])
        with pytest.raises(ParameterError):
            ConnectionSet.from_indices(self.z8, [1])
        with pytest.raises(ParameterError):
            ConnectionSet.from_indices(self.z8, [9])

    def test_decomposition(self):
        """|S| = X′ + 2X″"""
        connection = ConnectionSet.from_indices(self.z8, [1, 7, 4])
        decomposition = connection.decomposition()
        assert decomposition.x_prime == 1
        assert decomposition.x_double_prime == 1
        assert decomposition.size == connection.size == 3

    def test_empty_and_full(self):
        assert ConnectionSet.empty(self.z8).is_empty()
        full = ConnectionSet.full(self.z8)
        assert full.is_full()
        assert full.to_list() == list(range(1, 8))
        assert 3 in full and len(full) == 7

    def test_require_spec(self):
        with pytest.raises(SpecMismatchError):
            ConnectionSet.empty(self.z8).require_spec(GroupSpec((2, 4)))


class TestSampling:
    def setup_method(self):
        self.z8 = GroupSpec((8,))

    def test_representatives(self):
        """每对 {x, −x} 与每个 2 阶元素各抽一次"""
        assert [int(x) for x in draw_representatives(self.z8)] == [1, 2, 3, 4]
        assert trial_count(self.z8) == 4
        assert trial_count(GroupSpec((25,))) == 12
        assert trial_count(GroupSpec((2, 2, 3))) == len(draw_representatives(GroupSpec((2, 2, 3))))

    def test_extreme_probabilities(self):
        spec = parse_group_spec("7")
        assert sample_connection_set(spec, 0.0, RandomStream(1)).is_empty()
        assert sample_connection_set(spec, 1.0, RandomStream(1)).is_full()
        with pytest.raises(ParameterError):
            sample_connection_set(spec, 1.5, RandomStream(1))

    def test_reproducible(self):
        spec = parse_group_spec("5,5")
        first = sample_connection_set(spec, 0.5, RandomStream(2024, 7))
        second = sample_connection_set(spec, 0.5, RandomStream(2024, 7))
        assert first == second
        assert first.p == 0.5

    @given(
        st.sampled_from(["7", "8", "2,2,3", "3,3", "25"]),
        st.floats(min_value=0, max_value=1),
        st.floats(min_value=0, max_value=1),
        st.integers(min_value=0, max_value=2 ** 32),
    )
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_p(self, group, p1, p2, seed):
        """同一子流下 p 越大 S 越大（耦合）"""
        spec = parse_group_spec(group)
        low, high = sorted((p1, p2))
        small = sample_connection_set(spec, low, RandomStream(seed))
        large = sample_connection_set(spec, high, RandomStream(seed))
        assert small.members <= large.members
        assert 0 not in large.members
        assert all(int(spec.neg_table[x]) in large.members for x in large.members)


class TestSamplingMoments:
    @pytest.mark.parametrize("group, p", [("2,2,3,3", 0.2), ("2,2,3,3", 0.5), ("2,8", 0.3), ("25", 0.4)])
    def test_means_within_four_se(self, group, p):
        """E|S| = (n−1)p，E x′ = (m−1)p"""
        spec = parse_group_spec(group)
        m = involution_count(spec)
        samples = [sample_connection_set(spec, p, RandomStream(20240601, i)) for i in range(2000)]
        size_mean, size_se = mean_and_se(s.size for s in samples)
        assert within_mean(size_mean, (spec.n - 1) * p, size_se)
        decompositions = [s.decomposition() for s in samples]
        assert all(d.size == s.size for d, s in zip(decompositions, samples))
        x_mean, x_se = mean_and_se(d.x_prime for d in decompositions)
        assert within_mean(x_mean, (m - 1) * p, x_se)
