import pytest

from src.core.errors import ScaleError, UnsupportedFamilyError
from src.groups.abelian import parse_group_spec
from src.groups.sampler import ConnectionSet
from src.theory.events import (
    coset_union_event,
    good_pair_event,
    good_pair_probability,
    normalizer_event,
)


def connection(group: str, members):
    spec = parse_group_spec(group)
    return spec, ConnectionSet.from_indices(spec, members)


class TestCosetUnionEvent:
    def test_empty_union(self):
        """S ⊆ K 时 S∖K 为空并"""
        spec, s = connection("9", [3, 6])
        census = coset_union_event(spec, s)
        assert census is not None
        assert (census.h, census.k) == (3, 3)
        assert census.j == 1
        assert census.i == 0
        assert census.l == 0
        assert census.cosets == []

    def test_union_of_cosets(self):
        spec, s = connection("9", [1, 2, 4, 5, 7, 8])
        census = coset_union_event(spec, s)
        assert census.to_dict()["cosets"] == [[1, 4, 7], [2, 5, 8]]
        assert census.to_dict()["H"] == [0, 3, 6]

    def test_no_event(self):
        spec, s = connection("9", [1, 8])
        assert coset_union_event(spec, s) is None
        spec, s = connection("7", [1, 6])
        assert coset_union_event(spec, s) is None

    def test_counts_with_involutions(self):
        """H = K = {0, 6}：j = 2，l = 1，i 为 2a ∈ H 的 a ∉ K 的个数"""
        spec, s = connection("12", [6])
        census = coset_union_event(spec, s)
        assert (census.h, census.k) == (2, 2)
        assert census.j == 2
        assert census.l == 1
        assert census.i == 2

    def test_cap(self):
        spec, s = connection("9", [3, 6])
        with pytest.raises(ScaleError):
            coset_union_event(spec, s, cap=5)


class TestNormalizerEvent:
    def test_cycle_has_no_normalizer(self):
        """Z_7 上 S = {1, 6} 只被恒等与反演保持"""
        spec, s = connection("7", [1, 6])
        assert normalizer_event(spec, s) is None

    def test_full_set(self):
        spec, s = connection("7", list(range(1, 7)))
        phi = normalizer_event(spec, s)
        assert phi.to_list() == [0, 2, 4, 6, 1, 3, 5]

    def test_elementary_abelian_has_no_inversion(self):
        spec, s = connection("2,2", [1])
        phi = normalizer_event(spec, s)
        assert phi is not None
        assert phi(1) == 1
        assert not phi.is_identity()

    def test_scan_limit(self):
        spec, s = connection("7", [1, 6])
        with pytest.raises(ScaleError) as excinfo:
            normalizer_event(spec, s, max_count=1)
        assert excinfo.value.cap_name == "max_group_automorphisms"


class TestGoodPair:
    def test_type1_cyclic(self):
        """循环 Type I 群：S = ∅ 或 S = A∖{0}"""
        spec, s = connection("7", [])
        assert good_pair_event(spec, s)
        spec, s = connection("7", list(range(1, 7)))
        assert good_pair_event(spec, s)
        spec, s = connection("7", [1, 6])
        assert not good_pair_event(spec, s)

    def test_non_cyclic_and_type2(self):
        spec, s = connection("5,5", [])
        assert not good_pair_event(spec, s)
        spec, s = connection("3,3", [])
        assert not good_pair_event(spec, s)

    def test_other_family(self):
        spec, s = connection("4", [])
        with pytest.raises(UnsupportedFamilyError):
            good_pair_event(spec, s)

    def test_probability(self):
        """Z_7 有 3 次独立抽取：½³ + ½³"""
        assert float(good_pair_probability("7", 0.5)) == pytest.approx(0.25)
        assert float(good_pair_probability("5,5", 0.5)) == 0.0
        assert float(good_pair_probability("3,3", 0.5)) == 0.0
        with pytest.raises(UnsupportedFamilyError):
            good_pair_probability("4", 0.5)
