import pytest

from src.core.errors import ScaleError
from src.graphs.cayley import BitGraph, build
from src.graphs.coloring import Coloring
from src.graphs.symmetry import (
    AutomorphismGroup,
    automorphism_group_order,
    closure,
    compute_automorphism_group,
    is_small,
    orbit,
    refine,
    search_automorphisms,
    semidirect_elements,
    semidirect_order,
    stabilizer_of_partition,
)
from src.groups.abelian import GroupSpec, parse_group_spec
from src.groups.permutation import Permutation
from src.groups.sampler import ConnectionSet
from tests.oracles import brute_force_automorphisms


def cayley(group: str, members):
    spec = parse_group_spec(group)
    return build(spec, ConnectionSet.from_indices(spec, members))


class TestAutomorphismSearch:
    @pytest.mark.parametrize("group, members, order", [
        ("7", [1, 6], 14),
        ("5", [1, 2, 3, 4], 120),
        ("4", [], 24),
        ("6", [3], 48),
        ("2,2", [1, 2, 3], 24),
        ("8", [1, 7, 4], 16),
    ])
    def test_orders(self, group, members, order):
        """测试自同构群的阶"""
        graph = cayley(group, members)
        assert automorphism_group_order(graph) == order
        assert compute_automorphism_group(graph).order == order

    @pytest.mark.parametrize("group, members", [
        ("7", [1, 6, 2, 5]),
        ("6", [1, 5]),
        ("6", [2, 4, 3]),
        ("2,3", [3, 1, 2]),
        ("7", [3, 4]),
        ("2,2,2", [1, 2, 4]),
    ])
    def test_matches_brute_force(self, group, members):
        """与 n! 穷举对拍"""
        graph = cayley(group, members)
        group_elements = compute_automorphism_group(graph)
        expected = brute_force_automorphisms(graph)
        assert [g.images for g in group_elements] == expected

    def test_identity_first_and_contains_semidirect(self):
        graph = cayley("7", [1, 6])
        aut = compute_automorphism_group(graph)
        assert aut.elements[0].is_identity()
        assert all(sigma in aut for sigma in semidirect_elements(graph.spec))

    def test_cycle_graph_not_cayley(self):
        result = search_automorphisms(BitGraph.cycle(9))
        assert result.order == 18
        assert result.orbit_sizes[0] == 9

    def test_caps(self):
        """超过上限时抛出 ScaleError"""
        with pytest.raises(ScaleError) as excinfo:
            compute_automorphism_group(cayley("7", [1, 6]), cap=3)
        assert excinfo.value.cap_name == "aut_exact"
        with pytest.raises(ScaleError) as excinfo:
            compute_automorphism_group(cayley("5", [1, 2, 3, 4]), max_order=10)
        assert excinfo.value.cap_name == "max_group_order"


class TestSemidirect:
    def test_orders(self):
        assert semidirect_order(GroupSpec((2, 2))) == 4
        assert semidirect_order(GroupSpec((7,))) == 14
        assert semidirect_order(GroupSpec((2, 4))) == 16
        assert semidirect_elements(GroupSpec((2, 2))).order == 4
        assert semidirect_elements(GroupSpec((2, 4))).order == 16

    def test_is_small(self):
        assert is_small(cayley("7", [1, 6]))
        assert not is_small(cayley("5", [1, 2, 3, 4]))
        assert not is_small(cayley("6", [3]))


class TestGroupHelpers:
    def test_closure_and_orbit(self):
        rotation = Permutation((1, 2, 3, 0))
        assert len(closure(4, [rotation])) == 4
        assert orbit(0, [rotation]) == frozenset(range(4))
        assert orbit(0, []) == frozenset({0})
        with pytest.raises(ScaleError):
            closure(4, [rotation], cap=2)

    def test_refine_splits_by_degree(self):
        graph = BitGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        cells, trace = refine(graph.rows, [tuple(range(4))])
        assert sorted(cells, key=len) == [(0,), (1, 2, 3)]
        assert trace

    def test_stabilizer_of_partition(self):
        """划分稳定子：整体固定指定颜色类"""
        aut = compute_automorphism_group(cayley("4", []))
        both = stabilizer_of_partition(aut, Coloring((0, 0, 1, 1)))
        assert both.order == 4
        first = stabilizer_of_partition(aut, Coloring((0, 0, 0, 1)), [0])
        assert first.order == 6
        assert isinstance(first, AutomorphismGroup)
        assert all(g.maps_set_onto({0, 1, 2}) for g in first)
