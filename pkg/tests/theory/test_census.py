import pytest

from src.core.errors import PreconditionError, ScaleError
from src.groups.abelian import parse_group_spec
from src.theory.bounds import janson_delta_bound
from src.theory.census import (
    delta_exact,
    delta_exact_from_census,
    overlap_census,
    subgroup_census,
    triple_census,
)


class TestOverlapCensus:
    def setup_method(self):
        self.census = overlap_census(parse_group_spec("25"))

    def test_summary(self):
        """count₄ ≤ 6，count₆ = 1 且伙伴为 −T，count₂ + 2count₄ = 3n − 21"""
        summary = self.census.summary()
        assert summary["triples"] == 80
        assert summary["max_count4"] <= 6
        assert summary["min_count6"] == summary["max_count6"] == 1
        assert summary["count6_partner_is_negation"]
        assert summary["count2_plus_twice_count4"] == [3 * 25 - 21]
        assert summary["max_count2"] <= summary["count2_limit"]

    def test_odd_overlaps_never_occur(self):
        counts = self.census.overlap_counts
        assert counts[:, 1].sum() == counts[:, 3].sum() == counts[:, 5].sum() == 0

    def test_partner_is_negation(self):
        triple = self.census.triples[0]
        partners = self.census.partners[0]
        assert [self.census.triples[j] for j in partners] == [triple.negated()]
        assert self.census.index_of(triple.negated()) == partners[0]

    def test_delta_exact(self):
        """Δ_exact(25, ½) = 4320/32 + 80/8 = 145"""
        assert float(delta_exact_from_census(self.census, 0.5)) == pytest.approx(145.0)
        assert float(delta_exact("25", 0.5)) == pytest.approx(145.0)

    @pytest.mark.parametrize("q", [0.2, 0.3, 0.5, 0.7, 0.9])
    def test_delta_exact_below_bound(self, q):
        assert float(delta_exact_from_census(self.census, q)) <= float(janson_delta_bound(25, q))

    def test_to_dict(self):
        payload = self.census.to_dict()
        assert payload["group"] == "25"
        assert len(payload["per_triple"]) == 80
        first = payload["per_triple"][0]
        assert first["count6"] == 1
        assert first["count2"] + 2 * first["count4"] == 54

    @pytest.mark.parametrize("group", ["35", "5,5", "7,7"])
    def test_identity_on_other_groups(self, group):
        spec = parse_group_spec(group)
        summary = overlap_census(spec).summary()
        assert summary["count2_plus_twice_count4"] == [3 * spec.n - 21]
        assert summary["max_count4"] <= 6
        assert summary["count6_partner_is_negation"]

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            overlap_census(parse_group_spec("6"))
        with pytest.raises(ScaleError) as excinfo:
            overlap_census(parse_group_spec("25"), cap=20)
        assert excinfo.value.cap_name == "census"


class TestOtherCensus:
    def test_triple_census(self):
        result = triple_census(parse_group_spec("7"))
        assert result["count"] == 2
        assert result["formula"] == 2
        assert result["triples"] == [[1, 2, 4], [3, 5, 6]]
        assert "formula" not in triple_census(parse_group_spec("6"))

    def test_subgroup_census(self):
        result = subgroup_census(parse_group_spec("12"))
        assert result["count"] == 6
        assert [h["order"] for h in result["subgroups"]] == [1, 2, 3, 4, 6, 12]
        assert all(h["index"] == h["cosets"] for h in result["subgroups"])
