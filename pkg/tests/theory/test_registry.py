import pytest

from src.core.errors import ParameterError
from src.theory.registry import (
    BoundReport,
    FormulaRegistry,
    TailBound,
    default_registry,
    parse_params,
)


class TestFormulaRegistry:
    def setup_method(self):
        self.registry = FormulaRegistry()

    def test_register_and_get(self):
        """测试注册和获取公式"""
        @self.registry.register
        def doubled(x: int) -> int:
            """Twice x."""
            return 2 * x

        formula = self.registry.get("doubled")
        assert formula is not None
        assert formula.__name__ == "doubled"
        assert formula(4) == 8
        assert self.registry.names() == ["doubled"]

    def test_get_nonexistent(self):
        """测试获取不存在的公式"""
        assert self.registry.get("not_exist") is None

    def test_schema_generation(self):
        """测试参数模式生成"""
        @self.registry.register
        def scaled(n: int, q: float, label: str = "x"):
            """
            Scaled value

            Longer description.
            """
            return n * q

        schemas = self.registry.schemas
        assert len(schemas) == 1
        schema = schemas[0]
        assert schema["name"] == "scaled"
        assert schema["description"] == "Scaled value"
        properties = schema["parameters"]["properties"]
        assert properties["n"]["type"] == "integer"
        assert properties["q"]["type"] == "number"
        assert properties["label"] == {"type": "string", "default": "x"}
        assert schema["parameters"]["required"] == ["n", "q"]

    def test_tail_bound_keeps_applicability(self):
        @self.registry.register
        def tail(x: float) -> TailBound:
            """Tail."""
            return TailBound(x, x < 1)

        report = self.registry.evaluate("tail", {"x": "2"})
        assert isinstance(report, BoundReport)
        assert report.value == 2.0
        assert not report.applicable


class TestEvaluate:
    def setup_method(self):
        self.registry = default_registry()

    def test_registered_formulas(self):
        names = self.registry.names()
        for name in ("janson_mu", "janson_tail", "triple_count", "chernoff_size_tail",
                     "delta_exact", "good_pair_probability", "lemma21_value"):
            assert name in names

    def test_string_parameters(self):
        """字符串参数按签名转换"""
        report = self.registry.evaluate("janson_mu", {"n": "25", "q": "0.5"})
        assert report.parameters == {"n": 25, "q": 0.5}
        payload = report.to_dict()
        assert payload["value"] == pytest.approx(10.0)
        assert payload["value_str"].startswith("10")
        assert payload["applicable"]

    def test_integer_result(self):
        assert self.registry.evaluate("triple_count", {"n": "25"}).to_dict()["value"] == 80.0

    def test_tail_report(self):
        report = self.registry.evaluate("janson_tail", {"mu": "10", "delta": "5"})
        assert not report.applicable

    def test_group_parameter(self):
        report = self.registry.evaluate("good_pair_probability", parse_params("group=7,p=0.5"))
        assert float(report.value) == pytest.approx(0.25)

    @pytest.mark.parametrize("name, params", [
        ("no_such_formula", {}),
        ("janson_mu", {"n": "25"}),
        ("janson_mu", {"n": "25", "q": "0.5", "extra": "1"}),
        ("janson_mu", {"n": "abc", "q": "0.5"}),
    ])
    def test_bad_requests(self, name, params):
        with pytest.raises(ParameterError):
            self.registry.evaluate(name, params)


class TestParseParams:
    def test_simple(self):
        assert parse_params("n=25,q=0.5") == {"n": "25", "q": "0.5"}

    def test_group_values_keep_commas(self):
        """无 "=" 的片段接到上一个取值"""
        assert parse_params("group=5,5,q=0.5") == {"group": "5,5", "q": "0.5"}

    def test_empty(self):
        assert parse_params("") == {}
        assert parse_params(None) == {}

    def test_malformed(self):
        with pytest.raises(ParameterError):
            parse_params("25,q=0.5")
