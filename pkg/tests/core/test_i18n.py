from src.core.errors import ConfigError, ParameterError, PreconditionError, ScaleError, UnsupportedFamilyError
from src.core.i18n import get_language, set_language, t


class TestI18n:
    def setup_method(self):
        self.previous = get_language()

    def teardown_method(self):
        set_language(self.previous)

    def test_switch_language(self):
        """测试切换语言与格式化"""
        set_language("en")
        assert t("written_to", path="a.json") == "Written to a.json"
        set_language("zh")
        assert t("written_to", path="a.json") == "已写入 a.json"

    def test_invalid_language_is_ignored(self):
        set_language("en")
        set_language("xx")
        assert get_language() == "en"

    def test_unknown_key(self):
        assert t("no_such_key") == "no_such_key"


class TestErrors:
    def test_scale_error_message(self):
        error = ScaleError("aut_exact", 64, 81, "automorphism search")
        assert error.cap_name == "aut_exact"
        assert str(error) == "cap 'aut_exact' exceeded (limit 64, got 81): automorphism search"

    def test_hierarchy(self):
        """配置错误属于参数错误，族不支持属于前提错误"""
        assert issubclass(ConfigError, ParameterError)
        assert issubclass(ParameterError, ValueError)
        assert issubclass(UnsupportedFamilyError, PreconditionError)
        assert not issubclass(PreconditionError, ParameterError)
