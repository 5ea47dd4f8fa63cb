import os
from unittest.mock import patch

import pytest
import yaml
from pydantic import ValidationError

from src.core.config import load_config, reload_settings, resolve_cap, save_config


class TestConfig:
    @pytest.fixture(autouse=True)
    def isolated_files(self, tmp_path):
        self.user_file = tmp_path / "config.yaml"
        self.global_file = tmp_path / "global_config.yaml"
        env = {k: v for k, v in os.environ.items() if not k.startswith("CAYDIST_")}
        with patch("src.core.config.CONFIG_FILE", self.user_file), \
                patch("src.core.config.GLOBAL_CONFIG_FILE", self.global_file), \
                patch.dict(os.environ, env, clear=True):
            reload_settings()
            yield
        reload_settings()

    def write(self, path, data):
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        reload_settings()

    def test_defaults(self):
        """测试无配置文件时的默认值"""
        config = load_config()
        assert config["language"] == "en"
        assert config["caps"]["aut_exact"] == 64
        assert config["caps"]["chi_d_exact"] == 12
        assert config["experiment"]["recolor_attempts"] == 1000
        assert config["experiment"]["t_grid"] == [0.5, 1.0, 1.5, 2.0, 3.0]

    def test_user_file_overrides_global(self):
        """用户配置优先于全局配置"""
        self.global_file.write_text(yaml.safe_dump({"caps": {"aut_exact": 10, "census": 50}}), encoding="utf-8")
        self.write(self.user_file, {"caps": {"aut_exact": 20}})
        assert resolve_cap("aut_exact") == 20
        assert resolve_cap("census") == 50

    def test_environment_overrides_files(self):
        self.write(self.user_file, {"caps": {"chi_exact": 20}})
        with patch.dict(os.environ, {"CAYDIST_CAPS__CHI_EXACT": "30"}):
            reload_settings()
            assert resolve_cap("chi_exact") == 30

    def test_explicit_override_wins(self):
        assert resolve_cap("aut_exact", 7) == 7
        assert resolve_cap("aut_exact", "9") == 9

    def test_save_config(self):
        """测试点号路径写入并刷新缓存"""
        path = save_config({"caps.aut_exact": 80, "experiment.threads": 2})
        assert path == self.user_file
        saved = yaml.safe_load(self.user_file.read_text(encoding="utf-8"))
        assert saved == {"caps": {"aut_exact": 80}, "experiment": {"threads": 2}}
        assert resolve_cap("aut_exact") == 80
        assert load_config()["experiment"]["threads"] == 2

    def test_save_config_merges_existing(self):
        self.write(self.user_file, {"language": "zh"})
        save_config({"caps.census": 100})
        saved = yaml.safe_load(self.user_file.read_text(encoding="utf-8"))
        assert saved == {"language": "zh", "caps": {"census": 100}}

    def test_save_config_rejects_invalid(self):
        """非法取值不落盘"""
        with pytest.raises(ValidationError):
            save_config({"caps.aut_exact": 0})
        assert not self.user_file.exists()
