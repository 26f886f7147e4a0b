"""
配置管理器 - 读取和管理 config.yaml 配置文件
"""
import copy
import os
from pathlib import Path

import yaml

from logger.logger import logger

CONFIG_ENV_VAR = "HISTEQ_CONFIG"


def default_config_path():
    """config.yaml 路径，环境变量 HISTEQ_CONFIG 优先"""
    override = os.environ.get(CONFIG_ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent / "config.yaml"


class ConfigManager:
    """配置管理器单例类"""

    _instance = None
    _config = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self.load_config()

    def load_config(self, config_path=None):
        """加载配置文件，缺失或损坏时退回默认配置"""
        config_path = Path(config_path) if config_path else default_config_path()

        if not config_path.exists():
            logger.warning(f"配置文件 {config_path} 不存在，使用默认配置")
            self._config = self._get_default_config()
            return

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"加载配置文件失败 ({e})，使用默认配置")
            self._config = self._get_default_config()
            return

        if not isinstance(loaded, dict):
            logger.warning(f"配置文件 {config_path} 顶层不是映射，使用默认配置")
            self._config = self._get_default_config()
            return

        # 文件中缺失的段落由默认值补齐
        self._config = _merge(self._get_default_config(), loaded)
        logger.debug(f"成功加载配置文件: {config_path}")

    def _get_default_config(self):
        """获取默认配置（如果配置文件不存在）"""
        return {
            'logging': {
                'dir': 'logs',
                'max_log_files': 20,
                'console_level': 'ERROR',
                'to_file': True
            },
            'hwsim': {
                'clock_mhz': 300,
                'float_timing_repeats': 5,
                'stages': {
                    'GenerateHist': {'cpi': 1, 'overhead': 0},
                    'CalculateSmbe': {'cpi': 3, 'overhead': 3},
                    'FindThreshold': {'cpi': 3, 'overhead': 3},
                    'GenCumuHist': {'cpi': 3, 'overhead': 6},
                    'CreateMap': {'cpi': 3, 'overhead': 6}
                },
                'reference_micros': {
                    'GenerateHist': 207.68,
                    'CalculateSmbe': 2.57,
                    'FindThreshold': 2.57,
                    'GenCumuHist': 2.6,
                    'CreateMap': 2.6
                }
            },
            'corpus': {
                'seed': 20190101,
                'size': 120,
                'width': 64,
                'height': 48
            },
            'report': {
                'fraction_digits': 6
            }
        }

    def get(self, *keys, default=None):
        """
        获取配置值

        Args:
            *keys: 配置键路径，例如 get('hwsim', 'clock_mhz')
            default: 默认值

        Returns:
            配置值或默认值
        """
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def update_in_memory(self, data):
        """使用提供的数据更新内存中的配置副本（只覆盖给出的键）"""
        self._config = _merge(self._config or self._get_default_config(), data)


def _merge(base, override):
    """递归合并两个配置字典，override 优先"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# 创建全局配置实例
config = ConfigManager()


# 便捷函数
def get_config(*keys, default=None):
    """获取配置值的便捷函数"""
    return config.get(*keys, default=default)
