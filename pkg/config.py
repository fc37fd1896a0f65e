#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模块
负责加载和管理容差、采样、报告与日志配置，支持显式配置文件与原子写回
"""

import copy
import json
import shutil
import threading
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

from utils.logger import get_data_dir, get_logger

logger = get_logger()

APP_NAME = "aqsverify"
APP_VERSION = "1.0.0"


@dataclass
class ToleranceConfig:
    """浮点判零与谱计算的容差"""
    classify: float = 1e-8  # 浮点李代数的相对判零阈值 tol × max(1, 尺度)
    patch: float = 1e-6  # 坐标片（射流）上的判零阈值
    eigen_cluster: float = 1e-8
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100

    def validate(self) -> bool:
        """验证配置有效性"""
        try:
            for name in ('classify', 'patch', 'eigen_cluster', 'jacobi_offdiag'):
                value = getattr(self, name)
                assert 0 < value < 1, f"{name} 必须在 (0, 1) 之间"
            assert 1 <= self.jacobi_max_sweeps <= 10000, "Jacobi 扫描轮数必须在1-10000之间"
            return True
        except AssertionError as e:
            logger.error(f"容差配置验证失败: {e}")
            return False


@dataclass
class SamplingConfig:
    """坐标片采样配置"""
    points: int = 32
    seed: int = 0
    disc_radius: float = 0.9  # 圆盘丛采样半径 |z| ≤ disc_radius
    flat_box: float = 1.0

    def validate(self) -> bool:
        """验证配置有效性"""
        try:
            assert 1 <= self.points <= 100000, "采样点数必须在1-100000之间"
            assert self.seed >= 0, "随机种子不能为负数"
            assert 0 < self.disc_radius < 1, "圆盘采样半径必须在 (0, 1) 之间"
            assert self.flat_box > 0, "平坦坐标片边长必须大于0"
            return True
        except AssertionError as e:
            logger.error(f"采样配置验证失败: {e}")
            return False


@dataclass
class ReportConfig:
    """报告输出配置"""
    float_digits: int = 17
    include_points: bool = True  # 是否输出逐点数据

    def validate(self) -> bool:
        """验证配置有效性"""
        try:
            assert 1 <= self.float_digits <= 17, "浮点有效数字必须在1-17之间"
            return True
        except AssertionError as e:
            logger.error(f"报告配置验证失败: {e}")
            return False


@dataclass
class LogConfig:
    """日志配置类"""
    output_to_file: bool = True  # 是否输出日志到文件（默认开启）
    clear_log_on_startup: bool = True  # 每次启动前是否清空日志
    split_by_date: bool = False  # 是否按日期分割日志
    max_log_size: int = 10  # 日志文件最大大小（MB）

    def validate(self) -> bool:
        """验证配置有效性"""
        try:
            assert self.max_log_size > 0, "日志大小必须大于0"
            assert self.max_log_size <= 1000, "日志大小不能超过1000MB"
            return True
        except AssertionError as e:
            logger.error(f"日志配置验证失败: {e}")
            return False


# settings.json 中的节名 → Config 属性名
SECTIONS = {
    'TOLERANCE_CONFIG': 'tolerance_config',
    'SAMPLING_CONFIG': 'sampling_config',
    'REPORT_CONFIG': 'report_config',
    'LOG_CONFIG': 'log_config',
}

_DEFAULTS = {
    'tolerance_config': ToleranceConfig,
    'sampling_config': SamplingConfig,
    'report_config': ReportConfig,
    'log_config': LogConfig,
}


class Config:
    """配置管理类 - 单例模式"""
    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if hasattr(self, '_initialized') and self._initialized:
            return

        self._apply_default_config()

        # 配置文件：数据目录下的 settings.json（与 log.txt 同目录）
        try:
            self.config_file: Optional[Path] = get_data_dir() / 'settings.json'
        except Exception as e:
            logger.error(f"配置目录初始化失败: {e}，使用默认配置")
            self.config_file = None

        try:
            self.load_config()
        except Exception as e:
            logger.error(f"配置加载失败: {e}，使用默认配置")
            self._apply_default_config()

        self._initialized = True
        logger.debug("配置管理器初始化完成")

    def _apply_default_config(self):
        for attr, cls in _DEFAULTS.items():
            setattr(self, attr, cls())

    def _get_full_config_dict(self) -> Dict[str, Any]:
        """当前内存中的完整配置（与 settings.json 结构一致）"""
        data: Dict[str, Any] = {'config_version': APP_VERSION}
        for section, attr in SECTIONS.items():
            data[section] = asdict(getattr(self, attr))
        return data

    def _merge_config_file(self, existing: Dict[str, Any], full: Dict[str, Any]) -> Dict[str, Any]:
        """只补全 existing 中缺少的键，不删除任何已有键"""
        merged = copy.deepcopy(existing)
        for key, full_value in full.items():
            if key not in merged:
                merged[key] = copy.deepcopy(full_value)
            elif isinstance(full_value, dict) and isinstance(merged.get(key), dict):
                for subkey, subval in full_value.items():
                    merged[key].setdefault(subkey, copy.deepcopy(subval))
        return merged

    def _write_config_dict(self, config_data: Dict[str, Any]) -> bool:
        """将配置 dict 原子写入配置文件"""
        if not self.config_file:
            return False
        temp_file = self.config_file.with_suffix('.tmp')
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(temp_file, 'w', encoding='utf-8') as f:
                json.dump(config_data, f, ensure_ascii=False, indent=2)
            shutil.move(str(temp_file), str(self.config_file))
            return True
        except Exception as e:
            if temp_file.exists():
                try:
                    temp_file.unlink()
                except OSError:
                    pass
            logger.warning(f"写回配置文件失败: {e}")
            return False

    def load_config(self, path: Optional[Path] = None) -> bool:
        """
        加载配置文件

        Args:
            path: 显式配置文件（--config）；None 时用数据目录下的 settings.json

        Returns:
            所有节都有效时为 True；无效的节回退为默认值
        """
        if path is not None:
            self.config_file = Path(path)
        self._apply_default_config()
        if self.config_file is None or not self.config_file.exists():
            logger.debug("配置文件不存在，使用默认配置")
            return True
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
        except (OSError, PermissionError, json.JSONDecodeError) as e:
            logger.warning(f"读取配置文件失败: {e}，使用默认配置")
            return False
        if not isinstance(config_data, dict):
            logger.warning("配置文件顶层不是对象，使用默认配置")
            return False

        success = True
        for section, attr in SECTIONS.items():
            values = config_data.get(section)
            if not isinstance(values, dict):
                continue
            target = getattr(self, attr)
            known = {f.name for f in fields(target)}
            # 未知键忽略，缺失的键保持默认值
            for key, value in values.items():
                if key in known:
                    setattr(target, key, value)
            if not target.validate():
                logger.warning(f"{section} 无效，回退为默认值")
                setattr(self, attr, _DEFAULTS[attr]())
                success = False
        logger.info(f"已加载配置文件: {self.config_file}")
        return success

    def save_config(self) -> bool:
        """补全缺项后原子写回；已有文件中的未知键保留"""
        full = self._get_full_config_dict()
        existing: Dict[str, Any] = {}
        if self.config_file is not None and self.config_file.exists():
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    existing = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"读取旧配置失败: {e}，将整体覆盖")
                existing = {}
        merged = self._merge_config_file(existing, full) if isinstance(existing, dict) else full
        for section in SECTIONS:
            merged[section] = dict(merged.get(section, {}), **full[section])
        merged['config_version'] = APP_VERSION
        ok = self._write_config_dict(merged)
        if ok:
            logger.info(f"配置已保存: {self.config_file}")
        return ok

    def override(self, tol: Optional[float] = None, points: Optional[int] = None,
                 seed: Optional[int] = None):
        """命令行参数覆盖本次运行的配置"""
        if tol is not None:
            self.tolerance_config.classify = float(tol)
        if points is not None:
            self.sampling_config.points = int(points)
        if seed is not None:
            self.sampling_config.seed = int(seed)
        for attr in ('tolerance_config', 'sampling_config'):
            if not getattr(self, attr).validate():
                raise ValueError(f"命令行参数使 {attr} 无效")
